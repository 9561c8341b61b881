//! From-scratch large-kernel convolutional classifier: two strided
//! convolutions with relu, maxpool, dropout, a sigmoid dense layer and a
//! softmax head. Activations are laid out position-major with the channel
//! index innermost; the flatten vector is the pool output memory itself and
//! this ordering is relied on by the periodicity analysis.

mod train;

pub use train::{evaluate, train, EpochStats, TrainSample};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lyapunov::Label;

pub const LOSS_PROB_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LkcnnConfig {
    pub input_len: usize,
    pub conv_filters: usize,
    pub kernel: usize,
    pub stride: usize,
    pub pool: usize,
    pub dropout_rate: f64,
    pub dense_units: usize,
    pub learning_rate: f64,
    pub max_epochs: usize,
    pub patience: usize,
    pub batch_size: usize,
    pub seed: u64,
    /// Optional stop once training accuracy reaches this threshold.
    pub accuracy_stop: Option<f64>,
}

impl Default for LkcnnConfig {
    fn default() -> Self {
        LkcnnConfig {
            input_len: 500,
            conv_filters: 5,
            kernel: 100,
            stride: 2,
            pool: 2,
            dropout_rate: 0.5,
            dense_units: 100,
            learning_rate: 0.000388,
            max_epochs: 200,
            patience: 50,
            batch_size: 32,
            seed: 0,
            accuracy_stop: Some(0.975),
        }
    }
}

impl LkcnnConfig {
    /// First convolution output length (201 for defaults).
    pub fn l1(&self) -> usize {
        (self.input_len - self.kernel) / self.stride + 1
    }
    /// Second convolution output length (51 for defaults).
    pub fn l2(&self) -> usize {
        (self.l1() - self.kernel) / self.stride + 1
    }
    /// Pool output length (25 for defaults).
    pub fn l3(&self) -> usize {
        self.l2() / self.pool
    }
    /// Flatten size (125 for defaults).
    pub fn flatten_len(&self) -> usize {
        self.l3() * self.conv_filters
    }

    pub fn validate(&self) -> Result<()> {
        if self.kernel > self.input_len {
            return Err(Error::Rejected(format!(
                "kernel {} exceeds input length {}",
                self.kernel, self.input_len
            )));
        }
        if self.kernel > self.l1() {
            return Err(Error::Rejected(
                "second convolution does not fit its input".into(),
            ));
        }
        if self.stride == 0 || self.pool == 0 || self.conv_filters == 0 || self.dense_units == 0
        {
            return Err(Error::Rejected("zero-sized layer hyperparameter".into()));
        }
        if !(0.0..1.0).contains(&self.dropout_rate) {
            return Err(Error::Rejected("dropout rate must be in [0,1)".into()));
        }
        if self.l3() == 0 {
            return Err(Error::Rejected("pool output is empty".into()));
        }
        Ok(())
    }
}

/// All trainable parameters plus training provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LkcnnModel {
    pub config: LkcnnConfig,
    /// conv1 weights, layout [filter][kernel_pos].
    pub conv1_w: Vec<f64>,
    pub conv1_b: Vec<f64>,
    /// conv2 weights, layout [filter][in_channel][kernel_pos].
    pub conv2_w: Vec<f64>,
    pub conv2_b: Vec<f64>,
    /// dense1 weights, layout [unit][flatten_pos].
    pub dense1_w: Vec<f64>,
    pub dense1_b: Vec<f64>,
    /// dense2 weights, layout [class][unit]; class 0 = regular, 1 = chaotic.
    pub dense2_w: Vec<f64>,
    pub dense2_b: Vec<f64>,
    pub history: Vec<EpochStats>,
    pub best_epoch: Option<usize>,
}

/// Per-layer activations for one input (inference semantics for dropout).
#[derive(Debug, Clone)]
pub struct ActivationTrace {
    pub conv1: Vec<f64>,
    pub conv2: Vec<f64>,
    pub pool: Vec<f64>,
    pub flatten: Vec<f64>,
    pub dense1: Vec<f64>,
    pub output: [f64; 2],
}

pub enum Mode<'a> {
    Train(&'a mut ChaCha8Rng),
    Infer,
}

/// Scaled-uniform fan-based initialization, biases zero; deterministic in
/// the config seed.
pub fn init_model(cfg: &LkcnnConfig) -> Result<LkcnnModel> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let f = cfg.conv_filters;
    let mut uniform = |count: usize, fan_in: usize, fan_out: usize| -> Vec<f64> {
        let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
        (0..count).map(|_| rng.gen_range(-limit..limit)).collect()
    };
    let conv1_w = uniform(f * cfg.kernel, cfg.kernel, cfg.kernel * f);
    let conv2_w = uniform(f * f * cfg.kernel, cfg.kernel * f, cfg.kernel * f);
    let dense1_w = uniform(cfg.dense_units * cfg.flatten_len(), cfg.flatten_len(), cfg.dense_units);
    let dense2_w = uniform(2 * cfg.dense_units, cfg.dense_units, 2);
    Ok(LkcnnModel {
        config: *cfg,
        conv1_w,
        conv1_b: vec![0.0; f],
        conv2_w,
        conv2_b: vec![0.0; f],
        dense1_w,
        dense1_b: vec![0.0; cfg.dense_units],
        dense2_w,
        dense2_b: vec![0.0; 2],
        history: Vec::new(),
        best_epoch: None,
    })
}

#[inline]
fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn softmax2(logits: [f64; 2]) -> [f64; 2] {
    let m = logits[0].max(logits[1]);
    let e0 = (logits[0] - m).exp();
    let e1 = (logits[1] - m).exp();
    let s = e0 + e1;
    [e0 / s, e1 / s]
}

/// Everything the backward pass needs from one forward evaluation.
pub(crate) struct ForwardState {
    pub z1: Vec<f64>,
    pub a1: Vec<f64>,
    pub z2: Vec<f64>,
    pub a2: Vec<f64>,
    pub pool: Vec<f64>,
    pub pool_arg: Vec<usize>,
    pub flat: Vec<f64>,
    pub h: Vec<f64>,
    pub probs: [f64; 2],
}

impl LkcnnModel {
    pub(crate) fn forward_full(&self, x: &[f64], mask: Option<&[f64]>) -> ForwardState {
        let cfg = &self.config;
        let f = cfg.conv_filters;
        let k = cfg.kernel;
        let s = cfg.stride;
        let (l1, l2, l3) = (cfg.l1(), cfg.l2(), cfg.l3());

        let mut z1 = vec![0.0; l1 * f];
        for t in 0..l1 {
            let xin = &x[t * s..t * s + k];
            for fi in 0..f {
                let w = &self.conv1_w[fi * k..(fi + 1) * k];
                let mut acc = self.conv1_b[fi];
                for i in 0..k {
                    acc += w[i] * xin[i];
                }
                z1[t * f + fi] = acc;
            }
        }
        let a1: Vec<f64> = z1.iter().map(|&z| z.max(0.0)).collect();

        let mut z2 = vec![0.0; l2 * f];
        for t in 0..l2 {
            let ain = &a1[t * s * f..(t * s + k) * f];
            for fi in 0..f {
                let w = &self.conv2_w[fi * f * k..(fi + 1) * f * k];
                let mut acc = self.conv2_b[fi];
                // ain is position-major: ain[i*f + c].
                for i in 0..k {
                    let row = &ain[i * f..(i + 1) * f];
                    for (c, &a) in row.iter().enumerate() {
                        acc += w[c * k + i] * a;
                    }
                }
                z2[t * f + fi] = acc;
            }
        }
        let a2: Vec<f64> = z2.iter().map(|&z| z.max(0.0)).collect();

        let p = cfg.pool;
        let mut pool = vec![0.0; l3 * f];
        let mut pool_arg = vec![0usize; l3 * f];
        for t in 0..l3 {
            for fi in 0..f {
                let mut best = f64::NEG_INFINITY;
                let mut arg = 0;
                for j in 0..p {
                    let v = a2[(t * p + j) * f + fi];
                    if v > best {
                        best = v;
                        arg = j;
                    }
                }
                pool[t * f + fi] = best;
                pool_arg[t * f + fi] = arg;
            }
        }

        let mask: Vec<f64> = match mask {
            Some(m) => m.to_vec(),
            None => vec![1.0; pool.len()],
        };
        let flat: Vec<f64> = pool.iter().zip(&mask).map(|(v, m)| v * m).collect();

        let mut h = vec![0.0; cfg.dense_units];
        for u in 0..cfg.dense_units {
            let w = &self.dense1_w[u * flat.len()..(u + 1) * flat.len()];
            let mut acc = self.dense1_b[u];
            for (wi, fi) in w.iter().zip(&flat) {
                acc += wi * fi;
            }
            h[u] = sigmoid(acc);
        }

        let mut logits = [self.dense2_b[0], self.dense2_b[1]];
        for c in 0..2 {
            let w = &self.dense2_w[c * cfg.dense_units..(c + 1) * cfg.dense_units];
            for (wi, hi) in w.iter().zip(&h) {
                logits[c] += wi * hi;
            }
        }
        let probs = softmax2(logits);

        ForwardState { z1, a1, z2, a2, pool, pool_arg, flat, h, probs }
    }

    pub(crate) fn draw_mask(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let rate = self.config.dropout_rate;
        let len = self.config.flatten_len();
        if rate == 0.0 {
            return vec![1.0; len];
        }
        let keep = 1.0 - rate;
        (0..len)
            .map(|_| if rng.gen::<f64>() < keep { 1.0 / keep } else { 0.0 })
            .collect()
    }
}

/// Probability vector (p_regular, p_chaotic) plus the activation trace.
///
/// Dropout masks activations only in `Mode::Train`, with inverted scaling so
/// inference needs no rescale.
pub fn forward(model: &LkcnnModel, x: &[f64], mode: Mode) -> Result<([f64; 2], ActivationTrace)> {
    if x.len() != model.config.input_len {
        return Err(Error::Rejected(format!(
            "input length {} != {}",
            x.len(),
            model.config.input_len
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Rejected("non-finite input".into()));
    }
    let mask = match mode {
        Mode::Train(rng) => Some(model.draw_mask(rng)),
        Mode::Infer => None,
    };
    let st = model.forward_full(x, mask.as_deref());
    let trace = ActivationTrace {
        conv1: st.a1,
        conv2: st.a2,
        pool: st.pool,
        flatten: st.flat,
        dense1: st.h,
        output: st.probs,
    };
    Ok((st.probs, trace))
}

/// Cross-entropy of one prediction, with the probability floored at 1e-12.
pub fn loss(probs: &[f64; 2], label: Label) -> f64 {
    let p_true = match label {
        Label::Regular => probs[0],
        Label::Chaotic => probs[1],
    };
    -p_true.max(LOSS_PROB_FLOOR).ln()
}

/// Inference-mode prediction; ties at 0.5 go to Regular.
pub fn predict(model: &LkcnnModel, x: &[f64]) -> Result<(Label, f64)> {
    let (probs, _) = forward(model, x, Mode::Infer)?;
    let label = if probs[1] > 0.5 { Label::Chaotic } else { Label::Regular };
    Ok((label, probs[1]))
}

/// Gradients, same shapes and layout as the parameters.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub conv1_w: Vec<f64>,
    pub conv1_b: Vec<f64>,
    pub conv2_w: Vec<f64>,
    pub conv2_b: Vec<f64>,
    pub dense1_w: Vec<f64>,
    pub dense1_b: Vec<f64>,
    pub dense2_w: Vec<f64>,
    pub dense2_b: Vec<f64>,
}

impl Gradients {
    fn zeros_like(m: &LkcnnModel) -> Self {
        Gradients {
            conv1_w: vec![0.0; m.conv1_w.len()],
            conv1_b: vec![0.0; m.conv1_b.len()],
            conv2_w: vec![0.0; m.conv2_w.len()],
            conv2_b: vec![0.0; m.conv2_b.len()],
            dense1_w: vec![0.0; m.dense1_w.len()],
            dense1_b: vec![0.0; m.dense1_b.len()],
            dense2_w: vec![0.0; m.dense2_w.len()],
            dense2_b: vec![0.0; m.dense2_b.len()],
        }
    }

    pub fn arrays(&self) -> [&Vec<f64>; 8] {
        [
            &self.conv1_w,
            &self.conv1_b,
            &self.conv2_w,
            &self.conv2_b,
            &self.dense1_w,
            &self.dense1_b,
            &self.dense2_w,
            &self.dense2_b,
        ]
    }
}

impl LkcnnModel {
    pub fn param_arrays_mut(&mut self) -> [&mut Vec<f64>; 8] {
        [
            &mut self.conv1_w,
            &mut self.conv1_b,
            &mut self.conv2_w,
            &mut self.conv2_b,
            &mut self.dense1_w,
            &mut self.dense1_b,
            &mut self.dense2_w,
            &mut self.dense2_b,
        ]
    }

    pub fn param_count(&self) -> usize {
        self.conv1_w.len()
            + self.conv1_b.len()
            + self.conv2_w.len()
            + self.conv2_b.len()
            + self.dense1_w.len()
            + self.dense1_b.len()
            + self.dense2_w.len()
            + self.dense2_b.len()
    }

    /// Flat read access across all parameter arrays, for gradient checking.
    pub fn get_param(&self, mut idx: usize) -> f64 {
        for arr in [
            &self.conv1_w,
            &self.conv1_b,
            &self.conv2_w,
            &self.conv2_b,
            &self.dense1_w,
            &self.dense1_b,
            &self.dense2_w,
            &self.dense2_b,
        ] {
            if idx < arr.len() {
                return arr[idx];
            }
            idx -= arr.len();
        }
        panic!("parameter index out of range");
    }

    pub fn set_param(&mut self, mut idx: usize, value: f64) {
        for arr in self.param_arrays_mut() {
            if idx < arr.len() {
                arr[idx] = value;
                return;
            }
            idx -= arr.len();
        }
        panic!("parameter index out of range");
    }
}

/// Exact gradients of the mean batch loss for the realized dropout masks.
///
/// `masks[i]` is the per-element dropout scale vector for sample i; pass
/// all-ones masks to disable dropout.
pub fn backward(
    model: &LkcnnModel,
    batch: &[(&[f64], Label)],
    masks: &[Vec<f64>],
) -> (Gradients, f64) {
    assert_eq!(batch.len(), masks.len());
    let cfg = &model.config;
    let f = cfg.conv_filters;
    let k = cfg.kernel;
    let s = cfg.stride;
    let (l1, l2, l3) = (cfg.l1(), cfg.l2(), cfg.l3());
    let flat_len = cfg.flatten_len();

    let mut g = Gradients::zeros_like(model);
    let mut total_loss = 0.0;

    for ((x, label), mask) in batch.iter().zip(masks) {
        let st = model.forward_full(x, Some(mask));
        total_loss += loss(&st.probs, *label);

        // Softmax + cross-entropy.
        let y = match label {
            Label::Regular => 0,
            Label::Chaotic => 1,
        };
        let mut dlogits = [st.probs[0], st.probs[1]];
        dlogits[y] -= 1.0;

        // dense2
        let mut dh = vec![0.0; cfg.dense_units];
        for c in 0..2 {
            g.dense2_b[c] += dlogits[c];
            let gw = &mut g.dense2_w[c * cfg.dense_units..(c + 1) * cfg.dense_units];
            let w = &model.dense2_w[c * cfg.dense_units..(c + 1) * cfg.dense_units];
            for u in 0..cfg.dense_units {
                gw[u] += dlogits[c] * st.h[u];
                dh[u] += dlogits[c] * w[u];
            }
        }

        // dense1 (sigmoid)
        let mut dflat = vec![0.0; flat_len];
        for u in 0..cfg.dense_units {
            let dz = dh[u] * st.h[u] * (1.0 - st.h[u]);
            g.dense1_b[u] += dz;
            let gw = &mut g.dense1_w[u * flat_len..(u + 1) * flat_len];
            let w = &model.dense1_w[u * flat_len..(u + 1) * flat_len];
            for j in 0..flat_len {
                gw[j] += dz * st.flat[j];
                dflat[j] += dz * w[j];
            }
        }

        // dropout, then unpool into the conv2 activation grid
        let mut da2 = vec![0.0; l2 * f];
        for t in 0..l3 {
            for fi in 0..f {
                let e = t * f + fi;
                let dpool = dflat[e] * mask[e];
                let j = st.pool_arg[e];
                da2[(t * cfg.pool + j) * f + fi] += dpool;
            }
        }

        // conv2
        let mut da1 = vec![0.0; l1 * f];
        for t in 0..l2 {
            for fi in 0..f {
                let dz = if st.z2[t * f + fi] > 0.0 { da2[t * f + fi] } else { 0.0 };
                if dz == 0.0 {
                    continue;
                }
                g.conv2_b[fi] += dz;
                let gw = &mut g.conv2_w[fi * f * k..(fi + 1) * f * k];
                let w = &model.conv2_w[fi * f * k..(fi + 1) * f * k];
                for i in 0..k {
                    let pos = (t * s + i) * f;
                    for c in 0..f {
                        gw[c * k + i] += dz * st.a1[pos + c];
                        da1[pos + c] += dz * w[c * k + i];
                    }
                }
            }
        }

        // conv1
        for t in 0..l1 {
            let xin = &x[t * s..t * s + k];
            for fi in 0..f {
                let dz = if st.z1[t * f + fi] > 0.0 { da1[t * f + fi] } else { 0.0 };
                if dz == 0.0 {
                    continue;
                }
                g.conv1_b[fi] += dz;
                let gw = &mut g.conv1_w[fi * k..(fi + 1) * k];
                for i in 0..k {
                    gw[i] += dz * xin[i];
                }
            }
        }
    }

    let scale = 1.0 / batch.len() as f64;
    for arr in [
        &mut g.conv1_w,
        &mut g.conv1_b,
        &mut g.conv2_w,
        &mut g.conv2_b,
        &mut g.dense1_w,
        &mut g.dense1_b,
        &mut g.dense2_w,
        &mut g.dense2_b,
    ] {
        for v in arr.iter_mut() {
            *v *= scale;
        }
    }
    (g, total_loss * scale)
}

/// Mean batch loss under fixed masks; the finite-difference counterpart of
/// `backward`.
pub fn batch_loss(model: &LkcnnModel, batch: &[(&[f64], Label)], masks: &[Vec<f64>]) -> f64 {
    let mut total = 0.0;
    for ((x, label), mask) in batch.iter().zip(masks) {
        let st = model.forward_full(x, Some(mask));
        total += loss(&st.probs, *label);
    }
    total / batch.len() as f64
}

// --- persistence ---------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct NamedArray {
    shape: Vec<usize>,
    /// Row-major values.
    data: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    tool_version: String,
    config: LkcnnConfig,
    epochs_run: usize,
    best_epoch: Option<usize>,
    history: Vec<EpochStats>,
    /// Absent for a config-only file; a fresh init is reproduced from the
    /// stored seed.
    params: Option<std::collections::BTreeMap<String, NamedArray>>,
}

const MODEL_FORMAT_VERSION: u32 = 1;

pub fn save_model(model: &LkcnnModel, path: &std::path::Path) -> Result<()> {
    let cfg = &model.config;
    let f = cfg.conv_filters;
    let mut params = std::collections::BTreeMap::new();
    let mut put = |name: &str, shape: Vec<usize>, data: &[f64]| {
        params.insert(name.to_string(), NamedArray { shape, data: data.to_vec() });
    };
    put("conv1_w", vec![f, cfg.kernel], &model.conv1_w);
    put("conv1_b", vec![f], &model.conv1_b);
    put("conv2_w", vec![f, f, cfg.kernel], &model.conv2_w);
    put("conv2_b", vec![f], &model.conv2_b);
    put("dense1_w", vec![cfg.dense_units, cfg.flatten_len()], &model.dense1_w);
    put("dense1_b", vec![cfg.dense_units], &model.dense1_b);
    put("dense2_w", vec![2, cfg.dense_units], &model.dense2_w);
    put("dense2_b", vec![2], &model.dense2_b);
    let file = ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        tool_version: crate::VERSION.to_string(),
        config: *cfg,
        epochs_run: model.history.len(),
        best_epoch: model.best_epoch,
        history: model.history.clone(),
        params: Some(params),
    };
    let out = std::fs::File::create(path)?;
    serde_json::to_writer(std::io::BufWriter::new(out), &file)
        .map_err(|e| Error::ModelFile(format!("write: {e}")))?;
    Ok(())
}

pub fn load_model(path: &std::path::Path) -> Result<LkcnnModel> {
    let file = std::fs::File::open(path)?;
    let mf: ModelFile = serde_json::from_reader(std::io::BufReader::new(file))
        .map_err(|e| Error::ModelFile(format!("read: {e}")))?;
    if mf.format_version != MODEL_FORMAT_VERSION {
        return Err(Error::ModelFile(format!(
            "unsupported format version {}",
            mf.format_version
        )));
    }
    let mut model = init_model(&mf.config)?;
    model.history = mf.history;
    model.best_epoch = mf.best_epoch;
    if let Some(params) = mf.params {
        let take = |name: &str, expect_len: usize| -> Result<Vec<f64>> {
            let arr = params
                .get(name)
                .ok_or_else(|| Error::ModelFile(format!("missing array '{name}'")))?;
            let shape_len: usize = arr.shape.iter().product();
            if arr.data.len() != expect_len || shape_len != expect_len {
                return Err(Error::ModelFile(format!(
                    "array '{name}' has {} values, expected {expect_len}",
                    arr.data.len()
                )));
            }
            Ok(arr.data.clone())
        };
        model.conv1_w = take("conv1_w", model.conv1_w.len())?;
        model.conv1_b = take("conv1_b", model.conv1_b.len())?;
        model.conv2_w = take("conv2_w", model.conv2_w.len())?;
        model.conv2_b = take("conv2_b", model.conv2_b.len())?;
        model.dense1_w = take("dense1_w", model.dense1_w.len())?;
        model.dense1_b = take("dense1_b", model.dense1_b.len())?;
        model.dense2_w = take("dense2_w", model.dense2_w.len())?;
        model.dense2_b = take("dense2_b", model.dense2_b.len())?;
    }
    Ok(model)
}
