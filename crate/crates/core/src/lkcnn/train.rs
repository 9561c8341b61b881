//! Mini-batch Adam training with validation-loss early stopping and
//! best-weight restoration.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{backward, LkcnnModel, Mode};
use crate::error::{Error, Result};
use crate::lyapunov::Label;

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_acc: f64,
    pub val_loss: f64,
    pub val_acc: f64,
}

/// One training example: a window plus its label.
pub type TrainSample<'a> = (&'a [f64], Label);

struct Adam {
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    t: i32,
}

impl Adam {
    fn new(model: &LkcnnModel) -> Self {
        let shapes: Vec<usize> = [
            model.conv1_w.len(),
            model.conv1_b.len(),
            model.conv2_w.len(),
            model.conv2_b.len(),
            model.dense1_w.len(),
            model.dense1_b.len(),
            model.dense2_w.len(),
            model.dense2_b.len(),
        ]
        .to_vec();
        Adam {
            m: shapes.iter().map(|&n| vec![0.0; n]).collect(),
            v: shapes.iter().map(|&n| vec![0.0; n]).collect(),
            t: 0,
        }
    }

    fn step(&mut self, model: &mut LkcnnModel, grads: &super::Gradients, lr: f64) {
        self.t += 1;
        let bc1 = 1.0 - ADAM_BETA1.powi(self.t);
        let bc2 = 1.0 - ADAM_BETA2.powi(self.t);
        let garrays = grads.arrays();
        for (ai, params) in model.param_arrays_mut().into_iter().enumerate() {
            let g = garrays[ai];
            let m = &mut self.m[ai];
            let v = &mut self.v[ai];
            for i in 0..params.len() {
                m[i] = ADAM_BETA1 * m[i] + (1.0 - ADAM_BETA1) * g[i];
                v[i] = ADAM_BETA2 * v[i] + (1.0 - ADAM_BETA2) * g[i] * g[i];
                let mhat = m[i] / bc1;
                let vhat = v[i] / bc2;
                params[i] -= lr * mhat / (vhat.sqrt() + ADAM_EPS);
            }
        }
    }
}

fn snapshot(model: &LkcnnModel) -> [Vec<f64>; 8] {
    [
        model.conv1_w.clone(),
        model.conv1_b.clone(),
        model.conv2_w.clone(),
        model.conv2_b.clone(),
        model.dense1_w.clone(),
        model.dense1_b.clone(),
        model.dense2_w.clone(),
        model.dense2_b.clone(),
    ]
}

fn restore(model: &mut LkcnnModel, snap: &[Vec<f64>; 8]) {
    for (dst, src) in model.param_arrays_mut().into_iter().zip(snap) {
        dst.clone_from(src);
    }
}

/// Inference-mode mean loss and accuracy over a sample set.
pub fn evaluate(model: &LkcnnModel, samples: &[TrainSample]) -> (f64, f64) {
    let mut total_loss = 0.0;
    let mut correct = 0usize;
    for &(x, label) in samples {
        let (probs, _) = super::forward(model, x, Mode::Infer).expect("valid input");
        total_loss += super::loss(&probs, label);
        let pred = if probs[1] > 0.5 { Label::Chaotic } else { Label::Regular };
        if pred == label {
            correct += 1;
        }
    }
    let n = samples.len().max(1) as f64;
    (total_loss / n, correct as f64 / n)
}

/// Trains in place. Early-stops when validation loss fails to improve for
/// `patience` epochs (best weights restored), or when training accuracy
/// reaches `accuracy_stop`.
pub fn train(
    model: &mut LkcnnModel,
    train_set: &[TrainSample],
    val_set: &[TrainSample],
) -> Result<()> {
    if train_set.is_empty() || val_set.is_empty() {
        return Err(Error::Rejected("empty train or validation set".into()));
    }
    let cfg = model.config;
    // Separate streams for batch order and dropout masks, both derived from
    // the model seed so a run is reproducible end to end.
    let mut order_rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x5eed));
    let mut mask_rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0xd50));

    let mut adam = Adam::new(model);
    let mut indices: Vec<usize> = (0..train_set.len()).collect();
    let mut best_val = f64::INFINITY;
    let mut best_snap = snapshot(model);
    let mut best_epoch = 0usize;
    let mut stall = 0usize;

    for epoch in 0..cfg.max_epochs {
        indices.shuffle(&mut order_rng);
        let mut epoch_loss = 0.0;
        let mut batches = 0usize;
        for chunk in indices.chunks(cfg.batch_size) {
            let batch: Vec<TrainSample> = chunk.iter().map(|&i| train_set[i]).collect();
            let masks: Vec<Vec<f64>> =
                batch.iter().map(|_| model.draw_mask(&mut mask_rng)).collect();
            let (grads, batch_loss) = backward(model, &batch, &masks);
            if !batch_loss.is_finite() {
                return Err(Error::Diverged { epoch });
            }
            adam.step(model, &grads, cfg.learning_rate);
            epoch_loss += batch_loss;
            batches += 1;
        }

        let (_, train_acc) = evaluate(model, train_set);
        let (val_loss, val_acc) = evaluate(model, val_set);
        model.history.push(EpochStats {
            epoch,
            train_loss: epoch_loss / batches as f64,
            train_acc,
            val_loss,
            val_acc,
        });
        if !val_loss.is_finite() {
            return Err(Error::Diverged { epoch });
        }

        if val_loss < best_val {
            best_val = val_loss;
            best_snap = snapshot(model);
            best_epoch = epoch;
            stall = 0;
        } else {
            stall += 1;
        }

        if let Some(threshold) = cfg.accuracy_stop {
            if train_acc >= threshold {
                best_snap = snapshot(model);
                best_epoch = epoch;
                break;
            }
        }
        if stall >= cfg.patience {
            break;
        }
    }

    restore(model, &best_snap);
    model.best_epoch = Some(best_epoch);
    Ok(())
}
