//! Numerical laboratory for chaos-versus-regular classification of 1D map
//! orbits: orbit generation, Lyapunov exponents, labeled data sets, a direct
//! Savitzky-Golay reconstruction classifier, a from-scratch large-kernel
//! convolutional network, and activation-periodicity analysis.

pub mod dataset;
pub mod error;
pub mod lkcnn;
pub mod lyapunov;
pub mod maps;
pub mod metrics;
pub mod period;
pub mod sgfilter;

pub use error::{Error, Result};
pub use lyapunov::Label;

/// Tool version embedded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Stable 64-bit FNV-1a hash, used for content ids in output files.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
