//! Special functions: the Mittag-Leffler family, the M-Wright function,
//! and the stable densities derived from them.

pub mod gamma_dd;
pub mod mittag_leffler;
pub mod mwright;
pub mod stable;

pub use mittag_leffler::{
    ml_density, ml_one, ml_one_real, ml_spectral_weight, ml_survival, ml_two, ml_two_real,
    EvalResult, MLParams, Method, RealEval,
};
pub use mwright::{mwright, mwright_eval, mwright_support_cut, MwEval};
pub use stable::{one_sided_stable_density, symmetric_stable_density};
