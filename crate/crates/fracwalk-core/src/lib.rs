pub mod ctrw;
pub mod dd;
pub mod error;
pub mod fracdiff;
pub mod quad;
pub mod renewal;
pub mod rng;
pub mod special;
pub mod stats;
pub mod talbot;
pub mod validate;
pub mod variates;

pub use error::{CoreError, Result};
pub use rng::RngStream;
pub use variates::{JumpLaw, WaitingLaw};
