pub mod data;
pub mod error;
pub mod eval;
pub mod graphssl;
pub mod linalg;
pub mod qsim;
pub mod rng;
pub mod runner;
pub mod vqc;

pub use error::{Error, Result, Stage};
