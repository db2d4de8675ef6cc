pub mod classical;
pub mod cli;
pub mod dcsum;
pub mod error;
pub mod gf2r;
pub mod ksum;
pub mod matfq;
pub mod pmi;
pub mod wcode;

pub use error::{Error, Result};
