pub mod arith;
pub mod characters;
pub mod cli;
pub mod component_maps;
pub mod error;
pub mod exactnum;
pub mod fixtures;
pub mod fqm_weil;
pub mod hilbert_lift;
pub mod qseries;

pub use error::{Error, Result};
