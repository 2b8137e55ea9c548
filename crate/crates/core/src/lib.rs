pub mod cli;
pub mod cumulants;
pub mod density;
pub mod error;
pub mod exactseries;
pub mod rtransform;
pub mod sampler;
pub mod shiftedjack;
pub mod spectra;
pub mod svg;

pub use error::{Error, Result};
