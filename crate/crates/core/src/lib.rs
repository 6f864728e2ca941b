pub mod error;
pub mod matrix;
pub mod multiset;
pub mod optim;
pub mod rational;
pub mod space;

pub use error::{Error, Result};
pub mod stoch;
pub mod pcoh;
pub mod report;
pub mod chains;
pub mod moments;
pub mod io;
pub mod cli;
