pub mod base;
pub mod certificate;
pub mod colimits;
pub mod error;
pub mod gen;
pub mod index;
pub mod levelrep;
pub mod limits;
pub mod pro;
pub mod theorems;

pub use certificate::{Certificate, Check, Verdict};
pub use error::{ProError, Result};
