//! Triangular decomposition of polynomial systems over the rationals with
//! squarefree regular chains, together with evaluators for the associated
//! degree and height bounds.

pub mod algebra;
pub mod bounds;
pub mod chains;
pub mod decompose;
pub mod error;
pub mod ggcd;
pub mod meter;
pub mod oracle;
pub mod poly;
pub mod report;
pub mod unmixed;

pub use error::{Error, Result};
