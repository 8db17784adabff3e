//! Finite flat models of `mu_p` and `mu_{p^2}` over a ramified p-adic ring,
//! and degeneration types of cyclic p^2-covers.

pub mod analysis;
pub mod b1;
pub mod base;
pub mod degen;
pub mod dvr;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod groups;
pub mod hopf;
pub mod residue;
pub mod stability;

pub use dvr::{PAdicContext, RingElt, Valuation};
pub use error::{Error, Result};
pub use base::{BaseKind, BaseRing, PolyElt};
pub use b1::{B1Elt, QuotientB1};
pub use analysis::{analyze, analyze_zp, AnalysisReport, ZpReport};
pub use degen::DegenType;
pub use groups::{ModelGroup, ModelKind};
