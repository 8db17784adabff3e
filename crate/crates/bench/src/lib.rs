//! Inputs shared by the benchmarks in `benches/`.

use p2cover_core::expr::parse_element;
use p2cover_core::{BaseRing, PAdicContext, PolyElt};

/// The local curve over `R` for `p = 3` and the given `d`, with `D = 16`.
pub fn curve(d: u32) -> BaseRing {
    BaseRing::local_curve(&PAdicContext::new(3, d, 0).unwrap(), 16).unwrap()
}

/// A cover of type `(0,4,1,5)` at `d = 3`.
pub fn non_extendible() -> PolyElt {
    parse_element("(1+pi^12*(1+Z^2))*(1+Z^2+pi^3*Z)^3", &curve(3)).unwrap()
}
