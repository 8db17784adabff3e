//! Re-running a computation with twice the degree bound and twice the
//! precision, to catch answers that depend on truncation.

use crate::analysis::{analyze, analyze_zp, AnalysisReport, ZpReport};
use crate::base::{BaseKind, BaseRing};
use crate::error::{Error, Result};
use crate::expr::parse_element;

/// The same base with `2D` and `2N`.
pub fn doubled(base: &BaseRing) -> Result<BaseRing> {
    let ctx = base.ctx.with_precision(2 * base.ctx.default_precision())?;
    match base.kind {
        BaseKind::Point => Ok(BaseRing::point(&ctx)),
        BaseKind::LocalCurve => BaseRing::local_curve(&ctx, 2 * base.zdeg),
    }
}

fn unstable(what: &str, a: impl std::fmt::Display, b: impl std::fmt::Display) -> Error {
    Error::Precision(format!("{what} changed from {a} to {b} at doubled degree bound and precision"))
}

/// Parses and analyzes `src`; with `strict`, also reruns on the doubled base
/// and fails unless type, model, extendibility and differents agree.
pub fn analyze_source(src: &str, base: &BaseRing, strict: bool) -> Result<AnalysisReport> {
    let r = analyze(&parse_element(src, base)?)?;
    if strict {
        let r2 = analyze(&parse_element(src, &doubled(base)?)?)?;
        if r.degen != r2.degen {
            return Err(unstable("degeneration type", r.degen, r2.degen));
        }
        if r.effective_model.to_string() != r2.effective_model.to_string() {
            return Err(unstable("effective model", &r.effective_model, &r2.effective_model));
        }
        if r.strongly_extendible != r2.strongly_extendible {
            return Err(unstable("extendibility", r.strongly_extendible, r2.strongly_extendible));
        }
        if r.differents != r2.differents {
            return Err(unstable(
                "differents",
                format!("{:?}", r.differents),
                format!("{:?}", r2.differents),
            ));
        }
    }
    Ok(r)
}

/// As [`analyze_source`], for the p-cover `T^p = f`.
pub fn analyze_zp_source(src: &str, base: &BaseRing, strict: bool) -> Result<ZpReport> {
    let r = analyze_zp(&parse_element(src, base)?)?;
    if strict {
        let r2 = analyze_zp(&parse_element(src, &doubled(base)?)?)?;
        if (r.gamma, r.different) != (r2.gamma, r2.different) {
            return Err(unstable(
                "level and different",
                format!("({}, {})", r.gamma, r.different),
                format!("({}, {})", r2.gamma, r2.different),
            ));
        }
    }
    Ok(r)
}
