//! Line-delimited output records.

use serde::Serialize;

use p2cover_core::degen::{AtlasEntry, Realization};
use p2cover_core::hopf::{Flat, HopfReport, Tower};
use p2cover_core::{AnalysisReport, BaseRing, DegenType, ZpReport};

#[derive(Serialize, Clone, Copy)]
pub struct Context {
    pub p: u64,
    pub d: u32,
    #[serde(rename = "D")]
    pub zdeg: usize,
    #[serde(rename = "N")]
    pub prec: u32,
}

impl Context {
    pub fn of(base: &BaseRing) -> Self {
        Context { p: base.ctx.p, d: base.ctx.d, zdeg: base.zdeg, prec: base.ctx.default_precision() }
    }
}

fn tuple(t: &DegenType) -> [u32; 4] {
    [t.j, t.gamma1, t.gamma2, t.kappa]
}

/// Writes `x` as a sum of monomials in the generators `names`.
pub fn flat_to_string(tower: &Tower, x: &Flat, names: &[&str]) -> String {
    let terms: Vec<String> = x
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let m = tower.monomial_name(k, names);
            match (c.to_string().as_str(), m.as_str()) {
                (cs, "1") => cs.to_string(),
                ("1", ms) => ms.to_string(),
                (cs, ms) => format!("({cs})*{ms}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

#[derive(Serialize)]
pub struct Analysis {
    pub kind: &'static str,
    pub context: Context,
    pub f: String,
    #[serde(rename = "type")]
    pub degen: [u32; 4],
    pub effective_model: String,
    pub alpha: String,
    pub strongly_extendible: bool,
    pub differents: [u32; 2],
    pub g: String,
    pub f1: String,
    pub h: Vec<String>,
    pub truncated: bool,
    pub strict: bool,
}

impl Analysis {
    pub fn new(context: Context, f: &str, r: &AnalysisReport, strict: bool) -> Self {
        Analysis {
            kind: "analysis",
            context,
            f: f.to_string(),
            degen: tuple(&r.degen),
            effective_model: r.effective_model.to_string(),
            alpha: r.alpha.to_string(),
            strongly_extendible: r.strongly_extendible,
            differents: [r.differents.0, r.differents.1],
            g: r.g.to_string(),
            f1: r.f1.to_string(),
            h: r.h.iter().map(|x| x.to_string()).collect(),
            truncated: r.truncated,
            strict,
        }
    }

    pub fn summary(&self) -> String {
        format!(
            "type ({},{},{},{}), effective model {}, strongly extendible {}, differents ({},{})",
            self.degen[0],
            self.degen[1],
            self.degen[2],
            self.degen[3],
            self.effective_model,
            self.strongly_extendible,
            self.differents[0],
            self.differents[1]
        )
    }
}

#[derive(Serialize)]
pub struct ZpAnalysis {
    pub kind: &'static str,
    pub context: Context,
    pub f: String,
    pub gamma: u32,
    pub model: String,
    pub different: u32,
    pub truncated: bool,
    pub strict: bool,
}

impl ZpAnalysis {
    pub fn new(context: Context, f: &str, r: &ZpReport, strict: bool) -> Self {
        ZpAnalysis {
            kind: "zp_analysis",
            context,
            f: f.to_string(),
            gamma: r.gamma,
            model: r.model.to_string(),
            different: r.different,
            truncated: r.truncated,
            strict,
        }
    }

    pub fn summary(&self) -> String {
        format!("level {}, model {}, different {}", self.gamma, self.model, self.different)
    }
}

#[derive(Serialize)]
pub struct TypeRecord {
    pub kind: &'static str,
    pub context: Context,
    #[serde(rename = "type")]
    pub degen: [u32; 4],
}

impl TypeRecord {
    pub fn new(context: Context, t: &DegenType) -> Self {
        TypeRecord { kind: "type", context, degen: tuple(t) }
    }
}

#[derive(Serialize)]
pub struct RealizationRecord {
    pub kind: &'static str,
    pub context: Context,
    #[serde(rename = "type")]
    pub degen: [u32; 4],
    pub model: String,
    pub f1: String,
    pub f2: String,
    pub equations: Vec<String>,
    pub cover: String,
    pub analysis: Analysis,
}

impl RealizationRecord {
    pub fn new(context: Context, t: &DegenType, r: &Realization) -> Self {
        let cover = r.cover.to_string();
        RealizationRecord {
            kind: "realization",
            context,
            degen: tuple(t),
            model: r.torsor.model.to_string(),
            f1: r.torsor.f1.to_string(),
            f2: r.torsor.f2.to_string(),
            equations: r.torsor.describe(),
            analysis: Analysis::new(context, &cover, &r.report, false),
            cover,
        }
    }
}

#[derive(Serialize)]
pub struct HopfCheck {
    pub kind: &'static str,
    pub context: Context,
    pub model: String,
    pub rank: usize,
    pub special_fiber: Option<String>,
    pub coassociative: bool,
    pub counit: bool,
    pub antipode: bool,
    pub closure: bool,
    pub precision: u32,
    pub failures: Vec<String>,
}

impl HopfCheck {
    pub fn new(context: Context, model: String, rank: usize, fiber: Option<String>, r: &HopfReport) -> Self {
        HopfCheck {
            kind: "hopf_check",
            context,
            model,
            rank,
            special_fiber: fiber,
            coassociative: r.coassociative,
            counit: r.counit,
            antipode: r.antipode,
            closure: r.closure,
            precision: r.precision,
            failures: r.failures.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct HomRecord {
    pub kind: &'static str,
    pub context: Context,
    pub from: String,
    pub to: String,
    pub order: u64,
    pub generator: String,
}

#[derive(Serialize)]
pub struct ModelMapRecord {
    pub kind: &'static str,
    pub context: Context,
    pub from: String,
    pub to: String,
    pub exists: bool,
    pub r: Option<u64>,
    pub s: Option<u64>,
    pub isomorphism: bool,
    pub images: Vec<String>,
}

#[derive(Serialize)]
pub struct AtlasRecord {
    pub kind: &'static str,
    pub context: Context,
    #[serde(rename = "type")]
    pub degen: [u32; 4],
    pub admissible: bool,
    pub realizable: String,
    pub model: Option<String>,
    pub witness_cover: Option<String>,
}

impl AtlasRecord {
    pub fn new(context: Context, e: &AtlasEntry) -> Self {
        AtlasRecord {
            kind: "atlas",
            context,
            degen: tuple(&e.degen),
            admissible: e.admissible,
            realizable: e.realizable.to_string(),
            model: e.model.as_ref().map(|m| m.to_string()),
            witness_cover: e.witness.as_ref().map(|f| f.to_string()),
        }
    }
}

#[derive(Serialize)]
pub struct ErrorRecord {
    pub kind: &'static str,
    pub error: String,
    pub message: String,
    pub exit_code: i32,
}
