//! Degeneration types: the admissibility predicate, enumeration, and the
//! construction of covers with a prescribed type.

use std::fmt;

use crate::analysis::{analyze, AnalysisReport};
use crate::b1::QuotientB1;
use crate::base::{BaseKind, BaseRing, PolyElt};
use crate::dvr::PAdicContext;
use crate::error::{invalid, Error, Result};
use crate::groups::{ep, phi1_canonical, phi1_contains, torsor_equations, ModelGroup, TorsorPresentation};
use crate::residue::{frobenius_span, FpPoly, SpanResult};

/// `(j, gamma1, gamma2, kappa)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegenType {
    pub j: u32,
    pub gamma1: u32,
    pub gamma2: u32,
    pub kappa: u32,
}

impl DegenType {
    pub fn new(j: u32, gamma1: u32, gamma2: u32, kappa: u32) -> Self {
        DegenType { j, gamma1, gamma2, kappa }
    }

    /// Tuples of the shape covered by the realization construction:
    /// `kappa = gamma1 < v(lambda1)`.
    pub fn in_torsor_range(&self, ctx: &PAdicContext) -> bool {
        self.kappa == self.gamma1 && self.gamma1 < ctx.v_lambda1()
    }
}

impl fmt::Display for DegenType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.j, self.gamma1, self.gamma2, self.kappa)
    }
}

/// Checks the four admissibility clauses; on failure names the first one
/// that fails.
pub fn is_admissible(t: &DegenType, ctx: &PAdicContext) -> std::result::Result<(), String> {
    let (j, g1, g2, k) = (t.j as i64, t.gamma1 as i64, t.gamma2 as i64, t.kappa as i64);
    let p = ctx.p as i64;
    let vp = ctx.v_p() as i64;
    let v1 = ctx.v_lambda1() as i64;
    if !(g1.max(g2) <= k && k <= v1) {
        return Err(format!("clause i: max(gamma1, gamma2) <= kappa <= {v1}"));
    }
    let shift = k - g1 + j;
    if !(g2 <= p * shift && p * shift <= p * g2) {
        return Err("clause ii: gamma2 <= p(kappa - gamma1 + j) <= p gamma2".into());
    }
    if k < p * g2 {
        if g1 - j != vp / p {
            return Err(format!("clause iii: kappa < p gamma2 forces gamma1 - j = {}", vp / p));
        }
    } else if !(0 <= p * (g2 - j) && p * (g2 - j) <= vp - p * g1 + k) {
        return Err("clause iii: 0 <= p(gamma2 - j) <= v(p) - p gamma1 + kappa".into());
    }
    if p * j > g1 {
        return Err("clause iv: p j <= gamma1".into());
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Filter {
    /// `kappa = gamma1 < v(lambda1)`.
    Torsor,
}

/// All admissible tuples with entries in `0..=v(lambda1)`, sorted.
pub fn enumerate_admissible(ctx: &PAdicContext, filter: Option<Filter>) -> Vec<DegenType> {
    let v1 = ctx.v_lambda1();
    let mut out = vec![];
    for j in 0..=v1 {
        for gamma1 in 0..=v1 {
            for gamma2 in 0..=v1 {
                for kappa in 0..=v1 {
                    let t = DegenType { j, gamma1, gamma2, kappa };
                    if is_admissible(&t, ctx).is_err() {
                        continue;
                    }
                    if filter == Some(Filter::Torsor) && !t.in_torsor_range(ctx) {
                        continue;
                    }
                    out.push(t);
                }
            }
        }
    }
    out
}

/// A cover built to have a prescribed type, with its analysis.
#[derive(Clone, Debug)]
pub struct Realization {
    pub torsor: TorsorPresentation,
    pub cover: PolyElt,
    pub report: AnalysisReport,
}

/// `1 + Z^2`, not a p-th power modulo `pi`.
fn default_f1(base: &BaseRing) -> Result<PolyElt> {
    Ok(&base.one() + &base.monomial(&base.ctx.one(), 2)?)
}

/// Checks that `Z` lies outside `A_k^p[f1]`.
pub fn realization_hypothesis(base: &BaseRing, f1: &PolyElt) -> Result<()> {
    let p = base.ctx.p;
    let r = f1.residue();
    if f1.residue_pth_root(1).is_some() {
        return Err(Error::Hypothesis("f1 is a p-th power modulo pi".into()));
    }
    let gens: Vec<Vec<FpPoly>> = (0..p).map(|t| vec![r.pow(t)]).collect();
    match frobenius_span(p, &gens, &[FpPoly::monomial(p, 1, 1)]) {
        SpanResult::NotMember => Ok(()),
        _ => Err(Error::Hypothesis("Z lies in A_k^p[f1]".into())),
    }
}

/// Builds a cover of type `t` (`kappa = gamma1`) as a torsor under
/// `E(gamma1, gamma2, alpha, 1)` and checks that the analysis returns `t`.
pub fn realize(t: &DegenType, base: &BaseRing) -> Result<Realization> {
    let ctx = base.ctx.clone();
    if base.kind != BaseKind::LocalCurve {
        return Err(Error::Hypothesis("realization needs a local curve base".into()));
    }
    if let Err(reason) = is_admissible(t, &ctx) {
        return invalid(format!("{t} is not admissible: {reason}"));
    }
    if t.kappa != t.gamma1 {
        return invalid(format!("{t}: the construction needs kappa = gamma1"));
    }
    let p = ctx.p as u32;
    let DegenType { j, gamma1, gamma2, .. } = *t;
    let alpha = if gamma1 < p * gamma2 {
        phi1_canonical(&ctx, gamma1, gamma2)?
            .ok_or_else(|| Error::Invariant(format!("no model of Z/p^2 for {t}")))?
    } else if j == gamma2 {
        ctx.zero()
    } else {
        ctx.pi_pow(j)
    };
    if !phi1_contains(&ctx, gamma1, gamma2, &alpha)? {
        return Err(Error::Invariant(format!("alpha = {alpha} fails the Z/p^2 condition for {t}")));
    }
    let model = ModelGroup::extension(&ctx, gamma1, gamma2, &alpha, 1)?;
    let f1 = default_f1(base)?;
    realization_hypothesis(base, &f1)?;

    // P(T1) = (E_p(alpha T1)^(-p) (1 + pi^gamma1 T1) E_p(alpha^p f1) - 1) / pi^(p gamma2)
    let b1 = QuotientB1::new(base, gamma1, &f1)?;
    let t1 = b1.t();
    let mut e = b1.zero();
    for c in ep(&alpha).iter().rev() {
        e = &(&e * &t1) + &b1.constant(&base.constant(c));
    }
    let mut gt = base.zero();
    for c in ep(&alpha.pow(ctx.p)).iter().rev() {
        gt = &(&gt * &f1) + &base.constant(c);
    }
    let x1 = &b1.one() + &t1.mul_pi_pow(gamma1);
    let num = &(&e.inv_unit()?.pow(ctx.p) * &x1).scale(&gt) - &b1.one();
    let pp = num.div_pi_pow(p * gamma2).map_err(|err| {
        Error::Invariant(format!("the realization equation is not integral: {err}"))
    })?;
    let mut f2 = base.zero();
    if pp.residue_pth_root_scaled()?.is_some() {
        f2 = base.z()?;
    }
    let torsor = torsor_equations(&model, &f1, &f2)?;
    let cover = torsor.kummer_generator();
    let report = analyze(&cover)?;
    if report.degen != *t {
        return Err(Error::Invariant(format!(
            "round trip mismatch: built {t}, analysis returned {}",
            report.degen
        )));
    }
    Ok(Realization { torsor, cover, report })
}

/// The cover `(1 + pi^(p g1)(1 + Z^2)) (1 + Z^2 + pi^(p g2) Z)^p`, of type
/// `(0, g1, g2, g1 + g2)` when `v(p) > p g1 > p^2 g2 > 0`.
pub fn non_extendible_cover(base: &BaseRing, gamma1: u32, gamma2: u32) -> Result<PolyElt> {
    let p = base.ctx.p as u32;
    let f1 = default_f1(base)?;
    let u1 = &base.one() + &f1.mul_pi_pow(p * gamma1);
    let g = &f1 + &base.z()?.mul_pi_pow(p * gamma2);
    Ok(&u1 * &g.pow(base.ctx.p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Realizability {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Realizability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Realizability::Yes => "yes",
            Realizability::No => "no",
            Realizability::Unknown => "unknown",
        })
    }
}

/// One admissible tuple with what is known about realizing it.
#[derive(Clone, Debug)]
pub struct AtlasEntry {
    pub degen: DegenType,
    pub admissible: bool,
    pub realizable: Realizability,
    /// Effective model of the witness cover.
    pub model: Option<ModelGroup>,
    pub witness: Option<PolyElt>,
}

/// `(j, v(p)/p + j, v(lambda1), v(lambda1))` with `j < v(lambda2)` and
/// `p | v(p)`: admissible, never realizable.
pub fn is_known_unrealizable(t: &DegenType, ctx: &PAdicContext) -> bool {
    let (p, vp, v1) = (ctx.p as u32, ctx.v_p(), ctx.v_lambda1());
    vp % p == 0
        && t.j < ctx.v_lambda2()
        && t.gamma1 == vp / p + t.j
        && t.gamma2 == v1
        && t.kappa == v1
}

/// Every admissible tuple, with a witness cover when one is constructed.
pub fn atlas(base: &BaseRing) -> Vec<AtlasEntry> {
    let ctx = base.ctx.clone();
    let p = ctx.p as u32;
    enumerate_admissible(&ctx, None)
        .into_iter()
        .map(|t| {
            let mut e = AtlasEntry {
                degen: t,
                admissible: true,
                realizable: Realizability::Unknown,
                model: None,
                witness: None,
            };
            if is_known_unrealizable(&t, &ctx) {
                e.realizable = Realizability::No;
                return e;
            }
            let built = if t.kappa == t.gamma1 {
                realize(&t, base).ok().map(|r| (r.cover, r.report))
            } else if t.j == 0
                && t.kappa == t.gamma1 + t.gamma2
                && ctx.v_p() > p * t.gamma1
                && t.gamma1 > p * t.gamma2
                && t.gamma2 > 0
            {
                non_extendible_cover(base, t.gamma1, t.gamma2)
                    .and_then(|f| Ok((f.clone(), analyze(&f)?)))
                    .ok()
                    .filter(|(_, r)| r.degen == t)
            } else {
                None
            };
            if let Some((f, r)) = built {
                e.realizable = Realizability::Yes;
                e.model = Some(r.effective_model);
                e.witness = Some(f);
            }
            e
        })
        .collect()
}

/// One checked statement of the special-case suite.
#[derive(Clone, Debug)]
pub struct CaseResult {
    pub case: &'static str,
    pub fixture: String,
    pub passed: bool,
    pub detail: String,
}

fn record(out: &mut Vec<CaseResult>, case: &'static str, fixture: String, check: Result<(bool, String)>) {
    let (passed, detail) = match check {
        Ok(r) => r,
        Err(e) => (false, e.to_string()),
    };
    out.push(CaseResult { case, fixture, passed, detail });
}

/// Checks the characterizations of the special cases on constructed covers.
pub fn special_case_suite(base: &BaseRing) -> Vec<CaseResult> {
    let ctx = base.ctx.clone();
    let p = ctx.p as u32;
    let v1 = ctx.v_lambda1();
    let v2 = ctx.v_lambda2();
    let mut out = vec![];
    let zero = ctx.zero();

    // G_{pi^j,2}-torsors: type (j, pj, j, pj), model E(pj, j, 0, 1).
    for j in 0..v2 {
        let t = DegenType::new(j, p * j, j, p * j);
        let check = realize(&t, base).and_then(|r| {
            let want = ModelGroup::extension(&ctx, p * j, j, &zero, 1)?;
            let mu = r.report.degen.gamma1 == 0;
            Ok((
                r.report.effective_model == want && mu == (j == 0),
                format!("type {}, model {}", r.report.degen, r.report.effective_model),
            ))
        });
        record(&mut out, "i", t.to_string(), check);
    }

    // j = v(lambda2): model E(v1, gamma2, eta_pi, 1).
    for gamma2 in v2..=v1 {
        let t = DegenType::new(v2, v1, gamma2, v1);
        let check = realize(&t, base).and_then(|r| {
            let want = ModelGroup::extension(&ctx, v1, gamma2, &ctx.eta_pi(), 1)?;
            Ok((
                r.report.effective_model == want,
                format!("type {}, model {}", r.report.degen, r.report.effective_model),
            ))
        });
        record(&mut out, "ii", t.to_string(), check);
    }

    // gamma2 = j: model E(gamma1, gamma2, 0, 1) with gamma1 >= p gamma2.
    for gamma2 in 0..=v2 {
        for gamma1 in (p * gamma2).max(1)..v1 {
            let t = DegenType::new(gamma2, gamma1, gamma2, gamma1);
            if is_admissible(&t, &ctx).is_err() {
                continue;
            }
            let check = realize(&t, base).and_then(|r| {
                let want = ModelGroup::extension(&ctx, gamma1, gamma2, &zero, 1)?;
                Ok((
                    r.report.effective_model == want,
                    format!("type {}, model {}", r.report.degen, r.report.effective_model),
                ))
            });
            record(&mut out, "iii", t.to_string(), check);
        }
    }

    // j = 0: strongly extendible exactly when gamma2 = 0.
    for gamma1 in 1..v1 {
        let t = DegenType::new(0, gamma1, 0, gamma1);
        if is_admissible(&t, &ctx).is_err() {
            continue;
        }
        let check = realize(&t, base).map(|r| {
            (r.report.strongly_extendible, format!("type {}", r.report.degen))
        });
        record(&mut out, "iv", t.to_string(), check);
    }
    for gamma2 in 1..=v1 {
        for gamma1 in 1..=v1 {
            let vp = ctx.v_p();
            if !(vp > p * gamma1 && p * gamma1 > p * p * gamma2) {
                continue;
            }
            let check = non_extendible_cover(base, gamma1, gamma2).and_then(|f| analyze(&f)).map(|r| {
                let ok = r.degen == DegenType::new(0, gamma1, gamma2, gamma1 + gamma2)
                    && !r.strongly_extendible;
                (ok, format!("type {}, extendible {}", r.degen, r.strongly_extendible))
            });
            record(&mut out, "iv", format!("non-extendible family ({gamma1},{gamma2})"), check);
        }
    }

    // Z/p^2-torsors: gamma2 = v(lambda1).
    let t = DegenType::new(v2, v1, v1, v1);
    let check = realize(&t, base).and_then(|r| {
        let want = ModelGroup::extension(&ctx, v1, v1, &ctx.eta_pi(), 1)?;
        Ok((
            r.report.degen == t && r.report.effective_model == want && r.report.differents.1 == 0,
            format!("type {}, model {}", r.report.degen, r.report.effective_model),
        ))
    });
    record(&mut out, "v", t.to_string(), check);

    // gamma1 = v(lambda1) forces j = min(gamma2, v(lambda2)).
    let bad: Vec<String> = enumerate_admissible(&ctx, None)
        .into_iter()
        .filter(|t| t.gamma1 == v1 && t.j != t.gamma2.min(v2))
        .map(|t| t.to_string())
        .collect();
    record(
        &mut out,
        "vi",
        "enumeration".into(),
        Ok((bad.is_empty(), format!("violations: {bad:?}"))),
    );
    out
}
