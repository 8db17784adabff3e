//! Level computation and the degeneration-type pipeline for cyclic
//! `p^2`-covers `T^(p^2) = f` of a local curve.

use crate::b1::{B1Elt, QuotientB1};
use crate::base::{BaseKind, PolyElt};
use crate::degen::{is_admissible, DegenType};
use crate::dvr::{PAdicContext, RingElt};
use crate::error::{invalid, Error, Result};
use crate::groups::ModelGroup;

/// Ring elements the level search runs over.
pub trait LevelElt: Clone {
    fn one_like(&self) -> Self;
    fn mul_e(&self, o: &Self) -> Self;
    fn add_e(&self, o: &Self) -> Self;
    fn sub_e(&self, o: &Self) -> Self;
    fn pow_e(&self, n: u64) -> Self;
    fn mul_pi(&self, k: u32) -> Self;
    fn div_pi(&self, k: u32) -> Result<Self>;
    fn zero_mod(&self, k: u32) -> Result<bool>;
    /// `(num, den)` with `num^(p^n) = den^(p^n) * self` modulo `pi`.
    fn residue_root(&self, n: u32) -> Result<Option<(Self, Self)>>;
    fn was_truncated(&self) -> bool;
}

impl LevelElt for PolyElt {
    fn one_like(&self) -> Self {
        self.ring().one()
    }
    fn mul_e(&self, o: &Self) -> Self {
        self * o
    }
    fn add_e(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_e(&self, o: &Self) -> Self {
        self - o
    }
    fn pow_e(&self, n: u64) -> Self {
        self.pow(n)
    }
    fn mul_pi(&self, k: u32) -> Self {
        self.mul_pi_pow(k)
    }
    fn div_pi(&self, k: u32) -> Result<Self> {
        self.div_pi_pow(k)
    }
    fn zero_mod(&self, k: u32) -> Result<bool> {
        self.is_zero_mod(k)
    }
    fn residue_root(&self, n: u32) -> Result<Option<(Self, Self)>> {
        Ok(self.residue_pth_root(n).map(|r| (self.ring().lift(&r), self.ring().one())))
    }
    fn was_truncated(&self) -> bool {
        self.truncated()
    }
}

impl LevelElt for B1Elt {
    fn one_like(&self) -> Self {
        self.ring().one()
    }
    fn mul_e(&self, o: &Self) -> Self {
        self * o
    }
    fn add_e(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_e(&self, o: &Self) -> Self {
        self - o
    }
    fn pow_e(&self, n: u64) -> Self {
        self.pow(n)
    }
    fn mul_pi(&self, k: u32) -> Self {
        self.mul_pi_pow(k)
    }
    fn div_pi(&self, k: u32) -> Result<Self> {
        self.div_pi_pow(k)
    }
    fn zero_mod(&self, k: u32) -> Result<bool> {
        self.is_zero_mod(k)
    }
    fn residue_root(&self, n: u32) -> Result<Option<(Self, Self)>> {
        if n != 1 {
            return invalid("only p-th roots are taken over B1");
        }
        Ok(self.residue_pth_root_scaled()?.map(|(num, den)| (num, self.ring().constant(&den))))
    }
    fn was_truncated(&self) -> bool {
        self.truncated()
    }
}

/// Outcome of a level search.
///
/// With `q = p^n` the witnesses satisfy `x * scale^q = w^q + pi^(level q) f0`.
#[derive(Clone, Debug)]
pub struct LevelResult<E> {
    pub level: u32,
    pub w: E,
    pub scale: E,
    pub f0: E,
    /// The residue at the final level was a `p^n`-th power but no lift of
    /// it reached the next level.
    pub lift_failed: bool,
}

/// Maximal level `c <= vmax` such that `x` is a `p^n`-th power modulo
/// `pi^(c p^n)`.
pub fn compute_level<E: LevelElt>(x: &E, p: u64, n: u32, vmax: u32) -> Result<LevelResult<E>> {
    let q = p.pow(n);
    let qq = q as u32;
    let one = x.one_like();
    let trivial = |lift_failed| LevelResult {
        level: 0,
        w: one.clone(),
        scale: one.clone(),
        f0: x.sub_e(&one),
        lift_failed,
    };
    if vmax == 0 {
        return Ok(trivial(false));
    }
    let (w, scale) = match x.residue_root(n)? {
        None => return Ok(trivial(false)),
        Some(r) => r,
    };
    let diff = x.mul_e(&scale.pow_e(q)).sub_e(&w.pow_e(q));
    if !diff.zero_mod(qq)? {
        return Ok(trivial(true));
    }
    let mut cur = LevelResult { level: 1, f0: diff.div_pi(qq)?, w, scale, lift_failed: false };
    while cur.level < vmax {
        let c = cur.level;
        let (num, den) = match cur.f0.residue_root(n)? {
            None => break,
            Some(r) => r,
        };
        let w = cur.w.mul_e(&den).add_e(&num.mul_pi(c));
        let scale = cur.scale.mul_e(&den);
        let diff = x.mul_e(&scale.pow_e(q)).sub_e(&w.pow_e(q));
        if !diff.zero_mod((c + 1) * qq)? {
            cur.lift_failed = true;
            break;
        }
        cur = LevelResult {
            level: c + 1,
            f0: diff.div_pi((c + 1) * qq)?,
            w,
            scale,
            lift_failed: false,
        };
    }
    Ok(cur)
}

/// Removes a factor `pi^(p^2 t)` so that the result is a unit of `A`.
pub fn prepare_cover(f: &PolyElt) -> Result<PolyElt> {
    if f.is_zero() {
        return invalid("the Kummer generator must be nonzero");
    }
    let ctx = f.ctx();
    let v = f.valuation().exact().ok_or_else(|| {
        Error::Precision("the generator vanishes to working precision".into())
    })?;
    let p2 = (ctx.p * ctx.p) as u32;
    if v % p2 != 0 {
        return Err(Error::Hypothesis(format!(
            "pi-valuation {v} of the generator is not divisible by {p2}: \
             the cover is not weakly extendible with reduced special fiber"
        )));
    }
    let u = f.div_pi_pow(v)?;
    if !u.is_unit() {
        return invalid("the generator is not a unit of A up to a power of pi");
    }
    Ok(u)
}

/// Degeneration data of a `p^2`-cover.
#[derive(Clone, Debug)]
pub struct AnalysisReport {
    pub degen: DegenType,
    /// `g` with `f g^(-p) = 1 + pi^(p gamma1) f1`.
    pub g: PolyElt,
    pub f1: PolyElt,
    /// Coefficients of `H` in the variable `T1` of `B1`.
    pub h: Vec<PolyElt>,
    pub alpha: RingElt,
    pub effective_model: ModelGroup,
    pub strongly_extendible: bool,
    pub differents: (u32, u32),
    /// Some intermediate product dropped terms of degree `>= D`.
    pub truncated: bool,
}

/// Degeneration data of a `p`-cover `T^p = f`.
#[derive(Clone, Debug)]
pub struct ZpReport {
    pub gamma: u32,
    pub model: ModelGroup,
    pub different: u32,
    pub truncated: bool,
}

fn not_integral(what: &str) -> Error {
    Error::Hypothesis(format!(
        "special fiber not integral: {what} is a residue p-th power with no lift to the next level"
    ))
}

pub fn analyze_zp(f: &PolyElt) -> Result<ZpReport> {
    let f = prepare_cover(f)?;
    let ctx = f.ctx().clone();
    let lv = compute_level(&f, ctx.p, 1, ctx.v_lambda1())?;
    if lv.lift_failed {
        return Err(not_integral("the generator"));
    }
    Ok(ZpReport {
        gamma: lv.level,
        model: ModelGroup::glam_n(&ctx, lv.level, 1)?,
        different: ctx.v_p() - (ctx.p as u32 - 1) * lv.level,
        truncated: lv.f0.truncated() || lv.w.truncated(),
    })
}

/// Least `m` in `gamma1 ..= gamma1 + gamma2 - j` such that
/// `pi^(m - gamma1) H' / H` is congruent to a constant `a` in `pi R` modulo
/// `pi^gamma2`. Returns `(m, a)` with `a` reduced modulo `pi^gamma2`.
pub fn solve_threshold(h: &B1Elt, gamma1: u32, gamma2: u32, j: u32) -> Result<(u32, RingElt)> {
    let ctx = h.ring().base.ctx.clone();
    let exact = ctx.max_precision();
    if gamma2 == 0 {
        return Ok((gamma1, ctx.zero()));
    }
    let base = &h.derivative() * &h.inv_unit()?;
    for m in gamma1..=gamma1 + gamma2 - j {
        let q = base.mul_pi_pow(m - gamma1);
        let c = q.coeffs();
        let mut ok = true;
        for (t, ct) in c.iter().enumerate() {
            for (i, a) in ct.coeffs().iter().enumerate() {
                if (t, i) != (0, 0) && !a.is_zero_mod(gamma2)? {
                    ok = false;
                }
            }
        }
        let a = c[0].coeff(0);
        if ok && a.is_zero_mod(1)? {
            return Ok((m, a.truncate(gamma2).with_prec(exact)));
        }
    }
    Err(Error::Invariant(format!(
        "no threshold found up to {}",
        gamma1 + gamma2 - j
    )))
}

/// Runs the full pipeline on a Kummer generator `f` of `T^(p^2) = f`.
pub fn analyze(f: &PolyElt) -> Result<AnalysisReport> {
    if f.ring().kind == BaseKind::Point {
        return Err(Error::Hypothesis(
            "a point base has no p^2-cover with integral special fiber in scope".into(),
        ));
    }
    let f = prepare_cover(f)?;
    let ctx = f.ctx().clone();
    let p = ctx.p;
    let pu = p as u32;
    let v1 = ctx.v_lambda1();

    let lv2 = compute_level(&f, p, 2, ctx.v_lambda2())?;
    let j = lv2.level;
    if lv2.lift_failed {
        return Err(not_integral("the generator, as a p^2-th power,"));
    }

    let lv1 = compute_level(&f, p, 1, v1)?;
    let gamma1 = lv1.level;
    if lv1.lift_failed {
        return Err(not_integral("the generator"));
    }
    let w1 = lv1.w.clone();
    let n1 = lv1.f0.clone();

    let b1 = QuotientB1::with_root(f.ring(), gamma1, &w1, &n1)?;
    let x = &b1.constant(&w1) + &b1.t().mul_pi_pow(gamma1);
    let lvb = compute_level(&x, p, 1, v1)?;
    let gamma2 = lvb.level;
    if lvb.lift_failed {
        return Err(not_integral("the p-th root of the generator over B1"));
    }

    // H is W / delta up to a constant of A.
    let delta = lvb.scale.constant_term().clone();
    let mut hb = lvb.w.scale(&delta.inv_unit()?);
    if j > 0 {
        let h0 = hb.constant_term().clone();
        hb = hb.scale(&h0.inv_unit()?);
    }
    let (kappa, alpha) = solve_threshold(&lvb.w, gamma1, gamma2, j)?;

    // g = w1 * w2^(-p), normalized to g = 1 + pi^(p j) g0 with g0 not in pi A.
    let mut g = &w1 * &lv2.w.pow(p).inv_unit()?;
    g = &g * &lv2.scale.pow(p);
    if j > 0 && pu * j == gamma1 {
        let g0 = (&g - &f.ring().one()).div_pi_pow(pu * j)?;
        if g0.is_zero_mod(1)? {
            g = &g * &(&f.ring().one() + &f.ring().one().mul_pi_pow(pu * j));
        }
    }
    let f1 = &n1 * &w1.pow(p).inv_unit()?;
    let mut h = Vec::with_capacity(b1.p());
    let mut wpow = f.ring().one();
    for c in hb.coeffs() {
        h.push(c * &wpow);
        wpow = &wpow * &w1;
    }

    let degen = DegenType { j, gamma1, gamma2, kappa };
    let model = ModelGroup::extension(&ctx, kappa, gamma2, &alpha, 1)?;
    let report = AnalysisReport {
        degen,
        g,
        f1,
        h,
        alpha,
        effective_model: model,
        strongly_extendible: kappa == gamma1,
        differents: (ctx.v_p() - (pu - 1) * gamma1, ctx.v_p() - (pu - 1) * gamma2),
        truncated: f.truncated()
            || lv2.f0.truncated()
            || lv1.f0.truncated()
            || lvb.f0.was_truncated()
            || lvb.w.was_truncated(),
    };
    check_report(&ctx, &report)?;
    Ok(report)
}

/// Asserts the structural bounds every degeneration type obeys.
pub fn check_report(ctx: &PAdicContext, r: &AnalysisReport) -> Result<()> {
    let DegenType { j, gamma1, gamma2, kappa } = r.degen;
    let p = ctx.p as u32;
    let v1 = ctx.v_lambda1();
    let fail = |what: &str| Err(Error::Invariant(format!("{what} fails for {}", r.degen)));
    if !(p * j <= gamma1 && gamma1 <= v1) {
        return fail("p j <= gamma1 <= v(lambda1)");
    }
    if !(j <= gamma2 && gamma2 <= v1) {
        return fail("j <= gamma2 <= v(lambda1)");
    }
    if !(gamma1 <= kappa && kappa + j <= gamma1 + gamma2) {
        return fail("gamma1 <= kappa <= gamma1 + gamma2 - j");
    }
    let shift = kappa - gamma1 + j;
    let alpha_ok = if r.alpha.is_zero_mod(gamma2)? {
        shift == gamma2
    } else {
        r.alpha.valuation().exact() == Some(shift)
    };
    if !alpha_ok {
        return fail("the valuation of alpha");
    }
    if r.strongly_extendible != (kappa == gamma1) {
        return fail("extendibility");
    }
    if let Err(reason) = is_admissible(&r.degen, ctx) {
        return Err(Error::Invariant(format!("{} is not admissible: {reason}", r.degen)));
    }
    Ok(())
}
