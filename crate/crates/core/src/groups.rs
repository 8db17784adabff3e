//! Model group schemes `G_{lambda,n}` and extensions `E(m, n, a, j)` of
//! `G_{pi^m,1}` by `G_{pi^n,1}`, with their Hopf algebras, the parameter
//! sets classifying them, homomorphisms and model maps.

use std::fmt;

use crate::base::PolyElt;
use crate::dvr::{PAdicContext, RingElt};
use crate::error::{invalid, Error, Result};
use crate::hopf::{Flat, HopfData, Tower};

fn binom(n: u64, k: u64) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Coefficients `a^i / i!` of the truncated exponential `E_p(a S)`.
pub fn ep(a: &RingElt) -> Vec<RingElt> {
    let ctx = a.ctx();
    let mut out = vec![ctx.one()];
    let mut fact = 1i64;
    for i in 1..ctx.p {
        fact *= i as i64;
        let inv = ctx.from_i64(fact).inv_unit().expect("i! is a unit for i < p");
        out.push(&a.pow(i) * &inv);
    }
    out
}

fn check_mn(ctx: &PAdicContext, m: u32, n: u32) -> Result<()> {
    if !(ctx.v_lambda1() >= m && m >= n) {
        return invalid(format!("need v(lambda1) = {} >= m = {m} >= n = {n}", ctx.v_lambda1()));
    }
    Ok(())
}

/// Does `p a - j pi^m = (p / pi^(m(p-1))) a^p` hold modulo `pi^(n p)`?
pub fn phi_membership(ctx: &PAdicContext, m: u32, n: u32, a: &RingElt, j: u64) -> Result<bool> {
    check_mn(ctx, m, n)?;
    let p = ctx.p;
    let pr = ctx.from_i64(p as i64);
    let coef = pr.div_pi_pow(m * (p as u32 - 1)).map_err(|e| match e {
        Error::InexactDivision(s) => Error::InvalidInput(s),
        other => other,
    })?;
    let lhs = &(&pr * a) - &ctx.pi_pow(m).scale(j % p);
    let rhs = &coef * &a.pow(p);
    (&lhs - &rhs).is_zero_mod(n * p as u32)
}

/// `eta pi^m / lambda1`.
fn eta_scaled(ctx: &PAdicContext, m: u32) -> Result<RingElt> {
    let v1 = ctx.v_lambda1();
    if m >= v1 {
        Ok(ctx.eta_pi().mul_pi_pow(m - v1))
    } else {
        ctx.eta_pi().div_pi_pow(v1 - m)
    }
}

/// Membership of `a` in the set of parameters giving models of `Z/p^2`.
pub fn phi1_contains(ctx: &PAdicContext, m: u32, n: u32, a: &RingElt) -> Result<bool> {
    check_mn(ctx, m, n)?;
    let p = ctx.p as u32;
    let vp = ctx.v_p();
    let alpha = if m < p * n {
        if p * m < n + vp {
            return Ok(false);
        }
        a - &eta_scaled(ctx, m)?
    } else {
        a.clone()
    };
    let v = if alpha.is_zero_mod(n)? { n } else { alpha.val() };
    let bound = (p * n + (p - 1) * m).saturating_sub(vp).max(n);
    Ok(p * v >= bound)
}

/// Canonical element of the `Z/p^2` parameter set, if the set is nonempty.
pub fn phi1_canonical(ctx: &PAdicContext, m: u32, n: u32) -> Result<Option<RingElt>> {
    check_mn(ctx, m, n)?;
    let p = ctx.p as u32;
    if m < p * n {
        if p * m < n + ctx.v_p() {
            return Ok(None);
        }
        return Ok(Some(eta_scaled(ctx, m)?));
    }
    Ok(Some(ctx.zero()))
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelKind {
    /// `G_{pi^m, n}`.
    GLamN { m: u32, n: u32 },
    /// `E(pi^m, pi^n; E_p(a S), j)`.
    Ext { m: u32, n: u32, a: RingElt, j: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecialFiber {
    MuType,
    AlphaType,
    AlphaCrossEtale,
}

#[derive(Clone, Debug)]
pub struct ModelGroup {
    ctx: PAdicContext,
    kind: ModelKind,
}

impl PartialEq for ModelGroup {
    fn eq(&self, o: &Self) -> bool {
        self.ctx == o.ctx && self.kind == o.kind
    }
}

impl fmt::Display for ModelGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ModelKind::GLamN { m, n } => write!(f, "G({m},{n})"),
            ModelKind::Ext { m, n, a, j } => write!(f, "E({m},{n},{a},{j})"),
        }
    }
}

impl ModelGroup {
    /// `G_{pi^m, n}`, subject to `p^(n-1) (p-1) m <= v(p)`.
    pub fn glam_n(ctx: &PAdicContext, m: u32, n: u32) -> Result<Self> {
        if n != 1 && n != 2 {
            return invalid(format!("n must be 1 or 2, got {n}"));
        }
        let p = ctx.p as u32;
        if p.pow(n - 1) * (p - 1) * m > ctx.v_p() {
            return invalid(format!(
                "G({m},{n}) needs p^(n-1)(p-1)m <= v(p) = {}",
                ctx.v_p()
            ));
        }
        Ok(ModelGroup { ctx: ctx.clone(), kind: ModelKind::GLamN { m, n } })
    }

    /// `E(pi^m, pi^n; E_p(a S), j)` with `a` reduced modulo `pi^n`.
    pub fn extension(ctx: &PAdicContext, m: u32, n: u32, a: &RingElt, j: u64) -> Result<Self> {
        check_mn(ctx, m, n)?;
        if j >= ctx.p {
            return invalid(format!("j must be a residue mod {}", ctx.p));
        }
        if a.prec() < n {
            return Err(Error::Precision(format!("parameter known only modulo pi^{}", a.prec())));
        }
        let a = a.truncate(n).with_prec(ctx.max_precision());
        if n > 0 && !a.is_zero() && a.val() == 0 {
            return invalid("the parameter must lie in pi R");
        }
        if !phi_membership(ctx, m, n, &a, j)? {
            return invalid(format!("({a}, {j}) does not define an extension for m={m}, n={n}"));
        }
        if j == 1 && !phi1_contains(ctx, m, n, &a)? {
            return invalid(format!("{a} does not define a model of Z/p^2 for m={m}, n={n}"));
        }
        Ok(ModelGroup { ctx: ctx.clone(), kind: ModelKind::Ext { m, n, a, j } })
    }

    pub fn ctx(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    /// Precision to which the Hopf identities are expected to hold.
    pub fn check_precision(&self) -> u32 {
        self.ctx
            .default_precision()
            .saturating_sub(2 * self.ctx.p as u32 * self.ctx.v_lambda1())
    }

    pub fn special_fiber_kind(&self) -> Result<SpecialFiber> {
        match self.kind {
            ModelKind::GLamN { m, n } => {
                let p = self.ctx.p as u32;
                let lhs = p.pow(n - 1) * (p - 1) * m;
                Ok(if m == 0 {
                    SpecialFiber::MuType
                } else if lhs < self.ctx.v_p() {
                    SpecialFiber::AlphaType
                } else {
                    SpecialFiber::AlphaCrossEtale
                })
            }
            ModelKind::Ext { .. } => invalid("special fiber kind is defined for G(m,n) only"),
        }
    }

    pub fn hopf(&self) -> Result<HopfData> {
        match &self.kind {
            ModelKind::GLamN { m, n } => glam_hopf(&self.ctx, *m, *n),
            ModelKind::Ext { m, n, a, j } => ext_hopf(&self.ctx, *m, *n, a, *j),
        }
    }
}

/// `X^q = -sum_{k<q} C(q,k) pi^(m(k-q)) X^k`, coefficients as scalars of
/// `base`.
fn deformed_relation(ctx: &PAdicContext, base: &Tower, m: u32, q: u64) -> Result<Vec<Flat>> {
    let mut rel = vec![base.zero()];
    for k in 1..q {
        let c = ctx.from_i64(binom(q, k)).div_pi_pow(m * (q - k) as u32)?;
        rel.push(base.scalar(&-&c));
    }
    Ok(rel)
}

fn glam_relations(h: &HopfData, t: &Tower, imgs: &[Flat]) -> Vec<Flat> {
    let (m, q) = (h.params[0], h.alg.degs()[0] as u64);
    let x = t.add(&t.one(), &t.mul_pi_pow(&imgs[0], m));
    vec![t.sub(&t.pow(&x, q), &t.one())]
}

fn glam_hopf(ctx: &PAdicContext, m: u32, n: u32) -> Result<HopfData> {
    let q = ctx.p.pow(n);
    let mut alg = Tower::new(ctx);
    let rel = deformed_relation(ctx, &alg, m, q)?;
    alg.adjoin(rel);
    let sq = alg.tensor(&alg);
    let t = alg.var(0);
    let ta = sq.tensor_elts(&t, &alg.one());
    let tb = sq.tensor_elts(&alg.one(), &t);
    let comul = sq.add(&sq.add(&ta, &tb), &sq.mul_pi_pow(&sq.mul(&ta, &tb), m));
    let x = alg.add(&alg.one(), &alg.mul_pi_pow(&t, m));
    let anti = alg.scale(&alg.mul(&t, &alg.pow(&x, q - 1)), &ctx.from_i64(-1));
    Ok(HopfData {
        alg,
        names: vec!["T"],
        comul: vec![comul],
        counit: vec![ctx.zero()],
        antipode: vec![anti],
        relations: glam_relations,
        params: vec![m, n],
        fcoeffs: vec![],
    })
}

fn ext_relations(h: &HopfData, t: &Tower, imgs: &[Flat]) -> Vec<Flat> {
    let (m, n, j) = (h.params[0], h.params[1], h.params[2] as u64);
    let p = t.ctx().p;
    let x1 = t.add(&t.one(), &t.mul_pi_pow(&imgs[0], m));
    let x2 = t.add(&t.eval_poly(&h.fcoeffs, &imgs[0]), &t.mul_pi_pow(&imgs[1], n));
    vec![
        t.sub(&t.pow(&x1, p), &t.one()),
        t.sub(&t.pow(&x2, p), &t.pow(&x1, j)),
    ]
}

fn ext_hopf(ctx: &PAdicContext, m: u32, n: u32, a: &RingElt, j: u64) -> Result<HopfData> {
    let p = ctx.p;
    let pu = p as u32;
    let fc = ep(a);
    let mut alg = Tower::new(ctx);
    let rel1 = deformed_relation(ctx, &alg, m, p)?;
    alg.adjoin(rel1);
    // S2^p = ((1 + mu S1)^j - F(S1)^p) / lambda^p - sum C(p,k) lambda^(k-p) F^(p-k) S2^k.
    let s1 = alg.var(0);
    let x1 = alg.add(&alg.one(), &alg.mul_pi_pow(&s1, m));
    let f = alg.eval_poly(&fc, &s1);
    let konst = alg.sub(&alg.pow(&x1, j), &alg.pow(&f, p));
    let konst = alg.div_pi_pow(&konst, n * pu).map_err(|e| match e {
        Error::InexactDivision(s) => Error::InvalidInput(format!(
            "the parameters do not define an integral relation ({s})"
        )),
        other => other,
    })?;
    let mut rel2 = vec![konst];
    for k in 1..p {
        let c = ctx.from_i64(binom(p, k)).div_pi_pow(n * (p - k) as u32)?;
        rel2.push(alg.scale(&alg.pow(&f, p - k), &-&c));
    }
    alg.adjoin(rel2);
    let s1 = alg.var(0);
    let s2 = alg.var(1);
    let one = alg.one();
    let f = alg.eval_poly(&fc, &s1);
    let sq = alg.tensor(&alg);
    let (s1a, s1b) = (sq.tensor_elts(&s1, &one), sq.tensor_elts(&one, &s1));
    let (s2a, s2b) = (sq.tensor_elts(&s2, &one), sq.tensor_elts(&one, &s2));
    let (fa, fb) = (sq.tensor_elts(&f, &one), sq.tensor_elts(&one, &f));
    let d1 = sq.add(&sq.add(&s1a, &s1b), &sq.mul_pi_pow(&sq.mul(&s1a, &s1b), m));
    let cross = sq.sub(&sq.mul(&fa, &fb), &sq.eval_poly(&fc, &d1));
    let cross = sq.div_pi_pow(&cross, n).map_err(|e| match e {
        Error::InexactDivision(s) => {
            Error::InvalidInput(format!("comultiplication is not integral ({s})"))
        }
        other => other,
    })?;
    let d2 = sq.add(
        &sq.add(&sq.mul(&s2a, &fb), &sq.mul(&fa, &s2b)),
        &sq.add(&sq.mul_pi_pow(&sq.mul(&s2a, &s2b), n), &cross),
    );
    let x1 = alg.add(&one, &alg.mul_pi_pow(&s1, m));
    let sig1 = alg.scale(&alg.mul(&s1, &alg.pow(&x1, p - 1)), &ctx.from_i64(-1));
    let x2 = alg.add(&f, &alg.mul_pi_pow(&s2, n));
    let inv_x2 = alg.mul(&alg.pow(&x2, p - 1), &alg.pow(&x1, (p - 1) * j));
    let sig2 = alg.div_pi_pow(&alg.sub(&inv_x2, &alg.eval_poly(&fc, &sig1)), n)?;
    Ok(HopfData {
        alg,
        names: vec!["S1", "S2"],
        comul: vec![d1, d2],
        counit: vec![ctx.zero(), ctx.zero()],
        antipode: vec![sig1, sig2],
        relations: ext_relations,
        params: vec![m, n, j as u32],
        fcoeffs: fc,
    })
}

/// Homomorphism `source -> target`, given by the images of the target's
/// generators.
#[derive(Clone, Debug)]
pub struct ModelMap {
    pub source: ModelGroup,
    pub target: ModelGroup,
    pub r: u64,
    /// `s` for extensions, the exponent `i` for `G(m,n)`.
    pub s: u64,
    pub images: Vec<Flat>,
    pub is_isomorphism: bool,
}

/// Checks that `images` define a Hopf algebra map from the target's
/// coordinate ring into the source's.
pub fn is_hopf_map(src: &HopfData, tgt: &HopfData, images: &[Flat]) -> Result<bool> {
    let a = &src.alg;
    for r in (tgt.relations)(tgt, a, images) {
        if r.iter().any(|x| !x.is_zero()) {
            return Ok(false);
        }
    }
    let sq_src = src.square();
    let sq_tgt = tgt.square();
    let one = a.one();
    let mut tensor_imgs: Vec<Flat> = images.iter().map(|x| sq_src.tensor_elts(x, &one)).collect();
    tensor_imgs.extend(images.iter().map(|x| sq_src.tensor_elts(&one, x)));
    for (g, dx) in tgt.comul.iter().enumerate() {
        let lhs = a.substitute(&images[g], &src.comul, &sq_src);
        let rhs = sq_tgt.substitute(dx, &tensor_imgs, &sq_src);
        if sq_src.sub(&lhs, &rhs).iter().any(|x| !x.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn glam_params(g: &ModelGroup) -> Result<(u32, u32)> {
    match g.kind {
        ModelKind::GLamN { m, n } => Ok((m, n)),
        _ => invalid("expected a group G(m,n)"),
    }
}

/// `T -> ((1 + pi^m T)^e - 1) / pi^m'`, if integral.
fn glam_candidate(src: &HopfData, m: u32, m2: u32, e: u64) -> Result<Option<Flat>> {
    let a = &src.alg;
    let x = a.add(&a.one(), &a.mul_pi_pow(&a.var(0), m));
    let num = a.sub(&a.pow(&x, e), &a.one());
    match a.div_pi_pow(&num, m2) {
        Ok(v) => Ok(Some(v)),
        Err(Error::InexactDivision(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// The group `Hom(g1, g2)` for `G(m,n) -> G(m',n)`: its order `p^(n-r)`
/// and the generator `T -> ((1 + lambda T)^(p^r) - 1) / lambda'`.
pub fn hom_group(g1: &ModelGroup, g2: &ModelGroup) -> Result<(u64, ModelMap)> {
    let (m1, n1) = glam_params(g1)?;
    let (m2, n2) = glam_params(g2)?;
    if n1 != n2 {
        return invalid("both groups must have the same n");
    }
    let p = g1.ctx.p;
    let r = (0..=n1).find(|&r| p.pow(r) * m1 as u64 >= m2 as u64).unwrap_or(n1);
    let src = g1.hopf()?;
    let e = p.pow(r);
    let img = glam_candidate(&src, m1, m2, e)?
        .ok_or_else(|| Error::Invariant(format!("generator exponent {e} is not integral")))?;
    let map = ModelMap {
        source: g1.clone(),
        target: g2.clone(),
        r: 1,
        s: e,
        images: vec![img],
        is_isomorphism: m1 == m2,
    };
    Ok((p.pow(n1 - r), map))
}

/// Counts homomorphisms `g1 -> g2` by trying every exponent `e < p^n`.
pub fn count_homs_brute_force(g1: &ModelGroup, g2: &ModelGroup) -> Result<u64> {
    let (m1, n1) = glam_params(g1)?;
    let (m2, _) = glam_params(g2)?;
    let src = g1.hopf()?;
    let tgt = g2.hopf()?;
    let mut count = 0;
    for e in 0..g1.ctx.p.pow(n1) {
        if let Some(img) = glam_candidate(&src, m1, m2, e)? {
            if is_hopf_map(&src, &tgt, &[img])? {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn ext_params(g: &ModelGroup) -> Result<(u32, u32, RingElt, u64)> {
    match &g.kind {
        ModelKind::Ext { m, n, a, j } => Ok((*m, *n, a.clone(), *j)),
        _ => invalid("expected an extension E(m,n,a,j)"),
    }
}

/// Candidate images for parameters `(r, s)`:
/// `S1 -> ((1 + mu1 S1)^r - 1) / mu2` and
/// `S2 -> ((F1 + lambda1 S2)^r (1 + mu1 S1)^s - F2(image of S1)) / lambda2`.
fn ext_candidate(
    g1: &ModelGroup,
    g2: &ModelGroup,
    src: &HopfData,
    r: u64,
    s: u64,
) -> Result<Option<Vec<Flat>>> {
    let (m1, n1, a1, _) = ext_params(g1)?;
    let (m2, n2, a2, _) = ext_params(g2)?;
    let a = &src.alg;
    let x1 = a.add(&a.one(), &a.mul_pi_pow(&a.var(0), m1));
    let f1 = a.eval_poly(&ep(&a1), &a.var(0));
    let x2 = a.add(&f1, &a.mul_pi_pow(&a.var(1), n1));
    let attempt = || -> Result<Vec<Flat>> {
        let i1 = a.div_pi_pow(&a.sub(&a.pow(&x1, r), &a.one()), m2)?;
        let f2 = a.eval_poly(&ep(&a2), &i1);
        let num = a.sub(&a.mul(&a.pow(&x2, r), &a.pow(&x1, s)), &f2);
        let i2 = a.div_pi_pow(&num, n2)?;
        Ok(vec![i1, i2])
    };
    match attempt() {
        Ok(v) => Ok(Some(v)),
        Err(Error::InexactDivision(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// All model maps `g1 -> g2` with parameters `(r, s)`, `r` a unit mod `p`.
pub fn model_maps(g1: &ModelGroup, g2: &ModelGroup) -> Result<Vec<ModelMap>> {
    let (m1, n1, _, _) = ext_params(g1)?;
    let (m2, n2, _, _) = ext_params(g2)?;
    let src = g1.hopf()?;
    let tgt = g2.hopf()?;
    let mut out = vec![];
    for r in 1..g1.ctx.p {
        for s in 0..g1.ctx.p {
            if let Some(images) = ext_candidate(g1, g2, &src, r, s)? {
                if is_hopf_map(&src, &tgt, &images)? {
                    out.push(ModelMap {
                        source: g1.clone(),
                        target: g2.clone(),
                        r,
                        s,
                        images,
                        is_isomorphism: m1 == m2 && n1 == n2,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// The model map `g1 -> g2` with `r = 1`, if one exists.
pub fn model_map(g1: &ModelGroup, g2: &ModelGroup) -> Result<Option<ModelMap>> {
    let (m1, n1, a1, j1) = ext_params(g1)?;
    let (m2, n2, a2, j2) = ext_params(g2)?;
    if j1 != 1 || j2 != 1 {
        return invalid("model maps are defined between models of Z/p^2");
    }
    if m1 < m2 || n1 < n2 {
        return Ok(None);
    }
    let ctx = &g1.ctx;
    let diff = &a1 - &(&a2.mul_pi_pow(m1 - m2));
    if !diff.is_zero_mod(n2)? {
        return Ok(None);
    }
    let src = g1.hopf()?;
    let tgt = g2.hopf()?;
    for s in 0..ctx.p {
        if let Some(images) = ext_candidate(g1, g2, &src, 1, s)? {
            if is_hopf_map(&src, &tgt, &images)? {
                return Ok(Some(ModelMap {
                    source: g1.clone(),
                    target: g2.clone(),
                    r: 1,
                    s,
                    images,
                    is_isomorphism: m1 == m2 && n1 == n2,
                }));
            }
        }
    }
    Err(Error::Invariant(format!("congruence holds but no map {} -> {} was found", g1, g2)))
}

/// A torsor under `E(m, n, a, j)` over `A`, given by
/// `((1 + mu T1)^p - 1)/mu^p = f1` and
/// `((F(T1) + lambda T2)^p (1 + mu T1)^(-j) - G(f1))/lambda^p = f2`
/// with `G = E_p(a^p S)`.
#[derive(Clone, Debug)]
pub struct TorsorPresentation {
    pub model: ModelGroup,
    pub f1: PolyElt,
    pub f2: PolyElt,
    /// `(1 + mu T1)^p = u1`.
    pub u1: PolyElt,
    /// `(F(T1) + lambda T2)^p (1 + mu T1)^(-j) = u2`.
    pub u2: PolyElt,
}

pub fn torsor_equations(g: &ModelGroup, f1: &PolyElt, f2: &PolyElt) -> Result<TorsorPresentation> {
    let (m, n, a, _) = ext_params(g)?;
    let p = g.ctx.p;
    let pu = p as u32;
    let ring = f1.ring();
    let u1 = &ring.one() + &f1.mul_pi_pow(pu * m);
    let mut gt = ring.zero();
    for c in ep(&a.pow(p)).iter().rev() {
        gt = &(&gt * f1) + &ring.constant(c);
    }
    let u2 = &gt + &f2.mul_pi_pow(pu * n);
    if !u1.is_unit() || !u2.is_unit() {
        return invalid("the torsor data must give units of A");
    }
    Ok(TorsorPresentation { model: g.clone(), f1: f1.clone(), f2: f2.clone(), u1, u2 })
}

impl TorsorPresentation {
    /// `f` with `Y_K = Spec A_K[T]/(T^(p^2) - f)`, namely `u1^j u2^p`.
    pub fn kummer_generator(&self) -> PolyElt {
        let (_, _, _, j) = ext_params(&self.model).expect("extension model");
        &self.u1.pow(j) * &self.u2.pow(self.model.ctx.p)
    }

    /// The defining equations and the co-action, as text.
    pub fn describe(&self) -> Vec<String> {
        let (m, n, a, j) = ext_params(&self.model).expect("extension model");
        let p = self.model.ctx.p;
        vec![
            format!("((1 + pi^{m}*T1)^{p} - 1)/pi^{} = {}", p as u32 * m, self.f1),
            format!(
                "((E_p(({a})*T1) + pi^{n}*T2)^{p} * (1 + pi^{m}*T1)^(-{j}) - E_p(({a})^{p}*f1))/pi^{} = {}",
                p as u32 * n,
                self.f2
            ),
            format!("T1 -> S1 + T1 + pi^{m}*S1*T1"),
            format!(
                "T2 -> S2*F(T1) + F(S1)*T2 + pi^{n}*S2*T2 + (F(S1)*F(T1) - F(S1 + T1 + pi^{m}*S1*T1))/pi^{n}"
            ),
        ]
    }
}
