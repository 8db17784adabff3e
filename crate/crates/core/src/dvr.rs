//! The ring of integers `R = Z_p[x]/(E(x))`, `E(x) = Phi_{p^2}(1 + x^d)`.
//!
//! `E` is Eisenstein of degree `e = p(p-1)d`, so `pi = x` is a uniformizer and
//! the valuation of `sum c_i pi^i` is `min(e*v_p(c_i) + i)`. Coefficients live
//! in `Z/p^M` with `p^M < 2^60`, which keeps every product inside a `u128`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use crate::error::{invalid, Error, Result};

/// Valuation of an element known to finite precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Exact(u32),
    /// All known digits vanish; the element is zero modulo `pi^N`.
    AtLeast(u32),
}

impl Valuation {
    /// The exact value, or the lower bound.
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }

    pub fn exact(self) -> Option<u32> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

#[derive(Debug)]
pub struct ContextData {
    pub p: u64,
    pub d: u32,
    pub e: usize,
    q: u64,
    ppow: Vec<u64>,
    eis: Vec<i128>,
    eis_mod: Vec<u64>,
    /// `red[t]` is `pi^(e+t)` written in the basis `1, pi, .., pi^(e-1)`.
    red: Vec<Vec<u64>>,
    /// `p / pi`.
    p_over_pi: Vec<u64>,
    cap: u32,
    n0: u32,
    consts: Consts,
}

#[derive(Debug, Default)]
struct Consts {
    zeta2: Vec<u64>,
    zeta1: Vec<u64>,
    lambda1: Vec<u64>,
    lambda2: Vec<u64>,
    eta: Vec<u64>,
    eta_pi: (Vec<u64>, u32),
}

/// Shared, immutable description of `R`. Cloning is cheap.
#[derive(Clone)]
pub struct PAdicContext(Arc<ContextData>);

impl std::ops::Deref for PAdicContext {
    type Target = ContextData;
    fn deref(&self) -> &ContextData {
        &self.0
    }
}

impl fmt::Debug for PAdicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PAdicContext(p={}, d={}, N0={})", self.p, self.d, self.n0)
    }
}

impl PartialEq for PAdicContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.p == other.p && self.d == other.d && self.n0 == other.n0)
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

fn binom(n: u64, k: u64) -> i128 {
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

pub(crate) fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let qt = r0 / r1;
        (r0, r1) = (r1, r0 - qt * r1);
        (t0, t1) = (t1, t0 - qt * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

impl PAdicContext {
    /// Builds `R` for an odd prime `p`, extra ramification `d` and default
    /// absolute precision `n0` (`0` selects `4e`).
    pub fn new(p: u64, d: u32, n0: u32) -> Result<Self> {
        if p == 2 {
            return invalid("p = 2 is not supported");
        }
        if !is_prime(p) {
            return invalid(format!("{p} is not prime"));
        }
        if d == 0 {
            return invalid("d must be at least 1");
        }
        let e = (p * (p - 1)) as usize * d as usize;
        let n0 = if n0 == 0 { 4 * e as u32 } else { n0 };
        if (n0 as usize) < 2 * e {
            return invalid(format!("precision {n0} is below 2e = {}", 2 * e));
        }
        let mut m = 0u32;
        let mut q: u64 = 1;
        while (q as u128) * (p as u128) < (1u128 << 60) {
            q *= p;
            m += 1;
        }
        let cap = e as u32 * m;
        if n0 > cap {
            return invalid(format!("precision {n0} exceeds the supported maximum {cap}"));
        }
        let ppow: Vec<u64> = (0..=m).map(|k| p.pow(k)).collect();

        // E(x) = sum_{k<p} (1 + x^d)^(pk)
        let mut eis = vec![0i128; e + 1];
        for k in 0..p {
            let n = p * k;
            for i in 0..=n {
                eis[(i * d as u64) as usize] += binom(n, i);
            }
        }
        debug_assert_eq!(eis[e], 1);
        let eis_mod: Vec<u64> = eis[..e].iter().map(|c| c.rem_euclid(q as i128) as u64).collect();

        let mut data = ContextData {
            p,
            d,
            e,
            q,
            ppow,
            eis: eis[..e].to_vec(),
            eis_mod,
            red: Vec::new(),
            p_over_pi: Vec::new(),
            cap,
            n0,
            consts: Consts::default(),
        };
        let mut cur: Vec<u64> = data.eis_mod.iter().map(|&c| data.negm(c)).collect();
        for _ in 0..e - 1 {
            data.red.push(cur.clone());
            cur = data.mul_pi_raw(&cur);
        }
        // p = -(pi^e + sum_{k>=1} E_k pi^k)  (E_0 = p)
        let mut pp = vec![0u64; e];
        pp[e - 1] = data.negm(1);
        for k in 1..e {
            pp[k - 1] = data.negm(data.eis_mod[k]);
        }
        data.p_over_pi = pp;

        data.consts = data.build_consts()?;
        Ok(PAdicContext(Arc::new(data)))
    }

    pub fn elt(&self, c: Vec<u64>, prec: u32) -> RingElt {
        let mut x = RingElt { ctx: self.clone(), c, prec: prec.min(self.cap) };
        self.canon(&mut x.c, x.prec);
        x
    }

    pub fn zero(&self) -> RingElt {
        self.elt(vec![0; self.e], self.cap)
    }

    pub fn one(&self) -> RingElt {
        self.from_i64(1)
    }

    /// An exact rational integer.
    pub fn from_i64(&self, v: i64) -> RingElt {
        let mut c = vec![0; self.e];
        c[0] = (v as i128).rem_euclid(self.q as i128) as u64;
        self.elt(c, self.cap)
    }

    /// Integer given by its residue modulo `p^M`.
    pub fn from_mod_q(&self, v: u64) -> RingElt {
        let mut c = vec![0; self.e];
        c[0] = v % self.q;
        self.elt(c, self.cap)
    }

    /// `pi^k`, exact.
    pub fn pi_pow(&self, k: u32) -> RingElt {
        self.one().mul_pi_pow(k)
    }

    pub fn zeta2(&self) -> RingElt {
        self.elt(self.consts.zeta2.clone(), self.cap)
    }
    pub fn zeta1(&self) -> RingElt {
        self.elt(self.consts.zeta1.clone(), self.cap)
    }
    pub fn lambda1(&self) -> RingElt {
        self.elt(self.consts.lambda1.clone(), self.cap)
    }
    pub fn lambda2(&self) -> RingElt {
        self.elt(self.consts.lambda2.clone(), self.cap)
    }
    /// `sum_{k=1}^{p-1} (-1)^(k-1) lambda2^k / k`.
    pub fn eta(&self) -> RingElt {
        self.elt(self.consts.eta.clone(), self.cap)
    }
    /// `pi^v(lambda1) / lambda1 * eta`.
    pub fn eta_pi(&self) -> RingElt {
        self.elt(self.consts.eta_pi.0.clone(), self.consts.eta_pi.1)
    }

    pub fn v_p(&self) -> u32 {
        self.e as u32
    }
    pub fn v_lambda1(&self) -> u32 {
        self.p as u32 * self.d
    }
    pub fn v_lambda2(&self) -> u32 {
        self.d
    }
    pub fn default_precision(&self) -> u32 {
        self.n0
    }
    /// Largest representable absolute precision.
    pub fn max_precision(&self) -> u32 {
        self.cap
    }
    /// Integer coefficients of `E(x)`, constant term first, without the leading 1.
    pub fn eisenstein_poly(&self) -> &[i128] {
        &self.eis
    }

    /// Same ring with another default precision.
    pub fn with_precision(&self, n0: u32) -> Result<Self> {
        PAdicContext::new(self.p, self.d, n0)
    }
}

impl ContextData {
    fn negm(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    fn digits_at(&self, i: usize, prec: u32) -> u32 {
        if prec as usize <= i {
            0
        } else {
            ((prec as usize - i + self.e - 1) / self.e) as u32
        }
    }

    fn canon(&self, c: &mut [u64], prec: u32) {
        for (i, ci) in c.iter_mut().enumerate() {
            let k = self.digits_at(i, prec);
            *ci %= self.ppow[k as usize];
        }
    }

    fn mul_pi_raw(&self, c: &[u64]) -> Vec<u64> {
        let e = self.e;
        let top = c[e - 1] as u128;
        let q = self.q as u128;
        let mut out = vec![0u64; e];
        for i in 0..e {
            let low = if i == 0 { 0 } else { c[i - 1] as u128 };
            let sub = top * self.eis_mod[i] as u128 % q;
            out[i] = ((low + q - sub) % q) as u64;
        }
        out
    }

    fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let e = self.e;
        let q = self.q as u128;
        let mut acc = vec![0u128; 2 * e - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                acc[i + j] += ai as u128 * bj as u128;
            }
        }
        let mut out: Vec<u128> = acc[..e].iter().map(|v| v % q).collect();
        for t in e..2 * e - 1 {
            let h = acc[t] % q;
            if h == 0 {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&self.red[t - e]) {
                *o += h * *r as u128;
            }
        }
        out.into_iter().map(|v| (v % q) as u64).collect()
    }

    fn add_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| ((x as u128 + y as u128) % self.q as u128) as u64).collect()
    }

    fn neg_raw(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| self.negm(x)).collect()
    }

    fn val_raw(&self, c: &[u64]) -> Option<u32> {
        c.iter()
            .enumerate()
            .filter(|(_, &ci)| ci != 0)
            .map(|(i, &ci)| {
                let mut k = 0u32;
                let mut x = ci;
                while x % self.p == 0 {
                    x /= self.p;
                    k += 1;
                }
                k * self.e as u32 + i as u32
            })
            .min()
    }

    /// Divides by `pi` assuming the constant coefficient is divisible by `p`.
    fn div_pi_raw(&self, c: &[u64]) -> Vec<u64> {
        let e = self.e;
        let c0 = c[0] / self.p;
        let mut out = vec![0u64; e];
        out[..e - 1].copy_from_slice(&c[1..]);
        let q = self.q as u128;
        for (o, r) in out.iter_mut().zip(&self.p_over_pi) {
            *o = ((*o as u128 + c0 as u128 * *r as u128) % q) as u64;
        }
        out
    }

    fn inv_mod_q(&self, a: u64) -> Option<u64> {
        mod_inv(a, self.q)
    }

    fn build_consts(&self) -> Result<Consts> {
        let e = self.e;
        let mut one = vec![0u64; e];
        one[0] = 1;
        let mut lambda2 = vec![0u64; e];
        lambda2[self.d as usize] = 1;
        let zeta2 = self.add_raw(&one, &lambda2);
        let mut zeta1 = one.clone();
        for _ in 0..self.p {
            zeta1 = self.mul_raw(&zeta1, &zeta2);
        }
        let lambda1 = self.add_raw(&zeta1, &self.neg_raw(&one));
        let mut eta = vec![0u64; e];
        let mut pw = one.clone();
        for k in 1..self.p {
            pw = self.mul_raw(&pw, &lambda2);
            let inv = self.inv_mod_q(k).expect("k < p is a unit");
            let coef = if k % 2 == 1 { inv } else { self.negm(inv) };
            let mut cvec = vec![0u64; e];
            cvec[0] = coef;
            eta = self.add_raw(&eta, &self.mul_raw(&cvec, &pw));
        }
        // eta_pi = eta / (lambda1 / pi^{pd})
        let vl1 = self.p as u32 * self.d;
        let mut u = lambda1.clone();
        for _ in 0..vl1 {
            if u[0] % self.p != 0 {
                return Err(Error::Invariant("lambda1 has the wrong valuation".into()));
            }
            u = self.div_pi_raw(&u);
        }
        let prec = self.cap - vl1;
        self.canon(&mut u, prec);
        let uinv = self.inv_unit_raw(&u, prec)?;
        let mut eta_pi = self.mul_raw(&uinv, &eta);
        self.canon(&mut eta_pi, prec);
        Ok(Consts { zeta2, zeta1, lambda1, lambda2, eta, eta_pi: (eta_pi, prec) })
    }

    fn inv_unit_raw(&self, x: &[u64], prec: u32) -> Result<Vec<u64>> {
        if x[0] % self.p == 0 {
            return Err(Error::InvalidInput("inverse of a non-unit".into()));
        }
        let e = self.e;
        let mut y = vec![0u64; e];
        y[0] = self.inv_mod_q(x[0]).expect("unit constant term");
        let mut two = vec![0u64; e];
        two[0] = 2;
        // each Newton step doubles the number of correct pi-adic digits
        let mut good = 1u32;
        while good < prec {
            let xy = self.mul_raw(x, &y);
            let t = self.add_raw(&two, &self.neg_raw(&xy));
            y = self.mul_raw(&y, &t);
            good = good.saturating_mul(2);
        }
        self.canon(&mut y, prec);
        Ok(y)
    }
}

/// Element of `R` known modulo `pi^prec`, stored in canonical form.
#[derive(Clone)]
pub struct RingElt {
    ctx: PAdicContext,
    c: Vec<u64>,
    prec: u32,
}

impl RingElt {
    pub fn ctx(&self) -> &PAdicContext {
        &self.ctx
    }

    /// Coefficients of `1, pi, .., pi^(e-1)` in `[0, p^M)`.
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Lowers the precision to `prec` (never raises it).
    pub fn truncate(&self, prec: u32) -> RingElt {
        let prec = prec.min(self.prec);
        self.ctx.elt(self.c.clone(), prec)
    }

    /// Same digits, claimed known to `prec`. Only sound when the caller knows
    /// the extra digits are correct (e.g. exact lifts of residues).
    pub fn with_prec(&self, prec: u32) -> RingElt {
        self.ctx.elt(self.c.clone(), prec)
    }

    pub fn valuation(&self) -> Valuation {
        match self.ctx.val_raw(&self.c) {
            Some(v) if v < self.prec => Valuation::Exact(v),
            _ => Valuation::AtLeast(self.prec),
        }
    }

    /// Exact valuation or the precision, whichever applies.
    pub fn val(&self) -> u32 {
        self.valuation().lower_bound()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    /// Zero modulo `pi^k`. Fails when the precision does not reach `k`.
    pub fn is_zero_mod(&self, k: u32) -> Result<bool> {
        match self.valuation() {
            Valuation::Exact(v) => Ok(v >= k),
            Valuation::AtLeast(n) if n >= k => Ok(true),
            Valuation::AtLeast(n) => Err(Error::Precision(format!(
                "need {k} digits to decide a congruence, have {n}"
            ))),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.c[0] % self.ctx.p != 0
    }

    /// Image in the residue field `F_p`.
    pub fn residue(&self) -> u64 {
        if self.prec == 0 {
            0
        } else {
            self.c[0] % self.ctx.p
        }
    }

    pub fn mul_pi_pow(&self, k: u32) -> RingElt {
        let mut c = self.c.clone();
        for _ in 0..k {
            c = self.ctx.mul_pi_raw(&c);
        }
        self.ctx.elt(c, self.prec.saturating_add(k))
    }

    /// Exact division by `pi^k`.
    pub fn div_pi_pow(&self, k: u32) -> Result<RingElt> {
        match self.valuation() {
            Valuation::Exact(v) if v < k => {
                return Err(Error::InexactDivision(format!("valuation {v} is below {k}")))
            }
            Valuation::AtLeast(n) if n < k => {
                return Err(Error::Precision(format!(
                    "dividing by pi^{k} an element known modulo pi^{n}"
                )))
            }
            _ => {}
        }
        let mut c = self.c.clone();
        for _ in 0..k {
            c = self.ctx.div_pi_raw(&c);
        }
        Ok(self.ctx.elt(c, self.prec - k))
    }

    pub fn inv_unit(&self) -> Result<RingElt> {
        if self.prec == 0 || !self.is_unit() {
            return invalid("inverse of a non-unit");
        }
        let c = self.ctx.inv_unit_raw(&self.c, self.prec)?;
        Ok(self.ctx.elt(c, self.prec))
    }

    pub fn pow(&self, mut n: u64) -> RingElt {
        let mut base = self.clone();
        let mut acc = self.ctx.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplication by a rational integer given modulo `p^M`.
    pub fn scale(&self, k: u64) -> RingElt {
        self * &self.ctx.from_mod_q(k)
    }

    /// Equality modulo the smaller of the two precisions.
    pub fn eq_to_prec(&self, other: &RingElt) -> bool {
        (self - other).is_zero()
    }

    /// Coefficients in balanced form, reduced to the element's precision.
    pub fn balanced_coeffs(&self) -> Vec<i128> {
        self.c
            .iter()
            .enumerate()
            .map(|(i, &ci)| {
                let m = self.ctx.ppow[self.ctx.digits_at(i, self.prec) as usize] as i128;
                let v = ci as i128;
                if 2 * v > m {
                    v - m
                } else {
                    v
                }
            })
            .collect()
    }
}

impl fmt::Debug for RingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod pi^{})", self, self.prec)
    }
}

/// Prints `c0 + c1*pi + ..` with balanced integer coefficients.
impl fmt::Display for RingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i128, usize)> = self
            .balanced_coeffs()
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(i, c)| (c, i))
            .collect();
        write_terms(f, &terms.iter().map(|&(c, i)| (c, mono_pi(i))).collect::<Vec<_>>())
    }
}

pub(crate) fn mono_pi(i: usize) -> String {
    match i {
        0 => String::new(),
        1 => "pi".into(),
        _ => format!("pi^{i}"),
    }
}

/// Writes `sum c * mono` in the shared expression grammar.
pub(crate) fn write_terms(f: &mut impl fmt::Write, terms: &[(i128, String)]) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (k, (c, mono)) in terms.iter().enumerate() {
        let (neg, a) = (*c < 0, c.unsigned_abs());
        if k == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        match (a, mono.is_empty()) {
            (_, true) => write!(f, "{a}")?,
            (1, false) => write!(f, "{mono}")?,
            (_, false) => write!(f, "{a}*{mono}")?,
        }
    }
    Ok(())
}

impl PartialEq for RingElt {
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec && self.c == other.c
    }
}

impl<'a> Add<&'a RingElt> for &'a RingElt {
    type Output = RingElt;
    fn add(self, o: &RingElt) -> RingElt {
        let c = self.ctx.add_raw(&self.c, &o.c);
        self.ctx.elt(c, self.prec.min(o.prec))
    }
}

impl<'a> Sub<&'a RingElt> for &'a RingElt {
    type Output = RingElt;
    fn sub(self, o: &RingElt) -> RingElt {
        let c = self.ctx.add_raw(&self.c, &self.ctx.neg_raw(&o.c));
        self.ctx.elt(c, self.prec.min(o.prec))
    }
}

impl<'a> Mul<&'a RingElt> for &'a RingElt {
    type Output = RingElt;
    fn mul(self, o: &RingElt) -> RingElt {
        let prec = (self.prec.saturating_add(o.val())).min(o.prec.saturating_add(self.val()));
        if self.is_zero() || o.is_zero() {
            return self.ctx.elt(vec![0; self.ctx.e], prec);
        }
        let c = self.ctx.mul_raw(&self.c, &o.c);
        self.ctx.elt(c, prec)
    }
}

impl Neg for &RingElt {
    type Output = RingElt;
    fn neg(self) -> RingElt {
        self.ctx.elt(self.ctx.neg_raw(&self.c), self.prec)
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
        impl AddAssign<&$t> for $t {
            fn add_assign(&mut self, o: &$t) {
                *self = &*self + o;
            }
        }
        impl SubAssign<&$t> for $t {
            fn sub_assign(&mut self, o: &$t) {
                *self = &*self - o;
            }
        }
    };
}
pub(crate) use owned_ops;

owned_ops!(RingElt);
