//! The base ring `A`: either `R` itself or a truncated model of the local ring
//! `R[Z]_(pi, Z)`, stored as polynomials in `Z` of degree below a cap `D`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use crate::dvr::{owned_ops, write_terms, PAdicContext, RingElt, Valuation};
use crate::error::{invalid, Result};
use crate::residue::FpPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    Point,
    LocalCurve,
}

#[derive(Debug)]
pub struct BaseData {
    pub ctx: PAdicContext,
    pub kind: BaseKind,
    pub zdeg: usize,
}

#[derive(Clone, Debug)]
pub struct BaseRing(Arc<BaseData>);

impl std::ops::Deref for BaseRing {
    type Target = BaseData;
    fn deref(&self) -> &BaseData {
        &self.0
    }
}

impl PartialEq for BaseRing {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || (self.kind == o.kind && self.zdeg == o.zdeg && self.ctx == o.ctx)
    }
}

impl BaseRing {
    pub fn point(ctx: &PAdicContext) -> Self {
        BaseRing(Arc::new(BaseData { ctx: ctx.clone(), kind: BaseKind::Point, zdeg: 1 }))
    }

    /// `R[Z]` localized at `(pi, Z)`, truncated modulo `Z^zdeg`.
    pub fn local_curve(ctx: &PAdicContext, zdeg: usize) -> Result<Self> {
        if zdeg < 2 {
            return invalid("degree cap must be at least 2");
        }
        Ok(BaseRing(Arc::new(BaseData { ctx: ctx.clone(), kind: BaseKind::LocalCurve, zdeg })))
    }

    pub fn p(&self) -> u64 {
        self.ctx.p
    }

    pub fn zero(&self) -> PolyElt {
        PolyElt { ring: self.clone(), c: vec![self.ctx.zero(); self.zdeg], trunc: false }
    }

    pub fn one(&self) -> PolyElt {
        self.constant(&self.ctx.one())
    }

    pub fn constant(&self, a: &RingElt) -> PolyElt {
        let mut x = self.zero();
        x.c[0] = a.clone();
        x
    }

    pub fn from_i64(&self, a: i64) -> PolyElt {
        self.constant(&self.ctx.from_i64(a))
    }

    /// The variable `Z` (errors on a point base).
    pub fn z(&self) -> Result<PolyElt> {
        self.monomial(&self.ctx.one(), 1)
    }

    pub fn monomial(&self, a: &RingElt, k: usize) -> Result<PolyElt> {
        if k >= self.zdeg {
            return invalid(format!("degree {k} exceeds the cap {}", self.zdeg));
        }
        let mut x = self.zero();
        x.c[k] = a.clone();
        Ok(x)
    }

    /// Coefficients given as `RingElt`s; extra ones must vanish.
    pub fn from_coeffs(&self, coeffs: Vec<RingElt>) -> Result<PolyElt> {
        let mut x = self.zero();
        for (i, a) in coeffs.into_iter().enumerate() {
            if i < self.zdeg {
                x.c[i] = a;
            } else if !a.is_zero() {
                return invalid(format!("degree {i} exceeds the cap {}", self.zdeg));
            }
        }
        Ok(x)
    }

    /// Integer lift of a residue polynomial (exact, digits in `[0, p)`).
    pub fn lift(&self, f: &FpPoly) -> PolyElt {
        let mut x = self.zero();
        for (i, &a) in f.c.iter().enumerate() {
            if i < self.zdeg {
                x.c[i] = self.ctx.from_mod_q(a);
            } else if a != 0 {
                x.trunc = true;
            }
        }
        x
    }
}

/// Element of `A`: coefficients of `Z^0 .. Z^(D-1)`.
#[derive(Clone)]
pub struct PolyElt {
    ring: BaseRing,
    c: Vec<RingElt>,
    /// Set once a nonzero term of degree `>= D` has been discarded.
    trunc: bool,
}

impl PolyElt {
    pub fn ring(&self) -> &BaseRing {
        &self.ring
    }

    pub fn ctx(&self) -> &PAdicContext {
        &self.ring.ctx
    }

    pub fn coeffs(&self) -> &[RingElt] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> &RingElt {
        &self.c[i]
    }

    /// True when some operation producing this element dropped terms of
    /// degree `>= D`.
    pub fn truncated(&self) -> bool {
        self.trunc
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.iter().rposition(|a| !a.is_zero())
    }

    pub fn prec(&self) -> u32 {
        self.c.iter().map(|a| a.prec()).min().unwrap_or(0)
    }

    pub fn valuation(&self) -> Valuation {
        let exact = self.c.iter().filter_map(|a| a.valuation().exact()).min();
        match exact {
            Some(v) => Valuation::Exact(v),
            None => Valuation::AtLeast(self.prec()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }

    pub fn is_zero_mod(&self, k: u32) -> Result<bool> {
        for a in &self.c {
            if !a.is_zero_mod(k)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Units of the local ring are exactly the elements with `f(0)` a unit.
    pub fn is_unit(&self) -> bool {
        self.c[0].is_unit()
    }

    pub fn truncate_prec(&self, prec: u32) -> PolyElt {
        self.map(|a| a.truncate(prec))
    }

    fn map(&self, f: impl Fn(&RingElt) -> RingElt) -> PolyElt {
        PolyElt { ring: self.ring.clone(), c: self.c.iter().map(f).collect(), trunc: self.trunc }
    }

    pub fn scale(&self, a: &RingElt) -> PolyElt {
        self.map(|x| x * a)
    }

    pub fn mul_pi_pow(&self, k: u32) -> PolyElt {
        self.map(|x| x.mul_pi_pow(k))
    }

    pub fn div_pi_pow(&self, k: u32) -> Result<PolyElt> {
        let c = self.c.iter().map(|a| a.div_pi_pow(k)).collect::<Result<Vec<_>>>()?;
        Ok(PolyElt { ring: self.ring.clone(), c, trunc: self.trunc })
    }

    pub fn pow(&self, mut n: u64) -> PolyElt {
        let mut base = self.clone();
        let mut acc = self.ring.one();
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

    /// Inverse of a unit as a power series truncated at `Z^D`.
    pub fn inv_unit(&self) -> Result<PolyElt> {
        let c0inv = self.c[0].inv_unit()?;
        let n = self.ring.zdeg;
        let mut y: Vec<RingElt> = Vec::with_capacity(n);
        y.push(c0inv.clone());
        for k in 1..n {
            let mut s = self.ring.ctx.zero();
            for i in 1..=k {
                if !self.c[i].is_zero() {
                    s += &(&self.c[i] * &y[k - i]);
                }
            }
            y.push(-(&s * &c0inv));
        }
        let trunc = self.trunc || self.degree().unwrap_or(0) > 0;
        Ok(PolyElt { ring: self.ring.clone(), c: y, trunc })
    }

    /// Image in `A_k = F_p[Z]/(Z^D)`.
    pub fn residue(&self) -> FpPoly {
        FpPoly::new(self.ring.p(), self.c.iter().map(|a| a.residue()).collect())
    }

    /// Unique `g0` with `g0^(p^n) = f` modulo `pi`, if it exists.
    pub fn residue_pth_root(&self, n: u32) -> Option<FpPoly> {
        let r = self.residue();
        let k = self.ring.p().pow(n) as usize;
        if r.c.iter().enumerate().any(|(i, &a)| a != 0 && i % k != 0) {
            return None;
        }
        Some(r.split(k).swap_remove(0))
    }

    pub fn eq_to_prec(&self, o: &PolyElt) -> bool {
        (self - o).is_zero()
    }

    /// Formal derivative in `Z`.
    pub fn dz(&self) -> PolyElt {
        let mut out = self.ring.zero();
        for i in 1..self.c.len() {
            out.c[i - 1] = self.c[i].scale(i as u64);
        }
        out.trunc = self.trunc;
        out
    }
}

impl fmt::Debug for PolyElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Prints `sum c_{i,k} pi^k Z^i` in the expression grammar.
impl fmt::Display for PolyElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for k in 0..self.ring.ctx.e {
            for (i, a) in self.c.iter().enumerate() {
                let b = a.balanced_coeffs()[k];
                if b == 0 {
                    continue;
                }
                let mono = match (k, i) {
                    (0, 0) => String::new(),
                    (0, 1) => "Z".into(),
                    (0, _) => format!("Z^{i}"),
                    (_, 0) => crate::dvr::mono_pi(k),
                    (_, 1) => format!("{}*Z", crate::dvr::mono_pi(k)),
                    _ => format!("{}*Z^{i}", crate::dvr::mono_pi(k)),
                };
                terms.push((b, mono));
            }
        }
        write_terms(f, &terms)
    }
}

impl PartialEq for PolyElt {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl<'a> Add<&'a PolyElt> for &'a PolyElt {
    type Output = PolyElt;
    fn add(self, o: &PolyElt) -> PolyElt {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect();
        PolyElt { ring: self.ring.clone(), c, trunc: self.trunc || o.trunc }
    }
}

impl<'a> Sub<&'a PolyElt> for &'a PolyElt {
    type Output = PolyElt;
    fn sub(self, o: &PolyElt) -> PolyElt {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect();
        PolyElt { ring: self.ring.clone(), c, trunc: self.trunc || o.trunc }
    }
}

impl<'a> Mul<&'a PolyElt> for &'a PolyElt {
    type Output = PolyElt;
    fn mul(self, o: &PolyElt) -> PolyElt {
        let n = self.ring.zdeg;
        let ctx = &self.ring.ctx;
        let da = self.degree();
        let db = o.degree();
        let mut c: Vec<Option<RingElt>> = vec![None; n];
        let mut dropped = false;
        for i in 0..n {
            for j in 0..n - i {
                let (a, b) = (&self.c[i], &o.c[j]);
                let cap = ctx.max_precision();
                if (a.is_zero() && a.prec() >= cap) || (b.is_zero() && b.prec() >= cap) {
                    continue;
                }
                let t = a * b;
                c[i + j] = Some(match c[i + j].take() {
                    None => t,
                    Some(s) => &s + &t,
                });
            }
        }
        if let (Some(da), Some(db)) = (da, db) {
            dropped = da + db >= n;
        }
        let c = c.into_iter().map(|x| x.unwrap_or_else(|| ctx.zero())).collect();
        PolyElt { ring: self.ring.clone(), c, trunc: self.trunc || o.trunc || dropped }
    }
}

impl Neg for &PolyElt {
    type Output = PolyElt;
    fn neg(self) -> PolyElt {
        self.map(|a| -a)
    }
}

owned_ops!(PolyElt);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_roots_over_local_curve() {
        let ctx = PAdicContext::new(3, 1, 0).unwrap();
        let a = BaseRing::local_curve(&ctx, 16).unwrap();
        let z = a.z().unwrap();
        let f = &a.one() + &z.pow(2);
        assert!(f.residue_pth_root(1).is_none());
        let g = &a.one() + &z.pow(3);
        assert_eq!(g.residue_pth_root(1).unwrap(), FpPoly::new(3, vec![1, 1]));
    }

    #[test]
    fn power_series_inverse() {
        let ctx = PAdicContext::new(3, 1, 0).unwrap();
        let a = BaseRing::local_curve(&ctx, 8).unwrap();
        let z = a.z().unwrap();
        let f = &a.one() + &z;
        let g = f.inv_unit().unwrap();
        assert!((&f * &g).eq_to_prec(&a.one()));
        assert!(g.truncated());
    }
}
