//! The degree-p extension `B1 = A[T]/(((w + pi^g T)^p - w^p)/pi^(p g) - N)`.
//!
//! With `w = 1` this is the usual presentation
//! `((1 + pi^g T1)^p - 1)/pi^(p g) = f1`. A general unit `w` corresponds to the
//! variable `T = w T1` and keeps every coefficient polynomial.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use crate::base::{BaseRing, PolyElt};
use crate::dvr::owned_ops;
use crate::error::{invalid, Error, Result};
use crate::residue::{solve_linear, FpPoly, ResidueAlgebra, SpanResult};

#[derive(Debug)]
pub struct B1Data {
    pub base: BaseRing,
    pub gamma1: u32,
    /// Scale of the variable: `T = w T1`.
    pub w: PolyElt,
    /// Right-hand side of the relation (`f1` when `w = 1`).
    pub f1: PolyElt,
    /// `T^p = sum_k rel[k] T^k`.
    rel: Vec<PolyElt>,
    residue: ResidueAlgebra,
}

#[derive(Clone, Debug)]
pub struct QuotientB1(Arc<B1Data>);

impl std::ops::Deref for QuotientB1 {
    type Target = B1Data;
    fn deref(&self) -> &B1Data {
        &self.0
    }
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

impl QuotientB1 {
    pub fn new(base: &BaseRing, gamma1: u32, f1: &PolyElt) -> Result<Self> {
        Self::with_root(base, gamma1, &base.one(), f1)
    }

    pub fn with_root(base: &BaseRing, gamma1: u32, w: &PolyElt, n: &PolyElt) -> Result<Self> {
        let ctx = &base.ctx;
        let p = ctx.p;
        if (p as u32 - 1) * gamma1 > ctx.v_p() {
            return invalid(format!(
                "(p-1)*{gamma1} exceeds v(p) = {}: the relation is not integral",
                ctx.v_p()
            ));
        }
        if !w.is_unit() {
            return invalid("the scale of the variable must be a unit");
        }
        let mut rel = vec![n.clone()];
        for k in 1..p {
            let c = ctx.from_i64(binom(p, k) as i64).div_pi_pow(gamma1 * (p - k) as u32)?;
            rel.push(-(&w.pow(p - k).scale(&c)));
        }
        let residue = ResidueAlgebra { p, rel: rel.iter().map(|r| r.residue()).collect() };
        Ok(QuotientB1(Arc::new(B1Data {
            base: base.clone(),
            gamma1,
            w: w.clone(),
            f1: n.clone(),
            rel,
            residue,
        })))
    }

    pub fn p(&self) -> usize {
        self.base.ctx.p as usize
    }

    pub fn relation(&self) -> &[PolyElt] {
        &self.rel
    }

    pub fn residue_algebra(&self) -> &ResidueAlgebra {
        &self.residue
    }

    pub fn zero(&self) -> B1Elt {
        B1Elt { ring: self.clone(), c: vec![self.base.zero(); self.p()] }
    }

    pub fn one(&self) -> B1Elt {
        self.constant(&self.base.one())
    }

    pub fn constant(&self, a: &PolyElt) -> B1Elt {
        let mut x = self.zero();
        x.c[0] = a.clone();
        x
    }

    /// The variable `T` of the presentation.
    pub fn t(&self) -> B1Elt {
        self.from_coeffs(vec![self.base.zero(), self.base.one()])
    }

    pub fn from_coeffs(&self, mut c: Vec<PolyElt>) -> B1Elt {
        c.resize(self.p(), self.base.zero());
        B1Elt { ring: self.clone(), c }
    }

    pub fn lift(&self, r: &[FpPoly]) -> B1Elt {
        self.from_coeffs(r.iter().map(|f| self.base.lift(f)).collect())
    }
}

/// Element `sum_{t<p} c_t T^t` of `B1`.
#[derive(Clone)]
pub struct B1Elt {
    ring: QuotientB1,
    c: Vec<PolyElt>,
}

impl B1Elt {
    pub fn ring(&self) -> &QuotientB1 {
        &self.ring
    }

    pub fn coeffs(&self) -> &[PolyElt] {
        &self.c
    }

    pub fn truncated(&self) -> bool {
        self.c.iter().any(|a| a.truncated())
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

    pub fn prec(&self) -> u32 {
        self.c.iter().map(|a| a.prec()).min().unwrap_or(0)
    }

    pub fn scale(&self, a: &PolyElt) -> B1Elt {
        self.ring.from_coeffs(self.c.iter().map(|x| x * a).collect())
    }

    pub fn mul_pi_pow(&self, k: u32) -> B1Elt {
        self.ring.from_coeffs(self.c.iter().map(|x| x.mul_pi_pow(k)).collect())
    }

    pub fn div_pi_pow(&self, k: u32) -> Result<B1Elt> {
        Ok(self.ring.from_coeffs(self.c.iter().map(|x| x.div_pi_pow(k)).collect::<Result<_>>()?))
    }

    pub fn truncate_prec(&self, prec: u32) -> B1Elt {
        self.ring.from_coeffs(self.c.iter().map(|x| x.truncate_prec(prec)).collect())
    }

    pub fn pow(&self, mut n: u64) -> B1Elt {
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

    pub fn residue(&self) -> Vec<FpPoly> {
        self.c.iter().map(|a| a.residue()).collect()
    }

    /// Coefficient of `T^0` (the value at `T1 = 0`).
    pub fn constant_term(&self) -> &PolyElt {
        &self.c[0]
    }

    /// `d/dT1` where `T = w T1`.
    pub fn derivative(&self) -> B1Elt {
        let p = self.ring.p();
        let mut c = vec![self.ring.base.zero(); p];
        for t in 1..p {
            c[t - 1] = self.c[t].scale(&self.ring.base.ctx.from_i64(t as i64));
        }
        self.ring.from_coeffs(c).scale(&self.ring.w)
    }

    pub fn eq_to_prec(&self, o: &B1Elt) -> bool {
        (self - o).is_zero()
    }

    /// Exact residue p-th root test. On success returns `(num, den)` with
    /// `num^p = den^p * self` modulo `pi`, `den` a unit of `A`.
    pub fn residue_pth_root_scaled(&self) -> Result<Option<(B1Elt, PolyElt)>> {
        match self.ring.residue.pth_root(&self.residue()) {
            SpanResult::NotMember => Ok(None),
            SpanResult::Degenerate => {
                Err(Error::Hypothesis("the special fiber of B1 is not reduced".into()))
            }
            SpanResult::Member { num, den } => {
                Ok(Some((self.ring.lift(&num), self.ring.base.lift(&den))))
            }
        }
    }

    /// Residue p-th root as an element of `B1` (denominators expanded as
    /// power series).
    pub fn residue_pth_root(&self) -> Result<Option<B1Elt>> {
        Ok(match self.residue_pth_root_scaled()? {
            None => None,
            Some((num, den)) => Some(num.scale(&den.inv_unit()?)),
        })
    }

    /// Inverse of a unit: residue inverse by linear algebra over `F_p` in
    /// `(A_k/Z^D)[T]/(rel)`, then Newton iteration.
    pub fn inv_unit(&self) -> Result<B1Elt> {
        let ring = &self.ring;
        let p = ring.base.ctx.p;
        let pu = ring.p();
        let zdeg = ring.base.zdeg;
        let xr = self.residue();
        let mut cols = Vec::with_capacity(pu * zdeg);
        for t in 0..pu {
            for i in 0..zdeg {
                let mut b = vec![FpPoly::zero(p); pu];
                b[t] = FpPoly::monomial(p, 1, i);
                let prod = ring.residue.mul(&xr, &b);
                cols.push(
                    (0..pu)
                        .flat_map(|s| {
                            let f = prod[s].clone();
                            (0..zdeg).map(move |k| f.coeff(k))
                        })
                        .collect::<Vec<u64>>(),
                );
            }
        }
        let mut rhs = vec![0u64; pu * zdeg];
        rhs[0] = 1;
        let sol = solve_linear(p, &cols, &rhs)
            .ok_or_else(|| Error::InvalidInput("element is not a unit of B1".into()))?;
        let comps: Vec<FpPoly> =
            (0..pu).map(|t| FpPoly::new(p, sol[t * zdeg..(t + 1) * zdeg].to_vec())).collect();
        let mut y = ring.lift(&comps);
        let prec = self.prec();
        let two = ring.constant(&ring.base.from_i64(2));
        let mut good = 1u32;
        while good < prec {
            let xy = self * &y;
            y = &y * &(&two - &xy);
            good = good.saturating_mul(2);
        }
        Ok(y.truncate_prec(prec))
    }
}

impl fmt::Debug for B1Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for B1Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (t, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match t {
                0 => write!(f, "({a})")?,
                1 => write!(f, "({a})*T")?,
                _ => write!(f, "({a})*T^{t}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl PartialEq for B1Elt {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl<'a> Add<&'a B1Elt> for &'a B1Elt {
    type Output = B1Elt;
    fn add(self, o: &B1Elt) -> B1Elt {
        self.ring.from_coeffs(self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a B1Elt> for &'a B1Elt {
    type Output = B1Elt;
    fn sub(self, o: &B1Elt) -> B1Elt {
        self.ring.from_coeffs(self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect())
    }
}

impl<'a> Mul<&'a B1Elt> for &'a B1Elt {
    type Output = B1Elt;
    fn mul(self, o: &B1Elt) -> B1Elt {
        let ring = &self.ring;
        let p = ring.p();
        let mut prod: Vec<PolyElt> = vec![ring.base.zero(); 2 * p - 1];
        for i in 0..p {
            if self.c[i].is_zero() && self.c[i].prec() >= ring.base.ctx.max_precision() {
                continue;
            }
            for j in 0..p {
                if o.c[j].is_zero() && o.c[j].prec() >= ring.base.ctx.max_precision() {
                    continue;
                }
                prod[i + j] = &prod[i + j] + &(&self.c[i] * &o.c[j]);
            }
        }
        for t in (p..2 * p - 1).rev() {
            let top = std::mem::replace(&mut prod[t], ring.base.zero());
            if top.is_zero() && top.prec() >= ring.base.ctx.max_precision() {
                continue;
            }
            for k in 0..p {
                prod[t - p + k] = &prod[t - p + k] + &(&top * &ring.rel[k]);
            }
        }
        prod.truncate(p);
        ring.from_coeffs(prod)
    }
}

impl Neg for &B1Elt {
    type Output = B1Elt;
    fn neg(self) -> B1Elt {
        self.ring.from_coeffs(self.c.iter().map(|a| -a).collect())
    }
}

owned_ops!(B1Elt);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvr::PAdicContext;

    fn setup() -> (BaseRing, QuotientB1) {
        let ctx = PAdicContext::new(3, 1, 0).unwrap();
        let a = BaseRing::local_curve(&ctx, 12).unwrap();
        let z = a.z().unwrap();
        let f1 = &a.one() + &z.pow(2);
        let b = QuotientB1::new(&a, 1, &f1).unwrap();
        (a, b)
    }

    #[test]
    fn defining_relation_holds() {
        let (a, b) = setup();
        let x = &b.one() + &b.t().mul_pi_pow(1);
        let lhs = x.pow(3);
        let rhs = b.constant(&(&a.one() + &b.f1.mul_pi_pow(3)));
        assert!(lhs.eq_to_prec(&rhs));
    }

    #[test]
    fn t_is_a_unit() {
        let (_, b) = setup();
        let t = b.t();
        let ti = t.inv_unit().unwrap();
        assert!((&t * &ti).eq_to_prec(&b.one()));
    }

    #[test]
    fn rejects_non_integral_relation() {
        let (a, _) = setup();
        assert!(QuotientB1::new(&a, 4, &a.one()).is_err());
    }
}
