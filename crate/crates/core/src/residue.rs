//! Characteristic-p computations: polynomials over `F_p`, rational functions,
//! and membership in Frobenius images of free `F_p[Z]`-algebras.

use std::fmt;

use crate::dvr::mod_inv;

/// Polynomial over `F_p`, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpPoly {
    pub p: u64,
    pub c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { p, c }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: vec![] }
    }

    pub fn constant(p: u64, a: u64) -> Self {
        FpPoly::new(p, vec![a])
    }

    pub fn monomial(p: u64, a: u64, k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = a;
        FpPoly::new(p, c)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn ord(&self) -> Option<usize> {
        self.c.iter().position(|&x| x != 0)
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(self.p, (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(self.p, (0..n).map(|i| self.coeff(i) + self.p - o.coeff(i)).collect())
    }

    pub fn scale(&self, a: u64) -> FpPoly {
        FpPoly::new(self.p, self.c.iter().map(|&x| x * (a % self.p)).collect())
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.p;
            }
        }
        FpPoly::new(self.p, c)
    }

    pub fn divrem(&self, o: &FpPoly) -> (FpPoly, FpPoly) {
        let p = self.p;
        let dl = o.degree().expect("division by zero polynomial");
        let inv = mod_inv(o.c[dl], p).expect("nonzero leading coefficient");
        let mut r = self.c.clone();
        let mut q = vec![0u64; self.c.len().saturating_sub(dl).max(1)];
        while r.len() > dl && !r.is_empty() {
            let k = r.len() - 1 - dl;
            let f = r[r.len() - 1] * inv % p;
            q[k] = f;
            for (j, &b) in o.c.iter().enumerate() {
                r[k + j] = (r[k + j] + p * p - f * b % p) % p;
            }
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> FpPoly {
        match self.c.last() {
            None => self.clone(),
            Some(&l) => self.scale(mod_inv(l, self.p).unwrap()),
        }
    }

    pub fn pow(&self, n: u64) -> FpPoly {
        let mut acc = FpPoly::constant(self.p, 1);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `f(Z) -> f(Z^k)`.
    pub fn inflate(&self, k: usize) -> FpPoly {
        let mut c = vec![0; self.c.len().saturating_sub(1) * k + 1];
        for (i, &x) in self.c.iter().enumerate() {
            c[i * k] = x;
        }
        FpPoly::new(self.p, c)
    }

    /// Splits `f(Z) = sum_{s<k} Z^s f_s(Z^k)` and returns the `f_s`.
    pub fn split(&self, k: usize) -> Vec<FpPoly> {
        (0..k)
            .map(|s| FpPoly::new(self.p, self.c.iter().skip(s).step_by(k).copied().collect()))
            .collect()
    }

    pub fn truncate(&self, n: usize) -> FpPoly {
        FpPoly::new(self.p, self.c.iter().take(n).copied().collect())
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i128, String)> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| {
                let m = match i {
                    0 => String::new(),
                    1 => "Z".into(),
                    _ => format!("Z^{i}"),
                };
                (x as i128, m)
            })
            .collect();
        crate::dvr::write_terms(f, &terms)
    }
}

/// Element of `F_p(u)` kept in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
struct RatFn {
    num: FpPoly,
    den: FpPoly,
}

impl RatFn {
    fn from_poly(a: FpPoly) -> Self {
        let p = a.p;
        RatFn { num: a, den: FpPoly::constant(p, 1) }
    }

    fn reduce(num: FpPoly, den: FpPoly) -> Self {
        let p = num.p;
        if num.is_zero() {
            return RatFn { num, den: FpPoly::constant(p, 1) };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.divrem(&g).0, den.divrem(&g).0);
        let l = *d.c.last().unwrap();
        let inv = mod_inv(l, p).unwrap();
        n = n.scale(inv);
        d = d.scale(inv);
        RatFn { num: n, den: d }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn mul(&self, o: &RatFn) -> RatFn {
        RatFn::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    fn sub(&self, o: &RatFn) -> RatFn {
        RatFn::reduce(self.num.mul(&o.den).sub(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    fn inv(&self) -> RatFn {
        RatFn::reduce(self.den.clone(), self.num.clone())
    }
}

/// Outcome of a Frobenius-span membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanResult {
    NotMember,
    /// `x = sum_t (num_t(u) / den(u)) g_t` with `u = Z^p` and `den(0) != 0`.
    Member { num: Vec<FpPoly>, den: FpPoly },
    /// The generators are dependent over `F_p(u)`: the algebra is not reduced.
    Degenerate,
}

/// Decides whether `x` lies in the `F_p[u]_(u)`-span of `gens`, `u = Z^p`.
///
/// Elements are vectors of `F_p[Z]` components (one per basis vector of a free
/// `F_p[Z]`-module). Exact: no truncation in `Z`.
pub fn frobenius_span(p: u64, gens: &[Vec<FpPoly>], x: &[FpPoly]) -> SpanResult {
    let pu = p as usize;
    let coords = |v: &[FpPoly]| -> Vec<RatFn> {
        v.iter().flat_map(|c| c.split(pu)).map(RatFn::from_poly).collect()
    };
    let cols: Vec<Vec<RatFn>> = gens.iter().map(|g| coords(g)).collect();
    let rhs = coords(x);
    let nrows = rhs.len();
    let ncols = cols.len();
    // rows of the augmented matrix
    let mut a: Vec<Vec<RatFn>> = (0..nrows)
        .map(|r| {
            let mut row: Vec<RatFn> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..nrows).find(|&r| !a[r][col].is_zero()) else {
            return SpanResult::Degenerate;
        };
        a.swap(row, pr);
        let inv = a[row][col].inv();
        for k in col..=ncols {
            a[row][k] = a[row][k].mul(&inv);
        }
        for r in 0..nrows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..=ncols {
                    let t = a[row][k].mul(&f);
                    a[r][k] = a[r][k].sub(&t);
                }
            }
        }
        pivots.push(row);
        row += 1;
    }
    if (row..nrows).any(|r| !a[r][ncols].is_zero()) {
        return SpanResult::NotMember;
    }
    let sol: Vec<RatFn> = pivots.iter().map(|&r| a[r][ncols].clone()).collect();
    if sol.iter().any(|s| s.den.coeff(0) == 0) {
        return SpanResult::NotMember;
    }
    let mut den = FpPoly::constant(p, 1);
    for s in &sol {
        let g = den.gcd(&s.den);
        den = den.mul(&s.den.divrem(&g).0);
    }
    let num = sol.iter().map(|s| s.num.mul(&den.divrem(&s.den).0)).collect();
    SpanResult::Member { num, den }
}

/// Dense `F_p` linear algebra on the truncated basis `{Z^i e_t : i < zdeg}`:
/// is `x` in the `F_p`-span of `{Z^(p i) g_t}` modulo `Z^zdeg`? Returns the
/// coordinates `c[t][i]` of a solution.
pub fn truncated_span(p: u64, zdeg: usize, gens: &[Vec<FpPoly>], x: &[FpPoly]) -> Option<Vec<Vec<u64>>> {
    let rank = x.len();
    let pu = p as usize;
    let flat = |v: &[FpPoly]| -> Vec<u64> {
        (0..rank).flat_map(|t| (0..zdeg).map(move |i| v[t].coeff(i))).collect()
    };
    let mut spanning = Vec::new();
    for (t, g) in gens.iter().enumerate() {
        for i in 0..zdeg.div_ceil(pu) {
            let shifted: Vec<FpPoly> = g
                .iter()
                .map(|c| FpPoly::monomial(p, 1, i * pu).mul(c).truncate(zdeg))
                .collect();
            spanning.push(((t, i), flat(&shifted)));
        }
    }
    let target = flat(x);
    let cols: Vec<Vec<u64>> = spanning.iter().map(|s| s.1.clone()).collect();
    let sol = solve_linear(p, &cols, &target)?;
    let mut out = vec![vec![0u64; zdeg.div_ceil(pu)]; gens.len()];
    for (((t, i), _), v) in spanning.iter().zip(sol) {
        out[*t][*i] = v;
    }
    Some(out)
}

/// Solves `sum_j y_j cols[j] = rhs` over `F_p`; free variables are set to 0.
pub fn solve_linear(p: u64, cols: &[Vec<u64>], rhs: &[u64]) -> Option<Vec<u64>> {
    let n = rhs.len();
    let m = cols.len();
    let mut rows: Vec<Vec<u64>> = (0..n)
        .map(|r| {
            let mut row: Vec<u64> = cols.iter().map(|c| c[r] % p).collect();
            row.push(rhs[r] % p);
            row
        })
        .collect();
    let mut piv_cols = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let Some(pr) = (r..n).find(|&k| rows[k][col] != 0) else { continue };
        rows.swap(r, pr);
        let inv = mod_inv(rows[r][col], p).unwrap();
        for v in rows[r].iter_mut() {
            *v = *v * inv % p;
        }
        for k in 0..n {
            if k != r && rows[k][col] != 0 {
                let f = rows[k][col];
                for c in col..=m {
                    rows[k][c] = (rows[k][c] + p * p - f * rows[r][c] % p) % p;
                }
            }
        }
        piv_cols.push(col);
        r += 1;
    }
    if (r..n).any(|k| rows[k][m] != 0) {
        return None;
    }
    let mut out = vec![0u64; m];
    for (k, &col) in piv_cols.iter().enumerate() {
        out[col] = rows[k][m];
    }
    Some(out)
}

/// Monic relation `T^r = sum_{k<r} rel[k] T^k` over `F_p[Z]`, and arithmetic
/// in the quotient (no truncation).
#[derive(Clone, Debug)]
pub struct ResidueAlgebra {
    pub p: u64,
    pub rel: Vec<FpPoly>,
}

impl ResidueAlgebra {
    pub fn rank(&self) -> usize {
        self.rel.len()
    }

    pub fn mul(&self, a: &[FpPoly], b: &[FpPoly]) -> Vec<FpPoly> {
        let r = self.rank();
        let mut prod = vec![FpPoly::zero(self.p); 2 * r - 1];
        for i in 0..r {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..r {
                prod[i + j] = prod[i + j].add(&a[i].mul(&b[j]));
            }
        }
        for t in (r..2 * r - 1).rev() {
            let top = std::mem::replace(&mut prod[t], FpPoly::zero(self.p));
            if top.is_zero() {
                continue;
            }
            for k in 0..r {
                prod[t - r + k] = prod[t - r + k].add(&top.mul(&self.rel[k]));
            }
        }
        prod.truncate(r);
        prod
    }

    pub fn pow(&self, a: &[FpPoly], n: u64) -> Vec<FpPoly> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn one(&self) -> Vec<FpPoly> {
        let mut v = vec![FpPoly::zero(self.p); self.rank()];
        v[0] = FpPoly::constant(self.p, 1);
        v
    }

    pub fn basis(&self, t: usize) -> Vec<FpPoly> {
        let mut v = vec![FpPoly::zero(self.p); self.rank()];
        v[t] = FpPoly::constant(self.p, 1);
        v
    }

    /// The Frobenius images `(T^t)^p` generating the p-th powers over `F_p[Z^p]`.
    pub fn frobenius_generators(&self) -> Vec<Vec<FpPoly>> {
        (0..self.rank()).map(|t| self.pow(&self.basis(t), self.p)).collect()
    }

    /// Unique p-th root of `x` over the localization at `Z = 0`, as
    /// `(numerator components, denominator)`.
    pub fn pth_root(&self, x: &[FpPoly]) -> SpanResult {
        frobenius_span(self.p, &self.frobenius_generators(), x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(c: &[u64]) -> FpPoly {
        FpPoly::new(3, c.to_vec())
    }

    #[test]
    fn polynomial_division() {
        let a = fp(&[1, 0, 1]).mul(&fp(&[2, 1]));
        let (q, r) = a.divrem(&fp(&[2, 1]));
        assert_eq!(q, fp(&[1, 0, 1]));
        assert!(r.is_zero());
        assert_eq!(fp(&[1, 1]).gcd(&fp(&[2, 0, 1])), fp(&[1, 1]));
    }

    #[test]
    fn z_is_not_in_subring_generated_by_one_plus_z_squared() {
        let f1 = fp(&[1, 0, 1]);
        let gens: Vec<Vec<FpPoly>> = (0..3).map(|t| vec![f1.pow(t)]).collect();
        assert_eq!(frobenius_span(3, &gens, &[fp(&[0, 1])]), SpanResult::NotMember);
        assert!(truncated_span(3, 16, &gens, &[fp(&[0, 1])]).is_none());
        assert!(matches!(frobenius_span(3, &gens, &[f1.clone()]), SpanResult::Member { .. }));
    }

    #[test]
    fn rational_coordinates_are_detected() {
        // 1 + Z^2 = (1+Z^2)^4 / (1+Z^6) lies in F_3[u]_(u)[(1+Z^2)^4]
        let n = fp(&[1, 0, 1]).pow(4);
        let gens: Vec<Vec<FpPoly>> = (0..3).map(|t| vec![n.pow(t)]).collect();
        match frobenius_span(3, &gens, &[fp(&[1, 0, 1])]) {
            SpanResult::Member { num, den } => {
                assert_eq!(den, fp(&[1, 0, 1]));
                assert!(num[0].is_zero() && num[2].is_zero());
                assert_eq!(num[1], fp(&[1]));
            }
            other => panic!("{other:?}"),
        }
    }
}
