//! Free `R`-algebras given by a tower of monic relations, their tensor
//! products, and Hopf axiom checks.
//!
//! An element is a flat vector of coefficients over the monomials
//! `X_0^a_0 ... X_{k-1}^a_{k-1}` (mixed radix, `X_0` fastest). The relation
//! of `X_i` expresses `X_i^deg_i` through lower powers with coefficients in
//! the algebra generated by `X_0 .. X_{i-1}`.

use crate::dvr::{PAdicContext, RingElt};
use crate::error::{Error, Result};

pub type Flat = Vec<RingElt>;

#[derive(Clone, Debug)]
pub struct Tower {
    ctx: PAdicContext,
    degs: Vec<usize>,
    /// `rels[i][l]`: coefficient of `X_i^l` in `X_i^deg_i`, an element of
    /// the prefix tower of size `sizes[i]`.
    rels: Vec<Vec<Flat>>,
    /// `sizes[i] = deg_0 * .. * deg_{i-1}`.
    sizes: Vec<usize>,
}

impl Tower {
    pub fn new(ctx: &PAdicContext) -> Self {
        Tower { ctx: ctx.clone(), degs: vec![], rels: vec![], sizes: vec![1] }
    }

    /// Adjoins `X` with `X^deg = sum_l rel[l] X^l`.
    pub fn adjoin(&mut self, rel: Vec<Flat>) {
        let size = self.size();
        assert!(rel.iter().all(|c| c.len() == size));
        self.degs.push(rel.len());
        self.rels.push(rel);
        self.sizes.push(size * self.degs.last().unwrap());
    }

    pub fn ctx(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn size(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    pub fn nvars(&self) -> usize {
        self.degs.len()
    }

    pub fn degs(&self) -> &[usize] {
        &self.degs
    }

    pub fn zero(&self) -> Flat {
        vec![self.ctx.zero(); self.size()]
    }

    pub fn scalar(&self, a: &RingElt) -> Flat {
        let mut x = self.zero();
        x[0] = a.clone();
        x
    }

    pub fn one(&self) -> Flat {
        self.scalar(&self.ctx.one())
    }

    pub fn var(&self, i: usize) -> Flat {
        let mut x = self.zero();
        x[self.sizes[i]] = self.ctx.one();
        x
    }

    /// Exponent vector of a flat index.
    pub fn exponents(&self, mut idx: usize) -> Vec<usize> {
        self.degs
            .iter()
            .map(|&d| {
                let e = idx % d;
                idx /= d;
                e
            })
            .collect()
    }

    pub fn monomial_name(&self, idx: usize, names: &[&str]) -> String {
        let parts: Vec<String> = self
            .exponents(idx)
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn add(&self, a: &[RingElt], b: &[RingElt]) -> Flat {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[RingElt], b: &[RingElt]) -> Flat {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(&self, a: &[RingElt], c: &RingElt) -> Flat {
        a.iter().map(|x| x * c).collect()
    }

    pub fn mul_pi_pow(&self, a: &[RingElt], k: u32) -> Flat {
        a.iter().map(|x| x.mul_pi_pow(k)).collect()
    }

    pub fn div_pi_pow(&self, a: &[RingElt], k: u32) -> Result<Flat> {
        a.iter().map(|x| x.div_pi_pow(k)).collect()
    }

    pub fn is_zero_mod(&self, a: &[RingElt], k: u32) -> Result<bool> {
        for x in a {
            if !x.is_zero_mod(k)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn prec(&self, a: &[RingElt]) -> u32 {
        a.iter().map(|x| x.prec()).min().unwrap_or(u32::MAX)
    }

    pub fn mul(&self, a: &[RingElt], b: &[RingElt]) -> Flat {
        // Skipped zero blocks would only contribute zeros known to at least
        // the smaller input precision.
        let bound = self.prec(a).min(self.prec(b));
        let mut r = self.mul_level(self.nvars(), a, b);
        for x in r.iter_mut() {
            if x.prec() > bound {
                *x = x.truncate(bound);
            }
        }
        r
    }

    fn mul_level(&self, k: usize, a: &[RingElt], b: &[RingElt]) -> Flat {
        if k == 0 {
            return vec![&a[0] * &b[0]];
        }
        let sub = self.sizes[k - 1];
        let d = self.degs[k - 1];
        let zero_block = |x: &[RingElt]| x.iter().all(|c| c.is_zero());
        let mut acc: Vec<Option<Flat>> = vec![None; 2 * d - 1];
        for i in 0..d {
            let ai = &a[i * sub..(i + 1) * sub];
            if zero_block(ai) {
                continue;
            }
            for jj in 0..d {
                let bj = &b[jj * sub..(jj + 1) * sub];
                if zero_block(bj) {
                    continue;
                }
                let prod = self.mul_level(k - 1, ai, bj);
                let slot = &mut acc[i + jj];
                *slot = Some(match slot.take() {
                    None => prod,
                    Some(s) => s.iter().zip(&prod).map(|(x, y)| x + y).collect(),
                });
            }
        }
        for t in (d..2 * d - 1).rev() {
            let top = match acc[t].take() {
                None => continue,
                Some(x) => x,
            };
            for (l, c) in self.rels[k - 1].iter().enumerate() {
                if zero_block(c) {
                    continue;
                }
                let prod = self.mul_level(k - 1, &top, c);
                let slot = &mut acc[t - d + l];
                *slot = Some(match slot.take() {
                    None => prod,
                    Some(s) => s.iter().zip(&prod).map(|(x, y)| x + y).collect(),
                });
            }
        }
        let mut out = Vec::with_capacity(sub * d);
        for slot in acc.into_iter().take(d) {
            match slot {
                None => out.extend(std::iter::repeat(self.ctx.zero()).take(sub)),
                Some(x) => out.extend(x),
            }
        }
        out
    }

    pub fn pow(&self, a: &[RingElt], mut n: u64) -> Flat {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `sum_i coeffs[i] x^i`.
    pub fn eval_poly(&self, coeffs: &[RingElt], x: &[RingElt]) -> Flat {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc, x);
            acc[0] = &acc[0] + c;
        }
        acc
    }

    /// Substitutes images for the variables. `images` live in `target`.
    pub fn substitute(&self, x: &[RingElt], images: &[Flat], target: &Tower) -> Flat {
        let mut acc = target.zero();
        for (idx, mono) in self.monomial_images(images, target).iter().enumerate() {
            if !x[idx].is_zero() || x[idx].prec() < target.ctx.max_precision() {
                acc = target.add(&acc, &target.scale(mono, &x[idx]));
            }
        }
        acc
    }

    /// Images of every basis monomial under a substitution.
    pub fn monomial_images(&self, images: &[Flat], target: &Tower) -> Vec<Flat> {
        let mut out = vec![target.one()];
        for (i, img) in images.iter().enumerate() {
            let mut powers = vec![target.one()];
            for _ in 1..self.degs[i] {
                powers.push(target.mul(powers.last().unwrap(), img));
            }
            let mut next = Vec::with_capacity(out.len() * self.degs[i]);
            for pw in &powers {
                for m in &out {
                    next.push(target.mul(m, pw));
                }
            }
            out = next;
        }
        out
    }

    /// `self (x) other`, variables of `self` first.
    pub fn tensor(&self, other: &Tower) -> Tower {
        let mut t = self.clone();
        let shift = self.size();
        for rel in &other.rels {
            let lifted = rel
                .iter()
                .map(|c| {
                    let mut x = vec![self.ctx.zero(); shift * c.len()];
                    for (i, a) in c.iter().enumerate() {
                        x[i * shift] = a.clone();
                    }
                    x
                })
                .collect();
            t.adjoin(lifted);
        }
        t
    }

    /// `x (x) y` inside `self.tensor(other)`.
    pub fn tensor_elts(&self, x: &[RingElt], y: &[RingElt]) -> Flat {
        let mut out = Vec::with_capacity(x.len() * y.len());
        for b in y {
            for a in x {
                out.push(a * b);
            }
        }
        out
    }
}

/// Hopf structure on a tower algebra, given on the generators.
#[derive(Clone, Debug)]
pub struct HopfData {
    pub alg: Tower,
    pub names: Vec<&'static str>,
    /// Images of the generators in `alg (x) alg`.
    pub comul: Vec<Flat>,
    pub counit: Vec<RingElt>,
    pub antipode: Vec<Flat>,
    /// Numerators of the defining relations, as polynomial maps: given
    /// candidate images of the generators in some tower, returns elements
    /// that must vanish.
    pub relations: fn(&HopfData, &Tower, &[Flat]) -> Vec<Flat>,
    /// Integer parameters of the presentation, read by `relations`.
    pub params: Vec<u32>,
    /// Coefficients of the polynomial `F` of an extension.
    pub fcoeffs: Vec<RingElt>,
}

/// Outcome of the axiom checks.
#[derive(Clone, Debug, Default)]
pub struct HopfReport {
    pub coassociative: bool,
    pub counit: bool,
    pub antipode: bool,
    pub closure: bool,
    /// Smallest precision at which an identity was decided.
    pub precision: u32,
    pub failures: Vec<String>,
}

impl HopfReport {
    pub fn all_pass(&self) -> bool {
        self.coassociative && self.counit && self.antipode && self.closure
    }
}

impl HopfData {
    pub fn rank(&self) -> usize {
        self.alg.size()
    }

    pub fn square(&self) -> Tower {
        self.alg.tensor(&self.alg)
    }

    fn counit_of_monomials(&self) -> Vec<RingElt> {
        let ctx = self.alg.ctx();
        let pt = Tower::new(ctx);
        let imgs: Vec<Flat> = self.counit.iter().map(|c| vec![c.clone()]).collect();
        self.alg.monomial_images(&imgs, &pt).into_iter().map(|v| v[0].clone()).collect()
    }

    /// Checks the Hopf axioms; each identity must hold to at least
    /// `min_prec` digits.
    pub fn check(&self, min_prec: u32) -> Result<HopfReport> {
        let a = &self.alg;
        let n = a.size();
        let sq = self.square();
        let cube = sq.tensor(a);
        let mut rep = HopfReport { precision: u32::MAX, ..Default::default() };
        let record = |rep: &mut HopfReport, what: &str, idx: usize, lhs: &[RingElt], rhs: &[RingElt], tower: &Tower, names: &[&str]| -> Result<bool> {
            let diff = tower.sub(lhs, rhs);
            let pr = tower.prec(&diff);
            rep.precision = rep.precision.min(pr);
            if pr < min_prec {
                return Err(Error::Precision(format!(
                    "{what}: identity known only to {pr} digits, need {min_prec}"
                )));
            }
            if let Some(k) = diff.iter().position(|x| !x.is_zero()) {
                rep.failures.push(format!(
                    "{what} fails for {} at monomial {}",
                    self.names[idx],
                    tower.monomial_name(k, names)
                ));
                return Ok(false);
            }
            Ok(true)
        };
        let names2: Vec<String> = self
            .names
            .iter()
            .map(|s| format!("{s}(x)1"))
            .chain(self.names.iter().map(|s| format!("1(x){s}")))
            .collect();
        let names2: Vec<&str> = names2.iter().map(|s| s.as_str()).collect();
        let names3: Vec<String> = (0..3)
            .flat_map(|k| self.names.iter().map(move |s| format!("{s}_{k}")))
            .collect();
        let names3: Vec<&str> = names3.iter().map(|s| s.as_str()).collect();

        let delta_mono = a.monomial_images(&self.comul, &sq);
        let eps_mono = self.counit_of_monomials();
        let sigma_mono = a.monomial_images(&self.antipode, a);

        rep.coassociative = true;
        rep.counit = true;
        rep.antipode = true;
        for (g, dx) in self.comul.iter().enumerate() {
            // (Delta (x) id) Delta and (id (x) Delta) Delta.
            let mut left = cube.zero();
            let mut right = cube.zero();
            for jj in 0..n {
                let mut inner = sq.zero();
                for i in 0..n {
                    let c = &dx[i + n * jj];
                    if !c.is_zero() {
                        inner = sq.add(&inner, &sq.scale(&delta_mono[i], c));
                    }
                }
                for (k, v) in inner.iter().enumerate() {
                    left[k + n * n * jj] = &left[k + n * n * jj] + v;
                }
            }
            for i in 0..n {
                let mut inner = sq.zero();
                for jj in 0..n {
                    let c = &dx[i + n * jj];
                    if !c.is_zero() {
                        inner = sq.add(&inner, &sq.scale(&delta_mono[jj], c));
                    }
                }
                for (k, v) in inner.iter().enumerate() {
                    right[i + n * k] = &right[i + n * k] + v;
                }
            }
            let ok = record(&mut rep, "coassociativity", g, &left, &right, &cube, &names3)?;
            rep.coassociative &= ok;

            // Counit on either side.
            let x = a.var(g);
            let mut l = a.zero();
            let mut r = a.zero();
            for i in 0..n {
                for jj in 0..n {
                    let c = &dx[i + n * jj];
                    l[jj] = &l[jj] + &(c * &eps_mono[i]);
                    r[i] = &r[i] + &(c * &eps_mono[jj]);
                }
            }
            let ok1 = record(&mut rep, "left counit", g, &l, &x, a, &self.names)?;
            let ok2 = record(&mut rep, "right counit", g, &r, &x, a, &self.names)?;
            rep.counit &= ok1 && ok2;

            // Antipode on either side.
            let unit = a.scalar(&self.counit[g]);
            let mut l = a.zero();
            let mut r = a.zero();
            for jj in 0..n {
                let mut inner = a.zero();
                for i in 0..n {
                    let c = &dx[i + n * jj];
                    if !c.is_zero() {
                        inner = a.add(&inner, &a.scale(&sigma_mono[i], c));
                    }
                }
                l = a.add(&l, &a.mul(&inner, &a.var_monomial(jj)));
            }
            for i in 0..n {
                let mut inner = a.zero();
                for jj in 0..n {
                    let c = &dx[i + n * jj];
                    if !c.is_zero() {
                        inner = a.add(&inner, &a.scale(&sigma_mono[jj], c));
                    }
                }
                r = a.add(&r, &a.mul(&a.var_monomial(i), &inner));
            }
            let ok1 = record(&mut rep, "left antipode", g, &l, &unit, a, &self.names)?;
            let ok2 = record(&mut rep, "right antipode", g, &r, &unit, a, &self.names)?;
            rep.antipode &= ok1 && ok2;
        }

        // Closure: the relations vanish on the images of the generators.
        rep.closure = true;
        let checks: Vec<(&str, Tower, Vec<Flat>)> = vec![
            ("comultiplication closure", sq.clone(), self.comul.clone()),
            ("antipode closure", a.clone(), self.antipode.clone()),
            (
                "counit closure",
                Tower::new(a.ctx()),
                self.counit.iter().map(|c| vec![c.clone()]).collect(),
            ),
        ];
        for (what, tower, imgs) in &checks {
            let names: Vec<&str> = if tower.nvars() == 2 * self.names.len() {
                names2.clone()
            } else {
                self.names.clone()
            };
            for (g, res) in (self.relations)(self, tower, imgs).iter().enumerate() {
                let ok = record(&mut rep, what, g, res, &tower.zero(), tower, &names)?;
                rep.closure &= ok;
            }
        }
        Ok(rep)
    }
}

impl Tower {
    /// The basis monomial with flat index `idx`.
    pub fn var_monomial(&self, idx: usize) -> Flat {
        let mut x = self.zero();
        x[idx] = self.ctx.one();
        x
    }
}
