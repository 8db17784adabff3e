use proptest::prelude::*;

use p2cover_core::analysis::compute_level;
use p2cover_core::degen::{enumerate_admissible, is_admissible, realize, Filter};
use p2cover_core::expr::parse_element;
use p2cover_core::groups::{is_hopf_map, model_map, model_maps, phi1_contains, phi_membership};
use p2cover_core::{analyze, analyze_zp, BaseRing, DegenType, ModelGroup, PAdicContext, PolyElt, RingElt, Valuation};

fn ctx(d: u32) -> PAdicContext {
    PAdicContext::new(3, d, 0).unwrap()
}

/// An element of R from small integer digits: sum c_k pi^k.
fn elt(c: &PAdicContext, digits: &[i64], shift: u32) -> RingElt {
    let mut acc = c.zero();
    for (k, &x) in digits.iter().enumerate() {
        acc = &acc + &c.from_i64(x).mul_pi_pow(k as u32);
    }
    acc.mul_pi_pow(shift)
}

fn digits() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..50, 1..8)
}

fn poly(a: &BaseRing, coeffs: &[(Vec<i64>, u32)]) -> PolyElt {
    let cs = coeffs.iter().map(|(d, s)| elt(&a.ctx, d, *s)).collect();
    a.from_coeffs(cs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(x in digits(), y in digits(), z in digits(), d in 1u32..4) {
        let c = ctx(d);
        let (x, y, z) = (elt(&c, &x, 0), elt(&c, &y, 0), elt(&c, &z, 0));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert!((&x + &(-&x)).is_zero());
    }

    #[test]
    fn valuation_is_additive(x in digits(), y in digits(), s in 0u32..10, t in 0u32..10) {
        let c = ctx(2);
        let (x, y) = (elt(&c, &x, s), elt(&c, &y, t));
        if let (Valuation::Exact(a), Valuation::Exact(b)) = (x.valuation(), y.valuation()) {
            prop_assert_eq!((&x * &y).valuation(), Valuation::Exact(a + b));
        }
    }

    #[test]
    fn unit_inverse(x in digits(), u in 1i64..3) {
        let c = ctx(1);
        let x = &c.from_i64(u) + &elt(&c, &x, 1);
        let inv = x.inv_unit().unwrap();
        prop_assert!((&x * &inv).eq_to_prec(&c.one()));
    }

    #[test]
    fn pi_shift_round_trip(x in digits(), k in 0u32..30) {
        let c = ctx(3);
        let x = elt(&c, &x, 0);
        let back = x.mul_pi_pow(k).div_pi_pow(k).unwrap();
        prop_assert!(back.eq_to_prec(&x));
        prop_assert_eq!(back.prec(), x.prec().min(c.max_precision() - k));
    }

    #[test]
    fn print_parse_round_trip(cs in prop::collection::vec((digits(), 0u32..6), 1..6), d in 1u32..4) {
        let a = BaseRing::local_curve(&ctx(d), 16).unwrap();
        let f = poly(&a, &cs);
        let back = parse_element(&f.to_string(), &a).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_string(), f.to_string());
    }

    #[test]
    fn poly_inverse(cs in prop::collection::vec((digits(), 0u32..4), 1..5)) {
        let a = BaseRing::local_curve(&ctx(1), 12).unwrap();
        let f = &a.one() + &poly(&a, &cs).mul_pi_pow(1);
        let g = f.inv_unit().unwrap();
        prop_assert!((&f * &g).eq_to_prec(&a.one()));
    }

    /// Multiplying by a p^2-th power of a unit leaves the type unchanged.
    #[test]
    fn type_ignores_p2_powers(idx in 0usize..7, u0 in 1i64..3, u1 in -20i64..20, u2 in -20i64..20) {
        let a = BaseRing::local_curve(&ctx(1), 32).unwrap();
        let all: Vec<DegenType> = enumerate_admissible(&a.ctx, None)
            .into_iter()
            .filter(|t| t.kappa == t.gamma1)
            .collect();
        let t = all[idx % all.len()];
        let f = realize(&t, &a).unwrap().cover;
        let c = &a.ctx;
        let u = &a.constant(&(&c.from_i64(u0) + &c.from_i64(u1).mul_pi_pow(1)))
            + &a.monomial(&c.from_i64(u2), 1).unwrap();
        let r = analyze(&(&f * &u.pow(9))).unwrap();
        prop_assert_eq!(r.degen, t);
    }

    /// `1 + pi^(p gamma) f1` with `f1` not a residue p-th power has level gamma.
    #[test]
    fn zp_level_of_shifted_unit(gamma in 0u32..10, extra in prop::collection::vec((digits(), 1u32..4), 0..4)) {
        let a = BaseRing::local_curve(&ctx(3), 16).unwrap();
        let f1 = &parse_element("1+Z^2", &a).unwrap() + &poly(&a, &extra);
        let f = &a.one() + &f1.mul_pi_pow(3 * gamma);
        let r = analyze_zp(&f).unwrap();
        prop_assert_eq!(r.gamma, gamma);
        prop_assert_eq!(r.different, 18 - 2 * gamma);
        let lv = compute_level(&f, 3, 1, 9).unwrap();
        prop_assert!(!lv.lift_failed);
        // x scale^p = w^p + pi^(p level) f0.
        if gamma < 9 {
            let lhs = &f * &lv.scale.pow(3);
            let rhs = &lv.w.pow(3) + &lv.f0.mul_pi_pow(3 * gamma);
            prop_assert!((&lhs - &rhs).is_zero_mod(3 * gamma + 1).unwrap());
        }
    }
}

fn admissible_oracle(t: &DegenType, p: i64, vp: i64, v1: i64) -> bool {
    let (j, g1, g2, k) = (t.j as i64, t.gamma1 as i64, t.gamma2 as i64, t.kappa as i64);
    let s = k - g1 + j;
    let c1 = g1.max(g2) <= k && k <= v1;
    let c2 = g2 <= p * s && s <= g2;
    let c3 = if k < p * g2 { g1 - j == vp / p } else { 0 <= g2 - j && p * (g2 - j) <= vp - p * g1 + k };
    c1 && c2 && c3 && p * j <= g1
}

#[test]
fn enumeration_matches_oracle() {
    for d in 1..=3 {
        let c = ctx(d);
        let (vp, v1) = (c.v_p() as i64, c.v_lambda1() as i64);
        let mut want = vec![];
        for j in 0..=v1 as u32 {
            for g1 in 0..=v1 as u32 {
                for g2 in 0..=v1 as u32 {
                    for k in 0..=v1 as u32 {
                        let t = DegenType::new(j, g1, g2, k);
                        assert_eq!(is_admissible(&t, &c).is_ok(), admissible_oracle(&t, 3, vp, v1), "{t}");
                        if admissible_oracle(&t, 3, vp, v1) {
                            want.push(t);
                        }
                    }
                }
            }
        }
        assert_eq!(enumerate_admissible(&c, None), want);
        let torsor = enumerate_admissible(&c, Some(Filter::Torsor));
        assert!(torsor.iter().all(|t| t.kappa == t.gamma1 && (t.gamma1 as i64) < v1));
    }
}

/// Every valid G(m,n) and every canonical extension passes the axioms.
#[test]
fn hopf_axioms_for_all_small_models() {
    let c = ctx(1);
    for n in 1..=2 {
        for m in 0..=3 {
            if let Ok(g) = ModelGroup::glam_n(&c, m, n) {
                let rep = g.hopf().unwrap().check(g.check_precision()).unwrap();
                assert!(rep.all_pass(), "{g}: {:?}", rep.failures);
            }
        }
    }
    let digits = [c.zero(), c.pi_pow(1), c.pi_pow(2), &c.pi_pow(1) + &c.pi_pow(2)];
    for m in 0..=3 {
        for n in 0..=m {
            for a in &digits {
                for j in 0..3 {
                    let member = phi_membership(&c, m, n, a, j).unwrap()
                        && (j != 1 || phi1_contains(&c, m, n, a).unwrap());
                    match ModelGroup::extension(&c, m, n, a, j) {
                        Ok(g) => {
                            assert!(member);
                            let rep = g.hopf().unwrap().check(g.check_precision()).unwrap();
                            assert!(rep.all_pass(), "{g}: {:?}", rep.failures);
                        }
                        Err(_) => assert!(!member || a.prec() < n || (n > 0 && a.val() == 0)),
                    }
                }
            }
        }
    }
}

/// A parameter outside the extension set fails construction.
#[test]
fn corrupted_parameter_is_rejected() {
    let c = ctx(1);
    assert!(!phi_membership(&c, 2, 1, &c.zero(), 1).unwrap());
    assert!(ModelGroup::extension(&c, 2, 1, &c.zero(), 1).is_err());
    assert!(ModelGroup::extension(&c, 3, 3, &c.pi_pow(2), 1).is_err());
}

/// Composites of model maps are model maps.
#[test]
fn model_maps_compose() {
    let c = ctx(3);
    let z = c.zero();
    let chain: Vec<ModelGroup> =
        [(6, 2), (5, 1), (4, 1)].iter().map(|&(m, n)| ModelGroup::extension(&c, m, n, &z, 1).unwrap()).collect();
    let m12 = model_map(&chain[0], &chain[1]).unwrap().unwrap();
    let m23 = model_map(&chain[1], &chain[2]).unwrap().unwrap();
    let a1 = chain[0].hopf().unwrap();
    let a2 = chain[1].hopf().unwrap();
    let composite: Vec<_> = m23.images.iter().map(|x| a2.alg.substitute(x, &m12.images, &a1.alg)).collect();
    let a3 = chain[2].hopf().unwrap();
    assert!(is_hopf_map(&a1, &a3, &composite).unwrap());
    let direct = model_maps(&chain[0], &chain[2]).unwrap();
    let same = |m: &p2cover_core::groups::ModelMap| {
        m.images.iter().zip(&composite).all(|(x, y)| a1.alg.sub(x, y).iter().all(|v| v.is_zero()))
    };
    assert!(direct.iter().any(same), "{} direct maps, (r,s) = {:?}", direct.len(), direct.iter().map(|m| (m.r, m.s)).collect::<Vec<_>>());
}
