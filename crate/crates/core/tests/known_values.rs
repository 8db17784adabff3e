//! Worked values for the ring, the base rings, the model groups and the
//! analyzer, each checked against an independent computation.

use p2cover_core::analysis::{compute_level, prepare_cover, solve_threshold};
use p2cover_core::degen::{enumerate_admissible, is_admissible, realize, Filter};
use p2cover_core::expr::parse_element;
use p2cover_core::groups::{
    ep, hom_group, model_map, phi1_canonical, phi1_contains, phi_membership, torsor_equations,
    SpecialFiber,
};
use p2cover_core::residue::{frobenius_span, FpPoly, SpanResult};
use p2cover_core::{
    analyze, analyze_zp, BaseRing, DegenType, Error, ModelGroup, PAdicContext, QuotientB1, Valuation,
};

fn ctx(p: u64, d: u32) -> PAdicContext {
    PAdicContext::new(p, d, 0).unwrap()
}

fn curve(p: u64, d: u32) -> BaseRing {
    BaseRing::local_curve(&ctx(p, d), 16).unwrap()
}

#[test]
fn context_constants() {
    for (p, d, e, v1, v2) in [(3, 1, 6, 3, 1), (3, 3, 18, 9, 3), (5, 1, 20, 5, 1)] {
        let c = ctx(p, d);
        assert_eq!((c.e as u32, c.v_p(), c.v_lambda1(), c.v_lambda2()), (e, e, v1, v2));
        assert_eq!(c.eta().valuation(), Valuation::Exact(v2));
        assert_eq!(c.default_precision(), 4 * e);
    }
}

#[test]
fn zeta_is_one_plus_pi_to_the_d() {
    for d in [1, 2, 3] {
        let c = ctx(3, d);
        let z = &c.one() + &c.pi_pow(d);
        assert!(c.zeta2().eq_to_prec(&z));
        // Phi_9(zeta) = 1 + zeta^3 + zeta^6 = 0.
        let phi = &(&c.one() + &z.pow(3)) + &z.pow(6);
        assert!(phi.is_zero());
        assert!(c.lambda1().eq_to_prec(&(&z.pow(3) - &c.one())));
    }
}

#[test]
fn eta_pi_from_its_series() {
    let c = ctx(3, 1);
    let l2 = c.lambda2();
    // eta = lambda2 - lambda2^2 / 2.
    let half = c.from_i64(2).inv_unit().unwrap();
    let eta = &l2 - &(&l2.pow(2) * &half);
    let unit = c.lambda1().div_pi_pow(c.v_lambda1()).unwrap();
    let want = &eta * &unit.inv_unit().unwrap();
    assert!(c.eta_pi().eq_to_prec(&want));
    assert_eq!(c.eta_pi().valuation(), Valuation::Exact(1));
}

#[test]
fn basic_arithmetic() {
    let c = ctx(3, 1);
    assert_eq!(&c.one() * &c.one(), c.one());
    let pi = c.pi_pow(1);
    let prod = &(&c.one() + &pi) * &(&c.one() - &pi);
    assert!(prod.eq_to_prec(&(&c.one() - &c.pi_pow(2))));
    assert_eq!(prod.valuation(), Valuation::Exact(0));
    assert_eq!(c.from_i64(3).valuation(), Valuation::Exact(6));
    let z = c.zero().truncate(24);
    assert_eq!(z.valuation(), Valuation::AtLeast(24));
    assert_eq!(z.valuation().to_string(), ">=24");
}

#[test]
fn unit_inverses() {
    let c = ctx(3, 1);
    assert_eq!(c.one().inv_unit().unwrap(), c.one());
    let z = c.zeta2();
    assert!(z.inv_unit().unwrap().eq_to_prec(&z.pow(8)));
    let u = &c.one() + &c.from_i64(3);
    assert!((&u * &u.inv_unit().unwrap()).eq_to_prec(&c.one()));
    assert!(matches!(c.pi_pow(1).inv_unit(), Err(Error::InvalidInput(_))));
}

#[test]
fn exact_division() {
    let c = ctx(3, 1);
    assert!(c.pi_pow(3).div_pi_pow(3).unwrap().eq_to_prec(&c.one()));
    let l9 = &c.lambda2().pow(9) + &(&c.lambda2() * &c.zero());
    let x = &(&c.one() + &c.lambda2()).pow(9) - &c.one();
    assert!(x.is_zero());
    assert!(x.div_pi_pow(9).unwrap().is_zero());
    assert_eq!(l9.valuation(), Valuation::Exact(9));
    assert_eq!(c.from_i64(3).div_pi_pow(1).unwrap().valuation(), Valuation::Exact(5));
}

#[test]
fn base_ring_examples() {
    let a = curve(3, 3);
    let f = parse_element("1 + pi^12*(1+Z^2)", &a).unwrap();
    let g = &a.one() + &parse_element("1+Z^2", &a).unwrap().mul_pi_pow(12);
    assert_eq!(f, g);
    assert!(parse_element("0", &a).unwrap().is_zero());
    let one_plus_z = parse_element("1+Z", &a).unwrap();
    assert_eq!(one_plus_z.pow(3), parse_element("1+3*Z+3*Z^2+Z^3", &a).unwrap());
}

#[test]
fn b1_relation() {
    let a = curve(3, 1);
    let f1 = parse_element("1+Z^2", &a).unwrap();
    for gamma in 0..=3 {
        let b = QuotientB1::new(&a, gamma, &f1).unwrap();
        let x = &b.one() + &b.t().mul_pi_pow(gamma);
        let lhs = &x * &x.pow(2);
        let rhs = b.constant(&(&a.one() + &f1.mul_pi_pow(3 * gamma)));
        assert!(lhs.eq_to_prec(&rhs), "gamma {gamma}");
    }
}

#[test]
fn residue_roots_and_membership() {
    let a = curve(3, 1);
    assert!(parse_element("1+Z^2", &a).unwrap().residue_pth_root(1).is_none());
    let r = parse_element("1+Z^3", &a).unwrap().residue_pth_root(1).unwrap();
    assert_eq!(r, FpPoly::new(3, vec![1, 1]));
    // Z against F_3[Z^3][1+Z^2]: exponent 1 is not in the semigroup <2, 3>.
    let f1 = FpPoly::new(3, vec![1, 0, 1]);
    let gens: Vec<Vec<FpPoly>> = (0..3).map(|t| vec![f1.pow(t)]).collect();
    let z = [FpPoly::monomial(3, 1, 1)];
    assert!(matches!(frobenius_span(3, &gens, &z), SpanResult::NotMember));
    // Z^2 = (1 + Z^2) - 1 is a member.
    let z2 = [FpPoly::monomial(3, 1, 2)];
    assert!(matches!(frobenius_span(3, &gens, &z2), SpanResult::Member { .. }));
}

#[test]
fn group_parameters() {
    let c = ctx(3, 1);
    assert_eq!(ModelGroup::glam_n(&c, 0, 1).unwrap().special_fiber_kind().unwrap(), SpecialFiber::MuType);
    assert_eq!(ModelGroup::glam_n(&c, 1, 1).unwrap().special_fiber_kind().unwrap(), SpecialFiber::AlphaType);
    assert_eq!(
        ModelGroup::glam_n(&c, 3, 1).unwrap().special_fiber_kind().unwrap(),
        SpecialFiber::AlphaCrossEtale
    );
    // p(p-1)(v(lambda2)+1) = 12 > v(p) = 6.
    assert!(ModelGroup::glam_n(&c, 2, 2).is_err());
    let (order, _) = hom_group(&ModelGroup::glam_n(&c, 2, 1).unwrap(), &ModelGroup::glam_n(&c, 2, 1).unwrap()).unwrap();
    assert_eq!(order, 3);
    let c5 = ctx(3, 5);
    let (order, _) =
        hom_group(&ModelGroup::glam_n(&c5, 1, 1).unwrap(), &ModelGroup::glam_n(&c5, 4, 1).unwrap()).unwrap();
    assert_eq!(order, 1);
}

#[test]
fn extension_parameters() {
    let c = ctx(3, 3);
    assert_eq!(ep(&c.zero()), vec![c.one(), c.zero(), c.zero()]);
    for (m, n) in [(5, 1), (9, 3), (4, 2), (3, 3)] {
        assert!(phi_membership(&c, m, n, &c.zero(), 0).unwrap());
        assert_eq!(phi_membership(&c, m, n, &c.zero(), 1).unwrap(), m >= 3 * n, "({m},{n})");
    }
    // m < pn with pm - n >= v(p): (7,3) has 21 - 3 = 18.
    let a = phi1_canonical(&c, 7, 3).unwrap().unwrap();
    assert!(phi_membership(&c, 7, 3, &a, 1).unwrap());
    assert!(phi1_contains(&c, 7, 3, &a).unwrap());
    assert!(phi1_canonical(&c, 6, 3).unwrap().is_none());
    assert_eq!(phi1_canonical(&c, 9, 9).unwrap().unwrap(), c.eta_pi());
    assert_eq!(phi1_canonical(&c, 9, 3).unwrap().unwrap(), c.zero());
    assert!(ModelGroup::extension(&c, 0, 0, &c.zero(), 1).is_ok());
    // A parameter outside the set is rejected at construction.
    assert!(ModelGroup::extension(&c, 9, 9, &c.zero(), 1).is_err());
}

#[test]
fn model_maps_follow_the_congruence() {
    let c = ctx(3, 3);
    let z = c.zero();
    let g = ModelGroup::extension(&c, 5, 1, &z, 1).unwrap();
    let id = model_map(&g, &g).unwrap().unwrap();
    assert_eq!((id.r, id.s, id.is_isomorphism), (1, 0, true));
    let zp2 = ModelGroup::extension(&c, 9, 9, &c.eta_pi(), 1).unwrap();
    // From Z/p^2 to E(9, 3, a, 1) with a = eta pi^9/lambda1 mod pi^3.
    let tgt = ModelGroup::extension(&c, 9, 3, &c.eta_pi(), 1).unwrap();
    assert!(model_map(&zp2, &tgt).unwrap().is_some());
    // v(eta pi^9/lambda1) = 3, so the same target also has a = 0.
    let same = ModelGroup::extension(&c, 9, 3, &c.zero(), 1).unwrap();
    assert!(model_map(&zp2, &same).unwrap().is_some());
    let g1 = ModelGroup::extension(&c, 7, 2, &c.pi_pow(1), 1).unwrap();
    let g0 = ModelGroup::extension(&c, 7, 2, &z, 1).unwrap();
    assert!(model_map(&g1, &g0).unwrap().is_none());
}

#[test]
fn torsor_equations_for_mu_p2() {
    let a = curve(3, 1);
    let c = &a.ctx;
    let g = ModelGroup::extension(c, 0, 0, &c.zero(), 1).unwrap();
    let f1 = parse_element("Z+Z^2", &a).unwrap();
    let f2 = parse_element("1+Z", &a).unwrap();
    let t = torsor_equations(&g, &f1, &f2).unwrap();
    // u1 = 1 + f1, u2 = 1 + f2, f = u1 u2^3.
    let want = &(&a.one() + &f1) * &(&a.one() + &f2).pow(3);
    assert_eq!(t.kummer_generator(), want);
}

#[test]
fn prepare_cover_strips_pi() {
    let a = curve(3, 1);
    let u = parse_element("1+Z^2", &a).unwrap();
    assert!(prepare_cover(&u.mul_pi_pow(9)).unwrap().eq_to_prec(&u));
    assert!(matches!(prepare_cover(&u.mul_pi_pow(1)), Err(Error::Hypothesis(_))));
    assert_eq!(prepare_cover(&u).unwrap(), u);
}

#[test]
fn levels() {
    let a = curve(3, 1);
    let f = parse_element("1+pi^9*(1+Z^2)", &a).unwrap();
    let lv = compute_level(&f, 3, 2, 1).unwrap();
    assert_eq!(lv.level, 1);
    assert_eq!(lv.f0.residue(), FpPoly::new(3, vec![1, 0, 1]));
    let lv = compute_level(&parse_element("1+Z^2", &a).unwrap(), 3, 2, 1).unwrap();
    assert_eq!(lv.level, 0);
    assert_eq!(compute_level(&a.one(), 3, 2, 1).unwrap().level, 1);
}

#[test]
fn zp_analysis() {
    let a = curve(3, 3);
    let r = analyze_zp(&parse_element("1+Z^2", &a).unwrap()).unwrap();
    assert_eq!((r.gamma, r.different), (0, 18));
    let r = analyze_zp(&a.one()).unwrap();
    assert_eq!((r.gamma, r.different), (9, 0));
    let r = analyze_zp(&parse_element("1+pi^9*(1+Z^2)", &a).unwrap()).unwrap();
    assert_eq!((r.gamma, r.different), (3, 12));
}

#[test]
fn threshold_examples() {
    let a = curve(3, 3);
    let f1 = parse_element("1+Z^2", &a).unwrap();
    let b = QuotientB1::new(&a, 4, &f1).unwrap();
    let (k, alpha) = solve_threshold(&b.one(), 4, 1, 0).unwrap();
    assert_eq!((k, alpha.is_zero()), (4, true));
    let (k, alpha) = solve_threshold(&b.t(), 4, 1, 0).unwrap();
    assert_eq!(k, 5);
    assert!(alpha.is_zero_mod(1).unwrap());
    // H = E_p(a T) with a^p = 0 mod pi^gamma2.
    let c = &a.ctx;
    let pi = c.pi_pow(1);
    let mut h = b.zero();
    for co in ep(&pi).iter().rev() {
        h = &(&h * &b.t()) + &b.constant(&a.constant(co));
    }
    let (k, alpha) = solve_threshold(&h, 4, 3, 1).unwrap();
    assert_eq!(k, 4);
    assert!((&alpha - &pi).is_zero_mod(3).unwrap());
}

#[test]
fn analysis_examples() {
    let a = curve(3, 3);
    let r = analyze(&parse_element("(1+pi^12*(1+Z^2))*(1+Z^2+pi^3*Z)^3", &a).unwrap()).unwrap();
    assert_eq!(r.degen, DegenType::new(0, 4, 1, 5));
    assert!(!r.strongly_extendible);
    let r = analyze(&parse_element("1+Z^2", &a).unwrap()).unwrap();
    assert_eq!(r.degen, DegenType::new(0, 0, 0, 0));
    assert_eq!(r.effective_model, ModelGroup::extension(&a.ctx, 0, 0, &a.ctx.zero(), 1).unwrap());
    // Torsor under the Z/p^2 presentation.
    let c = &a.ctx;
    let g = ModelGroup::extension(c, 9, 9, &c.eta_pi(), 1).unwrap();
    let f1 = parse_element("1+Z^2", &a).unwrap();
    let t = torsor_equations(&g, &f1, &a.z().unwrap()).unwrap();
    let r = analyze(&t.kummer_generator()).unwrap();
    assert_eq!(r.degen, DegenType::new(3, 9, 9, 9));
}

#[test]
fn admissibility_and_enumeration() {
    let c = ctx(3, 3);
    assert!(is_admissible(&DegenType::new(0, 4, 1, 5), &c).is_ok());
    assert!(is_admissible(&DegenType::new(0, 0, 0, 0), &c).is_ok());
    let c1 = ctx(3, 1);
    let all = enumerate_admissible(&c1, None);
    assert!(all.contains(&DegenType::new(1, 3, 1, 3)));
    for g2 in 1..=3 {
        assert!(all.contains(&DegenType::new(1, 3, g2, 3)));
    }
    for t in &all {
        let shift = t.kappa + t.j - t.gamma1;
        assert!(shift <= t.gamma2.min(c1.v_lambda2()), "{t}");
    }
    let torsor = enumerate_admissible(&c1, Some(Filter::Torsor));
    let want: Vec<_> = all.iter().copied().filter(|t| t.kappa == t.gamma1 && t.gamma1 < 3).collect();
    assert_eq!(torsor, want);
}

#[test]
fn realization_examples() {
    let a = curve(3, 1);
    let r = realize(&DegenType::new(1, 3, 1, 3), &a).unwrap();
    assert_eq!(r.report.degen, DegenType::new(1, 3, 1, 3));
    assert_eq!(r.torsor.model.to_string(), "E(3,1,0,1)");
    let r = realize(&DegenType::new(0, 0, 0, 0), &a).unwrap();
    assert_eq!(r.torsor.model.to_string(), "E(0,0,0,1)");
    let a3 = curve(3, 3);
    // gamma1 >= p gamma2 and j = gamma2: a torsor under E(gamma1, gamma2, 0, 1).
    let r = realize(&DegenType::new(2, 6, 2, 6), &a3).unwrap();
    assert_eq!(r.torsor.model.to_string(), "E(6,2,0,1)");
    assert!(matches!(realize(&DegenType::new(0, 4, 1, 5), &a3), Err(Error::InvalidInput(_))));
}
