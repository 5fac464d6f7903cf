use fibertool_core::count::{enumerate_m, find_b0, oracle_m, window};
use fibertool_core::curve::{bruteforce_points, param_points, CurveSpec};
use fibertool_core::reduce::{normalize_curve, reduce_param};
use fibertool_core::{BiPoly, ElementaryMap, PlaneAutomorphism, PolyParam, Rat, UniPoly};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rat::new(n, d))
}

fn uni(max_deg: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(rat(), 1..=max_deg + 1).prop_map(UniPoly::from_coeffs)
}

fn nonconstant(max_deg: usize) -> impl Strategy<Value = UniPoly> {
    (prop::collection::vec(-9i64..=9, 1..=max_deg), 1i64..=9, prop::sample::select(vec![1i64, 2, 6]))
        .prop_map(|(mut c, lead, den)| {
            c.push(if lead % 2 == 0 { -lead / 2 - 1 } else { lead });
            UniPoly::from_coeffs(c.into_iter().map(|x| Rat::new(x, den)).collect())
        })
}

fn bi() -> impl Strategy<Value = BiPoly> {
    prop::collection::vec(((0u32..4, 0u32..4), rat()), 0..6).prop_map(BiPoly::from_terms)
}

fn step() -> impl Strategy<Value = ElementaryMap> {
    let unit = prop::sample::select(vec![Rat::one(), -Rat::one()]);
    prop_oneof![
        Just(ElementaryMap::Swap),
        (-5i64..=5, -5i64..=5).prop_map(|(c, e)| ElementaryMap::shift(Rat::from(c), Rat::from(e))),
        (unit.clone(), unit, prop::collection::vec(-5i64..=5, 1..=3)).prop_map(|(l, m, s)| {
            ElementaryMap::triangular(l, m, UniPoly::from_ints(&s)).unwrap()
        }),
    ]
}

fn rational_step() -> impl Strategy<Value = ElementaryMap> {
    prop_oneof![
        step(),
        (rat(), rat(), uni(2)).prop_filter_map("nonzero scalings", |(l, m, s)| {
            ElementaryMap::triangular(l, m, s).ok()
        }),
        (rat(), rat()).prop_map(|(c, e)| ElementaryMap::shift(c, e)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_evaluates(p in uni(4), q in uni(3), t in rat()) {
        prop_assert_eq!(p.compose(&q).eval(&t), p.eval(&q.eval(&t)));
    }

    #[test]
    fn ring_operations_evaluate(p in uni(4), q in uni(4), t in rat()) {
        prop_assert_eq!((&p * &q).eval(&t), p.eval(&t) * q.eval(&t));
        prop_assert_eq!((&p - &q).eval(&t), p.eval(&t) - q.eval(&t));
    }

    #[test]
    fn division_identity(p in uni(5), q in nonconstant(3)) {
        let (quo, rem) = p.div_rem(&q);
        prop_assert_eq!(&(&quo * &q) + &rem, p);
        prop_assert!(rem.degree().unwrap_or(0) < q.degree().unwrap());
    }

    #[test]
    fn primitive_form_round_trip(p in uni(5)) {
        prop_assume!(!p.is_zero());
        let pf = p.primitive_form().unwrap();
        prop_assert_eq!(pf.to_poly(), p);
        prop_assert!(pf.denom > 0.into());
    }

    #[test]
    fn print_parse_round_trip(p in uni(5), b in bi()) {
        prop_assert_eq!(p.to_string().parse::<UniPoly>().unwrap(), p);
        prop_assert_eq!(b.to_string().parse::<BiPoly>().unwrap(), b);
    }

    #[test]
    fn substitution_is_a_homomorphism(p in bi(), q in bi(), u in bi(), v in bi(), x in rat(), y in rat()) {
        let (ux, vy) = (u.eval(&x, &y), v.eval(&x, &y));
        prop_assert_eq!(p.substitute(&u, &v).eval(&x, &y), p.eval(&ux, &vy));
        prop_assert_eq!((&p * &q).substitute(&u, &v), &p.substitute(&u, &v) * &q.substitute(&u, &v));
    }

    #[test]
    fn automorphism_round_trip(steps in prop::collection::vec(rational_step(), 0..5), x in rat(), y in rat()) {
        let phi = PlaneAutomorphism::from_steps(steps);
        let inv = phi.invert();
        prop_assert_eq!(inv.apply_point(&phi.apply_point(&(x.clone(), y.clone()))), (x.clone(), y.clone()));
        prop_assert_eq!(phi.jacobian_det() * inv.jacobian_det(), Rat::one());
        prop_assert_eq!(phi.then(&inv).coordinate_polys(), (BiPoly::x(), BiPoly::y()));
    }

    #[test]
    fn pullback_matches_pushforward(steps in prop::collection::vec(rational_step(), 0..4), p in bi(), x in rat(), y in rat()) {
        let phi = PlaneAutomorphism::from_steps(steps);
        let (u, v) = phi.apply_point(&(x.clone(), y.clone()));
        prop_assert_eq!(phi.apply_poly(&p).eval(&x, &y), p.eval(&u, &v));
    }

    #[test]
    fn json_round_trip(steps in prop::collection::vec(rational_step(), 0..5)) {
        let phi = PlaneAutomorphism::from_steps(steps);
        let js = serde_json::to_string(&phi).unwrap();
        prop_assert_eq!(serde_json::from_str::<PlaneAutomorphism>(&js).unwrap(), phi);
    }

    #[test]
    fn unit_steps_have_integral_inverse(steps in prop::collection::vec(step(), 0..5)) {
        prop_assert!(PlaneAutomorphism::from_steps(steps).has_integral_inverse());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Lines through the origin's image: `P = x ∘ Φ₀⁻¹` with parametrisation
    /// `Φ₀(0, t)` always reduces back to a coordinate.
    #[test]
    fn reduction_recovers_lines(steps in prop::collection::vec(step(), 1..5)) {
        let phi0 = PlaneAutomorphism::from_steps(steps);
        let (u, v) = phi0.apply(&UniPoly::zero(), &UniPoly::var());
        prop_assume!(u.degree().unwrap_or(0).max(v.degree().unwrap_or(0)) <= 12);
        let p = phi0.invert().coordinate_polys().0;
        let param = PolyParam::new(u, v);
        let res = normalize_curve(&p, &Rat::zero(), &param).unwrap();
        let (a, _) = res.normal_form.clone().unwrap();
        prop_assert!(!a.is_zero());
        prop_assert!(res.integral_inverse);
        for &(dp, dq) in &res.degree_trace {
            prop_assert!(dp.max(dq) % dp.min(dq) == 0);
        }
        let bound = param.p.degree().unwrap_or(0) + param.q.degree().unwrap_or(0);
        prop_assert!(res.degree_trace.len() <= bound);
        let again = reduce_param(&param).unwrap();
        prop_assert_eq!(again.phi, res.phi);
    }

    #[test]
    fn window_is_sound(p in nonconstant(4), scale in 1u64..50, samples in prop::collection::vec((-1000i64..=1000, 1i64..=7), 40)) {
        let eps = Rat::new(1, 2);
        let b0 = find_b0(&p, &eps).unwrap();
        prop_assume!(b0 <= 1 << 20);
        let b = b0 * scale;
        let w = window(&p, b, &eps).unwrap();
        let width = &w.t_plus - &w.t_minus;
        for (n, d) in samples {
            // points spread over ten window widths on either side
            let offset = &width * &Rat::new(n.abs(), 100 * d);
            let t = if n >= 0 { &w.t_plus + &offset } else { &w.t_minus - &offset };
            prop_assert!(p.eval(&t).abs() > Rat::from(b), "t = {}", t);
        }
    }

    #[test]
    fn enumeration_matches_oracle(p in nonconstant(4), k in 0u32..4) {
        let eps = Rat::new(1, 2);
        let b0 = find_b0(&p, &eps).unwrap();
        prop_assume!(b0 <= 2000);
        let b = b0 << k;
        let fast = enumerate_m(&p, b, &eps).unwrap();
        let slow = oracle_m(&p, b).unwrap();
        prop_assert_eq!(&fast.parameters, &slow.parameters);
        let ad = p.primitive_form().unwrap().leading().clone();
        for t in &fast.parameters {
            prop_assert!((&ad % t.denom()) == 0.into());
            let v = p.eval(t);
            prop_assert!(v.is_integer() && v.abs() <= Rat::from(b));
        }
    }

    #[test]
    fn graphs_match_bruteforce(q in nonconstant(3), b in 20u64..120) {
        // the graph y = q(x) has parametrisation (t, q(t))
        let param = PolyParam::new(UniPoly::var(), q.clone());
        prop_assume!(fibertool_core::curve::param_threshold(&param, &Rat::new(1, 2)).unwrap() <= b);
        let curve = &BiPoly::y() - &BiPoly::from_uni_x(&q);
        let spec = CurveSpec::new(curve, Rat::zero()).unwrap();
        let fast = param_points(&param, b, &Rat::new(1, 2)).unwrap();
        let slow = bruteforce_points(&spec, b).unwrap();
        prop_assert_eq!(fast.points, slow.points);
    }
}
