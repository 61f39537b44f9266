use proptest::prelude::*;

use greenheight::algebra::{MultiPoly, Rat};
use greenheight::automorphism::{PolyMap, RegularAutomorphism};
use greenheight::certificate::{build_certificate_n2, Certificate};
use greenheight::globalheight::weil_height;
use greenheight::localgreen::{Direction, ForwardEscape, GreenConfig, LocalDynamics};
use greenheight::places::Place;

const XY: [&str; 2] = ["x", "y"];

fn henon() -> (RegularAutomorphism, Certificate) {
    let f = PolyMap::parse(&["y", "y^2 - x"], &XY).unwrap();
    let g = PolyMap::parse(&["x^2 - y", "x"], &XY).unwrap();
    let a = RegularAutomorphism::new(f, g).unwrap();
    let c = build_certificate_n2(&a).unwrap();
    (a, c)
}

fn rat(max: i64) -> impl Strategy<Value = Rat> {
    (-max..=max, 1..=max).prop_map(|(n, d)| Rat::new(n, d))
}

fn point(max: i64) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(rat(max), 2)
}

fn place() -> impl Strategy<Value = Place> {
    prop_oneof![
        Just(Place::Archimedean),
        Just(Place::Finite(2)),
        Just(Place::Finite(3)),
        Just(Place::Finite(5)),
    ]
}

/// Points whose size at `place` ranges widely.
fn scaled_point() -> impl Strategy<Value = (Place, Vec<Rat>)> {
    (place(), point(30), -6i64..=6).prop_map(|(v, x, k)| {
        let s = match v {
            Place::Archimedean => Rat::from_i64(10).powi(k),
            Place::Finite(p) => Rat::from_u64(p).powi(-k),
        };
        (v, x.into_iter().map(|c| c * &s).collect())
    })
}

fn poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(((0u32..4, 0u32..4), rat(9)), 1..6)
        .prop_map(|terms| MultiPoly::from_terms(2, terms.into_iter().map(|((a, b), c)| (vec![a, b], c))))
}

fn ln_norm(place: Place, x: &[Rat]) -> f64 {
    place.norm(x).to_f64().ln()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_agrees_with_evaluation(p in poly(), q1 in poly(), q2 in poly(), x in point(20)) {
        let c = p.compose(&[q1.clone(), q2.clone()], 100_000).unwrap();
        let inner = [q1.eval(&x), q2.eval(&x)];
        prop_assert_eq!(c.eval(&x), p.eval(&inner));
    }

    #[test]
    fn homogenization_restricts_to_original(p in poly(), x in point(20)) {
        let h = p.homogenize(p.degree()).unwrap();
        prop_assert!(h.is_homogeneous() || h.is_zero());
        let lifted = [x[0].clone(), x[1].clone(), Rat::one()];
        prop_assert_eq!(h.eval(&lifted), p.eval(&x));
    }

    #[test]
    fn render_parse_round_trip(p in poly()) {
        let s = p.render(&XY);
        prop_assert_eq!(MultiPoly::parse(&s, &XY).unwrap(), p);
    }

    #[test]
    fn rat_display_round_trip(r in rat(1_000_000)) {
        prop_assert_eq!(r.to_string().parse::<Rat>().unwrap(), r);
    }

    #[test]
    fn henon_inverse_is_exact(x in point(1000)) {
        let (a, _) = henon();
        let fx = a.forward().eval(&x).unwrap();
        prop_assert_eq!(a.inverse().eval(&fx).unwrap(), x);
    }

    #[test]
    fn weil_height_is_nonnegative_and_symmetric(x in point(1000)) {
        let h = weil_height(&x);
        prop_assert!(h >= 0.0);
        let swapped = vec![x[1].clone(), x[0].clone()];
        prop_assert!((weil_height(&swapped) - h).abs() < 1e-12);
        let negated: Vec<Rat> = x.iter().map(|c| -c).collect();
        prop_assert!((weil_height(&negated) - h).abs() < 1e-12);
    }

    #[test]
    fn filtration_partitions_and_traps((v, x) in scaled_point()) {
        let (a, c) = henon();
        let local = LocalDynamics::new(&a, &c, v);
        for filt in [local.filtration(), local.strict_filtration()] {
            let k = filt.classify(&x).unwrap();
            prop_assert_eq!(k.in_b as u8 + k.in_uplus as u8 + k.in_uminus as u8, 1);
            if !k.in_uminus {
                prop_assert!(!filt.classify(&a.forward().eval(&x).unwrap()).unwrap().in_uminus);
            }
            if !k.in_uplus {
                prop_assert!(!filt.classify(&a.inverse().eval(&x).unwrap()).unwrap().in_uplus);
            }
        }
    }

    #[test]
    fn v_plus_is_forward_invariant((v, x) in scaled_point()) {
        let (a, c) = henon();
        let filt = LocalDynamics::new(&a, &c, v).filtration();
        if filt.in_v_plus(&x).unwrap() {
            prop_assert!(filt.in_v_plus(&a.forward().eval(&x).unwrap()).unwrap());
        }
        if filt.in_v_minus(&x).unwrap() {
            prop_assert!(filt.in_v_minus(&a.inverse().eval(&x).unwrap()).unwrap());
        }
        prop_assert!(!(filt.in_n_plus(&x).unwrap() && filt.in_n_minus(&x).unwrap()));
    }

    #[test]
    fn green_satisfies_local_bounds((v, x) in scaled_point()) {
        let (a, c) = henon();
        let local = LocalDynamics::new(&a, &c, v);
        let k = local.constants().clone();
        let g = local.green(&x, Direction::Forward, &GreenConfig::with_tolerance(1e-8)).unwrap();
        let l = ln_norm(v, &x);
        prop_assert!(g.lower >= -1e-12);
        prop_assert!(g.lower <= l.max(0.0) + k.c_f.value() + 1e-9);
        if local.filtration().in_v_plus(&x).unwrap() {
            prop_assert!(g.upper >= l + k.c_plus.value() - 1e-9);
        }
    }

    #[test]
    fn green_functional_equation((v, x) in scaled_point()) {
        let (a, c) = henon();
        let local = LocalDynamics::new(&a, &c, v);
        let cfg = GreenConfig::with_tolerance(1e-8);
        let fx = a.forward().eval(&x).unwrap();
        let g = local.green(&x, Direction::Forward, &cfg).unwrap();
        let gf = local.green(&fx, Direction::Forward, &cfg).unwrap();
        prop_assert!((gf.value - 2.0 * g.value).abs() <= gf.error_radius + 2.0 * g.error_radius + 1e-12);
        let gm = local.green(&x, Direction::Backward, &cfg).unwrap();
        let gmf = local.green(&fx, Direction::Backward, &cfg).unwrap();
        prop_assert!((2.0 * gmf.value - gm.value).abs() <= 2.0 * gmf.error_radius + gm.error_radius + 1e-12);
    }

    #[test]
    fn escaping_points_have_positive_green((v, x) in scaled_point()) {
        let (a, c) = henon();
        let local = LocalDynamics::new(&a, &c, v);
        let g = local.green(&x, Direction::Forward, &GreenConfig::with_tolerance(1e-8)).unwrap();
        if let Ok(e) = local.classify_escape(&x, 32) {
            match e.forward {
                ForwardEscape::Wplus => prop_assert!(g.lower > 0.0),
                ForwardEscape::Kplus => prop_assert!(g.value.abs() <= g.error_radius),
            }
        }
    }
}
