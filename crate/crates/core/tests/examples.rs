use greenheight::algebra::{parse_point, MultiPoly, Rat};
use greenheight::automorphism::{
    algebraic_stability_degrees, regularity_check, verify_inverse, PolyMap, RegularAutomorphism, Regularity,
};
use greenheight::certificate::{
    build_certificate_n2, place_constants, upper_bound_constant, verify_certificate, Certificate,
};
use greenheight::globalheight::{
    canonical_heights, detect_periodic, functional_equation_check, orbit_height, weil_height, HeightConfig,
};
use greenheight::localgreen::{
    classify_escape, classify_filtration, green, green_inverse, BackwardEscape, ForwardEscape, GreenConfig,
};
use greenheight::places::{good_reduction_test, point_lognorm, Place, Verdict};
use greenheight::ErrorKind;

const XY: [&str; 2] = ["x", "y"];
const XYT: [&str; 3] = ["X", "Y", "T"];

fn map(c: [&str; 2]) -> PolyMap {
    PolyMap::parse(&c, &XY).unwrap()
}

fn henon() -> (RegularAutomorphism, Certificate) {
    let a = RegularAutomorphism::new(map(["y", "y^2 - x"]), map(["x^2 - y", "x"])).unwrap();
    let c = build_certificate_n2(&a).unwrap();
    (a, c)
}

fn pt(s: &str) -> Vec<Rat> {
    parse_point(s).unwrap()
}

fn poly(s: &str) -> MultiPoly {
    MultiPoly::parse(s, &XY).unwrap()
}

#[test]
fn polynomial_evaluation() {
    assert_eq!(poly("y^2 - x").eval(&pt("0,2")), Rat::from_i64(4));
    assert_eq!(MultiPoly::zero(2).eval(&pt("5,7")), Rat::zero());
    let cube = MultiPoly::parse("x^3", &["x"]).unwrap();
    assert_eq!(cube.eval(&pt("2/3")), Rat::new(8, 27));
}

#[test]
fn polynomial_composition() {
    let inner = [poly("y"), poly("y^2 - x")];
    assert_eq!(poly("y").compose(&inner, 1000).unwrap(), poly("y^2 - x"));
    assert_eq!(poly("x").compose(&[poly("x"), poly("y")], 1000).unwrap(), poly("x"));
    let c = poly("y^2 - x").compose(&inner, 1000).unwrap();
    assert_eq!(c, poly("y^4 - 2*x*y^2 + x^2 - y"));
    assert_eq!(c.num_terms(), 4);
    assert_eq!(poly("x").compose(&[poly("x")], 1000).unwrap_err().kind(), ErrorKind::Input);
}

#[test]
fn homogenization_and_top_forms() {
    assert_eq!(poly("y").homogenize(2).unwrap().render(&XYT), "Y*T");
    assert_eq!(poly("y^2 - x").homogenize(2).unwrap().render(&XYT), "Y^2 - X*T");
    assert_eq!(poly("1").homogenize(3).unwrap().render(&XYT), "T^3");
    assert_eq!(poly("x^3").homogenize(2).unwrap_err().kind(), ErrorKind::Input);
    let f = map(["y", "y^2 - x"]);
    let top = f.top_forms();
    assert_eq!(top[0], MultiPoly::zero(2));
    assert_eq!(top[1], poly("y^2"));
    assert_eq!(poly("x^2 + y^2").homogeneous_part(2), poly("x^2 + y^2"));
}

#[test]
fn inverse_verification() {
    let f = map(["y", "y^2 - x"]);
    assert!(verify_inverse(&f, &map(["x^2 - y", "x"]), 1000).unwrap());
    assert!(verify_inverse(&map(["x", "y"]), &map(["x", "y"]), 1000).unwrap());
    assert!(!verify_inverse(&f, &map(["x", "y"]), 1000).unwrap());
}

#[test]
fn regularity() {
    match regularity_check(&map(["y", "y^2 - x"]), &map(["x^2 - y", "x"])) {
        Regularity::Regular { i_plus, i_minus } => {
            assert_eq!(i_plus, "{(1:0:0)}");
            assert_eq!(i_minus, "{(0:1:0)}");
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        regularity_check(&map(["x", "y + x^2"]), &map(["x", "y - x^2"])),
        Regularity::NotRegular { .. }
    ));
    let names = ["x", "y", "z"];
    let f = PolyMap::parse(&["y", "z", "z^2 - x"], &names).unwrap();
    let g = PolyMap::parse(&["y^2 - z", "x", "y"], &names).unwrap();
    assert!(matches!(regularity_check(&f, &g), Regularity::Undecided { .. }));
}

#[test]
fn iteration() {
    let (a, _) = henon();
    assert_eq!(a.iterate(&pt("0,2"), 3, 1 << 20).unwrap(), pt("14,192"));
    assert_eq!(a.iterate(&pt("3,5"), 0, 1 << 20).unwrap(), pt("3,5"));
    assert_eq!(a.iterate(&pt("2,2"), 5, 1 << 20).unwrap(), pt("2,2"));
    assert_eq!(a.iterate(&pt("14,192"), -3, 1 << 20).unwrap(), pt("0,2"));
    let x = pt("1/3,2");
    let y = a.iterate(&x, 4, 1 << 20).unwrap();
    assert_eq!(a.iterate(&y, -7, 1 << 20).unwrap(), a.iterate(&x, -3, 1 << 20).unwrap());
    assert_eq!(a.iterate(&pt("0,2"), 40, 1000).unwrap_err().kind(), ErrorKind::Resource);
}

#[test]
fn stability_degrees() {
    assert_eq!(algebraic_stability_degrees(&map(["y", "y^2 - x"]), 3, 100_000).unwrap(), vec![2, 4, 8]);
    assert_eq!(algebraic_stability_degrees(&map(["x", "y + x^2"]), 3, 100_000).unwrap(), vec![2, 2, 2]);
    assert_eq!(
        algebraic_stability_degrees(&map(["y", "x"]), 3, 100_000).unwrap_err().kind(),
        ErrorKind::Input
    );
}

#[test]
fn certificates() {
    let (a, c) = henon();
    assert!(verify_certificate(&a, &c).unwrap());
    assert!(c.m <= 3);
    let mut broken = c.clone();
    let (i, j) = (0..2)
        .flat_map(|i| (0..2).map(move |j| (i, j)))
        .find(|&(i, j)| !c.p[i][j].is_zero())
        .unwrap();
    let (m, _) = c.p[i][j].terms().next().unwrap();
    let bump = MultiPoly::monomial(2, m.exps().to_vec(), Rat::one());
    broken.p[i][j] = &broken.p[i][j] + &bump;
    assert!(!verify_certificate(&a, &broken).unwrap());
    let elementary = RegularAutomorphism::new(map(["x", "y + x^2"]), map(["x", "y - x^2"]));
    assert_eq!(elementary.unwrap_err().kind(), ErrorKind::Input);

    let f2 = a.forward().compose(a.forward(), 10_000).unwrap();
    let g2 = a.inverse().compose(a.inverse(), 10_000).unwrap();
    let a2 = RegularAutomorphism::new(f2, g2).unwrap();
    assert_eq!(a2.d(), 4);
    let c2 = build_certificate_n2(&a2).unwrap();
    assert!(verify_certificate(&a2, &c2).unwrap());
}

#[test]
fn constants() {
    let (a, c) = henon();
    let k5 = place_constants(&a, &c, Place::Finite(5));
    assert!(k5.c.is_one() && k5.epsilon.is_one() && k5.delta.is_one());
    assert!(k5.c_f.is_zero() && k5.c_plus.is_zero() && k5.c_minus.is_zero());
    let kinf = place_constants(&a, &c, Place::Archimedean);
    assert_eq!(kinf.epsilon, Rat::one() / (&kinf.c * &kinf.c));

    assert!(upper_bound_constant(a.forward(), Place::Finite(3)).is_zero());
    let third = map(["y", "y^2 - x/3"]);
    assert!((upper_bound_constant(&third, Place::Finite(3)).value() - 3f64.ln()).abs() < 1e-12);
    assert!((upper_bound_constant(a.forward(), Place::Archimedean).value() - 3f64.ln()).abs() < 1e-12);
}

#[test]
fn log_norms() {
    let x = pt("1/2,3");
    assert_eq!(point_lognorm(&x, Place::Finite(2)).log_p_multiple, Some(1));
    assert_eq!(point_lognorm(&x, Place::Finite(3)).value, 0.0);
    assert!((point_lognorm(&pt("2/3,5"), Place::Archimedean).value - 5f64.ln()).abs() < 1e-12);
}

#[test]
fn good_reduction() {
    let (a, c) = henon();
    for p in [2, 3, 5, 7, 101] {
        assert_eq!(good_reduction_test(&a, &c, p).verdict, Verdict::Good);
    }
    let b = RegularAutomorphism::new(map(["y", "y^2 - 2*x"]), map(["(x^2 - y)/2", "x"])).unwrap();
    let cb = build_certificate_n2(&b).unwrap();
    assert!(matches!(good_reduction_test(&b, &cb, 2).verdict, Verdict::Bad { .. }));
    assert_eq!(good_reduction_test(&b, &cb, 3).verdict, Verdict::Good);
}

#[test]
fn local_green_examples() {
    let (a, c) = henon();
    let cfg = GreenConfig::with_tolerance(1e-10);
    let g = green(&a, &c, Place::Finite(7), &pt("3,-4"), &cfg).unwrap();
    assert_eq!((g.value, g.error_radius, g.iterations_used), (0.0, 0.0, 0));
    assert!(g.certified);

    let g = green(&a, &c, Place::Finite(2), &pt("1/2,0"), &cfg).unwrap();
    assert!((g.value - 0.5 * 2f64.ln()).abs() < 1e-10);

    let g = green(&a, &c, Place::Archimedean, &pt("0,2"), &cfg).unwrap();
    assert!(g.contains(0.6571631766825777) && g.certified);
    let g = green_inverse(&a, &c, Place::Archimedean, &pt("0,2"), &cfg).unwrap();
    assert!(g.contains(0.3605145681131892) && g.certified);

    for place in [Place::Archimedean, Place::Finite(2), Place::Finite(3)] {
        assert_eq!(green_inverse(&a, &c, place, &pt("2,2"), &cfg).unwrap().value, 0.0);
    }
}

#[test]
fn filtration_examples() {
    let (a, c) = henon();
    let k = classify_filtration(&a, &c, Place::Finite(3), &pt("4,-9")).unwrap();
    assert!(k.in_b);
    let small = Rat::new(1, 1024);
    let k = classify_filtration(&a, &c, Place::Finite(2), &[small.clone(), Rat::zero()]).unwrap();
    assert!(k.in_uminus);
    let k = classify_filtration(&a, &c, Place::Finite(2), &[Rat::zero(), small]).unwrap();
    assert!(k.in_uplus);
}

#[test]
fn escape_examples() {
    let (a, c) = henon();
    let e = classify_escape(&a, &c, Place::Archimedean, &pt("2,2"), 64).unwrap();
    assert_eq!((e.forward, e.backward), (ForwardEscape::Kplus, BackwardEscape::Kminus));
    let e = classify_escape(&a, &c, Place::Archimedean, &pt("0,2"), 64).unwrap();
    assert_eq!(e.forward, ForwardEscape::Wplus);
    let e = classify_escape(&a, &c, Place::Finite(5), &pt("3,4"), 64).unwrap();
    assert_eq!((e.forward, e.backward), (ForwardEscape::Kplus, BackwardEscape::Kminus));
    assert_eq!(e.decided_at_iteration, 0);
}

#[test]
fn weil_heights() {
    assert_eq!(weil_height(&pt("0,0")), 0.0);
    assert!((weil_height(&pt("2/3,5")) - 15f64.ln()).abs() < 1e-12);
    assert!((weil_height(&pt("7,7")) - 7f64.ln()).abs() < 1e-12);
}

#[test]
fn global_heights() {
    let (a, c) = henon();
    let cfg = HeightConfig::default();
    let r = canonical_heights(&a, &c, &pt("2,2"), &cfg).unwrap();
    assert!(r.h_plus.value.abs() < 1e-8 && r.h_minus.value.abs() < 1e-8 && r.h_f.value.abs() < 1e-8);

    let r = canonical_heights(&a, &c, &pt("1/2,0"), &cfg).unwrap();
    let at2 = r.forward_at(Place::Finite(2));
    assert!(at2.contains(0.5 * 2f64.ln()) || (at2.value - 0.5 * 2f64.ln()).abs() < 1e-9);

    for s in ["2,2", "0,2", "1/2,0"] {
        let fe = functional_equation_check(&a, &c, &pt(s), &cfg).unwrap();
        assert!(fe.residual.abs() < 1e-6, "{s}: {fe:?}");
    }
}

#[test]
fn periodicity_and_orbit_height() {
    let (a, c) = henon();
    let cfg = HeightConfig::default();
    for s in ["2,2", "0,0"] {
        let rec = detect_periodic(&a, &c, &pt(s), 32, &cfg).unwrap();
        assert!(rec.is_periodic && rec.period == Some(1));
    }
    let r0 = detect_periodic(&a, &c, &pt("0,2"), 32, &cfg).unwrap();
    assert!(!r0.is_periodic && r0.h_f.unwrap().value > 0.0);

    let fine = HeightConfig::with_tolerance(1e-12);
    let h0 = canonical_heights(&a, &c, &pt("0,2"), &fine).unwrap();
    let h1 = canonical_heights(&a, &c, &pt("2,4"), &fine).unwrap();
    let o0 = orbit_height(&a, h0.h_plus.value, h0.h_minus.value).unwrap();
    let o1 = orbit_height(&a, h1.h_plus.value, h1.h_minus.value).unwrap();
    assert!((o0 - o1).abs() < 1e-8, "{o0} {o1}");
}
