use super::*;
use crate::exact::{q as rq, rat_to_f64, Assignment};
use crate::input::parse_equation;
use crate::variational::{multiplicity_at, Multiplicity};

fn eq(src: &str) -> EquationSpec {
    parse_equation(src).unwrap()
}

fn none() -> Point {
    Point::new()
}

fn float_point(p: &Assignment) -> Point {
    p.iter().map(|(k, v)| (k.clone(), rat_to_f64(v))).collect()
}

fn rational_point(pairs: &[(&str, i64)]) -> Assignment {
    pairs.iter().map(|(k, v)| (k.to_string(), rq(*v, 1))).collect()
}

fn mult8_point() -> Point {
    let f = (27648.0f64 / 7.0).cbrt();
    [
        ("a", -7.0 * f * f / 144.0),
        ("b", 7.0 * f * f / 576.0),
        ("c", 7.0 * f * f / 144.0),
        ("d", f),
        ("e", -f / 2.0),
        ("f", f),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

const QUARTIC_PL_22: &str = "family: quartic\nA: pl: intercept=e; slopes=d, f\nB: pl: intercept=b; slopes=a, c\n";
const CUBIC_POLY_22: &str = "family: cubic\nA: d + 2*e*t + 3*f*t^2\nB: a + 2*b*t + 3*c*t^2\n";

#[test]
fn zero_field_is_identity() {
    let e = eq("family: cubic\nA: 0\nB: 0\n");
    for c in [0.3, -0.01, 1e-4] {
        let r = flow(&e, &none(), c, &FlowOptions::default()).unwrap();
        assert!(!r.escaped);
        assert!((r.value - c).abs() < 1e-12);
        assert_eq!(r.steps, 2048);
    }
}

#[test]
fn pure_quartic_matches_closed_form() {
    let e = eq("family: quartic\nA: 0\nB: 0\n");
    let c: f64 = 0.1;
    let exact = c * (1.0 - 3.0 * c.powi(3)).powf(-1.0 / 3.0);
    let r = flow(&e, &none(), c, &FlowOptions::default()).unwrap();
    assert!((r.value - exact).abs() < 1e-13, "{} vs {exact}", r.value);
    let q = displacement(&e, &none(), c, &FlowOptions::default()).unwrap();
    assert!((q - (exact - c)).abs() < 1e-13);
    assert!((q / c.powi(4) - 1.0).abs() < 0.005);
    assert_eq!(displacement(&e, &none(), 0.0, &FlowOptions::default()).unwrap(), 0.0);
}

#[test]
fn blow_up_is_reported() {
    // z' = z^4 from z(0) = 1 blows up at t = 1/3
    let e = eq("family: quartic\nA: 0\nB: 0\n");
    let r = flow(&e, &none(), 1.0, &FlowOptions::default()).unwrap();
    assert!(r.escaped);
    assert!(matches!(displacement(&e, &none(), 1.0, &FlowOptions::default()), Err(NumericError::Escaped(_))));
    assert!(matches!(
        flow(&e, &none(), 0.1, &FlowOptions { step: 0.0, ..Default::default() }),
        Err(NumericError::BadStep(_))
    ));
}

#[test]
fn breakpoints_are_grid_points() {
    // a step that does not divide the breakpoint spacing
    let e = eq("family: cubic\nA: pl: intercept=1; slopes=-2, 4; breaks=3/7\nB: 0\n");
    let ne = NumericEquation::new(&e, &none()).unwrap();
    let (v, _) = ne.solve_at(0.2, &[3.0 / 7.0, 1.0], &FlowOptions { step: 0.1, ..Default::default() }).unwrap();
    assert!(v.iter().all(Option::is_some));
    // z' = A z^3 has 1/z^2 = 1/c^2 - 2 \int A
    let int_a = |t: f64| if t <= 3.0 / 7.0 { t - t * t } else { 3.0 / 7.0 - 9.0 / 49.0 + (1.0 - 6.0 / 7.0 - 12.0 / 7.0) * (t - 3.0 / 7.0) + 2.0 * (t * t - 9.0 / 49.0) };
    let exact = |t: f64| (1.0 / 0.04 - 2.0 * int_a(t)).powf(-0.5);
    let fine = ne.solve_at(0.2, &[3.0 / 7.0, 1.0], &FlowOptions { step: 1.0 / 4096.0, ..Default::default() }).unwrap().0;
    assert!((fine[0].unwrap() - exact(3.0 / 7.0)).abs() < 1e-12);
    assert!((fine[1].unwrap() - exact(1.0)).abs() < 1e-12);
}

#[test]
fn step_halving_is_fourth_order() {
    let e = eq("family: quartic\nA: 3*t^2 - 1\nB: 2*t - 1 + t^3\n");
    let q = |step: f64| displacement(&e, &none(), 0.4, &FlowOptions { step, ..Default::default() }).unwrap();
    let (q1, q2, q3) = (q(1.0 / 64.0), q(1.0 / 128.0), q(1.0 / 256.0));
    let ratio = (q1 - q2) / (q2 - q3);
    assert!((ratio - 16.0).abs() < 2.0, "ratio {ratio}");
}

#[test]
fn pure_quartic_fit() {
    let e = eq("family: quartic\nA: 0\nB: 0\n");
    let est = estimate_multiplicity(&e, &none(), &EstimateOptions::default()).unwrap();
    assert_eq!(est.fit.k(), Some(4));
    let c = est.fit.coeff().unwrap();
    assert!((c - 1.0).abs() < 0.02, "coeff {c}");
    assert_eq!(est.samples.len(), 16);
}

#[test]
fn symmetric_center_is_center_like() {
    let e = eq("family: cubic\nA: pl: intercept=5/6; slopes=-3, 1, -3\nB: pl: intercept=-1/2; slopes=2, -1, 2\n");
    assert!(crate::center::symmetry_check(&e));
    let opts = FlowOptions { step: 1.0 / 4096.0, ..Default::default() };
    let q = displacement(&e, &none(), 0.05, &opts).unwrap();
    assert!(q.abs() < 1e-9, "q = {q}");
    let est = estimate_multiplicity(&e, &none(), &EstimateOptions::default()).unwrap();
    assert_eq!(est.fit, Fit::CenterLike);
    let ts = [0.05, 0.1, 0.2, 1.0 / 3.0, 0.5];
    for c in [0.01, -0.05] {
        assert!(reflection_defect(&e, &none(), c, &ts, &opts).unwrap() < 1e-8);
    }
}

#[test]
fn sign_matches_symbolic_leading_term() {
    let e = eq(CUBIC_POLY_22);
    for pairs in [
        [("a", 1), ("b", 1), ("c", -2), ("d", 1), ("e", 0), ("f", 0)],
        [("a", 1), ("b", 1), ("c", -2), ("d", 1), ("e", -1), ("f", 0)],
        [("a", 2), ("b", 0), ("c", 1), ("d", 0), ("e", 1), ("f", 1)],
    ] {
        let p = rational_point(&pairs);
        let sym = multiplicity_at(&e, &p, 8).unwrap();
        let Multiplicity::Finite(k) = sym.multiplicity else { panic!("finite expected") };
        let ak = -rat_to_f64(sym.leading_value.as_ref().unwrap()) / k as f64;
        let fp = float_point(&p);
        for c in [0.01, -0.01] {
            let q = displacement(&e, &fp, c, &FlowOptions::default()).unwrap();
            assert_eq!(q.signum(), (ak * c.powi(k as i32)).signum(), "k = {k}, c = {c}");
        }
        let est = estimate_multiplicity(&e, &fp, &EstimateOptions::default()).unwrap();
        assert_eq!(est.fit.k(), Some(k));
        let coeff = est.fit.coeff().unwrap();
        assert!((coeff - ak).abs() < 0.05 * ak.abs(), "k = {k}: {coeff} vs {ak}");
    }
}

#[test]
fn multiplicity_eight_point_is_unstable() {
    let e = eq(QUARTIC_PL_22);
    let opts = EstimateOptions { ladder: EstimateOptions::ladder_pow2(2, 5), ..Default::default() };
    let est = estimate_multiplicity(&e, &mult8_point(), &opts).unwrap();
    assert_eq!(est.fit.k(), Some(8));
    // a_8 = -eta_8 / 8 with eta_8 = -2041/498960 f^2
    let f2 = (27648.0f64 / 7.0).cbrt().powi(2);
    let a8 = 2041.0 / 498960.0 * f2 / 8.0;
    let coeff = est.fit.coeff().unwrap();
    assert!((coeff - a8).abs() < 0.05 * a8, "{coeff} vs {a8}");
    // V_8(1) < 0, so the origin is unstable
    assert_eq!(est.coeff_sign(), Some(1.0));
}

#[test]
fn csv_output() {
    let samples = [Sample { c: 0.5, q: Some(0.25) }, Sample { c: -0.5, q: None }];
    let mut out = Vec::new();
    write_csv(&samples, &mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "c,q\n5e-1,2.5e-1\n-5e-1,\n");
}
