use proptest::prelude::*;

use super::*;
use crate::exact::{parse_poly_in, q};

fn syms(names: &[&str]) -> Symbols {
    Symbols::new(names.iter().copied())
}

fn p(src: &str, s: &Symbols) -> ParamPoly {
    parse_poly_in(src, s).unwrap()
}

/// Pairwise S-polynomials and inputs reduce to zero; leading monomials minimal.
fn assert_groebner(b: &GroebnerBasis, inputs: &[ParamPoly]) {
    let ord = b.ordering();
    let g = b.generators();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            let s = s_polynomial(&g[i], &g[j], ord);
            assert!(reduce(&s, g, ord).is_zero(), "S({}, {}) does not reduce", g[i], g[j]);
        }
    }
    for f in inputs {
        assert!(b.contains(f), "{f} not in basis");
    }
    let lms = b.leading_monomials();
    for i in 0..lms.len() {
        for j in 0..lms.len() {
            assert!(i == j || !lms[i].divides(&lms[j]));
        }
        assert_eq!(g[i].leading_term(ord).unwrap().1, &Rational::one());
    }
    // tails reduced
    for (i, gi) in g.iter().enumerate() {
        let others: Vec<ParamPoly> = g.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()).collect();
        assert_eq!(&reduce(gi, &others, ord), gi);
    }
}

#[test]
fn reduce_by_itself_is_zero() {
    let s = syms(&["x", "y"]);
    let g = p("3*x^2*y - 7*y + 1/2", &s);
    assert!(reduce(&g, std::slice::from_ref(&g), &MonomialOrdering::grevlex()).is_zero());
}

#[test]
fn single_division_step() {
    let s = syms(&["x", "y"]);
    let r = reduce(&p("x^2*y", &s), &[p("x^2 - 1", &s)], &MonomialOrdering::lex());
    assert_eq!(r, p("y", &s));
}

#[test]
fn single_generator_basis() {
    let s = syms(&["x"]);
    let b = buchberger(&[p("x", &s)], &MonomialOrdering::grevlex());
    assert_eq!(b.generators(), &[p("x", &s)]);
}

#[test]
fn hand_traced_lex_basis() {
    // x^3 - x(x^2 - y) = xy ; x*xy - y(x^2 - y) = y^2
    let s = syms(&["x", "y"]);
    let gens = [p("x^2 - y", &s), p("x^3", &s)];
    let b = buchberger(&gens, &MonomialOrdering::lex());
    assert!(b.generators().contains(&p("y^2", &s)));
    assert!(b.generators().contains(&p("x*y", &s)));
    assert!(b.generators().contains(&p("x^2 - y", &s)));
    assert_eq!(b.len(), 3);
    assert_groebner(&b, &gens);
}

#[test]
fn ideal_equality_examples() {
    let s = syms(&["x", "y"]);
    let ord = MonomialOrdering::grevlex();
    let b1 = buchberger(&[p("x", &s)], &ord);
    let b2 = buchberger(&[p("2*x", &s)], &ord);
    assert!(ideal_equal(&b1, &b2).unwrap());
    let c1 = buchberger(&[p("x", &s), p("y", &s)], &ord);
    let c2 = buchberger(&[p("x + y", &s), p("x - y", &s)], &ord);
    assert!(ideal_equal(&c1, &c2).unwrap());
    assert!(!ideal_equal(&b1, &c1).unwrap());
    let other = buchberger(&[p("x", &syms(&["x"]))], &ord);
    assert!(matches!(ideal_equal(&b1, &other), Err(GroebnerError::SymbolMismatch { .. })));
}

#[test]
fn triviality() {
    let s = syms(&["x", "y"]);
    let ord = MonomialOrdering::grevlex();
    assert!(buchberger(&[p("1", &s)], &ord).is_trivial());
    assert!(!buchberger(&[p("x", &s)], &ord).is_trivial());
    let b = buchberger(&[p("x*y - 1", &s), p("x", &s)], &ord);
    assert!(is_trivial(&b));
    assert_eq!(b.generators(), &[p("1", &s)]);
}

#[test]
fn quadratic_discriminant() {
    let s = syms(&["h"]);
    assert!(no_real_root_quadratic(&p("3*h^2 - 3*h + 1", &s)).unwrap());
    assert!(!no_real_root_quadratic(&p("h^2 - 1", &s)).unwrap());
    assert!(!no_real_root_quadratic(&p("h^2", &s)).unwrap());
    assert!(no_real_root_quadratic(&p("h^3 + 1", &s)).is_err());
    let s2 = syms(&["a", "h"]);
    assert!(no_real_root_quadratic(&p("h^2 + a", &s2)).is_err());
}

#[test]
fn cubic_22_eta_ideal() {
    // eta generators of the (2,2) polynomial cubic case, checked against
    // the basis <ec - fb, a + b + c, f + e + d>.
    let s = syms(&["a", "b", "c", "d", "e", "f"]);
    let ord = MonomialOrdering::grevlex();
    let target = buchberger(&[p("e*c - f*b", &s), p("a + b + c", &s), p("f + e + d", &s)], &ord);
    // an alternative presentation of the same ideal
    let gens = [
        p("a + b + c", &s),
        p("d + e + f", &s),
        p("e*c - f*b + (a + b + c)*(d - 2*e)", &s),
        p("(d + e + f)*(a - c) + 3*(e*c - f*b)", &s),
    ];
    let b = buchberger(&gens, &ord);
    assert_groebner(&b, &gens);
    assert!(ideal_equal(&b, &target).unwrap());
}

#[test]
fn rational_normal_form_is_exact() {
    let s = syms(&["x", "y"]);
    let ord = MonomialOrdering::grevlex();
    let b = buchberger(&[p("3*x - 2", &s), p("5*y^2 - 7", &s)], &ord);
    assert_eq!(b.reduce(&p("x^2*y^2 + y", &s)), p("y + 28/45", &s));
    assert_eq!(b.reduce(&p("x", &s)), ParamPoly::constant(&s, q(2, 3)));
}

#[test]
fn extend_matches_batch() {
    let s = syms(&["x", "y", "z"]);
    let ord = MonomialOrdering::grevlex();
    let gens = [p("x^2 + y*z - 1", &s), p("x*y - z^2", &s), p("y^3 - x*z + 2", &s)];
    let batch = buchberger(&gens, &ord);
    let mut inc = buchberger(&gens[..1], &ord);
    for g in &gens[1..] {
        inc = inc.extend(std::slice::from_ref(g), &Budget::unlimited()).unwrap();
    }
    assert_eq!(batch.generators(), inc.generators());
    assert_groebner(&batch, &gens);
}

#[test]
fn budget_is_enforced() {
    let s = syms(&["x", "y", "z"]);
    let gens = [p("x^2 + y*z - 1", &s), p("x*y - z^2", &s), p("y^3 - x*z + 2", &s)];
    let r = buchberger_with(&gens, &MonomialOrdering::grevlex(), &Budget::new(Some(Duration::ZERO)));
    assert!(matches!(r, Err(GroebnerError::BudgetExceeded(_))));
}

#[test]
fn primitive_printing() {
    let s = syms(&["x", "y"]);
    let b = buchberger(&[p("x/2 - y/3", &s)], &MonomialOrdering::grevlex());
    assert_eq!(b.primitive_generators(), vec![p("3*x - 2*y", &s)]);
    assert_eq!(b.to_string(), "<3*x - 2*y>");
}

fn small_poly(s: Symbols) -> impl Strategy<Value = ParamPoly> {
    let n = s.len();
    let exps = prop::collection::vec(0u16..3, n).prop_filter("degree <= 2", |e| e.iter().sum::<u16>() <= 2);
    prop::collection::vec((exps, -3i64..4), 1..4).prop_map(move |terms| {
        ParamPoly::from_terms(&s, terms.into_iter().map(|(e, c)| (Monomial::from_exponents(&e), q(c, 1))))
    })
}

fn small_ideal() -> impl Strategy<Value = Vec<ParamPoly>> {
    prop::collection::vec(small_poly(syms(&["x", "y", "z"])), 1..4)
}

fn orderings() -> [MonomialOrdering; 3] {
    [MonomialOrdering::lex(), MonomialOrdering::new(OrderKind::GrLex), MonomialOrdering::grevlex()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bases_are_reduced_groebner(gens in small_ideal()) {
        for ord in orderings() {
            let b = buchberger(&gens, &ord);
            assert_groebner(&b, &gens);
        }
    }

    #[test]
    fn reduce_is_idempotent(gens in small_ideal(), f in small_poly(syms(&["x", "y", "z"]))) {
        let ord = MonomialOrdering::grevlex();
        let r1 = reduce(&f, &gens, &ord);
        prop_assert_eq!(reduce(&r1, &gens, &ord), r1.clone());
        let b = buchberger(&gens, &ord);
        let n1 = b.reduce(&f);
        prop_assert_eq!(b.reduce(&n1), n1.clone());
        // f - NF(f) lies in the ideal
        prop_assert!(b.contains(&(&f - &n1)));
    }

    #[test]
    fn triviality_is_ordering_invariant(gens in small_ideal()) {
        let t: Vec<bool> = orderings().iter().map(|o| buchberger(&gens, o).is_trivial()).collect();
        prop_assert!(t.iter().all(|&x| x == t[0]));
    }

    #[test]
    fn ideal_equal_is_an_equivalence(gens in small_ideal(), mix in prop::collection::vec(-2i64..3, 9)) {
        let ord = MonomialOrdering::grevlex();
        let b1 = buchberger(&gens, &ord);
        // an invertible-ish recombination of the generators
        let n = gens.len();
        let mut alt: Vec<ParamPoly> = Vec::new();
        for i in 0..n {
            let mut g = gens[i].clone();
            for j in 0..n {
                if j != i && j < i {
                    g = &g + &gens[j].scale(&q(mix[(i * 3 + j) % 9], 1));
                }
            }
            alt.push(g);
        }
        let b2 = buchberger(&alt, &ord);
        let b3 = buchberger(&alt.iter().rev().cloned().collect::<Vec<_>>(), &MonomialOrdering::lex());
        prop_assert!(ideal_equal(&b1, &b1).unwrap());
        prop_assert!(ideal_equal(&b1, &b2).unwrap());
        prop_assert!(ideal_equal(&b2, &b1).unwrap());
        prop_assert!(ideal_equal(&b2, &b3).unwrap());
        prop_assert!(ideal_equal(&b1, &b3).unwrap());
        let smaller = buchberger(&gens[..1], &ord);
        prop_assert_eq!(ideal_equal(&smaller, &b1).unwrap(), gens[1..].iter().all(|g| smaller.contains(g)));
    }
}
