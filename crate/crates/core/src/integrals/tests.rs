use super::*;
use crate::algebra::{normal_form, QuotientDegree, RationalFunction};
use crate::dvariety::{compile, ProductSystem};
use crate::parser::{parse_expression, parse_polynomial, parse_problem_file};

fn system(text: &str) -> ProductSystem {
    compile(&parse_problem_file(text).unwrap()).unwrap()
}

fn rf(sys: &ProductSystem, text: &str) -> RationalFunction {
    parse_expression(text, sys.registry()).unwrap()
}

const CUBIC: &str = "ode: y' = -1/2*y^3\n";
const LINEAR: &str = "vars: t:time, y0, y1, a:aux\node: y'' = 4*y' - 4*y\naux: a' = 2*a\n";
const PAINLEVE: &str = "vars: t:time, y1, y2\node: y'' = 6*y^2 + t\n";
const ELLIPTIC: &str = "vars: y0, y1\node: y1^2 = 4*y0^3 + 4*y0 + 1\n";

fn strings(fis: &[FirstIntegral]) -> Vec<String> {
    fis.iter().map(|f| f.h.to_string()).collect()
}

/// Whether `h` is a rational linear combination of the found integrals.
fn spans(fis: &[FirstIntegral], h: &RationalFunction) -> bool {
    use crate::algebra::gcd;
    let all: Vec<&RationalFunction> = fis.iter().map(|f| &f.h).chain([h]).collect();
    let common = all.iter().fold(crate::algebra::Polynomial::one(h.registry()), |l, f| gcd::lcm(&l, f.denominator()));
    let cols: Vec<_> = all.iter().map(|f| f.numerator() * &gcd::div_exact(&common, f.denominator()).unwrap()).collect();
    search::solve_columns(&cols).iter().any(|v| !num_traits::Zero::is_zero(v.last().unwrap()))
}

#[test]
fn verify_examples() {
    let sys = system(LINEAR);
    for h in ["(y1 - 2*y0)/a", "((1 + 2*t)*y0 - t*y1)/a"] {
        let fi = verify_first_integral(&rf(&sys, h), &sys).unwrap();
        assert!(fi.verified, "{h}");
        assert!(fi.residual.is_zero());
        assert_eq!(fi.excluded_locus.len(), 1);
    }
    let p = system(PAINLEVE);
    let fi = verify_first_integral(&rf(&p, "y1"), &p).unwrap();
    assert!(!fi.verified);
    assert_eq!(fi.residual, rf(&p, "y2"));
}

#[test]
fn elliptic_search_recovers_weierstrass_integral() {
    let sys = system(ELLIPTIC).ambient();
    let found = search_polynomial_integrals(&sys, 3).unwrap();
    assert!(spans(&found, &rf(&sys, "y1^2 - 4*y0^3 - 4*y0")), "{:?}", strings(&found));
    for fi in &found {
        assert!(fi.verified);
        assert_eq!(fi.provenance, Provenance::PolynomialSearch);
    }
    // on the variety itself that integral is a constant
    let on = system(ELLIPTIC);
    assert!(search_polynomial_integrals(&on, 3).unwrap().is_empty());
}

#[test]
fn painleve_has_no_polynomial_integral_of_low_degree() {
    let sys = system(PAINLEVE);
    assert!(search_polynomial_integrals(&sys, 4).unwrap().is_empty());
}

#[test]
fn degree_zero_is_empty() {
    for text in [CUBIC, LINEAR, PAINLEVE] {
        assert!(search_polynomial_integrals(&system(text), 0).unwrap().is_empty());
    }
}

#[test]
fn cubic_rational_search() {
    let sys = system(CUBIC);
    let q = parse_polynomial("y^2", sys.registry()).unwrap();
    let found = search_rational_integrals(&sys, &q, 3).unwrap();
    assert_eq!(strings(&found), ["t - 1/y^2"]);
    assert_eq!(found[0].provenance, Provenance::RationalSearch);
}

#[test]
fn linear_rational_search() {
    let sys = system(LINEAR);
    let q = parse_polynomial("a", sys.registry()).unwrap();
    let found = search_rational_integrals(&sys, &q, 2).unwrap();
    assert_eq!(found.len(), 2, "{:?}", strings(&found));
    for h in ["(y1 - 2*y0)/a", "((1 + 2*t)*y0 - t*y1)/a"] {
        assert!(spans(&found, &rf(&sys, h)), "{h} not in {:?}", strings(&found));
    }
}

#[test]
fn unit_denominator_agrees_with_polynomial_search() {
    let sys = system(ELLIPTIC).ambient();
    let one = parse_polynomial("1", sys.registry()).unwrap();
    assert_eq!(search_rational_integrals(&sys, &one, 3).unwrap(), search_polynomial_integrals(&sys, 3).unwrap());
}

#[test]
fn denominator_in_ideal_is_rejected() {
    let sys = system("vars: x, u\nideal: x\nsection: x' = 0\nsection: u' = 1\n");
    let q = parse_polynomial("x", sys.registry()).unwrap();
    assert!(matches!(search_rational_integrals(&sys, &q, 2), Err(crate::Error::DenominatorVanishesOnVariety(_))));
}

#[test]
fn search_is_monotone_in_degree() {
    let sys = system(ELLIPTIC).ambient();
    let mut last = 0;
    for d in 0..=6 {
        let n = search_polynomial_integrals(&sys, d).unwrap().len();
        assert!(n >= last);
        last = n;
    }
    assert!(last >= 2);
}

#[test]
fn darboux_examples() {
    let sys = system(CUBIC);
    let found = darboux_polynomials(&sys, 1).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].d.to_string(), "y");
    assert_eq!(found[0].cofactor, rf(&sys, "-y^2/2"));

    let sys = system(LINEAR);
    let found = darboux_polynomials(&sys, 1).unwrap();
    let a = found.iter().find(|d| d.d.to_string() == "a").expect("a is Darboux");
    assert_eq!(a.cofactor, rf(&sys, "2"));
    for d in &found {
        assert!(!d.d.is_constant());
        let lhs = sys.lie_derivative(&RationalFunction::from_poly(d.d.clone())).unwrap();
        let rhs = normal_form(&(&d.cofactor * &RationalFunction::from_poly(d.d.clone())), sys.ideal()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn independence_examples() {
    let cubic = system(CUBIC);
    let h = rf(&cubic, "t - 1/y^2");
    assert!(independence_test(std::slice::from_ref(&h), &cubic).unwrap().independent);
    let r = independence_test(&[h.clone(), h.pow(2)], &cubic).unwrap();
    assert!(!r.independent && !r.w_independent);

    let sys = system(LINEAR);
    let pair = [rf(&sys, "(y1 - 2*y0)/a"), rf(&sys, "((1 + 2*t)*y0 - t*y1)/a")];
    let r = w_independence_test(&pair, &sys).unwrap();
    assert!(r.independent && r.w_independent);
    assert_eq!(r.rank_v, 2);

    let counter = [rf(&sys, "(y1 - 2*y0)/a"), rf(&sys, "y1 - 2*y0")];
    let r = w_independence_test(&counter, &sys).unwrap();
    assert!(r.independent);
    assert!(!r.w_independent);
    assert_eq!(r.rank_v, 1);

    assert!(w_independence_test(&[], &sys).unwrap().w_independent);
}

#[test]
fn constants_are_not_independent() {
    let sys = system(ELLIPTIC);
    let h = rf(&sys, "y1^2 - 4*y0^3 - 4*y0");
    assert!(!independence_test(&[h], &sys).unwrap().independent);
    assert!(independence_test(&[rf(&sys, "y0")], &sys).unwrap().independent);
}

#[test]
fn level_sets() {
    let cubic = system(CUBIC);
    let h = rf(&cubic, "t - 1/y^2");
    assert_eq!(level_set_dimension(std::slice::from_ref(&h), &cubic, false).unwrap(), 1);
    assert_eq!(level_set_dimension(&[], &cubic, false).unwrap(), 2);
    assert_eq!(generic_fiber_degree(&[h], &cubic).unwrap(), QuotientDegree::Finite(2));

    let sys = system(LINEAR);
    let pair = [rf(&sys, "(y1 - 2*y0)/a"), rf(&sys, "((1 + 2*t)*y0 - t*y1)/a")];
    assert_eq!(level_set_dimension(&pair, &sys, true).unwrap(), 1);
    assert_eq!(generic_fiber_degree(&pair, &sys).unwrap(), QuotientDegree::Finite(1));
    assert_eq!(generic_fiber_degree(&[rf(&sys, "3")], &sys).unwrap(), QuotientDegree::Infinite);
}

#[test]
fn functions_of_integrals_are_integrals() {
    let sys = system(CUBIC);
    let h = rf(&sys, "t - 1/y^2");
    let one = RationalFunction::one(sys.registry());
    for phi in [
        h.pow(2),
        &h.pow(2) + &h.scale(&crate::algebra::Q::from_integer(3.into())),
        one.checked_div(&(&h + &one)).unwrap(),
    ] {
        assert!(verify_first_integral(&phi, &sys).unwrap().verified);
    }
}

#[test]
fn reports() {
    let sys = system(LINEAR);
    let a = parse_polynomial("a", sys.registry()).unwrap();
    let r = integrability_report(&sys, 2, &[], &[a]).unwrap();
    assert_eq!(r.dimension, 2);
    assert_eq!(r.selected.len(), 2);
    assert_eq!(r.fiber_degree, Some(QuotientDegree::Finite(1)));
    assert_eq!(r.verdict, Verdict::Internal);
    assert_eq!(r.verdict_str(), "internal");

    let cubic = system(CUBIC);
    let r = integrability_report(&cubic, 3, &[], &[]).unwrap();
    assert_eq!(r.verdict, Verdict::AlmostInternal);
    assert_eq!(r.fiber_degree, Some(QuotientDegree::Finite(2)));

    let p = system(PAINLEVE);
    let r = integrability_report(&p, 3, &[], &[]).unwrap();
    assert!(r.found.is_empty());
    assert_eq!(r.verdict_str(), "not_determined_at_degree_3");
}
