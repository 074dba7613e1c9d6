//! Cross-module properties and independent oracles: exact ring axioms on
//! random polynomials, finite-difference checks of symbolic derivatives,
//! evaluation homomorphisms, and chart-cover sampling.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gsv::repthy;
use gsv::symalg::{
    minor_poly, IndexSet, LocalizedElement, Monomial, Polynomial, Rational, Variable,
};
use gsv::symmat::{adjugate_solve, QMatrix, SymMatrix};
use gsv::variety::GSVSpec;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Random sparse polynomial over a small variable pool: at most 4 terms of
/// degree at most 3 with single-digit coefficients.
fn random_poly(rng: &mut impl Rng, pool: &[Variable]) -> Polynomial {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(0..=4) {
        let mut pairs = Vec::new();
        for _ in 0..rng.gen_range(0..=3usize) {
            pairs.push((pool[rng.gen_range(0..pool.len())], 1u32));
        }
        let coeff = rat(rng.gen_range(-9..=9), rng.gen_range(1..=4));
        terms.push((Monomial::from_pairs(pairs), coeff));
    }
    Polynomial::from_terms(terms)
}

fn var_pool() -> Vec<Variable> {
    vec![
        Variable::x(1, 1),
        Variable::x(1, 2),
        Variable::x(2, 1),
        Variable::y(1, 1),
        Variable::y(2, 1),
    ]
}

fn random_assignment(rng: &mut impl Rng, pool: &[Variable]) -> BTreeMap<Variable, Rational> {
    pool.iter()
        .map(|&v| (v, rat(rng.gen_range(1..=9), rng.gen_range(1..=5))))
        .collect()
}

#[test]
fn ring_axioms_hold_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let pool = var_pool();
    for _ in 0..25 {
        let a = random_poly(&mut rng, &pool);
        let b = random_poly(&mut rng, &pool);
        let c = random_poly(&mut rng, &pool);
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert_eq!(&a * &b, &b * &a);
        assert_eq!(&a - &a, Polynomial::zero());
    }
}

#[test]
fn mixed_partials_commute_on_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let pool = var_pool();
    for _ in 0..25 {
        let p = random_poly(&mut rng, &pool);
        let (u, v) = (pool[rng.gen_range(0..pool.len())], pool[rng.gen_range(0..pool.len())]);
        assert_eq!(p.derivative(u).derivative(v), p.derivative(v).derivative(u));
    }
}

#[test]
fn evaluation_is_a_ring_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let pool = var_pool();
    for _ in 0..25 {
        let a = random_poly(&mut rng, &pool);
        let b = random_poly(&mut rng, &pool);
        let point = random_assignment(&mut rng, &pool);
        assert_eq!((&a * &b).eval(&point), a.eval(&point) * b.eval(&point));
        assert_eq!((&a + &b).eval(&point), a.eval(&point) + b.eval(&point));
    }
}

#[test]
fn localized_evaluation_matches_numerator_over_denominator() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let pool = var_pool();
    let set1 = IndexSet::new(vec![1]).unwrap();
    let set2 = IndexSet::new(vec![2]).unwrap();
    for _ in 0..25 {
        let a = LocalizedElement::new(
            random_poly(&mut rng, &pool),
            BTreeMap::from([(set1.clone(), rng.gen_range(0..=2)), (set2.clone(), rng.gen_range(0..=2))]),
        );
        let b = LocalizedElement::new(
            random_poly(&mut rng, &pool),
            BTreeMap::from([(set1.clone(), rng.gen_range(0..=2))]),
        );
        // positive assignments never hit the denominator zero locus
        let point = random_assignment(&mut rng, &pool);
        let eval = |el: &LocalizedElement| {
            el.numerator().eval(&point) / el.denominator_poly().eval(&point)
        };
        assert_eq!(a.eval(&point).unwrap(), eval(&a));
        let product = &a * &b;
        assert_eq!(product.eval(&point).unwrap(), eval(&a) * eval(&b));
        let sum = &a + &b;
        assert_eq!(sum.eval(&point).unwrap(), eval(&a) + eval(&b));
    }
}

/// Finite-difference oracle for a claimed derivative: with exact rational
/// arithmetic, |(f(a + h) - f(a))/h - claimed(a)| must shrink linearly in
/// `h` when the claim is right and stalls at a constant when it is wrong.
fn finite_difference_confirms(
    f: &LocalizedElement,
    v: Variable,
    claimed: &LocalizedElement,
    point: &BTreeMap<Variable, Rational>,
) {
    let fd = |h: &Rational| {
        let mut shifted = point.clone();
        shifted.insert(v, point[&v].clone() + h);
        (f.eval(&shifted).unwrap() - f.eval(point).unwrap()) / h.clone()
    };
    let claimed_value = claimed.eval(point).unwrap();
    let h1 = rat(1, 1 << 10);
    let h2 = rat(1, 1 << 20);
    let err1 = (fd(&h1) - claimed_value.clone()).abs();
    let err2 = (fd(&h2) - claimed_value).abs();
    if err1.is_zero() {
        assert!(err2.is_zero());
    } else {
        // correct derivative: err2/err1 ~ 2^-10; wrong by a constant: ~1
        assert!(err2 * rat(1 << 9, 1) <= err1, "difference quotient does not converge");
    }
}

#[test]
fn quotient_rule_derivative_passes_finite_difference_oracle() {
    // d/dx11 of (1 - x12*y21)/x11 = -(1 - x12*y21)/x11^2 at random points.
    let x12y21 = &Polynomial::var(Variable::x(1, 2)) * &Polynomial::var(Variable::y(2, 1));
    let f = LocalizedElement::new(
        &Polynomial::one() - &x12y21,
        BTreeMap::from([(IndexSet::new(vec![1]).unwrap(), 1)]),
    );
    let expected = LocalizedElement::new(
        -&(&Polynomial::one() - &x12y21),
        BTreeMap::from([(IndexSet::new(vec![1]).unwrap(), 2)]),
    );
    assert_eq!(f.derivative(Variable::x(1, 1)), expected);
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let pool = [Variable::x(1, 1), Variable::x(1, 2), Variable::y(2, 1)];
    for _ in 0..10 {
        let point = random_assignment(&mut rng, &pool);
        for v in pool {
            finite_difference_confirms(&f, v, &f.derivative(v), &point);
        }
    }
}

#[test]
fn finite_difference_oracle_rejects_wrong_derivatives() {
    let f = LocalizedElement::new(
        Polynomial::one(),
        BTreeMap::from([(IndexSet::new(vec![1]).unwrap(), 1)]),
    );
    let wrong = LocalizedElement::from(Polynomial::one());
    let point = BTreeMap::from([(Variable::x(1, 1), rat(3, 2))]);
    let result = std::panic::catch_unwind(|| {
        finite_difference_confirms(&f, Variable::x(1, 1), &wrong, &point);
    });
    assert!(result.is_err(), "the oracle must flag an incorrect derivative");
}

#[test]
fn gluing_product_evaluates_to_minus_one_at_random_points() {
    // (-x12/x11) * (x11/x12) = -1, confirmed at 20 random rational points.
    let a = LocalizedElement::new(
        -&Polynomial::var(Variable::x(1, 2)),
        BTreeMap::from([(IndexSet::new(vec![1]).unwrap(), 1)]),
    );
    let b = LocalizedElement::new(
        Polynomial::var(Variable::x(1, 1)),
        BTreeMap::from([(IndexSet::new(vec![2]).unwrap(), 1)]),
    );
    let product = &a * &b;
    assert_eq!(product, LocalizedElement::from(rat(-1, 1)));
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let pool = [Variable::x(1, 1), Variable::x(1, 2)];
    for _ in 0..20 {
        let point = random_assignment(&mut rng, &pool);
        assert_eq!(product.eval(&point).unwrap(), rat(-1, 1));
        assert_eq!(
            a.eval(&point).unwrap() * b.eval(&point).unwrap(),
            rat(-1, 1)
        );
    }
}

#[test]
fn every_sampled_point_lies_in_some_chart() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for (r, s) in [(1, 2), (2, 3), (2, 4)] {
        let spec = GSVSpec::new(r, s).unwrap();
        for _ in 0..25 {
            let p = repthy::random_on_variety_point(&mut rng, &spec);
            let assignment = p.assignment();
            let covered = IndexSet::all(s, r)
                .iter()
                .any(|set| !minor_poly(set).eval(&assignment).is_zero());
            assert!(covered, "an on-variety point has X of rank r, so some minor is nonzero");
        }
    }
}

#[test]
fn determinant_is_multiplicative_on_random_rational_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for n in 1..=4 {
        for _ in 0..10 {
            let a = QMatrix::from_fn(n, n, |_, _| rat(rng.gen_range(-5..=5), 1));
            let b = QMatrix::from_fn(n, n, |_, _| rat(rng.gen_range(-5..=5), 1));
            let det = |m: &QMatrix| {
                SymMatrix::from_rational(m).det().unwrap().as_rational().unwrap()
            };
            assert_eq!(det(&(&a * &b)), det(&a) * det(&b));
        }
    }
}

#[test]
fn bareiss_agrees_with_cofactor_on_random_polynomial_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let pool = var_pool();
    for n in 1..=4 {
        for _ in 0..5 {
            // degree <= 2 entries
            let m = SymMatrix::from_fn(n, n, |_, _| {
                let linear = random_poly(&mut rng, &pool);
                let truncated = Polynomial::from_terms(
                    linear
                        .terms()
                        .filter(|(mono, _)| mono.total_degree() <= 2)
                        .map(|(mono, c)| (mono.clone(), c.clone())),
                );
                truncated.into()
            });
            assert_eq!(m.det_bareiss().unwrap(), m.det_cofactor().unwrap());
        }
    }
}

#[test]
fn adjugate_solve_inverts_generic_blocks_up_to_three() {
    // M * adjugateSolve(M, B) = B as an exact symbolic identity.
    for r in 1..=3usize {
        let s = r + 1;
        let x = SymMatrix::generic_x(r, s);
        let m = x.columns(&IndexSet::new((1..=r).collect()).unwrap());
        let b = SymMatrix::from_fn(r, r, |i, j| Variable::y(i + 1, j + 1).into());
        let solved = adjugate_solve(&m, &b).unwrap();
        let back = &m * &solved;
        assert_eq!(back, b, "r = {r}");
    }
}

#[test]
fn adjugate_solve_chart_system_r2_s3() {
    // The chart system M * Y_I = I - X_c * Y_c multiplies back exactly.
    let r = 2;
    let set = IndexSet::new(vec![1, 2]).unwrap();
    let x = SymMatrix::generic_x(r, 3);
    let m = x.columns(&set);
    let x_c = SymMatrix::from_fn(r, 1, |i, _| Variable::x(i + 1, 3).into());
    let y_c = SymMatrix::from_fn(1, r, |_, k| Variable::y(3, k + 1).into());
    let prod = &x_c * &y_c;
    let b = {
        let id = SymMatrix::identity(r);
        SymMatrix::from_fn(r, r, |i, k| id.at(i, k) - prod.at(i, k))
    };
    let solved = adjugate_solve(&m, &b).unwrap();
    assert_eq!(&m * &solved, b);
    // denominator is the chart minor to the first power in every entry
    for i in 0..r {
        for j in 0..r {
            assert_eq!(solved.at(i, j).denominator_factors().get(&set), Some(&1));
        }
    }
}
