use chevfiber::polyring::{jacobian_det, parse_polynomial, ComplexPoint, Homogeneity, Polynomial};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

fn vars() -> Vec<String> {
    vec!["t".into(), "x".into(), "y".into()]
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn term() -> impl Strategy<Value = (Vec<u32>, BigRational)> {
    (prop::collection::vec(0u32..4, 3), -9i64..10, 1i64..5).prop_map(|(e, n, d)| (e, q(n, d)))
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(term(), 0..6).prop_map(|ts| Polynomial::from_terms(vars(), ts))
}

/// Every exponent vector of total degree `m` in three variables gets a term.
fn homogeneous(m: u32) -> impl Strategy<Value = Polynomial> {
    let mut monos = Vec::new();
    for a in 0..=m {
        for b in 0..=m - a {
            monos.push(vec![a, b, m - a - b]);
        }
    }
    let n = monos.len();
    prop::collection::vec(-5i64..6, n).prop_map(move |cs| {
        Polynomial::from_terms(vars(), monos.iter().cloned().zip(cs.into_iter().map(|c| q(c, 1))))
    })
}

fn point() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-0.55f64..0.55, -0.55f64..0.55), 3)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

fn eval(p: &Polynomial, z: &[Complex64]) -> Complex64 {
    p.eval(&ComplexPoint::new(z.to_vec()).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn add_then_subtract(p in poly(), r in poly()) {
        prop_assert_eq!(p.add(&r).sub(&r), p);
    }

    #[test]
    fn multiplication_is_commutative(p in poly(), r in poly()) {
        prop_assert_eq!(p.mul(&r), r.mul(&p));
    }

    #[test]
    fn derivative_is_linear(p in poly(), r in poly(), i in 0usize..3) {
        prop_assert_eq!(
            p.add(&r).derivative_index(i),
            p.derivative_index(i).add(&r.derivative_index(i))
        );
    }

    #[test]
    fn leibniz(p in poly(), r in poly(), i in 0usize..3) {
        let lhs = p.mul(&r).derivative_index(i);
        let rhs = p.derivative_index(i).mul(&r).add(&p.mul(&r.derivative_index(i)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_identity((m, p) in (1u32..5).prop_flat_map(|m| (Just(m), homogeneous(m)))) {
        prop_assume!(!p.is_zero());
        let mut lhs = Polynomial::zero(vars());
        for i in 0..3 {
            lhs = lhs.add(&Polynomial::variable(vars(), i).mul(&p.derivative_index(i)));
        }
        prop_assert_eq!(lhs, p.scale(&q(m as i64, 1)));
        prop_assert_eq!(p.homogeneous_degree().unwrap(), Homogeneity::Degree(m));
    }

    #[test]
    fn derivative_matches_central_difference(p in poly(), z in point(), i in 0usize..3) {
        let h = 1e-5;
        let mut plus = z.clone();
        let mut minus = z.clone();
        plus[i] += h;
        minus[i] -= h;
        let fd = (eval(&p, &plus) - eval(&p, &minus)) / (2.0 * h);
        let exact = eval(&p.derivative_index(i), &z);
        let scale = exact.norm().max(p.max_abs_coefficient()).max(1.0);
        prop_assert!((fd - exact).norm() <= 1e-6 * scale, "{} vs {}", fd, exact);
    }

    #[test]
    fn printed_form_parses_back(p in poly()) {
        let text = p.to_string();
        prop_assert_eq!(parse_polynomial(&text, &vars()).unwrap(), p);
    }

    #[test]
    fn rational_and_complex_evaluation_agree(p in poly(), a in -3i64..4, b in -3i64..4, c in -3i64..4) {
        let exact = p.eval_rational(&[q(a, 2), q(b, 3), q(c, 1)]);
        let approx = eval(&p, &[
            Complex64::new(a as f64 / 2.0, 0.0),
            Complex64::new(b as f64 / 3.0, 0.0),
            Complex64::new(c as f64, 0.0),
        ]);
        let exact_f = num_traits::ToPrimitive::to_f64(&exact).unwrap();
        prop_assert!((approx.re - exact_f).abs() <= 1e-9 * exact_f.abs().max(1.0));
        prop_assert!(approx.im.abs() <= 1e-9);
    }

    #[test]
    fn jacobian_degree_law(
        (m1, m2, u1, u2) in (1u32..4, 1u32..4)
            .prop_flat_map(|(a, b)| (Just(a), Just(b), homogeneous(a), homogeneous(b)))
    ) {
        let j = jacobian_det(&[u1, u2], &["x", "y"]).unwrap();
        prop_assume!(!j.is_zero());
        prop_assert_eq!(j.homogeneous_degree().unwrap(), Homogeneity::Degree(m1 + m2 - 2));
    }
}

#[test]
fn toy_jacobian() {
    let v = vec!["t".to_string(), "x".to_string()];
    let u = parse_polynomial("t^2 + x^2", &v).unwrap();
    let j = jacobian_det(&[u], &["x"]).unwrap();
    assert_eq!(j.to_string(), "2/1*x^1");
    assert_eq!(j.homogeneous_degree().unwrap(), Homogeneity::Degree(1));
}

#[test]
fn inhomogeneous_and_zero() {
    let v = vec!["x".to_string()];
    let p = parse_polynomial("1 + x", &v).unwrap();
    assert_eq!(p.homogeneous_degree().unwrap(), Homogeneity::Inhomogeneous);
    assert!(Polynomial::zero(v).homogeneous_degree().is_err());
}
