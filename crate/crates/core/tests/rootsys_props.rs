use chevfiber::polyring::Homogeneity;
use chevfiber::rootsys::{
    build_root_system, invariant_family, parse_manifest, to_manifest, weyl_group, CartanType, Family, RootSystem,
};
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use proptest::prelude::*;

fn rs(f: Family, n: usize) -> RootSystem {
    build_root_system(CartanType::new(f, n)).unwrap()
}

fn big(m: &[Vec<Rational64>]) -> Vec<Vec<BigRational>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|x| BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom())))
                .collect()
        })
        .collect()
}

fn small_types() -> Vec<(Family, usize)> {
    use Family::*;
    vec![(A, 1), (A, 2), (A, 3), (B, 2), (B, 3), (C, 2), (C, 3), (BC, 2), (G, 2), (D, 4)]
}

#[test]
fn root_counts_match_the_classification() {
    use Family::*;
    let expected = [
        (A, 1, 2),
        (A, 2, 6),
        (A, 3, 12),
        (B, 2, 8),
        (B, 3, 18),
        (C, 3, 18),
        (BC, 2, 12),
        (BC, 3, 24),
        (G, 2, 12),
        (D, 4, 24),
        (F, 4, 48),
        (E, 6, 72),
    ];
    for (f, n, count) in expected {
        assert_eq!(rs(f, n).roots().len(), count, "{f:?}{n}");
    }
}

#[test]
fn roots_come_in_opposite_pairs() {
    for (f, n) in small_types() {
        let r = rs(f, n);
        assert_eq!(r.roots().len() % 2, 0);
        for a in r.roots() {
            let neg: Vec<Rational64> = a.iter().map(|c| -c).collect();
            assert!(r.roots().contains(&neg), "{f:?}{n}");
        }
    }
}

#[test]
fn closure_contains_inverses() {
    for (f, n) in small_types() {
        let w = weyl_group(&rs(f, n)).unwrap();
        for g in w.elements() {
            assert!(w.elements().iter().any(|h| g.mul(h).is_identity()), "{f:?}{n}");
        }
    }
}

#[test]
fn generated_families_are_invariant_with_the_degree_law() {
    for (f, n) in small_types() {
        let r = rs(f, n);
        let fam = invariant_family(&r).unwrap();
        let degrees = r.fundamental_degrees().unwrap();
        assert_eq!(fam.degrees(), degrees.as_slice());
        let group = fam.group().unwrap();
        let vars = fam.polynomials()[0].variables().to_vec();
        for p in fam.polynomials() {
            for g in group.coordinate_elements() {
                assert_eq!(&p.substitute_linear(&vars, &big(&g)), p, "{f:?}{n}");
            }
        }
        let j = fam.jacobian().unwrap();
        let expected: u32 = degrees.iter().map(|m| m - 1).sum();
        assert_eq!(j.homogeneous_degree().unwrap(), Homogeneity::Degree(expected), "{f:?}{n}");
    }
}

#[test]
fn bc_shares_the_c_group() {
    assert_eq!(weyl_group(&rs(Family::BC, 2)).unwrap().order(), weyl_group(&rs(Family::C, 2)).unwrap().order());
}

#[test]
fn manifests_round_trip() {
    for (f, n) in small_types() {
        let r = rs(f, n);
        let back = parse_manifest(&to_manifest(&r)).unwrap();
        assert_eq!(back.cartan(), r.cartan());
        assert_eq!(back.roots(), r.roots());
    }
}

fn any_type() -> impl Strategy<Value = (Family, usize)> {
    prop::sample::select(small_types())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn reflections_permute_roots((f, n) in any_type(), i in 0usize..4) {
        let r = rs(f, n);
        let alpha = &r.simple_roots()[i % r.rank()];
        for beta in r.roots() {
            let image = chevfiber::rootsys::reflect(beta, alpha);
            prop_assert!(r.roots().contains(&image));
        }
    }

    #[test]
    fn degree_product_is_group_order((f, n) in any_type()) {
        let r = rs(f, n);
        let product: usize = r.fundamental_degrees().unwrap().iter().map(|&d| d as usize).product();
        prop_assert_eq!(product, weyl_group(&r).unwrap().order());
    }
}
