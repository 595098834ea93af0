use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::weyl::regular_candidate;
use super::{weyl_group, RootError, RootSystem, WeylGroup, Q};
use crate::linalg;
use crate::polyring::{jacobian_det, monomials_of_degree, Homogeneity, Monomial, Polynomial};

/// Homogeneous invariants `U_1..U_n` of a finite group, with degrees.
#[derive(Clone, Debug)]
pub struct InvariantFamily {
    polynomials: Vec<Polynomial>,
    degrees: Vec<u32>,
    group: Option<Arc<WeylGroup>>,
}

pub(crate) fn to_big(x: &Q) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

/// Images of the coordinate variables under `x ↦ M x`.
pub(crate) fn big_rows(m: &[Vec<Q>]) -> Vec<Vec<BigRational>> {
    m.iter().map(|row| row.iter().map(to_big).collect()).collect()
}

impl InvariantFamily {
    /// Checks homogeneity of every member and, when a group is given, exact
    /// invariance under each of its generators.
    pub fn new(polynomials: Vec<Polynomial>, group: Option<Arc<WeylGroup>>) -> Result<Self, RootError> {
        let mut degrees = Vec::with_capacity(polynomials.len());
        for (i, p) in polynomials.iter().enumerate() {
            match p.homogeneous_degree() {
                Ok(Homogeneity::Degree(d)) => degrees.push(d),
                Ok(Homogeneity::Inhomogeneous) => {
                    return Err(RootError::InvalidFamily(format!("member {i} is not homogeneous")))
                }
                Err(_) => return Err(RootError::InvalidFamily(format!("member {i} is zero"))),
            }
        }
        if let Some(g) = &group {
            for (i, p) in polynomials.iter().enumerate() {
                if p.nvars() != g.coordinate_basis().len() {
                    return Err(RootError::InvalidFamily(format!(
                        "member {i} has {} variables, group acts on {}",
                        p.nvars(),
                        g.coordinate_basis().len()
                    )));
                }
                for (k, m) in g.coordinate_generators().iter().enumerate() {
                    if p.substitute_linear(p.variables(), &big_rows(m)) != *p {
                        return Err(RootError::InvalidFamily(format!(
                            "member {i} is not invariant under generator {k}"
                        )));
                    }
                }
            }
        }
        Ok(InvariantFamily {
            polynomials,
            degrees,
            group,
        })
    }

    pub fn polynomials(&self) -> &[Polynomial] {
        &self.polynomials
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn group(&self) -> Option<&Arc<WeylGroup>> {
        self.group.as_ref()
    }

    pub fn len(&self) -> usize {
        self.polynomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polynomials.is_empty()
    }

    /// Jacobian determinant in all variables; requires as many members as
    /// variables.
    pub fn jacobian(&self) -> Result<Polynomial, RootError> {
        let vars = self
            .polynomials
            .first()
            .map(|p| p.variables().to_vec())
            .unwrap_or_default();
        let xs: Vec<&str> = vars.iter().map(String::as_str).collect();
        jacobian_det(&self.polynomials, &xs).map_err(|e| RootError::InvalidFamily(e.to_string()))
    }
}

fn multinomial(k: u32, exps: &[u32]) -> BigInt {
    let fact = |m: u32| (1..=m).fold(BigInt::one(), |acc, i| acc * i);
    exps.iter().fold(fact(k), |acc, &e| acc / fact(e))
}

/// `Σ_u ⟨u, x⟩^k` where each `u` is given by its pairing vector against
/// the coordinate basis (so `⟨u, x⟩ = Σ c_i x_i`). Exact.
pub fn orbit_power_sum(pairings: &[Vec<Q>], k: u32, vars: &[String]) -> Polynomial {
    let n = vars.len();
    let l = pairings
        .iter()
        .flatten()
        .fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Vec<i64>> = pairings
        .iter()
        .map(|c| c.iter().map(|x| (*x * Q::from_integer(l)).to_integer()).collect())
        .collect();
    // powers[u][i][e] in i128 when representable
    let powers: Vec<Vec<Vec<Option<i128>>>> = ints
        .iter()
        .map(|a| {
            a.iter()
                .map(|&x| {
                    let mut v = vec![Some(1i128)];
                    for e in 1..=k as usize {
                        let next = v[e - 1].and_then(|p| p.checked_mul(x as i128));
                        v.push(next);
                    }
                    v
                })
                .collect()
        })
        .collect();
    let scale = BigRational::from_integer(BigInt::from(l).pow(k));
    let mut poly = Polynomial::zero(vars.to_vec());
    for exps in monomials_of_degree(n, k) {
        let sum = fast_sum(&powers, &exps).unwrap_or_else(|| slow_sum(&ints, &exps));
        if sum.is_zero() {
            continue;
        }
        let c = BigRational::from_integer(sum * multinomial(k, &exps)) / &scale;
        poly.add_term(Monomial(exps), c);
    }
    poly
}

fn fast_sum(powers: &[Vec<Vec<Option<i128>>>], exps: &[u32]) -> Option<BigInt> {
    let mut acc: i128 = 0;
    for pu in powers {
        let mut term: i128 = 1;
        for (i, &e) in exps.iter().enumerate() {
            term = term.checked_mul(pu[i][e as usize]?)?;
        }
        acc = acc.checked_add(term)?;
    }
    Some(BigInt::from(acc))
}

fn slow_sum(ints: &[Vec<i64>], exps: &[u32]) -> BigInt {
    ints.iter()
        .map(|a| {
            a.iter()
                .zip(exps)
                .fold(BigInt::one(), |acc, (&x, &e)| acc * BigInt::from(x).pow(e))
        })
        .sum()
}

/// `Σ_{α ∈ roots} ⟨α, x⟩^k`; zero for odd `k` on symmetric root sets.
pub fn orbit_sum_invariant(rs: &RootSystem, k: u32) -> Polynomial {
    let pairings: Vec<Vec<Q>> = rs.roots().iter().map(|r| rs.coordinate_pairings(r)).collect();
    orbit_power_sum(&pairings, k, &Polynomial::var_names("u", rs.rank()))
}

const TEST_PRIMES: [i64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Exact rank test of the Jacobian matrix at a few rational points. Full
/// rank at any point certifies algebraic independence.
fn independent_at_points(gradients: &[Vec<Polynomial>]) -> bool {
    let Some(first) = gradients.first() else {
        return true;
    };
    let n = first.len();
    (0..4).any(|s| {
        let point: Vec<BigRational> = (0..n)
            .map(|i| BigRational::from_integer(BigInt::from(TEST_PRIMES[i % 8] + s * (i as i64 + 1))))
            .collect();
        let rows: Vec<Vec<BigRational>> = gradients
            .iter()
            .map(|g| g.iter().map(|d| d.eval_rational(&point)).collect())
            .collect();
        linalg::rank(&rows) == gradients.len()
    })
}

fn gradient(p: &Polynomial) -> Vec<Polynomial> {
    (0..p.nvars()).map(|i| p.derivative_index(i)).collect()
}

/// One invariant per fundamental degree, built from orbit sums
/// `Σ_w ⟨w v_j, x⟩^k` over the deterministic regular vectors `v_j`, with
/// root-orbit sums as a last resort.
pub fn invariant_family(rs: &RootSystem) -> Result<InvariantFamily, RootError> {
    let group = Arc::new(weyl_group(rs)?);
    let degrees = rs.fundamental_degrees()?;
    let vars = Polynomial::var_names("u", rs.rank());
    let mut orbit_cache: HashMap<u32, Vec<Vec<Q>>> = HashMap::new();
    let mut chosen: Vec<Polynomial> = Vec::new();
    let mut gradients: Vec<Vec<Polynomial>> = Vec::new();

    for &k in &degrees {
        let mut accepted = None;
        for j in 0..64u32 {
            let v = regular_candidate(rs.dim(), j);
            if !rs.is_regular(&v) {
                continue;
            }
            let pairings = orbit_cache.entry(j).or_insert_with(|| {
                group
                    .elements()
                    .iter()
                    .map(|w| rs.coordinate_pairings(&w.apply(&v)))
                    .collect()
            });
            let cand = orbit_power_sum(pairings, k, &vars);
            if cand.is_zero() {
                continue;
            }
            let grad = gradient(&cand);
            gradients.push(grad);
            if independent_at_points(&gradients) {
                accepted = Some(cand);
                break;
            }
            gradients.pop();
        }
        if accepted.is_none() {
            let cand = orbit_sum_invariant(rs, k);
            if !cand.is_zero() {
                gradients.push(gradient(&cand));
                if independent_at_points(&gradients) {
                    accepted = Some(cand);
                } else {
                    gradients.pop();
                }
            }
        }
        match accepted {
            Some(p) => chosen.push(p),
            None => {
                return Err(RootError::Construction {
                    cartan: rs.cartan().to_string(),
                    degree: k,
                    reason: "candidate sequence exhausted without raising transcendence degree".into(),
                })
            }
        }
    }

    let family = InvariantFamily::new(chosen, Some(group))?;
    if family.jacobian()?.is_zero() {
        return Err(RootError::Construction {
            cartan: rs.cartan().to_string(),
            degree: *degrees.last().unwrap_or(&0),
            reason: "Jacobian determinant vanishes identically".into(),
        });
    }
    Ok(family)
}
