//! Restriction of ambient invariants to a subspace `a ⊂ c`.
//!
//! Ambient polynomials live in variables `u1..un` (coordinates of `c`).
//! Adapted coordinates are `t1..t_{n-r}` on a complement `c₀` and
//! `x1..xr` along `a`, with `u = Σ t_k c_k + Σ x_j e_j`.

mod config;

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::linalg;
use crate::polyring::{jacobian_det, monomials_of_degree, Homogeneity, Polynomial};
use crate::rootsys::{invariant_family, weyl_group, InvariantFamily, RootError, RootSystem, WeylGroup};

#[derive(Debug, Error)]
pub enum RestrictError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("embedding has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("embedding has {got} columns but the restricted system has rank {expected}")]
    ColumnCount { expected: usize, got: usize },
    #[error("restricted rank {restricted} exceeds ambient rank {ambient}")]
    RankTooLarge { ambient: usize, restricted: usize },
    #[error("polynomial has {got} variables, expected {expected}")]
    VariableCount { expected: usize, got: usize },
    #[error("selection {selection:?} is invalid for a family of {family} members and rank {rank}")]
    Selection {
        selection: Vec<usize>,
        family: usize,
        rank: usize,
    },
    #[error("dependent selection {selection:?}: Jacobian of [{}] vanishes identically", restrictions.join(", "))]
    DependentSelection {
        selection: Vec<usize>,
        restrictions: Vec<String>,
    },
    #[error("restriction W_{index} = {poly} is not invariant under the little group")]
    NotInvariant { index: usize, poly: String },
    #[error("degree ratio {numerator}/{denominator} is not an integer")]
    NonIntegerRank { numerator: u64, denominator: u64 },
    #[error("{sub} does not divide {order}")]
    NonDivisible { order: u64, sub: u64 },
    #[error("degree bound {bound} is below the largest fundamental degree {needed}")]
    BoundTooSmall { bound: u32, needed: u32 },
    #[error(transparent)]
    Root(#[from] RootError),
}

/// A pair configuration `a ⊂ c` with its little Weyl group.
#[derive(Clone, Debug)]
pub struct PairConfig {
    name: String,
    ambient: RootSystem,
    embedding: Vec<Vec<BigRational>>,
    complement: Vec<Vec<BigRational>>,
    restricted: RootSystem,
    little_group: Arc<WeylGroup>,
    invariants: Option<Vec<Polynomial>>,
    selection: Option<Vec<usize>>,
    little_subgroup_order: Option<u64>,
}

/// Restrictions `W_i = U_i(0; x)` of selected ambient invariants.
#[derive(Clone, Debug)]
pub struct RestrictedFamily {
    pub w_polys: Vec<Polynomial>,
    pub degrees: Vec<u32>,
    pub source: Vec<usize>,
    /// `None` when the degree ratio is not an integer.
    pub rank_d: Option<u64>,
    pub jacobian: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub degree: u32,
    pub invariant_dim: usize,
    pub generated_dim: usize,
    pub contained: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectivityReport {
    pub bound: u32,
    pub surjective: bool,
    pub failing_degree: Option<u32>,
    pub degrees: Vec<DegreeReport>,
}

fn clear_big(v: &[BigRational]) -> Vec<BigRational> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let s = BigRational::from_integer(l);
    v.iter().map(|x| x * &s).collect()
}

impl PairConfig {
    /// `embedding` lists the `r` columns (each of length `n`) spanning `a`
    /// in the ambient polynomial coordinates.
    pub fn new(
        name: impl Into<String>,
        ambient: RootSystem,
        embedding: Vec<Vec<BigRational>>,
        restricted: RootSystem,
    ) -> Result<Self, RestrictError> {
        let n = ambient.rank();
        let r = restricted.rank();
        if r > n {
            return Err(RestrictError::RankTooLarge {
                ambient: n,
                restricted: r,
            });
        }
        if embedding.len() != r {
            return Err(RestrictError::ColumnCount {
                expected: r,
                got: embedding.len(),
            });
        }
        if let Some(c) = embedding.iter().find(|c| c.len() != n) {
            return Err(RestrictError::VariableCount {
                expected: n,
                got: c.len(),
            });
        }
        let rank = linalg::rank(&embedding);
        if rank != r {
            return Err(RestrictError::RankDeficient { rank, expected: r });
        }
        let mut seeds = embedding.clone();
        seeds.extend((0..n).map(|i| {
            let mut e = vec![BigRational::zero(); n];
            e[i] = BigRational::one();
            e
        }));
        let complement = linalg::gram_schmidt(&seeds)
            .into_iter()
            .skip(r)
            .map(|c| clear_big(&c))
            .collect();
        let little_group = Arc::new(weyl_group(&restricted)?);
        Ok(PairConfig {
            name: name.into(),
            ambient,
            embedding,
            complement,
            restricted,
            little_group,
            invariants: None,
            selection: None,
            little_subgroup_order: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> &RootSystem {
        &self.ambient
    }

    pub fn restricted(&self) -> &RootSystem {
        &self.restricted
    }

    pub fn embedding(&self) -> &[Vec<BigRational>] {
        &self.embedding
    }

    pub fn complement(&self) -> &[Vec<BigRational>] {
        &self.complement
    }

    pub fn little_group(&self) -> &Arc<WeylGroup> {
        &self.little_group
    }

    /// Explicit ambient invariants from the config file, if any.
    pub fn invariants(&self) -> Option<&[Polynomial]> {
        self.invariants.as_deref()
    }

    pub fn with_invariants(mut self, polys: Vec<Polynomial>) -> Self {
        self.invariants = Some(polys);
        self
    }

    pub fn configured_selection(&self) -> Option<&[usize]> {
        self.selection.as_deref()
    }

    pub fn little_subgroup_order(&self) -> Option<u64> {
        self.little_subgroup_order
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient.rank()
    }

    pub fn rank(&self) -> usize {
        self.restricted.rank()
    }

    pub fn t_vars(&self) -> Vec<String> {
        Polynomial::var_names("t", self.ambient_rank() - self.rank())
    }

    pub fn x_vars(&self) -> Vec<String> {
        Polynomial::var_names("x", self.rank())
    }

    /// `t1..t_{n-r}, x1..xr`.
    pub fn adapted_vars(&self) -> Vec<String> {
        let mut v = self.t_vars();
        v.extend(self.x_vars());
        v
    }

    pub fn ambient_vars(&self) -> Vec<String> {
        Polynomial::var_names("u", self.ambient_rank())
    }

    /// The ambient family: explicit config invariants when present (not
    /// checked against the ambient group), otherwise the generated one.
    pub fn family(&self) -> Result<InvariantFamily, RestrictError> {
        match &self.invariants {
            Some(polys) => Ok(InvariantFamily::new(polys.clone(), None)?),
            None => Ok(invariant_family(&self.ambient)?),
        }
    }

    /// Configured selection, else the first `r` members.
    pub fn selection_for(&self, fam: &InvariantFamily) -> Vec<usize> {
        self.selection
            .clone()
            .unwrap_or_else(|| (0..self.rank().min(fam.len())).collect())
    }

    pub fn adapt_coordinates(&self, u: &Polynomial) -> Result<Polynomial, RestrictError> {
        let n = self.ambient_rank();
        if u.nvars() != n {
            return Err(RestrictError::VariableCount {
                expected: n,
                got: u.nvars(),
            });
        }
        let images: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                self.complement
                    .iter()
                    .chain(&self.embedding)
                    .map(|col| col[i].clone())
                    .collect()
            })
            .collect();
        Ok(u.substitute_linear(&self.adapted_vars(), &images))
    }

    /// `U(0; x)` in the `x` variables.
    pub fn restrict(&self, u: &Polynomial) -> Result<Polynomial, RestrictError> {
        let t = self.t_vars();
        let t: Vec<&str> = t.iter().map(String::as_str).collect();
        Ok(self.adapt_coordinates(u)?.restrict_zero(&t))
    }

    fn check_selection(&self, fam: &InvariantFamily, selection: &[usize]) -> Result<(), RestrictError> {
        let mut sorted = selection.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if selection.len() != self.rank() || sorted.len() != selection.len() || selection.iter().any(|&i| i >= fam.len()) {
            return Err(RestrictError::Selection {
                selection: selection.to_vec(),
                family: fam.len(),
                rank: self.rank(),
            });
        }
        Ok(())
    }

    /// Selected members in adapted coordinates `(t; x)`.
    pub fn adapted_family(&self, fam: &InvariantFamily, selection: &[usize]) -> Result<Vec<Polynomial>, RestrictError> {
        self.check_selection(fam, selection)?;
        selection
            .iter()
            .map(|&i| self.adapt_coordinates(&fam.polynomials()[i]))
            .collect()
    }

    pub fn is_little_invariant(&self, w: &Polynomial) -> bool {
        self.little_group.coordinate_generators().iter().all(|m| {
            let rows: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(q_to_big).collect()).collect();
            w.substitute_linear(w.variables(), &rows) == *w
        })
    }

    pub fn restrict_family(&self, fam: &InvariantFamily, selection: &[usize]) -> Result<RestrictedFamily, RestrictError> {
        self.check_selection(fam, selection)?;
        let w_polys = selection
            .iter()
            .map(|&i| self.restrict(&fam.polynomials()[i]))
            .collect::<Result<Vec<_>, _>>()?;
        let xs = self.x_vars();
        let xs: Vec<&str> = xs.iter().map(String::as_str).collect();
        let jacobian = jacobian_det(&w_polys, &xs).expect("restrictions share the x variables");
        if jacobian.is_zero() {
            return Err(RestrictError::DependentSelection {
                selection: selection.to_vec(),
                restrictions: w_polys.iter().map(ToString::to_string).collect(),
            });
        }
        let mut degrees = Vec::with_capacity(w_polys.len());
        for (k, w) in w_polys.iter().enumerate() {
            if !self.is_little_invariant(w) {
                return Err(RestrictError::NotInvariant {
                    index: k + 1,
                    poly: w.to_string(),
                });
            }
            match w.homogeneous_degree() {
                Ok(Homogeneity::Degree(d)) => degrees.push(d),
                _ => unreachable!("a nonzero Jacobian forces nonzero homogeneous restrictions"),
            }
        }
        let e = self.restricted.fundamental_degrees()?;
        let rank_d = rank_d(&degrees, &e).ok();
        Ok(RestrictedFamily {
            w_polys,
            degrees,
            source: selection.to_vec(),
            rank_d,
            jacobian,
        })
    }

    /// Compares, degree by degree up to `bound`, the little-group invariants
    /// with the span of products of restrictions of all members of `fam`.
    pub fn surjectivity_check(&self, fam: &InvariantFamily, bound: u32) -> Result<SurjectivityReport, RestrictError> {
        let e = self.restricted.fundamental_degrees()?;
        let needed = e.iter().copied().max().unwrap_or(0);
        if bound < needed {
            return Err(RestrictError::BoundTooSmall { bound, needed });
        }
        let mut gens: Vec<(Polynomial, u32)> = Vec::new();
        for u in fam.polynomials() {
            let w = self.restrict(u)?;
            if let Ok(Homogeneity::Degree(d)) = w.homogeneous_degree() {
                if d > 0 {
                    gens.push((w, d));
                }
            }
        }
        let elements: Vec<Vec<Vec<BigRational>>> = self
            .little_group
            .coordinate_elements()
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(q_to_big).collect()).collect())
            .collect();
        let xs = self.x_vars();
        let r = self.rank();
        let degrees: Vec<DegreeReport> = (1..=bound)
            .into_par_iter()
            .map(|k| {
                let monos = monomials_of_degree(r, k);
                let vector = |p: &Polynomial| -> Vec<BigRational> { monos.iter().map(|m| p.coefficient(m)).collect() };
                let invariants: Vec<Vec<BigRational>> = monos
                    .iter()
                    .map(|m| {
                        let mono = Polynomial::from_terms(xs.clone(), [(m.clone(), BigRational::one())]);
                        let avg = elements
                            .iter()
                            .fold(Polynomial::zero(xs.clone()), |acc, g| acc.add(&mono.substitute_linear(&xs, g)));
                        vector(&avg)
                    })
                    .collect();
                let products: Vec<Vec<BigRational>> =
                    products_of_degree(&gens, k, &xs).iter().map(vector).collect();
                let mut all = products.clone();
                all.extend(invariants.iter().cloned());
                let generated_dim = linalg::rank(&products);
                let combined = linalg::rank(&all);
                let invariant_dim = linalg::rank(&invariants);
                DegreeReport {
                    degree: k,
                    invariant_dim,
                    generated_dim,
                    contained: combined == generated_dim,
                }
            })
            .collect();
        let failing_degree = degrees.iter().find(|d| !d.contained).map(|d| d.degree);
        Ok(SurjectivityReport {
            bound,
            surjective: failing_degree.is_none(),
            failing_degree,
            degrees,
        })
    }

    /// `(|W(a)| / |W_{K∩H}|) · d` using the configured subgroup order.
    pub fn dim_e(&self, d: u64) -> Option<Result<u64, RestrictError>> {
        self.little_subgroup_order
            .map(|sub| dim_e(self.little_group.order() as u64, sub, d))
    }
}

fn q_to_big(x: &crate::rootsys::Q) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

/// All products `Π W_i^{a_i}` of total degree `k`.
fn products_of_degree(gens: &[(Polynomial, u32)], k: u32, vars: &[String]) -> Vec<Polynomial> {
    fn go(
        gens: &[(Polynomial, u32)],
        start: usize,
        remaining: u32,
        acc: Polynomial,
        out: &mut Vec<Polynomial>,
    ) {
        if remaining == 0 {
            out.push(acc);
            return;
        }
        for (i, (g, d)) in gens.iter().enumerate().skip(start) {
            if *d <= remaining {
                go(gens, i, remaining - d, acc.mul(g), out);
            }
        }
    }
    let mut out = Vec::new();
    go(gens, 0, k, Polynomial::constant(vars.to_vec(), BigRational::one()), &mut out);
    out
}

/// `Π m_i / Π e_j`, which must be an integer.
pub fn rank_d(m: &[u32], e: &[u32]) -> Result<u64, RestrictError> {
    let numerator: u64 = m.iter().map(|&x| u64::from(x)).product();
    let denominator: u64 = e.iter().map(|&x| u64::from(x)).product();
    if denominator == 0 || m.len() != e.len() || !numerator.is_multiple_of(denominator) {
        return Err(RestrictError::NonIntegerRank { numerator, denominator });
    }
    Ok(numerator / denominator)
}

pub fn dim_e(order_little: u64, order_subgroup: u64, d: u64) -> Result<u64, RestrictError> {
    if order_subgroup == 0 || !order_little.is_multiple_of(order_subgroup) {
        return Err(RestrictError::NonDivisible {
            order: order_little,
            sub: order_subgroup,
        });
    }
    Ok(order_little / order_subgroup * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;
    use crate::rootsys::build_root_system;

    fn big(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn rs(label: &str) -> RootSystem {
        build_root_system(label.parse().unwrap()).unwrap()
    }

    fn toy(poly: &str) -> (PairConfig, InvariantFamily) {
        let cfg = PairConfig::new("toy", rs("B2"), vec![vec![big(0), big(1)]], rs("A1")).unwrap();
        let p = parse_polynomial(poly, &cfg.ambient_vars()).unwrap();
        let fam = InvariantFamily::new(vec![p], None).unwrap();
        (cfg, fam)
    }

    #[test]
    fn axis_embedding_keeps_form() {
        let (cfg, fam) = toy("u1^2 + u2^2");
        let a = cfg.adapt_coordinates(&fam.polynomials()[0]).unwrap();
        assert_eq!(a.to_string(), "1/1*t1^2 + 1/1*x1^2");
        let w = cfg.restrict_family(&fam, &[0]).unwrap();
        assert_eq!(w.w_polys[0].to_string(), "1/1*x1^2");
        assert_eq!(w.jacobian.to_string(), "2/1*x1^1");
        assert_eq!(w.rank_d, Some(1));
    }

    #[test]
    fn diagonal_embedding() {
        let cfg = PairConfig::new("diag", rs("B2"), vec![vec![big(1), big(1)]], rs("A1")).unwrap();
        assert_eq!(cfg.complement(), &[vec![big(1), big(-1)]]);
        let u = parse_polynomial("u1^2 + u2^2", &cfg.ambient_vars()).unwrap();
        assert_eq!(cfg.adapt_coordinates(&u).unwrap().to_string(), "2/1*t1^2 + 2/1*x1^2");
    }

    #[test]
    fn dependent_selection_reports_certificate() {
        let (cfg, fam) = toy("u1^2");
        match cfg.restrict_family(&fam, &[0]) {
            Err(RestrictError::DependentSelection { restrictions, .. }) => assert_eq!(restrictions, vec!["0/1"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn synthetic_quartic() {
        let (cfg, fam) = toy("u2^4 + u1^2*u2^2");
        let w = cfg.restrict_family(&fam, &[0]).unwrap();
        assert_eq!(w.w_polys[0].to_string(), "1/1*x1^4");
        assert_eq!(w.rank_d, Some(2));
        let rep = cfg.surjectivity_check(&fam, 6).unwrap();
        assert!(!rep.surjective);
        assert_eq!(rep.failing_degree, Some(2));
    }

    #[test]
    fn toy_is_surjective() {
        let (cfg, fam) = toy("u1^2 + u2^2");
        let rep = cfg.surjectivity_check(&fam, 12).unwrap();
        assert!(rep.surjective, "{rep:?}");
        assert_eq!(rep.degrees[1], DegreeReport { degree: 2, invariant_dim: 1, generated_dim: 1, contained: true });
        assert_eq!(rep.degrees[2].invariant_dim, 0);
    }

    #[test]
    fn bound_below_degrees_rejected() {
        let (cfg, fam) = toy("u1^2 + u2^2");
        assert!(matches!(cfg.surjectivity_check(&fam, 1), Err(RestrictError::BoundTooSmall { .. })));
    }

    #[test]
    fn rank_and_dimension_formulas() {
        assert_eq!(rank_d(&[2, 4], &[2, 4]).unwrap(), 1);
        assert_eq!(rank_d(&[4], &[2]).unwrap(), 2);
        assert_eq!(rank_d(&[2, 8], &[2, 4]).unwrap(), 2);
        assert!(rank_d(&[3], &[2]).is_err());
        assert_eq!(dim_e(8, 8, 1).unwrap(), 1);
        assert_eq!(dim_e(8, 2, 1).unwrap(), 4);
        assert_eq!(dim_e(8, 4, 2).unwrap(), 4);
        assert!(dim_e(8, 3, 1).is_err());
    }

    #[test]
    fn rank_deficient_embedding() {
        let e = PairConfig::new("bad", rs("B2"), vec![vec![big(0), big(0)]], rs("A1")).unwrap_err();
        assert!(matches!(e, RestrictError::RankDeficient { .. }));
    }
}
