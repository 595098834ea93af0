//! Root systems in a standard rational realization, their Weyl groups, and
//! generated families of Weyl-invariant polynomials.
//!
//! Roots live in an ambient `Q^dim` with the standard inner product. When
//! `dim > rank` (types A_n for n >= 2, G2, E6) polynomial invariants are written in
//! rank-many coordinates `x` with respect to an orthogonal basis `b` of the
//! root span, so that a point of the span is `Σ x_i b_i`.

mod invariants;
mod manifest;
mod weyl;

pub use invariants::{invariant_family, orbit_power_sum, orbit_sum_invariant, InvariantFamily};
pub use manifest::{parse_manifest, to_manifest};
pub use weyl::{weyl_group, QMatrix, WeylGroup, MATERIALIZATION_CAP};

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg;

pub type Q = Rational64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("unsupported root system {0}")]
    Unsupported(String),
    #[error("cannot parse type label `{0}`")]
    BadLabel(String),
    #[error("no fundamental degrees tabulated for {0}")]
    TableMiss(String),
    #[error("group closure exceeds the materialization cap of {cap} elements")]
    ClosureTooLarge { cap: usize },
    #[error("invariant construction failed for {cartan} at degree {degree}: {reason}")]
    Construction {
        cartan: String,
        degree: u32,
        reason: String,
    },
    #[error("invalid invariant family: {0}")]
    InvalidFamily(String),
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    BC,
}

/// A type label such as `A2`, `BC3` or `E6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Self {
        CartanType { family, rank }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = RootError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let split = s
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| RootError::BadLabel(s.to_string()))?;
        let (letters, digits) = s.split_at(split);
        let family = parse_family(letters).ok_or_else(|| RootError::BadLabel(s.to_string()))?;
        let rank = digits
            .parse()
            .map_err(|_| RootError::BadLabel(s.to_string()))?;
        Ok(CartanType { family, rank })
    }
}

pub fn parse_family(s: &str) -> Option<Family> {
    Some(match s.trim().to_ascii_uppercase().as_str() {
        "A" => Family::A,
        "B" => Family::B,
        "C" => Family::C,
        "D" => Family::D,
        "E" => Family::E,
        "F" => Family::F,
        "G" => Family::G,
        "BC" => Family::BC,
        _ => return None,
    })
}

/// Fundamental degrees of the Weyl group; BC_n uses the C_n degrees.
/// E7 and E8 are tabulated although their groups are never built.
pub fn fundamental_degrees_of(cartan: CartanType) -> Result<Vec<u32>, RootError> {
    let n = cartan.rank as u32;
    let miss = || RootError::TableMiss(cartan.to_string());
    if n == 0 {
        return Err(miss());
    }
    Ok(match cartan.family {
        Family::A => (2..=n + 1).collect(),
        Family::B | Family::C | Family::BC => (1..=n).map(|i| 2 * i).collect(),
        Family::D if n >= 3 => {
            let mut d: Vec<u32> = (1..n).map(|i| 2 * i).collect();
            d.push(n);
            d.sort_unstable();
            d
        }
        Family::E => match n {
            6 => vec![2, 5, 6, 8, 9, 12],
            7 => vec![2, 6, 8, 10, 12, 14, 18],
            8 => vec![2, 8, 12, 14, 18, 20, 24, 30],
            _ => return Err(miss()),
        },
        Family::F if n == 4 => vec![2, 6, 8, 12],
        Family::G if n == 2 => vec![2, 6],
        _ => return Err(miss()),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSystem {
    cartan: CartanType,
    dim: usize,
    roots: Vec<Vec<Q>>,
    simple_roots: Vec<Vec<Q>>,
    basis: Vec<Vec<Q>>,
}

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

fn half(n: i64) -> Q {
    Q::new(n, 2)
}

fn unit(dim: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    v[i] = Q::one();
    v
}

fn diff(dim: usize, i: usize, j: usize) -> Vec<Q> {
    let mut v = unit(dim, i);
    v[j] = -Q::one();
    v
}

fn scaled(v: &[Q], s: Q) -> Vec<Q> {
    v.iter().map(|x| *x * s).collect()
}

/// Reflection of `v` in the hyperplane orthogonal to `alpha`.
pub fn reflect(v: &[Q], alpha: &[Q]) -> Vec<Q> {
    let f = q(2) * linalg::dot(v, alpha) / linalg::dot(alpha, alpha);
    v.iter().zip(alpha).map(|(x, a)| *x - f * *a).collect()
}

/// Ambient dimension, simple roots, extra seed roots.
type Seeds = (usize, Vec<Vec<Q>>, Vec<Vec<Q>>);

/// Simple roots plus any extra seed roots (the doubled root of BC_n).
fn seeds(cartan: CartanType) -> Result<Seeds, RootError> {
    let n = cartan.rank;
    let unsupported = || RootError::Unsupported(cartan.to_string());
    if n == 0 || n > 6 {
        return Err(unsupported());
    }
    let chain = |dim: usize, len: usize| -> Vec<Vec<Q>> { (0..len).map(|i| diff(dim, i, i + 1)).collect() };
    Ok(match cartan.family {
        Family::A if n == 1 => (1, vec![unit(1, 0)], vec![]),
        Family::A => (n + 1, chain(n + 1, n), vec![]),
        Family::B if n >= 2 => {
            let mut s = chain(n, n - 1);
            s.push(unit(n, n - 1));
            (n, s, vec![])
        }
        Family::C if n >= 2 => {
            let mut s = chain(n, n - 1);
            s.push(scaled(&unit(n, n - 1), q(2)));
            (n, s, vec![])
        }
        Family::BC => {
            let mut s = chain(n, n - 1);
            s.push(unit(n, n - 1));
            (n, s, vec![scaled(&unit(n, n - 1), q(2))])
        }
        Family::D if n >= 3 => {
            let mut s = chain(n, n - 1);
            let mut last = unit(n, n - 2);
            last[n - 1] = Q::one();
            s.push(last);
            (n, s, vec![])
        }
        Family::G if n == 2 => {
            let short = vec![q(1), q(-1), q(0)];
            let long = vec![q(-2), q(1), q(1)];
            (3, vec![short, long], vec![])
        }
        Family::F if n == 4 => {
            let s = vec![
                vec![q(0), q(1), q(-1), q(0)],
                vec![q(0), q(0), q(1), q(-1)],
                vec![q(0), q(0), q(0), q(1)],
                vec![half(1), half(-1), half(-1), half(-1)],
            ];
            (4, s, vec![])
        }
        Family::E if n == 6 => {
            // Bourbaki realization inside R^8
            let mut a1 = vec![half(-1); 8];
            a1[0] = half(1);
            a1[7] = half(1);
            let mut a2 = vec![q(0); 8];
            a2[0] = q(1);
            a2[1] = q(1);
            let s = vec![a1, a2, diff(8, 1, 0), diff(8, 2, 1), diff(8, 3, 2), diff(8, 4, 3)];
            (8, s, vec![])
        }
        _ => return Err(unsupported()),
    })
}

/// Scales a rational vector to a primitive integer vector.
pub fn clear_denominators(v: &[Q]) -> Vec<Q> {
    let l = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (*x * q(l)).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, x| acc.gcd(x));
    if g == 0 {
        return v.to_vec();
    }
    ints.iter().map(|x| q(x / g)).collect()
}

pub fn build_root_system(cartan: CartanType) -> Result<RootSystem, RootError> {
    let (dim, simple, extra) = seeds(cartan)?;
    let mut seen: HashSet<Vec<Q>> = HashSet::new();
    let mut roots = Vec::new();
    let mut queue: VecDeque<Vec<Q>> = VecDeque::new();
    for s in simple.iter().chain(&extra) {
        if seen.insert(s.clone()) {
            roots.push(s.clone());
            queue.push_back(s.clone());
        }
    }
    while let Some(r) = queue.pop_front() {
        for s in &simple {
            let img = reflect(&r, s);
            if seen.insert(img.clone()) {
                roots.push(img.clone());
                queue.push_back(img);
            }
        }
    }
    roots.sort();
    let basis = if dim == cartan.rank {
        (0..dim).map(|i| unit(dim, i)).collect()
    } else {
        linalg::gram_schmidt(&simple)
            .iter()
            .map(|b| clear_denominators(b))
            .collect()
    };
    Ok(RootSystem {
        cartan,
        dim,
        roots,
        simple_roots: simple,
        basis,
    })
}

impl RootSystem {
    /// Assembles a root system from raw data (used by the manifest reader).
    pub(crate) fn from_parts(cartan: CartanType, dim: usize, roots: Vec<Vec<Q>>) -> Result<Self, RootError> {
        let built = build_root_system(cartan)?;
        if built.dim != dim || built.roots != roots {
            return Err(RootError::Manifest {
                line: 0,
                message: format!("root data does not match the standard realization of {cartan}"),
            });
        }
        Ok(built)
    }

    pub fn cartan(&self) -> CartanType {
        self.cartan
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank
    }

    /// Dimension of the ambient coordinate space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn roots(&self) -> &[Vec<Q>] {
        &self.roots
    }

    pub fn simple_roots(&self) -> &[Vec<Q>] {
        &self.simple_roots
    }

    /// Orthogonal basis of the root span used for polynomial coordinates.
    pub fn coordinate_basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn fundamental_degrees(&self) -> Result<Vec<u32>, RootError> {
        fundamental_degrees_of(self.cartan)
    }

    /// Coefficients of `root` in the simple-root basis.
    pub fn simple_coefficients(&self, root: &[Q]) -> Option<Vec<Q>> {
        linalg::solve_in_span(&self.simple_roots, root)
    }

    pub fn positive_roots(&self) -> Vec<Vec<Q>> {
        self.roots
            .iter()
            .filter(|r| {
                self.simple_coefficients(r)
                    .is_some_and(|c| c.iter().all(|x| !x.is_negative()))
            })
            .cloned()
            .collect()
    }

    /// `(⟨b_i, v⟩)_i`: pairing of `v` against the coordinate basis. The
    /// value of `⟨v, Σ x_i b_i⟩` is the dot product of this with `x`.
    pub fn coordinate_pairings(&self, v: &[Q]) -> Vec<Q> {
        self.basis.iter().map(|b| linalg::dot(b, v)).collect()
    }

    /// Coordinates of a vector of the root span in the coordinate basis.
    pub fn coordinates(&self, v: &[Q]) -> Vec<Q> {
        self.basis
            .iter()
            .map(|b| linalg::dot(b, v) / linalg::dot(b, b))
            .collect()
    }

    /// Whether `v` is orthogonal to no root.
    pub fn is_regular(&self, v: &[Q]) -> bool {
        self.roots.iter().all(|r| !linalg::dot(r, v).is_zero())
    }
}
