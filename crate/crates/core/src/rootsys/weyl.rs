use std::collections::{HashMap, VecDeque};

use num_traits::{One, Zero};

use super::{RootError, RootSystem, Q};
use crate::linalg;

/// Groups larger than this are not materialized.
pub const MATERIALIZATION_CAP: usize = 100_000;

/// Square rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    n: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![Q::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Q::one();
        }
        QMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<Q>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        QMatrix {
            n,
            data: rows.concat(),
        }
    }

    /// Orthogonal reflection `v ↦ v − 2⟨v,α⟩/⟨α,α⟩ α`.
    pub fn reflection(alpha: &[Q]) -> Self {
        let n = alpha.len();
        let f = Q::from_integer(2) / linalg::dot(alpha, alpha);
        let mut m = QMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] -= f * alpha[i] * alpha[j];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Q>> {
        self.data.chunks(self.n).map(<[Q]>::to_vec).collect()
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        let n = self.n;
        let mut data = vec![Q::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        QMatrix { n, data }
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        self.data
            .chunks(self.n)
            .map(|row| linalg::dot(row, v))
            .collect()
    }

    pub fn transpose(&self) -> QMatrix {
        let n = self.n;
        let mut data = vec![Q::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        QMatrix { n, data }
    }

    pub fn is_identity(&self) -> bool {
        *self == QMatrix::identity(self.n)
    }
}

/// A finite group generated by rational matrices, fully enumerated.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    generators: Vec<QMatrix>,
    elements: Vec<QMatrix>,
    probe: Option<Vec<Q>>,
    index: HashMap<Vec<Q>, usize>,
    basis: Vec<Vec<Q>>,
}

impl WeylGroup {
    /// Closure of arbitrary generators acting on `Q^dim`, with polynomial
    /// coordinates equal to the standard ones.
    pub fn from_generators(generators: Vec<QMatrix>) -> Result<Self, RootError> {
        let dim = generators.first().map_or(0, QMatrix::dim);
        let basis = (0..dim)
            .map(|i| {
                let mut v = vec![Q::zero(); dim];
                v[i] = Q::one();
                v
            })
            .collect();
        Self::close(generators, None, basis)
    }

    fn key(probe: &Option<Vec<Q>>, m: &QMatrix) -> Vec<Q> {
        match probe {
            Some(v) => m.apply(v),
            None => m.data.clone(),
        }
    }

    /// Breadth-first closure under left multiplication by generators.
    /// Elements are keyed by their image of a regular probe vector (which
    /// has trivial stabilizer), or by the full matrix when no probe is given.
    fn close(
        generators: Vec<QMatrix>,
        probe: Option<Vec<Q>>,
        basis: Vec<Vec<Q>>,
    ) -> Result<Self, RootError> {
        let dim = basis.first().map_or(0, Vec::len);
        let id = QMatrix::identity(dim);
        let mut index = HashMap::new();
        let mut elements = vec![id.clone()];
        index.insert(Self::key(&probe, &id), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let current_key = Self::key(&probe, &elements[i]);
            for g in &generators {
                let key = match &probe {
                    Some(_) => g.apply(&current_key),
                    None => g.mul(&elements[i]).data,
                };
                if index.contains_key(&key) {
                    continue;
                }
                if elements.len() >= MATERIALIZATION_CAP {
                    return Err(RootError::ClosureTooLarge {
                        cap: MATERIALIZATION_CAP,
                    });
                }
                let m = g.mul(&elements[i]);
                index.insert(key, elements.len());
                queue.push_back(elements.len());
                elements.push(m);
            }
        }
        Ok(WeylGroup {
            generators,
            elements,
            probe,
            index,
            basis,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.first().map_or(0, Vec::len)
    }

    pub fn generators(&self) -> &[QMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[QMatrix] {
        &self.elements
    }

    pub fn contains(&self, m: &QMatrix) -> bool {
        self.index
            .get(&Self::key(&self.probe, m))
            .is_some_and(|&i| self.elements[i] == *m)
    }

    /// Matrix of `w` acting on polynomial coordinates: `x ↦ M x` where
    /// `M_{ji} = ⟨w b_i, b_j⟩ / ⟨b_j, b_j⟩`.
    pub fn coordinate_matrix(&self, w: &QMatrix) -> Vec<Vec<Q>> {
        let images: Vec<Vec<Q>> = self.basis.iter().map(|b| w.apply(b)).collect();
        self.basis
            .iter()
            .map(|bj| {
                let norm = linalg::dot(bj, bj);
                images.iter().map(|wbi| linalg::dot(wbi, bj) / norm).collect()
            })
            .collect()
    }

    pub fn coordinate_generators(&self) -> Vec<Vec<Vec<Q>>> {
        self.generators.iter().map(|g| self.coordinate_matrix(g)).collect()
    }

    pub fn coordinate_elements(&self) -> Vec<Vec<Vec<Q>>> {
        self.elements.iter().map(|g| self.coordinate_matrix(g)).collect()
    }

    /// Polynomial coordinate basis in the ambient space.
    pub fn coordinate_basis(&self) -> &[Vec<Q>] {
        &self.basis
    }
}

/// Deterministic candidate vectors `(1, j+1, (j+1)^2, ...)`.
pub(crate) fn regular_candidate(dim: usize, j: u32) -> Vec<Q> {
    let base = i64::from(j) + 1;
    (0..dim as u32).map(|k| Q::from_integer(base.pow(k))).collect()
}

pub(crate) fn first_regular(rs: &RootSystem, skip: u32) -> Option<(u32, Vec<Q>)> {
    (skip..skip + 64)
        .map(|j| (j, regular_candidate(rs.dim(), j)))
        .find(|(_, v)| rs.is_regular(v))
}

pub fn weyl_group(rs: &RootSystem) -> Result<WeylGroup, RootError> {
    let generators: Vec<QMatrix> = rs.simple_roots().iter().map(|a| QMatrix::reflection(a)).collect();
    let probe = first_regular(rs, 0).map(|(_, v)| v);
    WeylGroup::close(generators, probe, rs.coordinate_basis().to_vec())
}

#[cfg(test)]
mod tests {
    use super::super::{build_root_system, CartanType};
    use super::*;

    fn group(label: &str) -> WeylGroup {
        let rs = build_root_system(label.parse::<CartanType>().unwrap()).unwrap();
        weyl_group(&rs).unwrap()
    }

    #[test]
    fn small_orders() {
        assert_eq!(group("A1").order(), 2);
        assert_eq!(group("A2").order(), 6);
        assert_eq!(group("BC2").order(), 8);
        assert_eq!(group("B3").order(), 48);
        assert_eq!(group("G2").order(), 12);
    }

    #[test]
    fn generators_are_involutions() {
        let g = group("F4");
        for s in g.generators() {
            assert!(s.mul(s).is_identity());
        }
    }

    #[test]
    fn inverses_present() {
        let g = group("B3");
        for w in g.elements() {
            assert!(g.contains(&w.transpose()));
            assert!(w.mul(&w.transpose()).is_identity());
        }
    }

    #[test]
    fn sign_change_group() {
        let gens = vec![
            QMatrix::from_rows(&[vec![Q::from_integer(-1), Q::zero()], vec![Q::zero(), Q::one()]]),
            QMatrix::from_rows(&[vec![Q::one(), Q::zero()], vec![Q::zero(), Q::from_integer(-1)]]),
        ];
        let g = WeylGroup::from_generators(gens).unwrap();
        assert_eq!(g.order(), 4);
    }

    #[test]
    fn coordinate_action_of_a2_is_orthogonal_in_gram_form() {
        let g = group("A2");
        for m in g.coordinate_elements() {
            // rows of M act on x; M composed with itself |W| times is identity
            let qm = QMatrix::from_rows(&m);
            let mut p = qm.clone();
            for _ in 0..5 {
                p = p.mul(&qm);
            }
            assert!(p.is_identity());
        }
    }
}
