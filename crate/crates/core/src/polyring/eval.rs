use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::{PolyError, Polynomial};

/// A point of complex affine space with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoint(Vec<Complex64>);

impl ComplexPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self, PolyError> {
        if coords.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(PolyError::NonFinite);
        }
        Ok(ComplexPoint(coords))
    }

    pub fn real(coords: &[f64]) -> Result<Self, PolyError> {
        Self::new(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }
}

/// Floating-point image of an exact polynomial, prepared for repeated
/// evaluation. Coefficients are rounded once, here.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    nvars: usize,
    max_exp: Vec<usize>,
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl CompiledPoly {
    pub fn new(p: &Polynomial) -> Self {
        let terms: Vec<(Vec<u32>, Complex64)> = p
            .terms()
            .map(|(m, c)| {
                let c = c.to_f64().expect("coefficient out of f64 range");
                (m.0.clone(), Complex64::new(c, 0.0))
            })
            .collect();
        Self::from_complex_terms(p.nvars(), terms)
    }

    pub fn from_complex_terms(nvars: usize, terms: Vec<(Vec<u32>, Complex64)>) -> Self {
        let mut max_exp = vec![0usize; nvars];
        for (e, _) in &terms {
            for (m, &k) in max_exp.iter_mut().zip(e) {
                *m = (*m).max(k as usize);
            }
        }
        CompiledPoly {
            nvars,
            max_exp,
            terms,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<u32>, Complex64)] {
        &self.terms
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.nvars);
        let powers: Vec<Vec<Complex64>> = z
            .iter()
            .zip(&self.max_exp)
            .map(|(&x, &m)| {
                let mut v = Vec::with_capacity(m + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                v.push(acc);
                for _ in 0..m {
                    acc *= x;
                    v.push(acc);
                }
                v
            })
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .enumerate()
                    .fold(*c, |acc, (i, &k)| acc * powers[i][k as usize])
            })
            .sum()
    }

    /// Fixes the first `prefix.len()` variables to the given values,
    /// returning a polynomial in the remaining variables.
    pub fn specialize_prefix(&self, prefix: &[Complex64]) -> CompiledPoly {
        let k = prefix.len();
        assert!(k <= self.nvars);
        let mut merged: std::collections::BTreeMap<Vec<u32>, Complex64> = Default::default();
        for (e, c) in &self.terms {
            let factor = e[..k]
                .iter()
                .zip(prefix)
                .fold(*c, |acc, (&p, &z)| acc * z.powu(p));
            *merged.entry(e[k..].to_vec()).or_default() += factor;
        }
        CompiledPoly::from_complex_terms(self.nvars - k, merged.into_iter().collect())
    }

    /// Partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> CompiledPoly {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] > 0)
            .map(|(e, c)| {
                let mut ne = e.clone();
                ne[i] -= 1;
                (ne, *c * e[i] as f64)
            })
            .collect();
        CompiledPoly::from_complex_terms(self.nvars, terms)
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }
}
