//! The deformed system `U_i(ζ; x) = a_i` in adapted coordinates `(t; x)`.

mod homotopy;
mod orbit;
mod result;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::polyring::{jacobian_det, CompiledPoly, Homogeneity, Polynomial};
use crate::restrict::{PairConfig, RestrictError};
use crate::rootsys::{InvariantFamily, RootSystem};

pub use homotopy::solve_fiber;
pub use orbit::orbit_partition;
pub use result::{FiberResult, PathStats};

pub type C = Complex64;

#[derive(Debug, Error)]
pub enum FiberError {
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("family member {0} is not a nonzero homogeneous polynomial")]
    NotHomogeneous(usize),
    #[error("family members do not share the variable list (t; x) with {expected} variables")]
    Variables { expected: usize },
    #[error("Jacobian vanishes identically at this specialization")]
    Dependent,
    #[error("path tracking failed: {failed} of {tracked} paths after {attempts} attempts")]
    PathFailure {
        tracked: usize,
        failed: usize,
        attempts: u32,
    },
    #[error("starting point is ramified (|J| = {value:.3e})")]
    Ramified { value: f64 },
    #[error("Jacobian became singular at Newton iteration {iteration}")]
    SingularJacobian { iteration: usize },
    #[error("Newton iteration left the basin after {iterations} iterations (residual {residual:.3e})")]
    Diverged { iterations: usize, residual: f64 },
    #[error("orbit clustering is inconsistent between solutions {first} and {second}; try a smaller radius")]
    InconsistentOrbits { first: usize, second: usize },
    #[error("solution {index} fails the postcondition with residual {residual:.3e}")]
    Postcondition { index: usize, residual: f64 },
    #[error("non-finite input")]
    NonFinite,
    #[error(transparent)]
    Restrict(#[from] RestrictError),
}

/// Numerical tolerances and the random seed.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub seed: u64,
    /// Residual acceptance.
    pub tol: f64,
    pub cluster_radius: f64,
    pub singular_tol: f64,
    pub int_tol: f64,
    pub newton_tol: f64,
    pub step_min: f64,
    pub step_max: f64,
    pub failure_threshold: f64,
    pub max_retries: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            seed: 0,
            tol: 1e-8,
            cluster_radius: 1e-6,
            singular_tol: 1e-10,
            int_tol: 1e-8,
            newton_tol: 1e-12,
            step_min: 1e-4,
            step_max: 1e-1,
            failure_threshold: 0.05,
            max_retries: 3,
        }
    }
}

impl SolveOptions {
    pub fn with_seed(seed: u64) -> Self {
        SolveOptions {
            seed,
            ..Self::default()
        }
    }
}

/// `U_1..U_r` in `(t_1..t_{n-r}; x_1..x_r)`, with their Jacobian in `x`.
#[derive(Clone, Debug)]
pub struct FiberFamily {
    polys: Vec<Polynomial>,
    n_t: usize,
    degrees: Vec<u32>,
    jacobian: Polynomial,
    compiled: Vec<CompiledPoly>,
    compiled_j: CompiledPoly,
    symmetry: Vec<DMatrix<f64>>,
}

/// `J(t; x) = det[∂U_i/∂x_j]`; the last `polys.len()` variables are `x`.
pub fn jacobian_j(polys: &[Polynomial]) -> Result<Polynomial, FiberError> {
    let r = polys.len();
    let vars = polys.first().map(|p| p.variables().to_vec()).unwrap_or_default();
    if r == 0 || vars.len() < r {
        return Err(FiberError::Variables { expected: r });
    }
    let xs: Vec<&str> = vars[vars.len() - r..].iter().map(String::as_str).collect();
    jacobian_det(polys, &xs).map_err(|_| FiberError::Variables { expected: vars.len() })
}

impl FiberFamily {
    pub fn new(polys: Vec<Polynomial>, n_t: usize) -> Result<Self, FiberError> {
        let r = polys.len();
        let expected = n_t + r;
        let vars = polys.first().map(|p| p.variables().to_vec()).unwrap_or_default();
        if r == 0 || vars.len() != expected || polys.iter().any(|p| p.variables() != vars.as_slice()) {
            return Err(FiberError::Variables { expected });
        }
        let mut degrees = Vec::with_capacity(r);
        for (i, p) in polys.iter().enumerate() {
            match p.homogeneous_degree() {
                Ok(Homogeneity::Degree(d)) if d > 0 => degrees.push(d),
                _ => return Err(FiberError::NotHomogeneous(i)),
            }
        }
        let jacobian = jacobian_j(&polys)?;
        let compiled = polys.iter().map(CompiledPoly::new).collect();
        let compiled_j = CompiledPoly::new(&jacobian);
        Ok(FiberFamily {
            polys,
            n_t,
            degrees,
            jacobian,
            compiled,
            compiled_j,
            symmetry: Vec::new(),
        })
    }

    /// Adapted selection of `fam` for `cfg`, carrying the little group's
    /// coordinate action for orbit partitions.
    pub fn from_config(cfg: &PairConfig, fam: &InvariantFamily, selection: &[usize]) -> Result<Self, FiberError> {
        let polys = cfg.adapted_family(fam, selection)?;
        let n_t = cfg.ambient_rank() - cfg.rank();
        let symmetry = cfg
            .little_group()
            .coordinate_elements()
            .iter()
            .map(|m| {
                let r = m.len();
                DMatrix::from_fn(r, r, |i, j| {
                    let q = m[i][j];
                    *q.numer() as f64 / *q.denom() as f64
                })
            })
            .collect();
        Ok(Self::new(polys, n_t)?.with_symmetry(symmetry))
    }

    /// Linear maps `x ↦ M x` used to group solutions into orbits.
    pub fn with_symmetry(mut self, matrices: Vec<DMatrix<f64>>) -> Self {
        self.symmetry = matrices;
        self
    }

    pub fn symmetry(&self) -> &[DMatrix<f64>] {
        &self.symmetry
    }

    pub fn polynomials(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn jacobian(&self) -> &Polynomial {
        &self.jacobian
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn rank(&self) -> usize {
        self.polys.len()
    }

    /// `Π m_i`, the number of homotopy paths.
    pub fn bezout_bound(&self) -> usize {
        self.degrees.iter().map(|&m| m as usize).product()
    }

    fn check_dims(&self, x: &[C], zeta: &[C]) -> Result<(), FiberError> {
        if zeta.len() != self.n_t {
            return Err(FiberError::DimensionMismatch {
                expected: self.n_t,
                got: zeta.len(),
            });
        }
        if x.len() != self.rank() {
            return Err(FiberError::DimensionMismatch {
                expected: self.rank(),
                got: x.len(),
            });
        }
        if x.iter().chain(zeta).any(|z| !z.is_finite()) {
            return Err(FiberError::NonFinite);
        }
        Ok(())
    }

    fn joined(zeta: &[C], x: &[C]) -> Vec<C> {
        zeta.iter().chain(x).copied().collect()
    }

    /// `φ(x) = (U_i(ζ; x))_i`.
    pub fn phi(&self, zeta: &[C], x: &[C]) -> Result<Vec<C>, FiberError> {
        self.check_dims(x, zeta)?;
        let z = Self::joined(zeta, x);
        Ok(self.compiled.iter().map(|p| p.eval(&z)).collect())
    }

    pub fn eval_j(&self, x: &[C], zeta: &[C]) -> Result<C, FiberError> {
        self.check_dims(x, zeta)?;
        Ok(self.compiled_j.eval(&Self::joined(zeta, x)))
    }

    /// `|J(ζ; x)| > singular_tol · max|coef J| · max(1, ‖(ζ; x)‖)^{deg J}`.
    pub fn is_unramified(&self, x: &[C], zeta: &[C], singular_tol: f64) -> Result<bool, FiberError> {
        let value = self.eval_j(x, zeta)?;
        let Some(deg) = self.jacobian.total_degree() else {
            return Ok(false);
        };
        let norm = norm(&Self::joined(zeta, x)).max(1.0);
        let scale = self.compiled_j.max_abs_coefficient() * norm.powi(deg as i32);
        Ok(value.norm() > singular_tol * scale)
    }

    /// Unramified and off every hyperplane `⟨x, α⟩ ∈ ℤ` for the roots of
    /// `restricted`, whose coordinate system must match `x`.
    pub fn is_generic(&self, x: &[C], zeta: &[C], restricted: &RootSystem, opts: &SolveOptions) -> Result<bool, FiberError> {
        if !self.is_unramified(x, zeta, opts.singular_tol)? {
            return Ok(false);
        }
        Ok(root_pairings(restricted)
            .iter()
            .all(|p| !near_integer(pair(p, x), opts.int_tol)))
    }

    /// Every point of the fiber is generic.
    pub fn is_generic_fiber(&self, fiber: &FiberResult, restricted: &RootSystem, opts: &SolveOptions) -> Result<bool, FiberError> {
        for x in &fiber.solutions {
            if !self.is_generic(x, &fiber.zeta, restricted, opts)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub(crate) fn specialize(&self, zeta: &[C]) -> (Vec<CompiledPoly>, Vec<Vec<CompiledPoly>>) {
        let f: Vec<CompiledPoly> = self.compiled.iter().map(|p| p.specialize_prefix(zeta)).collect();
        let df = f
            .iter()
            .map(|p| (0..self.rank()).map(|j| p.derivative(j)).collect())
            .collect();
        (f, df)
    }

    /// Solutions `λ(ξ)` of `U_i(Λ_ξ; λ(ξ)) = U_i(0; λ)`.
    pub fn solve_lambda_xi(&self, lambda_xi: &[C], lambda: &[C], opts: &SolveOptions) -> Result<FiberResult, FiberError> {
        let origin = vec![C::new(0.0, 0.0); self.n_t];
        let target = self.phi(&origin, lambda)?;
        let sys = DeformedSystem::new(self, lambda_xi.to_vec(), target.clone())?;
        let res = solve_fiber(&sys, opts)?;
        for (index, x) in res.solutions.iter().enumerate() {
            let value = self.phi(lambda_xi, x)?;
            let residual = backward_error(&value, &target);
            if residual >= opts.tol {
                return Err(FiberError::Postcondition { index, residual });
            }
        }
        Ok(res)
    }

    /// Newton iteration for `U(ζ; ν) = target` from an unramified `ν₀`.
    pub fn local_inverse_psi(&self, zeta: &[C], nu0: &[C], target: &[C], opts: &SolveOptions) -> Result<Vec<C>, FiberError> {
        const MAX_ITER: usize = 50;
        if target.len() != self.rank() {
            return Err(FiberError::DimensionMismatch {
                expected: self.rank(),
                got: target.len(),
            });
        }
        if !self.is_unramified(nu0, zeta, opts.singular_tol)? {
            return Err(FiberError::Ramified {
                value: self.eval_j(nu0, zeta)?.norm(),
            });
        }
        let (f, df) = self.specialize(zeta);
        let scale = 1.0 + norm(target);
        let mut nu = nu0.to_vec();
        let mut residual = max_diff(&eval_all(&f, &nu), target);
        for iteration in 0..MAX_ITER {
            if residual <= opts.newton_tol * scale {
                return Ok(nu);
            }
            let rhs: Vec<C> = eval_all(&f, &nu).iter().zip(target).map(|(v, a)| a - v).collect();
            let step = solve_linear(&jacobian_matrix(&df, &nu), &rhs).ok_or(FiberError::SingularJacobian { iteration })?;
            for (n, s) in nu.iter_mut().zip(&step) {
                *n += s;
            }
            residual = max_diff(&eval_all(&f, &nu), target);
            if !residual.is_finite() {
                return Err(FiberError::Diverged {
                    iterations: iteration + 1,
                    residual,
                });
            }
            if norm(&step) <= f64::EPSILON * (1.0 + norm(&nu)) {
                break;
            }
        }
        if residual < opts.tol {
            Ok(nu)
        } else {
            Err(FiberError::Diverged {
                iterations: MAX_ITER,
                residual,
            })
        }
    }
}

/// The system `U(ζ; x) = a` for fixed `ζ` and target `a`.
#[derive(Clone, Debug)]
pub struct DeformedSystem<'a> {
    family: &'a FiberFamily,
    zeta: Vec<C>,
    target: Vec<C>,
}

impl<'a> DeformedSystem<'a> {
    pub fn new(family: &'a FiberFamily, zeta: Vec<C>, target: Vec<C>) -> Result<Self, FiberError> {
        family.check_dims(&target, &zeta)?;
        Ok(DeformedSystem { family, zeta, target })
    }

    pub fn family(&self) -> &FiberFamily {
        self.family
    }

    pub fn zeta(&self) -> &[C] {
        &self.zeta
    }

    pub fn target(&self) -> &[C] {
        &self.target
    }

    pub fn degrees(&self) -> &[u32] {
        self.family.degrees()
    }
}

pub fn root_pairings(rs: &RootSystem) -> Vec<Vec<f64>> {
    rs.roots()
        .iter()
        .map(|r| {
            rs.coordinate_pairings(r)
                .iter()
                .map(|q| *q.numer() as f64 / *q.denom() as f64)
                .collect()
        })
        .collect()
}

fn pair(p: &[f64], x: &[C]) -> C {
    p.iter().zip(x).map(|(a, z)| z * *a).sum()
}

/// `z` lies within `tol` of a real integer.
pub fn near_integer(z: C, tol: f64) -> bool {
    z.im.abs() <= tol && (z.re - z.re.round()).abs() <= tol
}

pub(crate) fn norm(v: &[C]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn max_diff(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `max_i |v_i - a_i| / max(1, |a_i|)`.
pub fn backward_error(values: &[C], target: &[C]) -> f64 {
    values
        .iter()
        .zip(target)
        .map(|(v, a)| (v - a).norm() / a.norm().max(1.0))
        .fold(0.0, f64::max)
}

pub(crate) fn eval_all(f: &[CompiledPoly], x: &[C]) -> Vec<C> {
    f.iter().map(|p| p.eval(x)).collect()
}

pub(crate) fn jacobian_matrix(df: &[Vec<CompiledPoly>], x: &[C]) -> DMatrix<C> {
    let r = df.len();
    DMatrix::from_fn(r, r, |i, j| df[i][j].eval(x))
}

pub(crate) fn solve_linear(m: &DMatrix<C>, rhs: &[C]) -> Option<Vec<C>> {
    let b = DVector::from_column_slice(rhs);
    let sol = m.clone().lu().solve(&b)?;
    sol.iter().all(|z| z.is_finite()).then(|| sol.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_polynomial;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    pub(crate) fn family(src: &str) -> FiberFamily {
        let vars = vec!["t".to_string(), "x".to_string()];
        FiberFamily::new(vec![parse_polynomial(src, &vars).unwrap()], 1).unwrap()
    }

    #[test]
    fn jacobians() {
        assert_eq!(family("t^2 + x^2").jacobian().to_string(), "2/1*x^1");
        let syn = family("x^4 + t^2*x^2");
        assert_eq!(syn.jacobian().to_string(), "2/1*t^2*x^1 + 4/1*x^3");
        assert_eq!(syn.jacobian().restrict_zero(&["t"]).to_string(), "4/1*x^3");
    }

    #[test]
    fn unramified_points() {
        let toy = family("t^2 + x^2");
        assert!(toy.is_unramified(&[c(2.0, 0.0)], &[c(1.0, 0.0)], 1e-10).unwrap());
        assert!(!toy.is_unramified(&[c(0.0, 0.0)], &[c(1.0, 0.0)], 1e-10).unwrap());
        let syn = family("x^4 + t^2*x^2");
        let x = c(0.0, 1.0 / 2f64.sqrt());
        assert!(!syn.is_unramified(&[x], &[c(1.0, 0.0)], 1e-10).unwrap());
    }

    #[test]
    fn dimension_errors() {
        let toy = family("t^2 + x^2");
        assert!(matches!(
            toy.is_unramified(&[c(1.0, 0.0)], &[], 1e-10),
            Err(FiberError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn local_inverse() {
        let toy = family("t^2 + x^2");
        let opts = SolveOptions::default();
        let z = [c(1.0, 0.0)];
        let same = toy.local_inverse_psi(&z, &[c(2.0, 0.0)], &[c(5.0, 0.0)], &opts).unwrap();
        assert_eq!(same, vec![c(2.0, 0.0)]);
        let nu = toy.local_inverse_psi(&z, &[c(2.0, 0.0)], &[c(5.1, 0.0)], &opts).unwrap();
        assert!((nu[0] - c(4.1f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!(matches!(
            toy.local_inverse_psi(&z, &[c(0.0, 0.0)], &[c(1.0, 0.0)], &opts),
            Err(FiberError::Ramified { .. })
        ));
    }

    #[test]
    fn integer_test() {
        assert!(near_integer(c(3.0 + 1e-10, 0.0), 1e-8));
        assert!(!near_integer(c(3.0, 1e-3), 1e-8));
        assert!(!near_integer(c(2.5, 0.0), 1e-8));
    }
}
