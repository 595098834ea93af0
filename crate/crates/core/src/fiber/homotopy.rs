//! Total-degree homotopy with the gamma trick.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::orbit::orbit_partition;
use super::{backward_error, eval_all, jacobian_matrix, max_diff, norm, solve_linear, DeformedSystem, FiberError, FiberResult, PathStats, SolveOptions, C};
use crate::polyring::CompiledPoly;

const DIVERGENCE_NORM: f64 = 1e8;
const POLISH_ITERS: usize = 12;

struct Tracker<'a> {
    f: &'a [CompiledPoly],
    df: &'a [Vec<CompiledPoly>],
    target: &'a [C],
    /// Row weights putting every target equation on the start system's scale.
    weights: &'a [f64],
    degrees: &'a [u32],
    start_consts: Vec<C>,
    gamma: C,
    opts: &'a SolveOptions,
}

impl Tracker<'_> {
    fn start_value(&self, x: &[C]) -> Vec<C> {
        x.iter()
            .zip(self.degrees)
            .zip(&self.start_consts)
            .map(|((xi, &m), c)| xi.powu(m) - c)
            .collect()
    }

    fn target_value(&self, x: &[C]) -> Vec<C> {
        eval_all(self.f, x)
            .iter()
            .zip(self.target)
            .zip(self.weights)
            .map(|((v, a), w)| (v - a) * w)
            .collect()
    }

    fn target_jacobian(&self, x: &[C]) -> DMatrix<C> {
        let mut m = jacobian_matrix(self.df, x);
        for (i, &w) in self.weights.iter().enumerate() {
            m.row_mut(i).scale_mut(w);
        }
        m
    }

    fn h(&self, x: &[C], s: f64) -> Vec<C> {
        let g = self.start_value(x);
        let f = self.target_value(x);
        g.iter()
            .zip(&f)
            .map(|(gi, fi)| self.gamma * gi * (1.0 - s) + fi * s)
            .collect()
    }

    fn hx(&self, x: &[C], s: f64) -> DMatrix<C> {
        let mut m = self.target_jacobian(x) * C::new(s, 0.0);
        for (i, (&xi, &deg)) in x.iter().zip(self.degrees).enumerate() {
            m[(i, i)] += self.gamma * (1.0 - s) * xi.powu(deg - 1) * deg as f64;
        }
        m
    }

    fn hs(&self, x: &[C]) -> Vec<C> {
        let g = self.start_value(x);
        let f = self.target_value(x);
        f.iter().zip(&g).map(|(fi, gi)| fi - self.gamma * gi).collect()
    }

    /// Newton correction at fixed `s`, at most three iterations. A correction
    /// of size at most `√newton_tol` implies a post-step error near
    /// `newton_tol` under quadratic convergence.
    fn correct(&self, mut x: Vec<C>, s: f64) -> Option<Vec<C>> {
        let accept = self.opts.newton_tol.sqrt();
        let mut last = f64::INFINITY;
        for _ in 0..3 {
            let rhs: Vec<C> = self.h(&x, s).iter().map(|v| -v).collect();
            let delta = solve_linear(&self.hx(&x, s), &rhs)?;
            let size = norm(&delta);
            for (xi, d) in x.iter_mut().zip(&delta) {
                *xi += d;
            }
            if size > last {
                return None;
            }
            if size <= accept * (1.0 + norm(&x)) {
                return Some(x);
            }
            last = size;
        }
        None
    }

    fn track(&self, x0: Vec<C>) -> Option<Vec<C>> {
        let (min, max) = (self.opts.step_min, self.opts.step_max);
        let mut x = x0;
        let mut s = 0.0;
        let mut h = max / 2.0;
        let mut streak = 0;
        while s < 1.0 {
            let step = h.min(1.0 - s);
            let rhs: Vec<C> = self.hs(&x).iter().map(|v| -v).collect();
            let dx = solve_linear(&self.hx(&x, s), &rhs)?;
            let predicted: Vec<C> = x.iter().zip(&dx).map(|(xi, d)| xi + d * step).collect();
            let corrected = self
                .correct(predicted.clone(), s + step)
                .filter(|c| max_diff(c, &predicted) <= 0.1 * (1.0 + norm(&x)));
            match corrected {
                Some(next) => {
                    x = next;
                    s = if step >= 1.0 - s { 1.0 } else { s + step };
                    streak += 1;
                    if streak >= 3 {
                        h = (2.0 * h).min(max);
                        streak = 0;
                    }
                }
                None => {
                    h /= 2.0;
                    streak = 0;
                    if h < min {
                        return None;
                    }
                }
            }
            if norm(&x) > DIVERGENCE_NORM {
                return None;
            }
        }
        Some(polish(self.f, self.df, self.target, x))
    }

}

/// Plain Newton on `f(x) = target`, stopping as soon as the residual stops
/// decreasing.
fn polish(f: &[CompiledPoly], df: &[Vec<CompiledPoly>], target: &[C], mut x: Vec<C>) -> Vec<C> {
    let mut before = max_diff(&eval_all(f, &x), target);
    for _ in 0..POLISH_ITERS {
        let rhs: Vec<C> = eval_all(f, &x).iter().zip(target).map(|(v, a)| a - v).collect();
        let Some(delta) = solve_linear(&jacobian_matrix(df, &x), &rhs) else {
            break;
        };
        let trial: Vec<C> = x.iter().zip(&delta).map(|(xi, d)| xi + d).collect();
        let after = max_diff(&eval_all(f, &trial), target);
        if after.is_nan() || after > before {
            break;
        }
        x = trial;
        before = after;
        if norm(&delta) <= f64::EPSILON * (1.0 + norm(&x)) {
            break;
        }
    }
    x
}

/// `U(ζ/σ; y) = a_i/σ^{m_i}` with `x = σ y`, weighted row by row.
struct Scaled {
    sigma: f64,
    f: Vec<CompiledPoly>,
    df: Vec<Vec<CompiledPoly>>,
    target: Vec<C>,
    weights: Vec<f64>,
}

impl Scaled {
    /// Picks `σ` as the larger of `max|ζ_k|` and `max (|a_i| / max|coef U_i|)^{1/m_i}`,
    /// with coefficients taken before specializing `t`.
    fn new(sys: &DeformedSystem) -> Scaled {
        let degrees = sys.degrees();
        let zeta_size = sys.zeta().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let sigma = sys
            .family()
            .compiled
            .iter()
            .zip(sys.target())
            .zip(degrees)
            .map(|((p, a), &m)| (a.norm() / p.max_abs_coefficient()).powf(1.0 / m as f64))
            .filter(|v| v.is_finite())
            .fold(zeta_size, f64::max);
        let sigma = if sigma > 0.0 { sigma } else { 1.0 };
        let zeta: Vec<C> = sys.zeta().iter().map(|z| z / sigma).collect();
        let (f, df) = sys.family().specialize(&zeta);
        let target: Vec<C> = sys
            .target()
            .iter()
            .zip(degrees)
            .map(|(a, &m)| a / sigma.powi(m as i32))
            .collect();
        let weights = f
            .iter()
            .zip(&target)
            .map(|(p, a)| 1.0 / p.max_abs_coefficient().max(a.norm()).max(1.0))
            .collect();
        Scaled {
            sigma,
            f,
            df,
            target,
            weights,
        }
    }
}

fn start_points(degrees: &[u32], consts: &[C]) -> Vec<Vec<C>> {
    let mut points = vec![Vec::new()];
    for (&m, c) in degrees.iter().zip(consts) {
        let root = C::from_polar(c.norm().powf(1.0 / m as f64), c.arg() / m as f64);
        let mut next = Vec::with_capacity(points.len() * m as usize);
        for p in &points {
            for k in 0..m {
                let mut q = p.clone();
                q.push(root * C::from_polar(1.0, TAU * k as f64 / m as f64));
                next.push(q);
            }
        }
        points = next;
    }
    points
}

/// Lexicographic on `(re, im)` per coordinate.
pub(crate) fn canonical_cmp(a: &[C], b: &[C]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

struct Attempt {
    clusters: Vec<(Vec<C>, usize)>,
    failed: usize,
    merged: usize,
    jumped: bool,
}

fn run_attempt(
    sys: &DeformedSystem,
    scaled: &Scaled,
    f: &[CompiledPoly],
    df: &[Vec<CompiledPoly>],
    rng: &mut ChaCha8Rng,
    opts: &SolveOptions,
) -> Attempt {
    let gamma = C::from_polar(1.0, TAU * rng.gen::<f64>());
    let start_consts: Vec<C> = sys.degrees().iter().map(|_| C::from_polar(1.0, TAU * rng.gen::<f64>())).collect();
    let tracker = Tracker {
        f: &scaled.f,
        df: &scaled.df,
        target: &scaled.target,
        weights: &scaled.weights,
        degrees: sys.degrees(),
        start_consts,
        gamma,
        opts,
    };
    let endpoints: Vec<Option<Vec<C>>> = start_points(sys.degrees(), &tracker.start_consts)
        .into_par_iter()
        .map(|x0| {
            tracker.track(x0).map(|y| {
                let x = y.iter().map(|v| v * scaled.sigma).collect();
                polish(f, df, sys.target(), x)
            })
        })
        .collect();
    let failed = endpoints.iter().filter(|e| e.is_none()).count();
    let mut clusters: Vec<(Vec<C>, usize)> = Vec::new();
    for x in endpoints.into_iter().flatten() {
        let radius = opts.cluster_radius * norm(&x).max(1.0);
        match clusters.iter_mut().find(|(rep, _)| max_diff(rep, &x) <= radius) {
            Some((_, count)) => *count += 1,
            None => clusters.push((x, 1)),
        }
    }
    let tracked = sys.family().bezout_bound();
    let merged = tracked - failed - clusters.len();
    let zeta = sys.zeta();
    let jumped = clusters.iter().any(|(rep, count)| {
        *count > 1
            && sys
                .family()
                .is_unramified(rep, zeta, opts.singular_tol)
                .unwrap_or(false)
    });
    Attempt {
        clusters,
        failed,
        merged,
        jumped,
    }
}

/// Solves `U(ζ; x) = a` by tracking all `Π m_i` paths of a total-degree
/// homotopy. Retries with fresh randomness when more than
/// `failure_threshold` of the paths fail or when two paths land on the same
/// nonsingular endpoint.
pub fn solve_fiber(sys: &DeformedSystem, opts: &SolveOptions) -> Result<FiberResult, FiberError> {
    let family = sys.family();
    let (f, df) = family.specialize(sys.zeta());
    if f.iter().any(|p| p.terms().is_empty()) || family.jacobian().is_zero() {
        return Err(FiberError::Dependent);
    }
    let scaled = Scaled::new(sys);
    let tracked = family.bezout_bound();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut attempts = 0;
    let attempt = loop {
        attempts += 1;
        let a = run_attempt(sys, &scaled, &f, &df, &mut rng, opts);
        let too_many_failures = a.failed as f64 > opts.failure_threshold * tracked as f64;
        if !(too_many_failures || a.jumped) || attempts > opts.max_retries {
            if too_many_failures {
                return Err(FiberError::PathFailure {
                    tracked,
                    failed: a.failed,
                    attempts,
                });
            }
            break a;
        }
    };

    let mut solutions: Vec<(Vec<C>, f64)> = attempt
        .clusters
        .into_iter()
        .map(|(x, _)| {
            let r = backward_error(&eval_all(&f, &x), sys.target());
            (x, r)
        })
        .filter(|(_, r)| *r < opts.tol)
        .collect();
    solutions.sort_by(|a, b| canonical_cmp(&a.0, &b.0));
    let (solutions, residuals): (Vec<_>, Vec<_>) = solutions.into_iter().unzip();
    let orbit_classes = orbit_partition(&solutions, family.symmetry(), opts.cluster_radius)?;
    Ok(FiberResult {
        seed: opts.seed,
        zeta: sys.zeta().to_vec(),
        target: sys.target().to_vec(),
        solutions,
        residuals,
        path_stats: PathStats {
            tracked,
            failed: attempt.failed,
            merged: attempt.merged,
        },
        orbit_classes,
        attempts,
    })
}
