use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use super::C;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PathStats {
    pub tracked: usize,
    pub failed: usize,
    pub merged: usize,
}

/// Distinct solutions of one fiber, sorted lexicographically by `(re, im)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberResult {
    pub seed: u64,
    pub zeta: Vec<C>,
    pub target: Vec<C>,
    pub solutions: Vec<Vec<C>>,
    /// Relative backward error of each solution, see [`super::backward_error`].
    pub residuals: Vec<f64>,
    pub path_stats: PathStats,
    pub orbit_classes: Vec<Vec<usize>>,
    /// Homotopy runs used, including retries. Not serialized.
    pub attempts: u32,
}

/// Seventeen significant digits, so every `f64` round-trips.
struct Exact(f64);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(S::Error::custom)?;
        raw.serialize(s)
    }
}

fn pair(z: &C) -> [Exact; 2] {
    [Exact(z.re), Exact(z.im)]
}

#[derive(Serialize)]
struct Wire {
    seed: u64,
    zeta: Vec<[Exact; 2]>,
    target: Vec<[Exact; 2]>,
    solutions: Vec<Vec<[Exact; 2]>>,
    residuals: Vec<Exact>,
    path_stats: PathStats,
    orbit_classes: Vec<Vec<usize>>,
}

impl FiberResult {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        let wire = Wire {
            seed: self.seed,
            zeta: self.zeta.iter().map(pair).collect(),
            target: self.target.iter().map(pair).collect(),
            solutions: self
                .solutions
                .iter()
                .map(|x| x.iter().map(pair).collect())
                .collect(),
            residuals: self.residuals.iter().map(|&r| Exact(r)).collect(),
            path_stats: self.path_stats,
            orbit_classes: self.orbit_classes.clone(),
        };
        serde_json::to_string_pretty(&wire).expect("fiber results always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = FiberResult {
            seed: 3,
            zeta: vec![C::new(1.0, 0.0)],
            target: vec![C::new(5.0, -0.5)],
            solutions: vec![vec![C::new(-2.0, 0.0)], vec![C::new(2.0, 0.0)]],
            residuals: vec![0.0, 1e-17],
            path_stats: PathStats {
                tracked: 2,
                failed: 0,
                merged: 0,
            },
            orbit_classes: vec![vec![0, 1]],
            attempts: 1,
        };
        let text = r.to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = vec!["seed", "zeta", "target", "solutions", "residuals", "path_stats", "orbit_classes"];
        expected.sort_unstable();
        let mut keys = keys;
        keys.sort_unstable();
        assert_eq!(keys, expected);
        assert_eq!(v["target"][0][1].as_f64(), Some(-0.5));
        assert_eq!(v["residuals"][1].as_f64(), Some(1e-17));
        assert!(text.contains("-2.0000000000000000e0"));
        assert_eq!(v["path_stats"]["tracked"], 2);
    }
}
