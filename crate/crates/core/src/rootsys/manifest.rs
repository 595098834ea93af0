//! Plain-text root manifests:
//!
//! ```text
//! type: BC2
//! rank: 2
//! dim: 2
//! roots: 12
//! root: -2/1 0/1
//! ...
//! ```

use super::{CartanType, RootError, RootSystem, Q};

fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_manifest(rs: &RootSystem) -> String {
    let mut out = format!(
        "type: {}\nrank: {}\ndim: {}\nroots: {}\n",
        rs.cartan(),
        rs.rank(),
        rs.dim(),
        rs.roots().len()
    );
    for r in rs.roots() {
        let cells: Vec<String> = r.iter().map(fmt_q).collect();
        out.push_str("root: ");
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

fn parse_q(s: &str) -> Option<Q> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.parse().ok()?;
            let d: i64 = d.parse().ok()?;
            (d != 0).then(|| Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

/// Reads a manifest and checks it against the standard realization.
pub fn parse_manifest(text: &str) -> Result<RootSystem, RootError> {
    let mut cartan: Option<CartanType> = None;
    let mut dim: Option<usize> = None;
    let mut roots = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let err = |message: String| RootError::Manifest { line: i + 1, message };
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| err("expected `key: value`".into()))?;
        let value = value.trim();
        match key.trim() {
            "type" => cartan = Some(value.parse()?),
            "rank" | "roots" => {}
            "dim" => dim = Some(value.parse().map_err(|_| err(format!("bad dim `{value}`")))?),
            "root" => {
                let r = value
                    .split_whitespace()
                    .map(|c| parse_q(c).ok_or_else(|| err(format!("bad rational `{c}`"))))
                    .collect::<Result<Vec<_>, _>>()?;
                roots.push(r);
            }
            other => return Err(err(format!("unknown key `{other}`"))),
        }
    }
    let cartan = cartan.ok_or(RootError::Manifest {
        line: 0,
        message: "missing type".into(),
    })?;
    let dim = dim.ok_or(RootError::Manifest {
        line: 0,
        message: "missing dim".into(),
    })?;
    roots.sort();
    RootSystem::from_parts(cartan, dim, roots)
}
