use std::str::FromStr;

use num_rational::BigRational;

use super::{PairConfig, RestrictError};
use crate::polyring::{parse_polynomial, Polynomial};
use crate::rootsys::{build_root_system, parse_family, CartanType};

fn parse_rational(s: &str) -> Option<BigRational> {
    BigRational::from_str(s).ok()
}

fn cartan_from(type_field: &str, rank_field: Option<usize>) -> Result<CartanType, String> {
    let t = type_field.trim();
    if let Some(family) = parse_family(t) {
        let rank = rank_field.ok_or_else(|| format!("type `{t}` needs an explicit rank"))?;
        return Ok(CartanType::new(family, rank));
    }
    let c: CartanType = t.parse().map_err(|e: crate::rootsys::RootError| e.to_string())?;
    if let Some(r) = rank_field {
        if r != c.rank {
            return Err(format!("type `{t}` has rank {}, but rank field says {r}", c.rank));
        }
    }
    Ok(c)
}

impl PairConfig {
    /// Parses the `key: value` pair-configuration format. `embedding` and
    /// `invariants` may repeat, one row or polynomial per line; a single
    /// `embedding` line may also hold several rows separated by `;`.
    pub fn parse(text: &str) -> Result<PairConfig, RestrictError> {
        let mut name = None;
        let mut ambient_type = None;
        let mut ambient_rank = None;
        let mut restricted_type = None;
        let mut restricted_rank = None;
        let mut rows: Vec<(usize, Vec<BigRational>)> = Vec::new();
        let mut invariant_lines: Vec<(usize, String)> = Vec::new();
        let mut selection = None;
        let mut little_subgroup_order = None;

        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            last_line = line_no;
            let err = |message: String| RestrictError::Config {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| err("expected `key: value`".into()))?;
            let value = value.trim();
            let parse_usize = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| err(format!("expected a non-negative integer, found `{v}`")))
            };
            match key.trim() {
                "name" => name = Some(value.to_string()),
                "ambient_type" => ambient_type = Some((line_no, value.to_string())),
                "ambient_rank" => ambient_rank = Some(parse_usize(value)?),
                "restricted_type" => restricted_type = Some((line_no, value.to_string())),
                "restricted_rank" => restricted_rank = Some(parse_usize(value)?),
                "embedding" => {
                    for chunk in value.split(';').map(str::trim).filter(|c| !c.is_empty()) {
                        let row = chunk
                            .split_whitespace()
                            .map(|c| parse_rational(c).ok_or_else(|| err(format!("bad rational `{c}`"))))
                            .collect::<Result<Vec<_>, _>>()?;
                        rows.push((line_no, row));
                    }
                }
                "invariants" | "invariant" => invariant_lines.push((line_no, value.to_string())),
                "selection" => {
                    let sel = value
                        .split(|c: char| c == ',' || c.is_whitespace())
                        .filter(|c| !c.is_empty())
                        .map(|c| match c.parse::<usize>() {
                            Ok(k) if k >= 1 => Ok(k - 1),
                            _ => Err(err(format!("selection entries are 1-based indices, found `{c}`"))),
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    selection = Some(sel);
                }
                "little_subgroup_order" => {
                    little_subgroup_order = Some(
                        value
                            .parse::<u64>()
                            .map_err(|_| err(format!("bad subgroup order `{value}`")))?,
                    )
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }

        let missing = |what: &str| RestrictError::Config {
            line: last_line,
            message: format!("missing `{what}`"),
        };
        let (aline, atype) = ambient_type.ok_or_else(|| missing("ambient_type"))?;
        let (rline, rtype) = restricted_type.ok_or_else(|| missing("restricted_type"))?;
        let acartan = cartan_from(&atype, ambient_rank).map_err(|message| RestrictError::Config { line: aline, message })?;
        let rcartan =
            cartan_from(&rtype, restricted_rank).map_err(|message| RestrictError::Config { line: rline, message })?;
        let ambient = build_root_system(acartan).map_err(|e| RestrictError::Config {
            line: aline,
            message: e.to_string(),
        })?;
        let restricted = build_root_system(rcartan).map_err(|e| RestrictError::Config {
            line: rline,
            message: e.to_string(),
        })?;
        let n = ambient.rank();
        for (line, row) in &rows {
            if row.len() != n {
                return Err(RestrictError::Config {
                    line: *line,
                    message: format!("embedding row has {} entries, ambient rank is {n}", row.len()),
                });
            }
        }
        let columns: Vec<Vec<BigRational>> = rows.into_iter().map(|(_, r)| r).collect();

        let uvars = Polynomial::var_names("u", n);
        let invariants = if invariant_lines.is_empty() {
            None
        } else {
            let polys = invariant_lines
                .iter()
                .map(|(line, s)| {
                    parse_polynomial(s, &uvars).map_err(|e| RestrictError::Config {
                        line: *line,
                        message: e.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            Some(polys)
        };

        let mut cfg = PairConfig::new(
            name.unwrap_or_else(|| format!("{acartan}/{rcartan}")),
            ambient,
            columns,
            restricted,
        )?;
        cfg.invariants = invariants;
        cfg.selection = selection;
        cfg.little_subgroup_order = little_subgroup_order;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_toy() {
        let cfg = PairConfig::parse(
            "name: toy\nambient_type: B\nambient_rank: 2\nrestricted_type: A1\n\
             embedding: 1/1 0/1\ninvariants: u1^2 + u2^2\n",
        )
        .unwrap();
        assert_eq!(cfg.name(), "toy");
        assert_eq!(cfg.ambient().rank(), 2);
        assert_eq!(cfg.restricted().rank(), 1);
        assert_eq!(cfg.invariants().unwrap().len(), 1);
    }

    #[test]
    fn reports_line_numbers() {
        let e = PairConfig::parse("ambient_type: B2\nrestricted_type: A1\nembedding: 1/x 0\n").unwrap_err();
        assert!(matches!(e, RestrictError::Config { line: 3, .. }), "{e}");
        let e = PairConfig::parse("ambient_type: B2\nrestricted_type: A1\nembedding: 1 0 0\n").unwrap_err();
        assert!(matches!(e, RestrictError::Config { line: 3, .. }), "{e}");
        let e = PairConfig::parse("ambient_type: B2\nwhat: 1\n").unwrap_err();
        assert!(matches!(e, RestrictError::Config { line: 2, .. }), "{e}");
    }

    #[test]
    fn rank_field_must_agree() {
        assert!(PairConfig::parse("ambient_type: B2\nambient_rank: 3\nrestricted_type: A1\nembedding: 1 0\n").is_err());
    }
}
