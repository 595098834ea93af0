//! Simple symmetric pairs tagged by their restricted root systems.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::rootsys::{CartanType, Family};

/// The bundled table.
pub const EMBEDDED: &str = include_str!("../../data/pairs.db");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairDbError {
    #[error("malformed records:\n{}", .0.iter().map(|(l, m)| format!("  line {l}: {m}")).collect::<Vec<_>>().join("\n"))]
    Malformed(Vec<(usize, String)>),
    #[error("{pair}: missing {field}")]
    MissingField { pair: String, field: &'static str },
    #[error("{pair}: dual `{dual}` is not in the database")]
    UnresolvedDual { pair: String, dual: String },
    #[error("expected {expected} {what} pairs, found {found}")]
    Count {
        what: &'static str,
        expected: usize,
        found: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flag {
    Riemannian,
    Group,
    Corrected,
    Removed,
    Unverified,
}

impl Flag {
    fn parse(s: &str) -> Option<Flag> {
        Some(match s {
            "riemannian" => Flag::Riemannian,
            "group" => Flag::Group,
            "corrected" => Flag::Corrected,
            "removed" => Flag::Removed,
            "unverified" => Flag::Unverified,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Riemannian => "riemannian",
            Flag::Group => "group",
            Flag::Corrected => "corrected",
            Flag::Removed => "removed",
            Flag::Unverified => "unverified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRecord {
    pub name_g: String,
    pub name_h: String,
    pub sigma_c: Option<CartanType>,
    pub sigma_b: Option<CartanType>,
    pub sigma_aq: Option<CartanType>,
    /// `None` when unknown; a self-dual record names itself.
    pub dual_name: Option<String>,
    pub flags: Vec<Flag>,
    pub line: usize,
}

const CRITERION: [(Family, usize, Family, usize); 4] = [
    (Family::E, 6, Family::BC, 2),
    (Family::E, 6, Family::A, 2),
    (Family::E, 7, Family::C, 3),
    (Family::E, 8, Family::F, 4),
];

fn in_criterion(big: CartanType, small: CartanType) -> bool {
    CRITERION
        .iter()
        .any(|&(f1, r1, f2, r2)| big == CartanType::new(f1, r1) && small == CartanType::new(f2, r2))
}

impl PairRecord {
    pub fn key(&self) -> String {
        format!("{} / {}", self.name_g, self.name_h)
    }

    pub fn has(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }

    pub fn is_group_case(&self) -> bool {
        self.has(Flag::Group)
    }

    fn need(&self, v: Option<CartanType>, field: &'static str) -> Result<CartanType, PairDbError> {
        v.ok_or_else(|| PairDbError::MissingField { pair: self.key(), field })
    }

    /// `(Σ(g,c), Σ(g,a_q))` lies in the four-element criterion set.
    pub fn is_exceptional(&self) -> Result<bool, PairDbError> {
        Ok(in_criterion(self.need(self.sigma_c, "sigma_c")?, self.need(self.sigma_aq, "sigma_aq")?))
    }

    /// Same criterion on `(Σ(g,b), Σ(g,a_q))`.
    pub fn is_b_exceptional(&self) -> Result<bool, PairDbError> {
        Ok(in_criterion(self.need(self.sigma_b, "sigma_b")?, self.need(self.sigma_aq, "sigma_aq")?))
    }

    pub fn is_split(&self) -> Result<bool, PairDbError> {
        Ok(self.need(self.sigma_b, "sigma_b")? == self.need(self.sigma_aq, "sigma_aq")?)
    }

    fn dual_key(&self) -> Option<String> {
        self.dual_name.as_ref().map(|d| if d == "self" { self.key() } else { d.clone() })
    }
}

fn label(s: Option<CartanType>) -> String {
    s.map(|c| c.to_string()).unwrap_or_default()
}

impl fmt::Display for PairRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flags: Vec<&str> = self.flags.iter().map(|f| f.as_str()).collect();
        write!(
            f,
            "{} | {} | {} | {} | {} | {} | {}",
            self.name_g,
            self.name_h,
            label(self.sigma_c),
            label(self.sigma_b),
            label(self.sigma_aq),
            self.dual_name.as_deref().unwrap_or(""),
            flags.join(",")
        )
    }
}

#[derive(Clone, Debug)]
pub struct PairDb {
    records: Vec<PairRecord>,
    index: HashMap<String, usize>,
}

/// One named database-wide check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn parse_sigma(s: &str) -> Result<Option<CartanType>, String> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse::<CartanType>().map(Some).map_err(|e| e.to_string())
}

fn parse_record(line: &str, line_no: usize) -> Result<PairRecord, String> {
    let fields: Vec<&str> = line.split('|').map(str::trim).collect();
    if fields.len() != 7 {
        return Err(format!("expected 7 `|`-separated fields, found {}", fields.len()));
    }
    if fields[0].is_empty() || fields[1].is_empty() {
        return Err("name_g and name_h are required".into());
    }
    let flags = fields[6]
        .split(',')
        .map(str::trim)
        .filter(|f| !f.is_empty())
        .map(|f| Flag::parse(f).ok_or_else(|| format!("unknown flag `{f}`")))
        .collect::<Result<Vec<_>, _>>()?;
    let rec = PairRecord {
        name_g: fields[0].to_string(),
        name_h: fields[1].to_string(),
        sigma_c: parse_sigma(fields[2])?,
        sigma_b: parse_sigma(fields[3])?,
        sigma_aq: parse_sigma(fields[4])?,
        dual_name: (!fields[5].is_empty()).then(|| fields[5].to_string()),
        flags,
        line: line_no,
    };
    let ranks: Vec<usize> = [rec.sigma_aq, rec.sigma_b, rec.sigma_c]
        .iter()
        .flatten()
        .map(|c| c.rank)
        .collect();
    if ranks.windows(2).any(|w| w[0] > w[1]) {
        return Err("ranks must satisfy rank(sigma_aq) <= rank(sigma_b) <= rank(sigma_c)".into());
    }
    Ok(rec)
}

impl PairDb {
    /// Parses the whole file, reporting every malformed line.
    pub fn parse(text: &str) -> Result<PairDb, PairDbError> {
        let mut records = Vec::new();
        let mut errors = Vec::new();
        let mut index = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match parse_record(line, i + 1) {
                Ok(rec) => {
                    if index.insert(rec.key(), records.len()).is_some() {
                        errors.push((i + 1, format!("duplicate pair `{}`", rec.key())));
                    }
                    records.push(rec);
                }
                Err(m) => errors.push((i + 1, m)),
            }
        }
        if !errors.is_empty() {
            return Err(PairDbError::Malformed(errors));
        }
        Ok(PairDb { records, index })
    }

    pub fn embedded() -> PairDb {
        PairDb::parse(EMBEDDED).expect("bundled table parses")
    }

    pub fn records(&self) -> &[PairRecord] {
        &self.records
    }

    pub fn find(&self, name_g: &str, name_h: &str) -> Option<&PairRecord> {
        self.index
            .get(&format!("{name_g} / {name_h}"))
            .map(|&i| &self.records[i])
    }

    pub fn contains(&self, name_g: &str, name_h: &str) -> bool {
        self.find(name_g, name_h).is_some()
    }

    fn filter(&self, f: impl Fn(&PairRecord) -> Result<bool, PairDbError>) -> Vec<&PairRecord> {
        self.records.iter().filter(|r| f(r).unwrap_or(false)).collect()
    }

    pub fn exceptional(&self) -> Vec<&PairRecord> {
        self.filter(PairRecord::is_exceptional)
    }

    /// The exceptional list with the four corrected entries; must have 35.
    pub fn corrected_exceptional_list(&self) -> Result<Vec<&PairRecord>, PairDbError> {
        let list = self.exceptional();
        if list.len() != 35 {
            return Err(PairDbError::Count {
                what: "exceptional",
                expected: 35,
                found: list.len(),
            });
        }
        Ok(list)
    }

    pub fn b_exceptional_list(&self) -> Result<Vec<&PairRecord>, PairDbError> {
        let list = self.filter(PairRecord::is_b_exceptional);
        if list.len() != 10 {
            return Err(PairDbError::Count {
                what: "b-exceptional",
                expected: 10,
                found: list.len(),
            });
        }
        Ok(list)
    }

    pub fn dual_of(&self, rec: &PairRecord) -> Result<&PairRecord, PairDbError> {
        let key = rec.dual_key().ok_or_else(|| PairDbError::MissingField {
            pair: rec.key(),
            field: "dual_name",
        })?;
        self.index
            .get(&key)
            .map(|&i| &self.records[i])
            .ok_or(PairDbError::UnresolvedDual { pair: rec.key(), dual: key })
    }

    /// Database-wide consistency checks.
    pub fn integrity(&self) -> Vec<Check> {
        let mut checks = Vec::new();
        let mut push = |name, failures: Vec<String>| {
            checks.push(Check {
                name,
                passed: failures.is_empty(),
                detail: failures.join("; "),
            })
        };

        let exc = self.exceptional();
        let excs = |g: &str, h: &str| exc.iter().any(|r| r.name_g == g && r.name_h == h);
        push(
            "exceptional count is 35",
            if exc.len() == 35 { vec![] } else { vec![format!("found {}", exc.len())] },
        );
        let bexc = self.filter(PairRecord::is_b_exceptional);
        push(
            "b-exceptional count is 10",
            if bexc.len() == 10 { vec![] } else { vec![format!("found {}", bexc.len())] },
        );
        let replacements = [
            ("e6^C", "so10(C)+C"),
            ("e6^C", "f4^C"),
            ("e7^C", "e6^C+C"),
            ("e8^C", "e7^C+sl2(C)"),
        ];
        push(
            "replacement pairs present",
            replacements
                .iter()
                .filter(|(g, h)| !excs(g, h))
                .map(|(g, h)| format!("{g} / {h}"))
                .collect(),
        );
        let removed = [("e6^C", "e6(-14)"), ("e6^C", "e6(-26)"), ("e7^C", "e7(-25)"), ("e8^C", "e8(-24)")];
        push(
            "removed pairs absent",
            removed
                .iter()
                .filter(|(g, h)| excs(g, h))
                .map(|(g, h)| format!("{g} / {h}"))
                .collect(),
        );

        let mut dual_fail = Vec::new();
        let mut invariance_fail = Vec::new();
        for r in &self.records {
            if r.dual_name.is_none() {
                continue;
            }
            match self.dual_of(r) {
                Ok(d) => {
                    if self.dual_of(d).map(PairRecord::key).ok() != Some(r.key()) {
                        dual_fail.push(format!("{} is not linked back", d.key()));
                    }
                    if (r.sigma_c, r.sigma_aq) != (d.sigma_c, d.sigma_aq) || r.is_exceptional() != d.is_exceptional() {
                        invariance_fail.push(r.key());
                    }
                }
                Err(e) => dual_fail.push(e.to_string()),
            }
        }
        push("dual links are symmetric", dual_fail);
        push("exceptionality is dual-invariant", invariance_fail);
        push(
            "split pairs are not b-exceptional",
            self.records
                .iter()
                .filter(|r| r.is_split().unwrap_or(false) && r.is_b_exceptional().unwrap_or(false))
                .map(PairRecord::key)
                .collect(),
        );
        push(
            "b-exceptional pairs are exceptional",
            bexc.iter()
                .filter(|r| !r.is_exceptional().unwrap_or(false))
                .map(|r| r.key())
                .collect(),
        );
        checks
    }
}
