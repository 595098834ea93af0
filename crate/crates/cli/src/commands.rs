use chevfiber::fiber::{solve_fiber, DeformedSystem, FiberError, FiberFamily, FiberResult, SolveOptions};
use chevfiber::pairdb::{PairDb, PairDbError, PairRecord};
use chevfiber::polyring::Homogeneity;
use chevfiber::restrict::{PairConfig, RestrictError, RestrictedFamily};
use chevfiber::rootsys::{build_root_system, invariant_family, parse_family, weyl_group, CartanType, RootError};
use serde_json::{json, Value};

use crate::args::parse_complex_list;
use crate::output::{csv, json as render_json, num, table};
use crate::{Cli, CliError, Command, Format, Report};

fn root_err(e: RootError) -> CliError {
    match e {
        RootError::Unsupported(_) | RootError::BadLabel(_) | RootError::TableMiss(_) => CliError::Usage(e.to_string()),
        RootError::ClosureTooLarge { .. } | RootError::Construction { .. } => CliError::Numerical(e.to_string()),
        _ => CliError::Integrity(e.to_string()),
    }
}

fn restrict_err(e: RestrictError) -> CliError {
    match e {
        RestrictError::Config { .. } | RestrictError::BoundTooSmall { .. } | RestrictError::Selection { .. } => {
            CliError::Usage(e.to_string())
        }
        RestrictError::Root(r) => root_err(r),
        _ => CliError::Integrity(e.to_string()),
    }
}

fn fiber_err(e: FiberError) -> CliError {
    match e {
        FiberError::DimensionMismatch { .. } | FiberError::NonFinite | FiberError::Variables { .. } => {
            CliError::Usage(e.to_string())
        }
        FiberError::Dependent | FiberError::NotHomogeneous(_) => CliError::Integrity(e.to_string()),
        FiberError::Restrict(r) => restrict_err(r),
        _ => CliError::Numerical(e.to_string()),
    }
}

fn cartan(label: &str, rank: Option<usize>) -> Result<CartanType, CliError> {
    if let Some(family) = parse_family(label) {
        let rank = rank.ok_or_else(|| CliError::Usage(format!("type `{label}` needs --rank")))?;
        return Ok(CartanType::new(family, rank));
    }
    let c: CartanType = label.parse().map_err(root_err)?;
    match rank {
        Some(r) if r != c.rank => Err(CliError::Usage(format!("`{label}` has rank {}, not {r}", c.rank))),
        _ => Ok(c),
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Roots { label, rank } => roots(cli, cartan(label, *rank)?),
        Command::Invariants { label, rank } => invariants(cli, cartan(label, *rank)?),
        Command::Restrict => restrict(cli),
        Command::Fiber { zeta, target } => fiber(cli, zeta, target, false),
        Command::Lambda { zeta, lambda } => fiber(cli, zeta, lambda, true),
        Command::Classify { filter } => classify(cli, filter),
    }
}

fn roots(cli: &Cli, c: CartanType) -> Result<Report, CliError> {
    let rs = build_root_system(c).map_err(root_err)?;
    let order = weyl_group(&rs).map_err(root_err)?.order();
    let degrees = rs.fundamental_degrees().map_err(root_err)?;
    let product: u64 = degrees.iter().map(|&d| u64::from(d)).product();
    let ok = product == order as u64;
    let verdict = format!("prod(degrees) == |W| : {}", pass(ok));
    let degrees_text: Vec<String> = degrees.iter().map(u32::to_string).collect();
    let body = match cli.format {
        Format::Json => render_json(&json!({
            "type": c.to_string(),
            "rank": rs.rank(),
            "dim": rs.dim(),
            "roots": rs.roots().len(),
            "order": order,
            "degrees": degrees,
            "degree_product": product,
            "check": pass(ok),
        })),
        Format::Csv => csv(
            &["type", "rank", "roots", "order", "degrees", "degree_product", "check"],
            &[vec![
                c.to_string(),
                rs.rank().to_string(),
                rs.roots().len().to_string(),
                order.to_string(),
                degrees_text.join(" "),
                product.to_string(),
                pass(ok).into(),
            ]],
        ),
        Format::Text => format!(
            "type      {c}\nroots     {}\norder     {order}\ndegrees   {}\nproduct   {product}\n",
            rs.roots().len(),
            degrees_text.join(", ")
        ),
    };
    Ok(Report {
        body,
        verdict: Some((verdict, ok)),
    })
}

fn invariants(cli: &Cli, c: CartanType) -> Result<Report, CliError> {
    let rs = build_root_system(c).map_err(root_err)?;
    let fam = invariant_family(&rs).map_err(root_err)?;
    let jac = fam.jacobian().map_err(root_err)?;
    let expected: u32 = fam.degrees().iter().map(|m| m - 1).sum();
    let got = match jac.homogeneous_degree() {
        Ok(Homogeneity::Degree(d)) => Some(d),
        _ => None,
    };
    let ok = got == Some(expected);
    let polys: Vec<String> = fam.polynomials().iter().map(ToString::to_string).collect();
    let body = match cli.format {
        Format::Json => render_json(&json!({
            "type": c.to_string(),
            "degrees": fam.degrees(),
            "invariants": polys,
            "jacobian_degree": got,
            "expected_jacobian_degree": expected,
            "check": pass(ok),
        })),
        Format::Csv => csv(
            &["index", "degree", "polynomial"],
            &fam.polynomials()
                .iter()
                .enumerate()
                .map(|(i, p)| vec![(i + 1).to_string(), fam.degrees()[i].to_string(), p.to_string()])
                .collect::<Vec<_>>(),
        ),
        Format::Text => {
            let mut s = String::new();
            for (i, p) in polys.iter().enumerate() {
                s.push_str(&format!("U{} (degree {}) = {p}\n", i + 1, fam.degrees()[i]));
            }
            s
        }
    };
    Ok(Report {
        body,
        verdict: Some((format!("deg J == sum(m_i - 1) : {}", pass(ok)), ok)),
    })
}

fn load_config(cli: &Cli) -> Result<PairConfig, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage("--config is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    PairConfig::parse(&text).map_err(|e| match e {
        RestrictError::Config { line, message } => CliError::Usage(format!("{path}:{line}: {message}")),
        other => restrict_err(other),
    })
}

struct Pair {
    cfg: PairConfig,
    fam: chevfiber::rootsys::InvariantFamily,
    restricted: RestrictedFamily,
}

fn load_pair(cli: &Cli) -> Result<Pair, CliError> {
    let cfg = load_config(cli)?;
    let fam = cfg.family().map_err(restrict_err)?;
    let selection = cfg.selection_for(&fam);
    let restricted = cfg.restrict_family(&fam, &selection).map_err(restrict_err)?;
    Ok(Pair { cfg, fam, restricted })
}

fn restrict(cli: &Cli) -> Result<Report, CliError> {
    let Pair { cfg, fam, restricted } = load_pair(cli)?;
    let report = cfg.surjectivity_check(&fam, cli.degree_bound).map_err(restrict_err)?;
    let e = cfg.restricted().fundamental_degrees().map_err(root_err)?;
    let e_max = e.iter().copied().max().unwrap_or(0);
    let reasoning = format!(
        "generators of the little-group invariant ring have degree <= {e_max}; checked every degree <= {}",
        report.bound
    );
    let dim_e = match (restricted.rank_d, cfg.dim_e(restricted.rank_d.unwrap_or(0))) {
        (Some(_), Some(r)) => Some(r.map_err(restrict_err)?),
        _ => None,
    };
    let w: Vec<String> = restricted.w_polys.iter().map(ToString::to_string).collect();
    let body = match cli.format {
        Format::Json => render_json(&json!({
            "name": cfg.name(),
            "ambient": cfg.ambient().cartan().to_string(),
            "restricted": cfg.restricted().cartan().to_string(),
            "selection": restricted.source.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "restrictions": w,
            "degrees": restricted.degrees,
            "little_group_order": cfg.little_group().order(),
            "fundamental_degrees": e,
            "rank_d": restricted.rank_d,
            "dim_E": dim_e,
            "jacobian": restricted.jacobian.to_string(),
            "surjectivity": {
                "bound": report.bound,
                "surjective": report.surjective,
                "failing_degree": report.failing_degree,
                "reasoning": reasoning,
                "degrees": report.degrees.iter().map(|d| json!({
                    "degree": d.degree,
                    "invariant_dim": d.invariant_dim,
                    "generated_dim": d.generated_dim,
                    "contained": d.contained,
                })).collect::<Vec<Value>>(),
            },
        })),
        Format::Csv => csv(
            &["degree", "invariant_dim", "generated_dim", "contained"],
            &report
                .degrees
                .iter()
                .map(|d| {
                    vec![
                        d.degree.to_string(),
                        d.invariant_dim.to_string(),
                        d.generated_dim.to_string(),
                        d.contained.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
        Format::Text => {
            let mut s = format!("pair        {}\n", cfg.name());
            for (i, p) in w.iter().enumerate() {
                s.push_str(&format!("W{}          {p}\n", i + 1));
            }
            s.push_str(&format!("J(0;x)      {}\n", restricted.jacobian));
            s.push_str(&format!(
                "rank d      {}\n",
                restricted.rank_d.map_or("unknown".to_string(), |d| d.to_string())
            ));
            if let Some(d) = dim_e {
                s.push_str(&format!("dim E       {d}\n"));
            }
            s.push_str(&format!(
                "surjective  {} (N = {}{})\n",
                report.surjective,
                report.bound,
                report.failing_degree.map_or(String::new(), |k| format!(", fails at degree {k}"))
            ));
            s.push_str(&format!("            {reasoning}\n"));
            s
        }
    };
    Ok(Report { body, verdict: None })
}

fn fiber_body(format: Format, res: &FiberResult) -> String {
    match format {
        Format::Json => res.to_json() + "\n",
        Format::Csv | Format::Text => {
            let class_of = |i: usize| res.orbit_classes.iter().position(|c| c.contains(&i)).unwrap_or(0);
            let mut rows = Vec::new();
            for (i, x) in res.solutions.iter().enumerate() {
                for (j, z) in x.iter().enumerate() {
                    rows.push(vec![
                        i.to_string(),
                        (j + 1).to_string(),
                        num(z.re),
                        num(z.im),
                        num(res.residuals[i]),
                        class_of(i).to_string(),
                    ]);
                }
            }
            let header = ["solution", "coordinate", "re", "im", "residual", "orbit_class"];
            if format == Format::Csv {
                csv(&header, &rows)
            } else {
                let mut s = format!(
                    "seed {}  paths tracked {}  failed {}  merged {}\n",
                    res.seed, res.path_stats.tracked, res.path_stats.failed, res.path_stats.merged
                );
                s.push_str(&table(&header, &rows));
                s
            }
        }
    }
}

/// `fiber` solves `U(ζ; x) = a`; `lambda` solves `U(Λ; x) = U(0; λ)`.
fn fiber(cli: &Cli, zeta: &str, second: &str, lambda_mode: bool) -> Result<Report, CliError> {
    let zeta = parse_complex_list(zeta)?;
    let second = parse_complex_list(second)?;
    let Pair { cfg, fam, restricted } = load_pair(cli)?;
    let ff = FiberFamily::from_config(&cfg, &fam, &restricted.source).map_err(fiber_err)?;
    let mut opts = SolveOptions::with_seed(cli.seed);
    if let Some(t) = cli.tol {
        opts.tol = t;
    }
    let res = if lambda_mode {
        ff.solve_lambda_xi(&zeta, &second, &opts)
    } else {
        let sys = DeformedSystem::new(&ff, zeta, second).map_err(fiber_err)?;
        solve_fiber(&sys, &opts)
    }
    .map_err(fiber_err)?;
    let d = restricted
        .rank_d
        .ok_or_else(|| CliError::Integrity("rank d is not an integer for this selection".into()))?;
    let expected = cfg.little_group().order() as u64 * d;
    let ok = res.count() as u64 == expected;
    Ok(Report {
        body: fiber_body(cli.format, &res),
        verdict: Some((
            format!("count == |W|·d : {} ({} vs {expected})", pass(ok), res.count()),
            ok,
        )),
    })
}

#[derive(Clone, Copy)]
enum Filter {
    All,
    Exceptional,
    BExceptional,
    Split,
}

fn parse_filter(s: &str) -> Result<Vec<Filter>, CliError> {
    s.split(',')
        .map(|f| match f.trim() {
            "all" | "" => Ok(Filter::All),
            "exceptional" => Ok(Filter::Exceptional),
            "b_exceptional" | "b-exceptional" => Ok(Filter::BExceptional),
            "split" => Ok(Filter::Split),
            other => Err(CliError::Usage(format!("unknown filter `{other}`"))),
        })
        .collect()
}

fn flag(r: Result<bool, PairDbError>) -> Option<bool> {
    r.ok()
}

fn classify(cli: &Cli, filter: &str) -> Result<Report, CliError> {
    let filters = parse_filter(filter)?;
    let db = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
            PairDb::parse(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?
        }
        None => PairDb::embedded(),
    };
    let keep = |r: &PairRecord| {
        filters.iter().all(|f| match f {
            Filter::All => true,
            Filter::Exceptional => flag(r.is_exceptional()) == Some(true),
            Filter::BExceptional => flag(r.is_b_exceptional()) == Some(true),
            Filter::Split => flag(r.is_split()) == Some(true),
        })
    };
    let rows: Vec<&PairRecord> = db.records().iter().filter(|r| keep(r)).collect();
    let checks = db.integrity();
    let ok = checks.iter().all(|c| c.passed);
    let yn = |v: Option<bool>| v.map_or("?".to_string(), |b| b.to_string());
    let label = |c: Option<CartanType>| c.map(|c| c.to_string()).unwrap_or_default();
    let cells = |r: &PairRecord| {
        vec![
            r.name_g.clone(),
            r.name_h.clone(),
            label(r.sigma_c),
            label(r.sigma_b),
            label(r.sigma_aq),
            r.dual_name.clone().unwrap_or_default(),
            yn(flag(r.is_exceptional())),
            yn(flag(r.is_b_exceptional())),
            yn(flag(r.is_split())),
            r.flags.iter().map(|f| f.as_str()).collect::<Vec<_>>().join(","),
        ]
    };
    let header = [
        "name_g",
        "name_h",
        "sigma_c",
        "sigma_b",
        "sigma_aq",
        "dual",
        "exceptional",
        "b_exceptional",
        "split",
        "flags",
    ];
    let exceptional = db.exceptional().len();
    let b_exceptional = db.records().iter().filter(|r| flag(r.is_b_exceptional()) == Some(true)).count();
    let body = match cli.format {
        Format::Json => render_json(&json!({
            "filter": filter,
            "rows": rows.iter().map(|r| {
                let mut obj: serde_json::Map<String, Value> =
                    header.iter().zip(cells(r)).map(|(h, v)| (h.to_string(), Value::String(v))).collect();
                for (key, v) in [
                    ("exceptional", flag(r.is_exceptional())),
                    ("b_exceptional", flag(r.is_b_exceptional())),
                    ("split", flag(r.is_split())),
                ] {
                    obj.insert(key.to_string(), v.map_or(Value::Null, Value::Bool));
                }
                Value::Object(obj)
            }).collect::<Vec<_>>(),
            "count": rows.len(),
            "exceptional": exceptional,
            "b_exceptional": b_exceptional,
            "integrity": checks.iter().map(|c| json!({"check": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
        })),
        Format::Csv => csv(&header, &rows.iter().map(|r| cells(r)).collect::<Vec<_>>()),
        Format::Text => {
            let mut s = table(&header, &rows.iter().map(|r| cells(r)).collect::<Vec<_>>());
            s.push_str(&format!(
                "\n{} rows; {exceptional} exceptional, {b_exceptional} b-exceptional in the database\n",
                rows.len()
            ));
            for c in &checks {
                s.push_str(&format!("{:<40} {}", c.name, pass(c.passed)));
                if !c.passed {
                    s.push_str(&format!("  ({})", c.detail));
                }
                s.push('\n');
            }
            s
        }
    };
    Ok(Report {
        body,
        verdict: Some((format!("integrity : {}", pass(ok)), ok)),
    })
}
