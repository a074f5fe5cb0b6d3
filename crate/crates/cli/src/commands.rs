use std::io::Read;

use serde::Serialize;
use serde_json::json;

use fml_core::bounds::{self, BoundReport, ExampleReport};
use fml_core::cumulants::{self, CumulantSequence, Kind, MomentSequence};
use fml_core::distributions::{self, Params};
use fml_core::kolmogorov::{self, DistanceResult};
use fml_core::partitions::{self, PartitionFamily, PartitionKind};

use crate::args::*;
use crate::config::RunConfig;
use crate::output::{format_sig, to_csv, to_json, to_table, MACHINE_DIGITS, TEXT_DIGITS};
use crate::CliError;

/// Header of the `verify` CSV table.
pub const VERIFY_HEADER: [&str; 8] = [
    "example",
    "params",
    "m4",
    "N",
    "rhs",
    "measured",
    "error_bound",
    "satisfied",
];

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<String, CliError> {
    match cmd {
        Command::Partitions(p) => partitions_cmd(p, cfg),
        Command::Cumulants(a) => cumulants_cmd(a, cfg),
        Command::Dist(d) => dist_cmd(d, cfg),
        Command::Distance(a) => distance_cmd(a, cfg),
        Command::Bound(a) => bound_cmd(a, cfg),
        Command::Audit(a) => audit_cmd(a, cfg),
        Command::Verify(a) => verify_cmd(a, cfg),
    }
}

fn digits(format: Format) -> usize {
    if format == Format::Text {
        TEXT_DIGITS
    } else {
        MACHINE_DIGITS
    }
}

fn join(values: &[f64], d: usize, sep: &str) -> String {
    values
        .iter()
        .map(|v| format_sig(*v, d))
        .collect::<Vec<_>>()
        .join(sep)
}

fn family_kind(f: FamilyArg) -> PartitionKind {
    match f {
        FamilyArg::All => PartitionKind::All,
        FamilyArg::Nc => PartitionKind::NonCrossing,
        FamilyArg::Pair => PartitionKind::Pair,
    }
}

fn family_name(f: FamilyArg) -> &'static str {
    match f {
        FamilyArg::All => "all",
        FamilyArg::Nc => "nc",
        FamilyArg::Pair => "pair",
    }
}

fn partitions_cmd(cmd: &PartitionsCommand, cfg: &RunConfig) -> Result<String, CliError> {
    match *cmd {
        PartitionsCommand::Count { kind, n } => {
            let family = PartitionFamily::new(family_kind(kind), n)?;
            let count = partitions::count(family, &cfg.ceilings)?;
            Ok(match cfg.format_or(Format::Text) {
                Format::Text => format!("{count}\n"),
                Format::Csv => to_csv(
                    &["kind", "n", "count"],
                    &[vec![
                        family_name(kind).into(),
                        n.to_string(),
                        count.to_string(),
                    ]],
                )?,
                Format::Json => {
                    to_json(&json!({"kind": family_name(kind), "n": n, "count": count}))?
                }
            })
        }
        PartitionsCommand::List { kind, n } => {
            let family = PartitionFamily::new(family_kind(kind), n)?;
            let all: Vec<_> = partitions::enumerate(family, &cfg.ceilings)?.collect();
            Ok(match cfg.format_or(Format::Text) {
                Format::Text => all.iter().map(|p| format!("{p}\n")).collect(),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = all
                        .iter()
                        .map(|p| {
                            let rgs: Vec<String> = p.rgs().iter().map(usize::to_string).collect();
                            vec![rgs.join(" "), p.to_string()]
                        })
                        .collect();
                    to_csv(&["rgs", "blocks"], &rows)?
                }
                Format::Json => {
                    let blocks: Vec<&[Vec<usize>]> = all.iter().map(|p| p.blocks()).collect();
                    to_json(&json!({"kind": family_name(kind), "n": n, "partitions": blocks}))?
                }
            })
        }
        PartitionsCommand::Crossings { n } => {
            let tally = partitions::crossing_polynomial(n, &cfg.ceilings)?;
            Ok(match cfg.format_or(Format::Text) {
                Format::Text => tally
                    .iter()
                    .enumerate()
                    .map(|(k, c)| format!("{k} {c}\n"))
                    .collect(),
                Format::Csv => {
                    let rows: Vec<Vec<String>> = tally
                        .iter()
                        .enumerate()
                        .map(|(k, c)| vec![k.to_string(), c.to_string()])
                        .collect();
                    to_csv(&["crossings", "count"], &rows)?
                }
                Format::Json => to_json(&json!({"n": n, "tally": tally}))?,
            })
        }
    }
}

/// First CSV record of `path` (`-` reads stdin), parsed as reals.
fn read_vector(path: &std::path::Path) -> Result<Vec<f64>, CliError> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let record = reader
        .records()
        .next()
        .ok_or_else(|| CliError::Input(format!("{}: no data row", path.display())))?
        .map_err(|e| CliError::Input(e.to_string()))?;
    record
        .iter()
        .filter(|f| !f.is_empty())
        .map(|f| {
            f.parse::<f64>()
                .map_err(|_| CliError::Input(format!("malformed number `{f}`")))
        })
        .collect()
}

fn cumulants_cmd(a: &CumulantsArgs, cfg: &RunConfig) -> Result<String, CliError> {
    let values = match &a.input {
        Some(path) => read_vector(path)?,
        None => a.values.clone(),
    };
    if values.is_empty() {
        return Err(CliError::Input("no values given".into()));
    }
    let kind = match a.kind {
        KindArg::Classical => Kind::Classical,
        KindArg::Free => Kind::Free,
    };
    let (out, prefix, direction) = match a.direction {
        Direction::ToMoments => {
            let c = CumulantSequence::new(kind, values.clone());
            let m = cumulants::moments_from_cumulants_with(&c, &cfg.ceilings)?;
            (m.into_values(), "m", "to-moments")
        }
        Direction::ToCumulants => {
            let m = MomentSequence::new(values.clone());
            let c = cumulants::cumulants_from_moments_with(&m, kind, &cfg.ceilings)?;
            (
                c.into_values(),
                if kind == Kind::Free { "k" } else { "c" },
                "to-cumulants",
            )
        }
    };
    let format = cfg.format_or(Format::Csv);
    Ok(match format {
        Format::Text => format!("{}\n", join(&out, TEXT_DIGITS, " ")),
        Format::Csv => {
            let header: Vec<String> = (1..=out.len()).map(|j| format!("{prefix}{j}")).collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let row: Vec<String> = out.iter().map(|v| format_sig(*v, MACHINE_DIGITS)).collect();
            to_csv(&header, &[row])?
        }
        Format::Json => to_json(&json!({
            "kind": kind.name(),
            "direction": direction,
            "input": values,
            "output": out,
        }))?,
    })
}

fn dist_cmd(d: &DistCommand, cfg: &RunConfig) -> Result<String, CliError> {
    match d {
        DistCommand::Cdf { name, params, at } => {
            let spec = distributions::lookup(name, params)?;
            let (value, error) = spec.cdf_with_error(*at)?;
            let format = cfg.format_or(Format::Text);
            let d = digits(format);
            Ok(match format {
                Format::Text => format!("{}\n", format_sig(value, d)),
                Format::Csv => to_csv(
                    &["x", "cdf", "error"],
                    &[vec![
                        format_sig(*at, d),
                        format_sig(value, d),
                        format_sig(error, d),
                    ]],
                )?,
                Format::Json => to_json(&json!({
                    "name": spec.name(),
                    "params": spec.params(),
                    "x": at,
                    "cdf": value,
                    "error": error,
                }))?,
            })
        }
        DistCommand::Moments { name, params } => {
            let spec = distributions::lookup(name, params)?;
            let m = spec.moments().values();
            let format = cfg.format_or(Format::Text);
            Ok(match format {
                Format::Text => format!("{}\n", join(m, TEXT_DIGITS, " ")),
                Format::Csv => {
                    let header: Vec<String> = (1..=m.len()).map(|j| format!("m{j}")).collect();
                    let header: Vec<&str> = header.iter().map(String::as_str).collect();
                    to_csv(
                        &header,
                        &[m.iter().map(|v| format_sig(*v, MACHINE_DIGITS)).collect()],
                    )?
                }
                Format::Json => to_json(&json!({
                    "name": spec.name(),
                    "params": spec.params(),
                    "moments": m,
                }))?,
            })
        }
        DistCommand::Spec { name, params } => {
            let spec = distributions::lookup(name, params)?;
            match cfg.format_or(Format::Json) {
                Format::Json => to_json(&spec.summary()),
                other => Err(CliError::Input(format!(
                    "`dist spec` only emits json, not {}",
                    format_name(other)
                ))),
            }
        }
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
        Format::Text => "text",
    }
}

fn method_name(d: &DistanceResult) -> &'static str {
    match d.method {
        kolmogorov::Method::AtomScan => "AtomScan",
        kolmogorov::Method::GridRefine => "GridRefine",
    }
}

fn distance_cmd(a: &DistanceArgs, cfg: &RunConfig) -> Result<String, CliError> {
    let f = distributions::lookup(&a.f, &a.f_params)?;
    let g = distributions::lookup(&a.g, &a.g_params)?;
    let d = kolmogorov::distance(&f, &g, cfg.tolerance)?;
    let format = cfg.format_or(Format::Json);
    let p = digits(format);
    Ok(match format {
        Format::Json => to_json(&d)?,
        Format::Csv => to_csv(
            &["value", "error_bound", "witness_x", "method"],
            &[vec![
                format_sig(d.value, p),
                format_sig(d.error_bound, p),
                format_sig(d.witness_x, p),
                method_name(&d).into(),
            ]],
        )?,
        Format::Text => format!(
            "{} +- {} at x = {} ({})\n",
            format_sig(d.value, p),
            format_sig(d.error_bound, p),
            format_sig(d.witness_x, p),
            method_name(&d)
        ),
    })
}

fn render_report(r: &BoundReport, format: Format) -> Result<String, CliError> {
    let p = digits(format);
    let factor = r.k_factor.map(|f| format_sig(f, p)).unwrap_or_default();
    Ok(match format {
        Format::Json => to_json(r)?,
        Format::Csv => to_csv(
            &["theorem", "m4", "N", "C", "K", "k_factor", "rhs"],
            &[vec![
                r.theorem.name().into(),
                format_sig(r.m4, p),
                r.order.to_string(),
                format_sig(r.constant_c, p),
                format_sig(r.constant_k, p),
                factor,
                format_sig(r.rhs, p),
            ]],
        )?,
        Format::Text => {
            let constant = match r.k_factor {
                Some(f) => format!(
                    "K = {} (factor {})",
                    format_sig(r.constant_k, p),
                    format_sig(f, p)
                ),
                None => format!("C = {}", format_sig(r.constant_c, p)),
            };
            format!(
                "{}: m4 = {}, N = {}, {constant}, rhs = {}\n",
                r.theorem.name(),
                format_sig(r.m4, p),
                r.order,
                format_sig(r.rhs, p)
            )
        }
    })
}

fn bound_cmd(a: &BoundArgs, cfg: &RunConfig) -> Result<String, CliError> {
    let report = match a.kind {
        KindArg::Classical => {
            if a.factor.is_some() {
                return Err(CliError::Input(
                    "--factor applies to the free bound only".into(),
                ));
            }
            bounds::classical_bound(a.m4, a.order, cfg.constant_c)?
        }
        KindArg::Free => match a.factor {
            Some(f) => bounds::free_bound_with_factor(a.m4, a.order, cfg.constant_k, f)?,
            None => bounds::free_bound(a.m4, a.order, cfg.constant_k)?,
        },
    };
    let mut report = report;
    report.constant_c = cfg.constant_c;
    report.constant_k = cfg.constant_k;
    render_report(&report, cfg.format_or(Format::Json))
}

fn audit_cmd(a: &AuditArgs, cfg: &RunConfig) -> Result<String, CliError> {
    let audit = bounds::kurtosis_audit(&MomentSequence::new(a.moments.clone()))?;
    let format = cfg.format_or(Format::Json);
    let p = digits(format);
    Ok(match format {
        Format::Json => to_json(&audit)?,
        Format::Csv => to_csv(
            &[
                "kurt_classical",
                "kurt_free",
                "max_n_classical",
                "max_n_free",
                "equality_classical",
                "equality_free",
            ],
            &[vec![
                format_sig(audit.kurt_classical, p),
                format_sig(audit.kurt_free, p),
                audit.max_n_classical.to_string(),
                audit.max_n_free.to_string(),
                audit.equality_classical.to_string(),
                audit.equality_free.to_string(),
            ]],
        )?,
        Format::Text => format!(
            "classical: kurt = {}, max_n = {}{}\nfree: kurt = {}, max_n = {}{}\n",
            format_sig(audit.kurt_classical, p),
            audit.max_n_classical,
            if audit.equality_classical {
                " (equality)"
            } else {
                ""
            },
            format_sig(audit.kurt_free, p),
            audit.max_n_free,
            if audit.equality_free {
                " (equality)"
            } else {
                ""
            },
        ),
    })
}

fn verify_row(r: &ExampleReport, p: usize) -> Vec<String> {
    let rep = &r.report;
    vec![
        r.example.clone(),
        r.params.to_string(),
        format_sig(rep.m4, p),
        rep.order.to_string(),
        format_sig(rep.rhs, p),
        rep.measured
            .map(|d| format_sig(d.value, p))
            .unwrap_or_default(),
        rep.measured
            .map(|d| format_sig(d.error_bound, p))
            .unwrap_or_default(),
        rep.satisfied.map(|s| s.to_string()).unwrap_or_default(),
    ]
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    constant_c: f64,
    constant_k: f64,
    tolerance: f64,
    rows: &'a [ExampleReport],
}

fn verify_cmd(a: &VerifyArgs, cfg: &RunConfig) -> Result<String, CliError> {
    let jobs: Vec<(String, Params)> = if a.all {
        bounds::example_suite()
            .into_iter()
            .map(|(n, p)| (n.to_string(), p))
            .collect()
    } else {
        let name = a.name.clone().expect("clap requires a name without --all");
        vec![(name, a.params.clone().unwrap_or_default())]
    };
    let bcfg = cfg.bound_config();
    // rows are independent; collect them back in suite order
    let results: Vec<Result<ExampleReport, fml_core::Error>> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(name, params)| s.spawn(move || bounds::verify_example(name, params, &bcfg)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification thread panicked"))
            .collect()
    });
    let rows = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let format = cfg.format_or(Format::Csv);
    let p = digits(format);
    match format {
        Format::Csv => to_csv(
            &VERIFY_HEADER,
            &rows.iter().map(|r| verify_row(r, p)).collect::<Vec<_>>(),
        ),
        Format::Text => Ok(to_table(
            &VERIFY_HEADER,
            &rows.iter().map(|r| verify_row(r, p)).collect::<Vec<_>>(),
        )),
        Format::Json => to_json(&VerifyJson {
            constant_c: cfg.constant_c,
            constant_k: cfg.constant_k,
            tolerance: cfg.tolerance,
            rows: &rows,
        }),
    }
}
