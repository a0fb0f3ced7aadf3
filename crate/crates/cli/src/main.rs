mod config;
mod suites;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hecke_core::criterion::{criterion_sweep, p_set, SweepRow};
use hecke_core::cyclo::CycloNum;
use hecke_core::ggha::Ggha;
use hecke_core::psmod::{delta_twist, dual, principal_series, twist, CChar};
use hecke_core::simplicity::is_simple_bounded;
use serde::Serialize;

use config::{
    parse_list, parse_perm, parse_range, parse_varpi, parse_varpi_selection, Common, Format, RunConfig, UsageError,
};

const OUT_DIR_VAR: &str = "HECKE_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "hecke",
    version,
    about = "Exact computations in H_k(r,n) and its principal series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one exact verification suite.
    Verify {
        #[arg(value_parser = suites::SUITES)]
        suite: String,
        #[command(flatten)]
        common: Common,
        /// Random cases for the pbw and duality suites.
        #[arg(long, default_value_t = 20)]
        fuzz: usize,
    },
    /// Compare the criterion with the simplicity oracle over a grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Range of each nu coordinate, `lo..hi`.
        #[arg(long, default_value = "-2..2", allow_hyphen_values = true)]
        nu_grid: String,
        #[arg(long, default_value = "1")]
        nu_step: String,
        /// `all`, `all-orbits`, or characters like `0,1;1,1`.
        #[arg(long, default_value = "all")]
        varpi: String,
    },
    /// Evaluate the criterion on one character.
    Criterion {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        #[arg(long)]
        varpi: String,
        /// Also run the simplicity oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Print the matrices of a principal series module.
    Module {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        #[arg(long)]
        varpi: String,
        /// Twist by a permutation in one-line notation, e.g. `2,1,3`.
        #[arg(long)]
        twist: Option<String>,
        #[arg(long)]
        delta: bool,
        #[arg(long)]
        dual: bool,
    },
}

enum Failure {
    Usage(String),
    Disagreement(String),
    Refusal(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

#[derive(Serialize)]
struct Artifact<'a, T: Serialize> {
    header: &'a BTreeMap<String, String>,
    report: T,
}

struct Emitted {
    /// Whether the artifact went to a file, leaving stdout free for the summary.
    to_file: bool,
}

fn destination(cfg: &RunConfig, stem: &str) -> Option<PathBuf> {
    if let Some(out) = &cfg.out {
        return Some(PathBuf::from(out));
    }
    let dir = std::env::var_os(OUT_DIR_VAR)?;
    let ext = match cfg.format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    Some(PathBuf::from(dir).join(format!("{stem}.{ext}")))
}

fn write_out(cfg: &RunConfig, stem: &str, bytes: &[u8]) -> Result<Emitted, Failure> {
    match destination(cfg, stem) {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|e| Failure::Usage(format!("{}: {e}", parent.display())))?;
            }
            std::fs::write(&path, bytes).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Ok(Emitted { to_file: true })
        }
        None => {
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(Emitted { to_file: false })
        }
    }
}

fn json_bytes<T: Serialize>(cfg: &RunConfig, report: T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(&Artifact {
        header: &cfg.echo,
        report,
    })
    .expect("reports serialize");
    bytes.push(b'\n');
    bytes
}

fn csv_bytes(cfg: &RunConfig, columns: &[&str], rows: &[Vec<String>]) -> Vec<u8> {
    let mut out = Vec::new();
    for (k, v) in &cfg.echo {
        out.extend_from_slice(format!("# {k}={v}\n").as_bytes());
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn summary(line: &str, emitted: &Emitted) {
    if emitted.to_file {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn join(values: &[CycloNum]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

fn cmd_verify(suite: &str, common: &Common, fuzz: usize) -> Result<(), Failure> {
    let mut cfg = RunConfig::from_common("verify", common)?;
    cfg.record("suite", suite);
    if matches!(suite, "pbw" | "duality") {
        cfg.record("fuzz", fuzz.to_string());
    }
    let checks = suites::run(suite, &cfg, fuzz);
    let failed = checks.iter().filter(|c| !c.passed).count();
    let bytes = match cfg.format {
        Format::Json => json_bytes(&cfg, &checks),
        Format::Csv => {
            let rows: Vec<Vec<String>> = checks
                .iter()
                .map(|c| vec![c.check.clone(), if c.passed { "pass" } else { "fail" }.into()])
                .collect();
            csv_bytes(&cfg, &["check", "result"], &rows)
        }
    };
    let emitted = write_out(&cfg, &format!("verify-{suite}"), &bytes)?;
    let line = format!(
        "{suite}: {} checks, {} passed, {failed} failed",
        checks.len(),
        checks.len() - failed
    );
    summary(&line, &emitted);
    if failed > 0 {
        return Err(Failure::Disagreement(format!("{failed} checks failed")));
    }
    Ok(())
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn sweep_row(row: &SweepRow) -> Vec<String> {
    let verdict = |v: &hecke_core::simplicity::Verdict| serde_json::to_value(v).unwrap().as_str().unwrap().to_string();
    vec![
        join(&row.nu),
        row.varpi.iter().map(ToString::to_string).collect::<Vec<_>>().join(";"),
        row.kbar0.to_string(),
        verdict(&row.criterion),
        row.oracle.as_ref().map_or_else(|| "refused".into(), verdict),
        row.factors
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(";"),
    ]
}

fn cmd_sweep(common: &Common, nu_grid: &str, nu_step: &str, varpi: &str) -> Result<(), Failure> {
    let mut cfg = RunConfig::from_common("sweep", common)?;
    cfg.record("nu_grid", nu_grid);
    cfg.record("nu_step", nu_step);
    cfg.record("varpi", varpi);
    let values = parse_range(cfg.r, nu_grid, nu_step)?;
    let varpis = parse_varpi_selection(cfg.r, cfg.n, varpi)?;
    let dim = factorial(cfg.n);
    if dim > cfg.bound {
        return Err(Failure::Refusal(format!(
            "M has dimension n! = {dim}, above the bound {}; lower --n or raise --bound",
            cfg.bound
        )));
    }
    let alg = Ggha::new(cfg.r, cfg.n, cfg.kbar0.clone());
    let nus = hecke_core::criterion::grid(&values, cfg.n);
    let (rows, stats) = criterion_sweep(&alg, &nus, &varpis, cfg.bound, cfg.jobs);
    let bytes = match cfg.format {
        Format::Json => json_bytes(&cfg, serde_json::json!({ "summary": stats, "rows": rows })),
        Format::Csv => {
            let table: Vec<Vec<String>> = rows.iter().map(sweep_row).collect();
            csv_bytes(
                &cfg,
                &["nu", "varpi", "kbar0", "criterion", "oracle", "factors"],
                &table,
            )
        }
    };
    let emitted = write_out(&cfg, "sweep", &bytes)?;
    summary(&stats.line(), &emitted);
    if stats.disagree > 0 {
        Err(Failure::Disagreement(format!("{} disagreements", stats.disagree)))
    } else if stats.refused > 0 {
        Err(Failure::Refusal(format!("{} instances refused", stats.refused)))
    } else {
        Ok(())
    }
}

fn character(cfg: &mut RunConfig, nu: &str, varpi: &str) -> Result<CChar, Failure> {
    cfg.record("nu", nu);
    cfg.record("varpi", varpi);
    let gamma = parse_list(cfg.r, nu)?;
    if gamma.len() != cfg.n {
        return Err(Failure::Usage(format!(
            "--nu has {} entries, need {}",
            gamma.len(),
            cfg.n
        )));
    }
    Ok(CChar::new(gamma, parse_varpi(cfg.r, cfg.n, varpi)?))
}

fn cmd_criterion(common: &Common, nu: &str, varpi: &str, oracle: bool) -> Result<(), Failure> {
    let mut cfg = RunConfig::from_common("criterion", common)?;
    let chi = character(&mut cfg, nu, varpi)?;
    let report = p_set(&chi.gamma, &chi.mu, &cfg.kbar0);
    let oracle_report = if oracle {
        cfg.record("oracle", "true");
        let alg = Ggha::new(cfg.r, cfg.n, cfg.kbar0.clone());
        let m = principal_series(&alg, &chi);
        Some(is_simple_bounded(&m, cfg.bound).map_err(|e| Failure::Refusal(e.to_string()))?)
    } else {
        None
    };
    let bytes = match cfg.format {
        Format::Json => json_bytes(
            &cfg,
            serde_json::json!({ "criterion": report, "oracle": oracle_report }),
        ),
        Format::Csv => {
            let row = SweepRow {
                nu: chi.gamma.clone(),
                varpi: chi.mu.index.clone(),
                kbar0: cfg.kbar0.clone(),
                criterion: report.verdict,
                oracle: oracle_report.as_ref().map(|o| o.verdict),
                factors: oracle_report
                    .as_ref()
                    .map_or_else(Vec::new, |o| o.composition_factor_dims.clone()),
                refusal: None,
            };
            csv_bytes(
                &cfg,
                &["nu", "varpi", "kbar0", "criterion", "oracle", "factors"],
                &[sweep_row(&row)],
            )
        }
    };
    let emitted = write_out(&cfg, "criterion", &bytes)?;
    let line = format!("criterion: {:?}, P = {:?}", report.verdict, report.p_set);
    summary(&line, &emitted);
    match oracle_report {
        Some(o) if o.verdict != report.verdict => Err(Failure::Disagreement("criterion and oracle disagree".into())),
        _ => Ok(()),
    }
}

fn cmd_module(
    common: &Common,
    nu: &str,
    varpi: &str,
    tw: Option<&str>,
    delta: bool,
    star: bool,
) -> Result<(), Failure> {
    let mut cfg = RunConfig::from_common("module", common)?;
    if cfg.format == Format::Csv {
        return Err(Failure::Usage("module output is JSON only".into()));
    }
    let chi = character(&mut cfg, nu, varpi)?;
    let alg = Ggha::new(cfg.r, cfg.n, cfg.kbar0.clone());
    let mut m = principal_series(&alg, &chi);
    if let Some(text) = tw {
        cfg.record("twist", text);
        m = twist(&alg, &m, &parse_perm(cfg.n, text)?);
    }
    if delta {
        cfg.record("delta", "true");
        m = delta_twist(&alg, &m);
    }
    if star {
        cfg.record("dual", "true");
        m = dual(&alg, &m);
    }
    let bytes = json_bytes(&cfg, &m);
    let emitted = write_out(&cfg, "module", &bytes)?;
    summary(&format!("module of dimension {}", m.dim()), &emitted);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Verify { suite, common, fuzz } => cmd_verify(suite, common, *fuzz),
        Command::Sweep {
            common,
            nu_grid,
            nu_step,
            varpi,
        } => cmd_sweep(common, nu_grid, nu_step, varpi),
        Command::Criterion {
            common,
            nu,
            varpi,
            oracle,
        } => cmd_criterion(common, nu, varpi, *oracle),
        Command::Module {
            common,
            nu,
            varpi,
            twist,
            delta,
            dual,
        } => cmd_module(common, nu, varpi, twist.as_deref(), *delta, *dual),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Disagreement(msg)) => {
            eprintln!("disagreement: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Refusal(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(3)
        }
    }
}
