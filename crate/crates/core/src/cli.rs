//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::groups::cache::GroupCache;
use crate::groups::GroupFamily;
use crate::tables::{dixon_table, gl2_table};
use crate::verify::{
    counterexample_check, definition_equivalence_check, multiplicity_one_suite, rodier_suite, standard_suite,
    structure_check, transfer_suite, GroupStore, VerificationReport,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "genrest", version, about = "Character tables, Whittaker models and genericity for small finite reductive groups")]
pub struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Record wall time in verification reports (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Neither read nor write the group cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Cache directory.
    #[arg(long, global = true, env = "GENREST_CACHE", default_value = ".genrest-cache")]
    pub cache_dir: PathBuf,
    /// More log output on stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orders of the group and its standard subgroups.
    GroupInfo {
        #[arg(long, value_parser = parse_family)]
        family: GroupFamily,
        #[arg(long)]
        q: u32,
    },
    /// Irreducible character table as JSON.
    Table {
        #[arg(long, value_parser = parse_family)]
        family: GroupFamily,
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value_t = Method::Dixon)]
        method: Method,
    },
    /// Run a verification and emit its report.
    Verify {
        #[arg(value_enum)]
        statement: Statement,
        #[arg(long, value_parser = parse_family)]
        family: Option<GroupFamily>,
        #[arg(long)]
        q: Option<u32>,
        /// Parabolic tag (borel, siegel, klingen, ...), `torus` for the Borel, or `all`.
        #[arg(long)]
        levi: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Dixon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Statement {
    Rodier,
    Transfer,
    MultOne,
    Counterexample,
    Definitions,
    Structure,
    Suite,
}

fn parse_family(s: &str) -> Result<GroupFamily, String> {
    s.parse::<GroupFamily>().map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ParabolicInfo {
    tag: String,
    composition: Vec<usize>,
    order: usize,
    levi_order: usize,
    radical_order: usize,
}

#[derive(Serialize)]
struct GroupInfo {
    group: String,
    family: GroupFamily,
    q: u32,
    order: usize,
    expected_order: u64,
    classes: usize,
    borel: usize,
    torus: usize,
    unipotent: usize,
    center: usize,
    parabolics: Vec<ParabolicInfo>,
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn timed<F>(cli: &Cli, f: F) -> Result<VerificationReport>
where
    F: FnOnce() -> Result<VerificationReport, crate::verify::VerifyError>,
{
    let start = Instant::now();
    let mut report = f()?;
    if cli.timing {
        report.ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Execute a parsed command. `Ok(true)` when every verification passed.
pub fn execute(cli: &Cli) -> Result<bool> {
    let cache = (!cli.no_cache).then(|| GroupCache::new(&cli.cache_dir));
    let store = GroupStore::new(cache);
    match &cli.command {
        Command::GroupInfo { family, q } => {
            let red = store.group(*family, *q)?;
            let g = &red.group;
            let d = &red.data;
            let info = GroupInfo {
                group: g.label().to_string(),
                family: *family,
                q: *q,
                order: g.order(),
                expected_order: family.expected_order(*q as u64),
                classes: g.class_count(),
                borel: d.borel.len(),
                torus: d.torus.len(),
                unipotent: d.unipotent.len(),
                center: d.center.len(),
                parabolics: d
                    .parabolics
                    .iter()
                    .map(|p| ParabolicInfo {
                        tag: p.tag.clone(),
                        composition: p.composition.clone(),
                        order: p.members.len(),
                        levi_order: p.levi.order(),
                        radical_order: p.radical.len(),
                    })
                    .collect(),
            };
            emit(cli, &to_json(&info)?)?;
            Ok(true)
        }
        Command::Table { family, q, method } => {
            let red = store.group(*family, *q)?;
            let table = match method {
                Method::Closed if *family == GroupFamily::Gl2 => gl2_table::<f64>(&red.group)?,
                Method::Closed => bail!("the closed-form table exists only for gl2, not {family}"),
                Method::Dixon => dixon_table::<f64>(&red.group)?,
            };
            emit(cli, &to_json(&table.to_json()?)?)?;
            Ok(true)
        }
        Command::Verify { statement, family, q, levi } => {
            let need_family = || family.ok_or_else(|| anyhow!("--family is required for this statement"));
            let need_q = || q.ok_or_else(|| anyhow!("--q is required for this statement"));
            let levi = levi.as_deref();
            let reports = match statement {
                Statement::Rodier => {
                    let (f, q) = (need_family()?, need_q()?);
                    vec![timed(cli, || rodier_suite(&store, f, q, levi))?]
                }
                Statement::Transfer => {
                    let (f, q) = (need_family()?, need_q()?);
                    vec![timed(cli, || transfer_suite(&store, f, q, levi))?]
                }
                Statement::MultOne => {
                    let (f, q) = (need_family()?, need_q()?);
                    vec![timed(cli, || multiplicity_one_suite(&store, f, q))?]
                }
                Statement::Counterexample => {
                    if family.is_some_and(|f| f != GroupFamily::ParamodularLevi) {
                        bail!("the counterexample lives on paramodular-levi");
                    }
                    let q = need_q()?;
                    vec![timed(cli, || counterexample_check(&store, q))?]
                }
                Statement::Definitions => {
                    let (f, q) = (need_family()?, need_q()?);
                    vec![timed(cli, || definition_equivalence_check(&store, f, q))?]
                }
                Statement::Structure => {
                    let (f, q) = (need_family()?, need_q()?);
                    vec![timed(cli, || structure_check(&store, f, q))?]
                }
                Statement::Suite => {
                    let start = Instant::now();
                    let mut all = standard_suite(&store)?;
                    if cli.timing {
                        let ms = start.elapsed().as_millis() as u64;
                        for r in &mut all {
                            r.ms = Some(ms);
                        }
                    }
                    all
                }
            };
            let pass = reports.iter().all(|r| r.pass);
            for r in reports.iter().filter(|r| !r.pass) {
                for c in r.failing_cells() {
                    log::warn!("{} failed: {} {} lhs={} rhs={}", r.statement, c.psi, c.input, c.lhs, c.rhs);
                }
            }
            let text = if *statement == Statement::Suite { to_json(&reports)? } else { to_json(&reports[0])? };
            emit(cli, &text)?;
            Ok(pass)
        }
    }
}

/// Parse, run and map the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match execute(&cli) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags() {
        let cli = Cli::try_parse_from(["genrest", "verify", "rodier", "--family", "gl2", "--q", "2", "--levi", "torus", "--timing"]).unwrap();
        assert!(cli.timing);
        match cli.command {
            Command::Verify { statement, family, q, levi } => {
                assert_eq!(statement, Statement::Rodier);
                assert_eq!(family, Some(GroupFamily::Gl2));
                assert_eq!(q, Some(2));
                assert_eq!(levi.as_deref(), Some("torus"));
            }
            _ => panic!("wrong subcommand"),
        }
        assert!(Cli::try_parse_from(["genrest", "table", "--family", "gl3", "--q", "2"]).is_err());
        let cli = Cli::try_parse_from(["genrest", "group-info", "--family", "paramodular-levi", "--q", "3", "-vv"]).unwrap();
        assert_eq!(cli.verbose, 2);
    }

    #[test]
    fn bad_inputs_exit_two() {
        assert_eq!(main_with_args(["genrest", "group-info", "--family", "gl2", "--q", "6", "--no-cache"]), EXIT_ERROR);
        assert_eq!(
            main_with_args(["genrest", "table", "--family", "gsp4", "--q", "2", "--method", "closed", "--no-cache"]),
            EXIT_ERROR
        );
        assert_eq!(main_with_args(["genrest", "verify", "rodier", "--q", "2", "--no-cache"]), EXIT_ERROR);
        assert_eq!(main_with_args(["genrest", "bogus"]), EXIT_ERROR);
    }
}
