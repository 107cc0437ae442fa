//! Command-line interface. `FIXFACTOR_SEED` is reserved and ignored: every
//! command is deterministic.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::census::{run_census, Check};
use crate::decomposition::{oracle_partition, quotient, stabilize};
use crate::dot::to_dot;
use crate::error::{Error, Result};
use crate::io::{decompose_report, named_classes, read_system, trace_entries, SystemFile};
use crate::ladder::{
    answers_stable, audit_ladder, build_ladder, default_degree_cap, ladder_aorb0, ladder_trace,
    parse_term, window, LadderSpace, LadderTrace, Point, Region, RegionSet, WindowReport,
};
use crate::ordinal::OrdinalCNF;
use crate::stability::stability_report;

#[derive(Debug, Parser)]
#[command(
    name = "fixfactor",
    version,
    about = "Superorbit decomposition of finite and ladder dynamical systems",
    after_help = "Exit codes: 0 success, 1 check failure, 2 usage, format or input error.\n\
                  FIXFACTOR_SEED is reserved and has no effect; all output is deterministic."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report: trace, stationary classes, dim fix, ergodicity.
    Decompose {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Also run census checks on this system (comma-separated, or `all`).
        #[arg(long)]
        check: Option<String>,
    },
    /// Superorbit partition at each degree.
    Trace { file: PathBuf },
    /// Maximal level sets computed directly.
    Oracle { file: PathBuf },
    /// Quotient by the stationary partition.
    Quotient { file: PathBuf },
    /// Stability of a set at every degree.
    Lyapunov {
        file: PathBuf,
        /// Comma-separated point names.
        #[arg(long)]
        set: String,
    },
    /// Whether the system is topologically ergodic.
    Ergodic { file: PathBuf },
    /// Superorbit hierarchy of a ladder term such as `cat(ramp)`.
    Ladder {
        term: String,
        #[arg(long, value_parser = parse_ordinal)]
        max_degree: Option<OrdinalCNF>,
        /// Points to describe, e.g. `w*2+3`, `5/-2` or `top`.
        #[arg(long)]
        locate: Vec<String>,
    },
    /// Audit a ladder term on finite windows.
    Window {
        term: String,
        /// Window cut `M,J`; repeatable.
        #[arg(long = "size", value_parser = parse_window)]
        sizes: Vec<(u64, i64)>,
        #[arg(long, value_parser = parse_ordinal)]
        max_degree: Option<OrdinalCNF>,
    },
    /// Run checks over every system up to the given size.
    Census {
        #[arg(long)]
        points: usize,
        #[arg(long, default_value = "all")]
        check: String,
        #[arg(long)]
        jobs: Option<usize>,
        /// One topology per isomorphism class.
        #[arg(long)]
        iso: bool,
        /// Directory receiving one system file per counterexample.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Graphviz rendering of a system.
    ExportDot { file: PathBuf },
}

fn parse_ordinal(s: &str) -> std::result::Result<OrdinalCNF, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_window(s: &str) -> std::result::Result<(u64, i64), String> {
    let (m, j) = s.split_once(',').ok_or("expected M,J")?;
    let m = m.trim().parse().map_err(|_| format!("bad M `{m}`"))?;
    let j = j.trim().parse().map_err(|_| format!("bad J `{j}`"))?;
    Ok((m, j))
}

/// Default audit windows.
pub const WINDOWS: [(u64, i64); 3] = [(3, 3), (5, 6), (8, 8)];

#[derive(Debug, Serialize)]
pub struct ErgodicReport {
    pub ergodic: bool,
    pub dim_fix: usize,
}

#[derive(Debug, Serialize)]
pub struct QuotientReport {
    pub classes: Vec<Vec<String>>,
    pub discrete: bool,
    pub quotient: SystemFile,
}

#[derive(Debug, Serialize)]
pub struct LadderDegree {
    pub degree: OrdinalCNF,
    pub class_count: Option<u64>,
    pub partition: String,
}

#[derive(Debug, Serialize)]
pub struct Located {
    pub point: Point,
    pub aorb0: String,
    pub classes: Vec<(OrdinalCNF, String)>,
}

#[derive(Debug, Serialize)]
pub struct LadderReport {
    pub term: String,
    pub top: Point,
    pub regions: Vec<Region>,
    pub trace: Vec<LadderDegree>,
    pub stabilization_degree: OrdinalCNF,
    pub located: Vec<Located>,
}

#[derive(Debug, Serialize)]
pub struct WindowEntry {
    pub m: u64,
    pub j: i64,
    pub report: WindowReport,
}

#[derive(Debug, Serialize)]
pub struct WindowSummary {
    pub term: String,
    pub windows: Vec<WindowEntry>,
    pub answers_stable: bool,
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    writeln!(out, "{text}").map_err(|e| Error::Io(e.to_string()))
}

fn ladder_setup(term: &str, max_degree: Option<OrdinalCNF>) -> Result<(LadderSpace, LadderTrace)> {
    let space = build_ladder(&parse_term(term)?);
    let trace = ladder_trace(&space, &max_degree.unwrap_or_else(default_degree_cap))?;
    Ok((space, trace))
}

pub fn ladder_report(term: &str, max_degree: Option<OrdinalCNF>, locate: &[String]) -> Result<LadderReport> {
    let (space, trace) = ladder_setup(term, max_degree)?;
    let located = locate
        .iter()
        .map(|text| {
            let x = space.locate(text)?;
            Ok(Located {
                aorb0: ladder_aorb0(&space, &x)?.to_string(),
                classes: trace
                    .entries()
                    .iter()
                    .map(|(d, p)| (d.clone(), p.class_of(&x).to_string()))
                    .collect(),
                point: x,
            })
        })
        .collect::<Result<_>>()?;
    Ok(LadderReport {
        term: space.term().to_string(),
        top: space.top_point(),
        regions: space.regions(),
        trace: trace
            .entries()
            .iter()
            .map(|(d, p)| LadderDegree {
                degree: d.clone(),
                class_count: p.class_count(),
                partition: p.to_string(),
            })
            .collect(),
        stabilization_degree: trace.stabilization_degree().clone(),
        located,
    })
}

/// Audits the term on each window, then compares the degree-0 orbits and
/// stationary classes of a few anchor points across windows.
pub fn window_summary(
    term: &str,
    sizes: &[(u64, i64)],
    max_degree: Option<OrdinalCNF>,
) -> Result<WindowSummary> {
    let (space, trace) = ladder_setup(term, max_degree)?;
    let sizes = if sizes.is_empty() { &WINDOWS[..] } else { sizes };
    let windows: Vec<_> = sizes.iter().map(|&(m, j)| window(&space, m, j)).collect();
    let entries = sizes
        .iter()
        .zip(&windows)
        .map(|(&(m, j), w)| {
            Ok(WindowEntry {
                m,
                j,
                report: audit_ladder(&space, &trace, w)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let anchors = ["0", "0/0", "1", "top"];
    let mut answers: Vec<RegionSet> = Vec::new();
    for a in anchors {
        if let Ok(x) = space.locate(a) {
            answers.push(ladder_aorb0(&space, &x)?);
            answers.push(trace.stationary().class_of(&x));
        }
    }
    Ok(WindowSummary {
        term: space.term().to_string(),
        answers_stable: answers_stable(&windows, &answers),
        windows: entries,
    })
}

fn write_counterexamples(dir: &Path, report: &crate::census::CensusReport) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    for c in &report.checks {
        for (k, ce) in c.counterexamples.iter().enumerate() {
            let path = dir.join(format!("{}-{k}.json", c.check));
            let text = serde_json::to_string_pretty(&ce.system).expect("serializable");
            std::fs::write(&path, text + "\n")
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        }
    }
    Ok(())
}

/// Runs a command; the returned flag is false when a check failed.
pub fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Decompose {
            file,
            format,
            check,
        } => {
            let sys = read_system(&file)?;
            let checks = check.as_deref().map(Check::parse_list).transpose()?;
            match format {
                Format::Json => emit(out, &decompose_report(&sys))?,
                Format::Dot => write!(out, "{}", to_dot(&sys)).map_err(|e| Error::Io(e.to_string()))?,
            }
            let mut ok = true;
            for c in checks.unwrap_or_default() {
                if let Err(detail) = c.run(&sys) {
                    ok = false;
                    let _ = writeln!(err, "check {c} failed: {detail}");
                }
            }
            Ok(ok)
        }
        Command::Trace { file } => {
            let sys = read_system(&file)?;
            emit(out, &trace_entries(&sys, &stabilize(&sys)))?;
            Ok(true)
        }
        Command::Oracle { file } => {
            let sys = read_system(&file)?;
            emit(out, &named_classes(&sys, &oracle_partition(&sys)))?;
            Ok(true)
        }
        Command::Quotient { file } => {
            let sys = read_system(&file)?;
            let trace = stabilize(&sys);
            let q = quotient(&sys, trace.stationary())?;
            emit(
                out,
                &QuotientReport {
                    classes: named_classes(&sys, trace.stationary()),
                    discrete: q.quotient.space().is_discrete(),
                    quotient: SystemFile::from_system(&q.quotient),
                },
            )?;
            Ok(true)
        }
        Command::Lyapunov { file, set } => {
            let sys = read_system(&file)?;
            let names: Vec<&str> = set.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            if names.is_empty() {
                return Err(Error::Empty);
            }
            let m = sys.space().set_of(&names)?;
            emit(out, &stability_report(&sys, &m, &stabilize(&sys)))?;
            Ok(true)
        }
        Command::Ergodic { file } => {
            let sys = read_system(&file)?;
            let dim_fix = crate::decomposition::dim_fix(&sys);
            emit(
                out,
                &ErgodicReport {
                    ergodic: dim_fix == 1,
                    dim_fix,
                },
            )?;
            Ok(true)
        }
        Command::Ladder {
            term,
            max_degree,
            locate,
        } => {
            emit(out, &ladder_report(&term, max_degree, &locate)?)?;
            Ok(true)
        }
        Command::Window {
            term,
            sizes,
            max_degree,
        } => {
            let summary = window_summary(&term, &sizes, max_degree)?;
            emit(out, &summary)?;
            Ok(summary.answers_stable && summary.windows.iter().all(|w| w.report.ok()))
        }
        Command::Census {
            points,
            check,
            jobs,
            iso,
            out_dir,
        } => {
            let checks = Check::parse_list(&check)?;
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(j) = jobs {
                if j == 0 {
                    return Err(Error::Usage("--jobs must be positive".into()));
                }
                builder = builder.num_threads(j);
            }
            let pool = builder.build().map_err(|e| Error::Usage(e.to_string()))?;
            let report = pool.install(|| run_census(points, iso, &checks))?;
            if let Some(dir) = out_dir {
                write_counterexamples(&dir, &report)?;
            }
            emit(out, &report)?;
            Ok(report.all_passed())
        }
        Command::ExportDot { file } => {
            let sys = read_system(&file)?;
            write!(out, "{}", to_dot(&sys)).map_err(|e| Error::Io(e.to_string()))?;
            Ok(true)
        }
    }
}

/// Parses `argv` and runs it, returning the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            2
        }
    }
}
