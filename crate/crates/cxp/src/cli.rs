//! Subcommand definitions and dispatch for the `cxp` binary.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad flags, unreadable or
//! unwritable paths), 2 on data errors (parse failures, invariant violations).

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use cxp_core::analytics::{greedy_anchors, pair_multiplicity_stats, AnalyticsError};
use cxp_core::engine::{offline_optimal, OracleError, OracleLimits};
use cxp_core::ingest::{build_multigraph, AttributeModel, PathletSynthesisPolicy};
use cxp_core::sim::{simulate, ScenarioConfig};
use cxp_core::Multigraph;

use crate::formats::{self, Summary};
use crate::DataError;

#[derive(Debug, Parser)]
#[command(name = "cxp", version, about = "Inter-IXP multigraph construction, analysis and QoS routing simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a transit multigraph from an `ixp_id,asn` membership CSV.
    Ingest {
        #[arg(long)]
        members: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// constant:N or uniform:LO:HI (Mbps)
        #[arg(long, default_value = "uniform:100:1000")]
        capacity: AttributeModel,
        /// constant:N or uniform:LO:HI (ms)
        #[arg(long, default_value = "uniform:5:50")]
        latency: AttributeModel,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Per-pair multiplicities and CCDFs of a graph.
    Stats {
        #[arg(long)]
        graph: PathBuf,
        /// Written: <prefix>pairs.csv, <prefix>multiplicity_ccdf.csv,
        /// <prefix>direct_ccdf.csv, <prefix>degree_ccdf.csv, <prefix>report.json
        #[arg(long)]
        out_prefix: String,
    },
    /// Greedy anchor selection and its IPv4 coverage curve.
    Coverage {
        #[arg(long)]
        members: PathBuf,
        /// `asn,prefix` CSV
        #[arg(long)]
        prefixes: PathBuf,
        /// `provider|customer|-1` lines
        #[arg(long)]
        relationships: Option<PathBuf>,
        #[arg(long)]
        k: usize,
        /// Include direct customers of members (needs --relationships)
        #[arg(long)]
        cone: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a seeded discrete-event simulation.
    Simulate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Exact maximum number of simultaneously embeddable requests.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        requests: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(#[from] DataError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn write_file(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<(), CliError> {
    let mut w = create(path)?;
    f(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn label(path: &Path) -> String {
    path.display().to_string()
}

fn read_graph(path: &Path) -> Result<Multigraph, CliError> {
    Ok(formats::load_graph(open(path)?, &label(path))?)
}

/// Parses `args` (including the program name) and runs the command, writing
/// human-readable output to `out`. Returns the process exit code.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    let say = |out: &mut dyn Write, line: String| {
        writeln!(out, "{line}").map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
    };
    match command {
        Command::Ingest {
            members,
            out: graph_out,
            capacity,
            latency,
            seed,
        } => {
            let table = formats::parse_membership(open(&members)?, &label(&members))?;
            let policy = PathletSynthesisPolicy {
                capacity,
                latency,
                seed,
            };
            let g = build_multigraph(&table, &policy).map_err(|e| DataError::new(&label(&members), None, e))?;
            write_file(&graph_out, |w| formats::save_graph(&g, w))?;
            say(out, format!("wrote {} ({} IXPs, {} transit pathlets)", graph_out.display(), table.ixp_count(), g.pathlet_count()))?;
            if let Ok(stats) = pair_multiplicity_stats(&g) {
                for l in formats::SnapshotReport::new(table.ixp_count(), &stats).lines() {
                    say(out, l)?;
                }
            }
        }
        Command::Stats { graph, out_prefix } => {
            let g = read_graph(&graph)?;
            let stats = pair_multiplicity_stats(&g).map_err(|e| DataError::new(&label(&graph), None, e))?;
            let report = formats::SnapshotReport::new(g.ixps().count(), &stats);
            let path = |suffix: &str| PathBuf::from(format!("{out_prefix}{suffix}"));
            write_file(&path("pairs.csv"), |w| formats::write_pairs_csv(&stats, w))?;
            write_file(&path("multiplicity_ccdf.csv"), |w| formats::write_ccdf_csv(&stats.multiplicity_ccdf, w))?;
            write_file(&path("direct_ccdf.csv"), |w| formats::write_ccdf_csv(&stats.direct_ccdf, w))?;
            write_file(&path("degree_ccdf.csv"), |w| formats::write_ccdf_csv(&stats.degree_ccdf, w))?;
            write_file(&path("report.json"), |w| {
                serde_json::to_writer_pretty(&mut *w, &report)?;
                w.write_all(b"\n")
            })?;
            for l in report.lines() {
                say(out, l)?;
            }
        }
        Command::Coverage {
            members,
            prefixes,
            relationships,
            k,
            cone,
            out: csv_out,
        } => {
            if cone && relationships.is_none() {
                return Err(CliError::Usage("--cone needs --relationships".into()));
            }
            let table = formats::parse_membership(open(&members)?, &label(&members))?;
            let pfx = formats::parse_as_prefixes(open(&prefixes)?, &label(&prefixes))?;
            let rel = match &relationships {
                Some(p) => Some(formats::parse_relationships(open(p)?, &label(p))?),
                None => None,
            };
            let steps = greedy_anchors(&table, &pfx, rel.as_ref(), k, cone).map_err(|e| match e {
                AnalyticsError::KOutOfRange { .. } => CliError::Usage(format!("--k: {e}")),
                other => DataError::new(&label(&members), None, other).into(),
            })?;
            write_file(&csv_out, |w| {
                let mut c = csv::Writer::from_writer(w);
                c.write_record(["rank", "ixp", "gain", "covered_addresses", "fraction_of_ipv4", "fraction_of_announced"])?;
                for (i, s) in steps.iter().enumerate() {
                    c.write_record([
                        (i + 1).to_string(),
                        s.ixp.clone(),
                        s.gain.to_string(),
                        s.covered.to_string(),
                        s.fraction_of_ipv4.to_string(),
                        s.fraction_of_announced.to_string(),
                    ])?;
                }
                c.flush()
            })?;
            if let Some(last) = steps.last() {
                say(
                    out,
                    format!(
                        "{} anchors cover {:.2}% of IPv4, {:.2}% of announced space",
                        steps.len(),
                        100.0 * last.fraction_of_ipv4,
                        100.0 * last.fraction_of_announced
                    ),
                )?;
            }
        }
        Command::Simulate {
            graph,
            scenario,
            out_dir,
        } => {
            let g = read_graph(&graph)?;
            let cfg: ScenarioConfig = serde_json::from_reader(open(&scenario)?).map_err(|e| {
                let line = (e.line() > 0).then_some(e.line() as u64);
                DataError::new(&label(&scenario), line, e)
            })?;
            let outcome = simulate(g, &cfg).map_err(|e| DataError::new(&label(&scenario), None, e))?;
            if outcome.conservation_violations > 0 {
                return Err(DataError::new(
                    &label(&graph),
                    None,
                    format!("{} conservation violations during the run", outcome.conservation_violations),
                )
                .into());
            }
            fs::create_dir_all(&out_dir)
                .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", out_dir.display())))?;
            let m = &outcome.metrics;
            write_file(&out_dir.join("requests.csv"), |w| formats::write_requests_csv(m, w))?;
            write_file(&out_dir.join("summary.json"), |w| formats::write_summary_json(&Summary::new(m, cfg.seed), w))?;
            say(
                out,
                format!(
                    "accepted {} of {} (ratio {:.4}), re-embeddings {}, drops {}",
                    m.accepted,
                    m.accepted + m.rejected,
                    m.acceptance_ratio,
                    m.reembed_count,
                    m.drop_count
                ),
            )?;
        }
        Command::Oracle { graph, requests } => {
            let g = read_graph(&graph)?;
            let reqs = formats::parse_oracle_requests(open(&requests)?, &label(&requests))?;
            let sol = offline_optimal(&g, &reqs, &OracleLimits::default()).map_err(|e| {
                let msg = match &e {
                    OracleError::TooManyRequests { .. } | OracleError::TooManyIxps { .. } | OracleError::TooManyPaths(..) => {
                        format!("refusing to solve: {e}")
                    }
                    OracleError::Engine(_) => e.to_string(),
                };
                DataError::new(&label(&requests), None, msg)
            })?;
            say(out, format!("optimum: {} of {} requests", sol.accepted, reqs.len()))?;
            for (id, path) in &sol.witness {
                let r = &reqs[*id as usize];
                let ids: Vec<String> = path.pathlets.iter().map(u64::to_string).collect();
                say(
                    out,
                    format!(
                        "request {id} {}->{} {} Mbps: pathlets [{}] latency {} ms",
                        r.src,
                        r.dst,
                        r.demand,
                        ids.join(", "),
                        path.total_latency
                    ),
                )?;
            }
        }
    }
    Ok(())
}
