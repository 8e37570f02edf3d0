//! `mekr`: runs the verification pipelines and prints one record per claim.
//!
//! Exit codes: 0 when no record fails, 1 when one does, 2 on a usage error,
//! 3 when a requested `k` is above `--max-k`.

mod checks;
mod record;
mod render;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::{Parser, Subcommand, ValueEnum};
use matching_ekr::Limits;

use checks::Context;
use record::Report;

#[derive(Parser, Debug)]
#[command(name = "mekr", version, about = "Exact verification reports for the perfect matching derangement graph M(2k)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Half the number of points; runs k = 2..4 when omitted.
    #[arg(long, global = true, value_parser = positive)]
    k: Option<usize>,

    /// Symmetric-group degree for `reps` (default 9..13), or Kneser `n` for `spectra`.
    #[arg(long, global = true, value_parser = positive)]
    n: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Refuse any k above this (exit code 3).
    #[arg(long, global = true, default_value_t = 6)]
    max_k: usize,

    /// Worker threads; defaults to one per core.
    #[arg(long, global = true, env = "MEKR_THREADS")]
    threads: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Write graph, coclique, spectrum and incidence artifacts to this directory.
    #[arg(long, global = true)]
    export: Option<PathBuf>,

    /// Fill `elapsed_ms`; off by default so reports are byte-identical across runs.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Matching counts and the degree formula.
    Counts,
    /// Construction, regularity, transitivity and the 1-factorisation clique.
    Graph,
    /// Exact spectrum, module labels, trace identity and character sums.
    Spectra,
    /// Maximum cocliques, ratio bound and its tightness.
    Ekr,
    /// Incidence matrix, rank, facet sizes and the facet classification.
    Polytope,
    /// Symmetric-group dimensions, small degrees and branching.
    Reps,
    /// The non-Cayley chain.
    Cayley,
    /// Everything above.
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

const DEFAULT_KS: std::ops::RangeInclusive<usize> = 2..=4;
const DEFAULT_NS: std::ops::RangeInclusive<usize> = 9..=13;

struct CapExceeded(String);

fn run(cli: &Cli) -> Result<std::result::Result<bool, CapExceeded>> {
    let ks: Vec<usize> = match cli.k {
        Some(k) => vec![k],
        None => DEFAULT_KS.collect(),
    };
    if let Some(&k) = ks.iter().find(|&&k| k > cli.max_k) {
        return Ok(Err(CapExceeded(format!("k = {k} exceeds the cap --max-k {}", cli.max_k))));
    }
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring the thread pool")?;
    }

    let d = Limits::default();
    let cap = |x: usize| x.min(cli.max_k);
    let limits = Limits {
        enumeration: cap(d.enumeration),
        graph: cap(d.graph),
        coclique_search: cap(d.coclique_search),
        automorphism: cap(d.automorphism),
        group_iteration: cap(d.group_iteration),
    };
    let mut ctx = Context { limits, exporting: cli.export.is_some(), artifacts: Vec::new() };
    let mut report = Report::new(cli.timings);
    let wants = |c: Command| cli.command == c || cli.command == Command::All;

    for &k in &ks {
        if wants(Command::Counts) {
            report.group(|| checks::counts(k, &ctx));
        }
        if wants(Command::Graph) {
            report.group(|| checks::graph(k, &mut ctx));
        }
        if wants(Command::Spectra) {
            report.group(|| checks::spectra(k, cli.n, &mut ctx));
        }
        if wants(Command::Ekr) {
            report.group(|| checks::ekr(k, &mut ctx));
        }
        if wants(Command::Polytope) {
            report.group(|| checks::polytope(k, &mut ctx));
        }
        if wants(Command::Cayley) && (cli.k.is_some() || k >= 3) {
            report.group(|| checks::cayley(k, &ctx));
        }
        if wants(Command::Reps) {
            report.group(|| vec![checks::decomposition(k)]);
        }
    }
    if wants(Command::Reps) {
        let ns: Vec<usize> = match cli.n {
            Some(n) if cli.command == Command::Reps => vec![n],
            _ => DEFAULT_NS.collect(),
        };
        for n in ns {
            report.group(|| checks::reps(n));
        }
    }

    let body = match cli.format {
        Format::Json => render::json(&report.records)?,
        Format::Csv => render::csv(&report.records)?,
        Format::Text => render::text(&report.records),
    };
    match &cli.out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    if let Some(dir) = &cli.export {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for (name, contents) in &ctx.artifacts {
            let path = dir.join(name);
            fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(Ok(!report.has_failures()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Ok(true)) => ExitCode::SUCCESS,
        Ok(Ok(false)) => ExitCode::from(1),
        Ok(Err(CapExceeded(msg))) => {
            eprintln!("mekr: resource cap: {msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("mekr: {e:#}");
            ExitCode::from(1)
        }
    }
}
