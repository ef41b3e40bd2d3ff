use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use motivic::config::{parse_primes, CurveSelector, RunConfig};
use motivic::emit::json::{lpoly_json, rhythm_json, scores_json};
use motivic::emit::midi::write_midi;
use motivic::emit::svg::{write_svg_circle, write_svg_strip};
use motivic::field::is_prime;
use motivic::suite::{analyze, run_suite, scores_for, sieve_bundle, write_bundle, Analysis, PairReport, Status};

#[derive(Parser)]
#[command(name = "motivic", version, about = "Motivic rhythms of hyperelliptic curves over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// key = value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Point-count cache directory (default: <out>/cache, or $MOTIVIC_CACHE_DIR)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Counting threads
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Count over fields of any size, including F_p^5 for p > 31
    #[arg(long, global = true)]
    full: bool,
    /// Count only up to F_p^k; the rest must come from the cache
    #[arg(long, global = true)]
    k_max: Option<usize>,
    #[arg(long, global = true)]
    tempo_scale: Option<f64>,
    #[arg(long, global = true)]
    n_periods: Option<usize>,
    /// Prime range such as 7..31, or a list such as 7,11,13
    #[arg(long, global = true)]
    primes: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the L-polynomial of one curve at one prime as JSON
    Lpoly(Pair),
    /// Print the rhythm (root arguments) of one curve at one prime as JSON
    Rhythm(Pair),
    /// Print the prime scores as JSON
    Score {
        #[arg(long, value_parser = odd_prime)]
        prime: Option<u64>,
    },
    /// Write the MIDI performance of one curve over the prime range
    Midi {
        #[arg(long)]
        curve: String,
        /// Output file (default: <out>/midi/<curve>.mid)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write circle diagrams and the strip diagram of one curve
    Svg {
        #[arg(long)]
        curve: String,
    },
    /// Write the sieve frames, event log, music and manifest
    Sieve,
    /// Run the full pipeline for every catalog curve
    Suite {
        /// Curve selector (default: all six)
        #[arg(long)]
        curve: Option<String>,
    },
}

#[derive(Args)]
struct Pair {
    /// C1..C6, or coefficients from the leading term down
    #[arg(long)]
    curve: String,
    #[arg(long, value_parser = odd_prime)]
    prime: u64,
    /// Also write the JSON to this file
    #[arg(long)]
    output: Option<PathBuf>,
}

fn odd_prime(s: &str) -> std::result::Result<u64, String> {
    let n: u64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if !is_prime(n) {
        return Err(format!("{n} is not prime"));
    }
    Ok(n)
}

fn config(common: &Common) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &common.config {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        cfg.apply_file(&text)?;
    }
    cfg.apply_env();
    if let Some(out) = &common.out {
        cfg.out = out.clone();
    }
    if let Some(dir) = &common.cache_dir {
        cfg.cache_dir = Some(dir.clone());
    }
    if let Some(w) = common.workers {
        cfg.workers = w.max(1);
    }
    if common.full {
        cfg.full = true;
    }
    if common.k_max.is_some() {
        cfg.k_max = common.k_max;
    }
    if let Some(t) = common.tempo_scale {
        cfg.set("tempo_scale", &t.to_string())?;
    }
    if let Some(n) = common.n_periods {
        cfg.set("n_periods", &n.to_string())?;
    }
    if let Some(p) = &common.primes {
        cfg.primes = parse_primes(p)?;
    }
    Ok(cfg)
}

fn failure_summary(reports: &[PairReport]) -> Vec<String> {
    reports
        .iter()
        .filter(|r| r.status == Status::Failed)
        .map(|r| format!("{} at p = {}: {}", r.curve, r.p, r.detail.as_deref().unwrap_or("failed")))
        .collect()
}

/// Runs the analysis for one curve and one prime, turning skips and
/// failures into errors.
fn single_pair(cfg: &mut RunConfig, pair: &Pair) -> Result<(Analysis, String)> {
    cfg.curve = CurveSelector::parse(&pair.curve)?;
    if matches!(cfg.curve, CurveSelector::All) {
        bail!("choose one curve");
    }
    let curve = cfg.curve.curves()?.remove(0);
    motivic::curves::reduce_mod(&curve, pair.prime)?;
    cfg.primes = vec![pair.prime];
    let analysis = analyze(cfg)?;
    if let Some(r) = analysis.reports.iter().find(|r| r.status != Status::Ok) {
        bail!("{} at p = {}: {}", r.curve, r.p, r.detail.as_deref().unwrap_or("not computed"));
    }
    Ok((analysis, curve.name().to_string()))
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<()> {
    print!("{text}");
    if let Some(path) = output {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let mut cfg = config(&cli.common)?;
    match cli.command {
        Command::Lpoly(pair) => {
            let (analysis, name) = single_pair(&mut cfg, &pair)?;
            let r = &analysis.results[0][&pair.prime];
            emit(&lpoly_json(&name, &r.lpoly), &pair.output)?;
        }
        Command::Rhythm(pair) => {
            let (analysis, name) = single_pair(&mut cfg, &pair)?;
            let r = &analysis.results[0][&pair.prime];
            emit(&rhythm_json(&name, &r.rhythm), &pair.output)?;
        }
        Command::Score { prime } => {
            if let Some(p) = prime {
                cfg.primes = vec![p];
            }
            let scores: Vec<_> = scores_for(&cfg)?.into_values().collect();
            print!("{}", scores_json(&scores));
        }
        Command::Midi { curve, output } => {
            cfg.curve = CurveSelector::parse(&curve)?;
            let analysis = analyze(&cfg)?;
            let scores = scores_for(&cfg)?;
            for (ci, c) in analysis.curves.iter().enumerate() {
                let bytes = write_midi(&analysis.plan(ci, &scores, &cfg))?;
                let path = output.clone().unwrap_or_else(|| cfg.out.join("midi").join(format!("{}.mid", c.name())));
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir)?;
                }
                fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
                println!("{}", path.display());
            }
            return report_failures(&analysis);
        }
        Command::Svg { curve } => {
            cfg.curve = CurveSelector::parse(&curve)?;
            let analysis = analyze(&cfg)?;
            let mut bundle = Vec::new();
            for (ci, c) in analysis.curves.iter().enumerate() {
                let name = c.name();
                for (p, r) in &analysis.results[ci] {
                    bundle.push((format!("svg/{name}-p{p}.svg"), write_svg_circle(&r.rhythm, &r.lpoly).into_bytes()));
                }
                let patterns: Vec<_> = analysis.results[ci].values().map(|r| r.rhythm.clone()).collect();
                bundle.push((format!("svg/{name}-strip.svg"), write_svg_strip(&patterns).into_bytes()));
            }
            write_bundle(&cfg.out, &bundle)?;
            for (f, _) in &bundle {
                println!("{}", cfg.out.join(f).display());
            }
            return report_failures(&analysis);
        }
        Command::Sieve => {
            let bundle = sieve_bundle(&cfg)?;
            write_bundle(&cfg.out, &bundle)?;
            println!("{} files under {}", bundle.len(), cfg.out.join("sieve").display());
        }
        Command::Suite { curve } => {
            if let Some(c) = curve {
                cfg.curve = CurveSelector::parse(&c)?;
            }
            eprint!("{}", cfg.echo());
            let report = run_suite(&cfg)?;
            let count = |s: Status| report.pairs.iter().filter(|r| r.status == s).count();
            println!(
                "{} pairs ok, {} skipped, {} failed; {} files under {}",
                count(Status::Ok),
                count(Status::Skipped),
                count(Status::Failed),
                report.files.len(),
                cfg.out.display()
            );
            for line in failure_summary(&report.pairs) {
                eprintln!("FAILED {line}");
            }
            return Ok(report.ok());
        }
    }
    Ok(true)
}

fn report_failures(analysis: &Analysis) -> Result<bool> {
    for line in failure_summary(&analysis.reports) {
        eprintln!("FAILED {line}");
    }
    Ok(analysis.ok())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
