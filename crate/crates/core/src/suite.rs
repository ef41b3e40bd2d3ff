//! End-to-end pipeline: counts, L-polynomials, rhythms and the artifact bundle.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::cache::{CacheEntry, CountCache};
use crate::config::RunConfig;
use crate::curves::{reduce_mod, CountOptions, CurveSpec, PointCounter, ReducedCurve};
use crate::emit::frames::write_sieve_frames;
use crate::emit::json::{lpoly_json, rhythm_json, scores_json, sieve_log_json, to_json};
use crate::emit::midi::write_midi;
use crate::emit::svg::{write_svg_circle, write_svg_strip};
use crate::emit::{uniform_rhythm, PerformancePlan, Segment};
use crate::error::{Error, Result};
use crate::rhythm::{rhythm_of, RhythmPattern, Tolerances};
use crate::score::{note_list, PrimeScore};
use crate::sieve::run_all_with_states;
use crate::zeta::{lpoly_from_traces, traces_from_counts, verify_weil, LPolynomial, WeilCheck};

/// Traces, Newton, functional equation and Weil check; refuses an
/// L-polynomial whose roots leave the circle.
pub fn lpoly_from_counts(p: u64, g: usize, counts: &[u64], tol: &Tolerances) -> Result<(LPolynomial, WeilCheck)> {
    let traces = traces_from_counts(p, g, counts)?;
    let l = lpoly_from_traces(&traces)?;
    if !l.satisfies_functional_equation() {
        return Err(Error::Config(format!("L-polynomial at p = {p} fails the functional equation")));
    }
    let weil = verify_weil(&l, tol.modulus)?;
    if !weil.ok {
        return Err(Error::OffCircle { p, max_deviation: weil.max_deviation });
    }
    Ok((l, weil))
}

/// N_1..N_g by direct counting.
pub fn count_all(rc: &ReducedCurve, opts: CountOptions) -> Result<Vec<u64>> {
    (1..=rc.genus()).map(|k| PointCounter::new(rc.p(), k, opts)?.count(rc)).collect()
}

/// The whole single-pair pipeline without cache.
pub fn compute_lpoly(
    curve: &CurveSpec,
    p: u64,
    opts: CountOptions,
    tol: &Tolerances,
) -> Result<(LPolynomial, WeilCheck)> {
    let rc = reduce_mod(curve, p)?;
    let counts = count_all(&rc, opts)?;
    lpoly_from_counts(p, rc.genus(), &counts, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Skipped,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairReport {
    pub curve: String,
    pub p: u64,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weil_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub palindrome_deviation: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SuiteReport {
    pub pairs: Vec<PairReport>,
    pub files: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.pairs.iter().all(|r| r.status != Status::Failed)
    }
}

/// A bundle held in memory: relative path and contents, in write order.
pub type Bundle = Vec<(String, Vec<u8>)>;

enum Counts {
    Ready(Vec<u64>),
    Skip(String),
    Fail(Error),
}

/// Gathers N_1..N_g for every curve at one prime, counting what the cache
/// lacks and sharing each field's tables across curves.
fn counts_at(p: u64, curves: &[(&CurveSpec, ReducedCurve)], cfg: &RunConfig, cache: &CountCache) -> Vec<Counts> {
    let opts = CountOptions { workers: cfg.workers, bitmap_threshold: cfg.bitmap_threshold };
    let mut have: Vec<Vec<u64>> =
        curves.iter().map(|(c, _)| cache.load(c.name(), p).map(|e| e.n_k).unwrap_or_default()).collect();
    let fresh: Vec<usize> = have.iter().map(Vec::len).collect();
    let g_max = curves.iter().map(|(_, rc)| rc.genus()).max().unwrap_or(0);
    let mut failures: BTreeMap<usize, Error> = BTreeMap::new();
    // a pair that cannot reach N_g is not counted at all
    let viable: Vec<bool> = curves
        .iter()
        .enumerate()
        .map(|(i, (_, rc))| {
            let g = rc.genus();
            let k_max = cfg.k_max.unwrap_or(g).min(g);
            (have[i].len() + 1..=g)
                .all(|k| k <= k_max && p.checked_pow(k as u32).is_some_and(|q| q <= cfg.count_limit()))
        })
        .collect();

    for k in 1..=g_max {
        let need: Vec<usize> = (0..curves.len())
            .filter(|&i| {
                let rc = &curves[i].1;
                let k_max = cfg.k_max.unwrap_or(rc.genus()).min(rc.genus());
                viable[i] && !failures.contains_key(&i) && have[i].len() == k - 1 && k <= k_max
            })
            .collect();
        let q = p.checked_pow(k as u32).unwrap_or(u64::MAX);
        if need.is_empty() || q > cfg.count_limit() {
            continue;
        }
        log::info!("counting over F_{p}^{k} for {} curve(s)", need.len());
        let counter = match PointCounter::new(p, k, opts) {
            Ok(c) => c,
            Err(e) => {
                for i in need {
                    failures.insert(i, e.clone());
                }
                continue;
            }
        };
        for i in need {
            match counter.count(&curves[i].1) {
                Ok(n) => have[i].push(n),
                Err(e) => {
                    failures.insert(i, e);
                }
            }
        }
    }

    curves
        .iter()
        .enumerate()
        .map(|(i, (curve, rc))| {
            if let Some(e) = failures.remove(&i) {
                return Counts::Fail(e);
            }
            let g = rc.genus();
            if have[i].len() > fresh[i] {
                if let Err(e) = cache.store(&CacheEntry::new(curve.name(), p, have[i].clone())) {
                    return Counts::Fail(e);
                }
            }
            if have[i].len() >= g {
                return Counts::Ready(have[i][..g].to_vec());
            }
            let next = have[i].len() + 1;
            let k_max = cfg.k_max.unwrap_or(g).min(g);
            if k_max < g {
                let next = next.max(k_max + 1);
                Counts::Fail(Error::CountsUnavailable {
                    curve: curve.name().to_string(),
                    p,
                    reason: format!(
                        "k_max = {k_max} but N_{next}..N_{g} are not in the cache at {}",
                        cache.path(curve.name(), p).display()
                    ),
                })
            } else {
                let next =
                    (next..=g).find(|&k| p.checked_pow(k as u32).is_none_or(|q| q > cfg.count_limit())).unwrap_or(next);
                Counts::Skip(format!(
                    "counting over F_{p}^{next} exceeds the default size limit and no cached counts were found; \
                     rerun with --full or provide a cache"
                ))
            }
        })
        .collect()
}

fn cyclic_pitches(score: &PrimeScore, n: usize) -> Vec<u8> {
    (0..n).map(|j| score.pitches[j % score.pitches.len()]).collect()
}

/// One analysed (curve, p) pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PairResult {
    pub lpoly: LPolynomial,
    pub rhythm: RhythmPattern,
    pub weil: WeilCheck,
}

/// Everything computed for the selected curves and primes.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub curves: Vec<CurveSpec>,
    /// `results[i]` maps p to the outcome for `curves[i]`, successful pairs only.
    pub results: Vec<BTreeMap<u64, PairResult>>,
    pub reports: Vec<PairReport>,
}

impl Analysis {
    pub fn ok(&self) -> bool {
        self.reports.iter().all(|r| r.status != Status::Failed)
    }

    /// The performance of one curve over its successful primes.
    pub fn plan(&self, curve: usize, scores: &BTreeMap<u64, PrimeScore>, cfg: &RunConfig) -> PerformancePlan {
        PerformancePlan {
            segments: self.results[curve]
                .iter()
                .map(|(p, r)| Segment {
                    p: *p,
                    pitches: cyclic_pitches(&scores[p], r.rhythm.alphas.len()),
                    rhythm: r.rhythm.clone(),
                    n_periods: cfg.n_periods,
                    tempo_scale: cfg.tempo_scale,
                })
                .collect(),
        }
    }
}

/// Scores for every configured prime.
pub fn scores_for(cfg: &RunConfig) -> Result<BTreeMap<u64, PrimeScore>> {
    cfg.primes.iter().map(|&p| Ok((p, note_list(p)?))).collect()
}

/// Counts (through the cache), L-polynomials and rhythms for every
/// selected curve and prime.
pub fn analyze(cfg: &RunConfig) -> Result<Analysis> {
    let curves = cfg.curve.curves()?;
    let cache = CountCache::new(cfg.cache_dir());
    let mut results: Vec<BTreeMap<u64, PairResult>> = curves.iter().map(|_| BTreeMap::new()).collect();
    let mut pair_reports: Vec<Vec<PairReport>> = curves.iter().map(|_| Vec::new()).collect();
    for &p in &cfg.primes {
        let mut good = Vec::new();
        for (ci, c) in curves.iter().enumerate() {
            match reduce_mod(c, p) {
                Ok(rc) => good.push((ci, c, rc)),
                Err(e) => {
                    log::info!("{} has bad reduction at {p}", c.name());
                    pair_reports[ci].push(PairReport {
                        curve: c.name().into(),
                        p,
                        status: Status::Skipped,
                        detail: Some(e.to_string()),
                        weil_deviation: None,
                        palindrome_deviation: None,
                    });
                }
            }
        }
        let pairs: Vec<(&CurveSpec, ReducedCurve)> = good.iter().map(|(_, c, rc)| (*c, rc.clone())).collect();
        let counts = counts_at(p, &pairs, cfg, &cache);
        for ((ci, c, rc), counts) in good.iter().zip(counts) {
            let mut entry = PairReport {
                curve: c.name().into(),
                p,
                status: Status::Ok,
                detail: None,
                weil_deviation: None,
                palindrome_deviation: None,
            };
            match counts {
                Counts::Skip(why) => {
                    log::warn!("{} at p = {p} skipped: {why}", c.name());
                    entry.status = Status::Skipped;
                    entry.detail = Some(why);
                }
                Counts::Fail(e) => {
                    log::error!("{} at p = {p}: {e}", c.name());
                    entry.status = Status::Failed;
                    entry.detail = Some(e.to_string());
                }
                Counts::Ready(n) => {
                    let outcome = lpoly_from_counts(p, rc.genus(), &n, &cfg.tolerances)
                        .and_then(|(l, w)| Ok((rhythm_of(&l, &cfg.tolerances)?, l, w)));
                    match outcome {
                        Ok((rhythm, lpoly, weil)) => {
                            entry.weil_deviation = Some(weil.max_deviation);
                            entry.palindrome_deviation = Some(rhythm.palindrome_deviation().map_or(0.0, |d| d.1));
                            results[*ci].insert(p, PairResult { lpoly, rhythm, weil });
                        }
                        Err(e) => {
                            log::error!("{} at p = {p}: {e}", c.name());
                            entry.status = Status::Failed;
                            entry.detail = Some(e.to_string());
                        }
                    }
                }
            }
            pair_reports[*ci].push(entry);
        }
    }
    Ok(Analysis { curves, results, reports: pair_reports.into_iter().flatten().collect() })
}

/// The sieve music: each event prime plays its score on evenly spaced onsets.
pub fn sieve_plan(events: &[crate::sieve::SieveEvent], cfg: &RunConfig) -> Result<PerformancePlan> {
    let mut plan = PerformancePlan::default();
    for e in events {
        let score = note_list(e.p)?;
        let period = 2.0 * std::f64::consts::PI / (e.p as f64).ln();
        plan.segments.push(Segment {
            p: e.p,
            pitches: score.pitches,
            rhythm: uniform_rhythm(e.p, 10, period),
            n_periods: cfg.n_periods,
            tempo_scale: cfg.tempo_scale,
        });
    }
    Ok(plan)
}

/// Sieve log, music, manifest and frames.
pub fn sieve_bundle(cfg: &RunConfig) -> Result<Bundle> {
    let (states, events) = run_all_with_states();
    let plan = sieve_plan(&events, cfg)?;
    let (_, timings) = plan.schedule();
    let (frames, manifest) = write_sieve_frames(&states, &events, &timings)?;
    let mut bundle: Bundle = vec![
        ("sieve/log.json".into(), sieve_log_json(&states, &events).into_bytes()),
        ("sieve/sieve.mid".into(), write_midi(&plan)?),
        ("sieve/manifest.json".into(), to_json(&manifest).into_bytes()),
    ];
    for (file, svg) in frames {
        bundle.push((format!("sieve/frames/{file}"), svg.into_bytes()));
    }
    Ok(bundle)
}

/// Builds the bundle in memory. Point counts are read from and written to
/// the cache as a side effect.
pub fn build_suite(cfg: &RunConfig) -> Result<(Bundle, SuiteReport)> {
    let analysis = analyze(cfg)?;
    let scores = scores_for(cfg)?;
    let mut bundle: Bundle = vec![("config.txt".into(), cfg.echo().into_bytes())];
    let Analysis { curves, results, .. } = &analysis;

    for (ci, curve) in curves.iter().enumerate() {
        let name = curve.name();
        for (p, r) in &results[ci] {
            bundle.push((format!("lpoly/{name}-p{p}.json"), lpoly_json(name, &r.lpoly).into_bytes()));
            bundle.push((format!("rhythm/{name}-p{p}.json"), rhythm_json(name, &r.rhythm).into_bytes()));
            bundle.push((format!("svg/{name}-p{p}.svg"), write_svg_circle(&r.rhythm, &r.lpoly).into_bytes()));
        }
        let patterns: Vec<RhythmPattern> = results[ci].values().map(|r| r.rhythm.clone()).collect();
        bundle.push((format!("svg/{name}-strip.svg"), write_svg_strip(&patterns).into_bytes()));
        let plan = analysis.plan(ci, &scores, cfg);
        bundle.push((format!("midi/{name}.mid"), write_midi(&plan)?));
    }

    let score_list: Vec<PrimeScore> = scores.values().cloned().collect();
    bundle.push(("scores.json".into(), scores_json(&score_list).into_bytes()));

    bundle.extend(sieve_bundle(cfg)?);

    let mut report = SuiteReport { pairs: analysis.reports.clone(), ..SuiteReport::default() };
    report.files = bundle.iter().map(|(f, _)| f.clone()).collect();
    report.files.push("report.json".into());
    bundle.push(("report.json".into(), to_json(&report).into_bytes()));
    Ok((bundle, report))
}

pub fn write_bundle(out: &Path, bundle: &Bundle) -> Result<()> {
    for (rel, bytes) in bundle {
        let path = out.join(rel);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(&path, bytes)?;
    }
    Ok(())
}

/// Builds and writes the bundle under `cfg.out`.
pub fn run_suite(cfg: &RunConfig) -> Result<SuiteReport> {
    let (bundle, report) = build_suite(cfg)?;
    write_bundle(&cfg.out, &bundle)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::CurveSelector;
    use crate::curves::catalog_curve;

    fn small(out: &Path) -> RunConfig {
        RunConfig {
            curve: CurveSelector::Named("C1".into()),
            primes: vec![7],
            out: out.to_path_buf(),
            ..RunConfig::default()
        }
    }

    #[test]
    fn single_pair_bundle() {
        let dir = tempfile::tempdir().unwrap();
        let report = run_suite(&small(dir.path())).unwrap();
        assert!(report.ok(), "{report:?}");
        for f in [
            "lpoly/C1-p7.json",
            "rhythm/C1-p7.json",
            "svg/C1-p7.svg",
            "svg/C1-strip.svg",
            "midi/C1.mid",
            "scores.json",
            "sieve/manifest.json",
            "config.txt",
            "report.json",
            "cache/C1-p7.json",
        ] {
            assert!(dir.path().join(f).exists(), "{f}");
        }
        assert_eq!(fs::read_dir(dir.path().join("sieve/frames")).unwrap().count(), 48);
    }

    #[test]
    fn k_max_without_cache_fails_clearly() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig { k_max: Some(3), ..small(dir.path()) };
        let report = build_suite(&cfg).unwrap().1;
        assert!(!report.ok());
        let detail = report.pairs[0].detail.as_deref().unwrap();
        assert!(detail.contains("k_max = 3") && detail.contains("N_4..N_5"), "{detail}");
    }

    #[test]
    fn k_max_with_cache_matches_full_count() {
        let dir = tempfile::tempdir().unwrap();
        let full = build_suite(&small(dir.path())).unwrap();
        // drop the cached counts above k = 3 would defeat the point; keep them and count less
        let cfg = RunConfig { k_max: Some(3), ..small(dir.path()) };
        let partial = build_suite(&cfg).unwrap();
        assert!(partial.1.ok());
        let lp = |b: &Bundle| b.iter().find(|(f, _)| f == "lpoly/C1-p7.json").unwrap().1.clone();
        assert_eq!(lp(&full.0), lp(&partial.0));
    }

    #[test]
    fn gated_pair_is_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig { primes: vec![37], ..small(dir.path()) };
        let report = build_suite(&cfg).unwrap().1;
        assert!(report.ok());
        assert_eq!(report.pairs[0].status, Status::Skipped);
        let detail = report.pairs[0].detail.as_deref().unwrap();
        assert!(detail.contains("--full") && detail.contains("F_37^5"), "{detail}");
    }

    #[test]
    fn bad_reduction_is_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig { primes: vec![5, 7], ..small(dir.path()) };
        let report = build_suite(&cfg).unwrap().1;
        assert_eq!(report.pairs[0].status, Status::Skipped);
        assert!(report.pairs[0].detail.as_deref().unwrap().contains("p = 5"));
        assert_eq!(report.pairs[1].status, Status::Ok);
    }

    #[test]
    fn compute_lpoly_end_to_end() {
        let (l, weil) =
            compute_lpoly(&catalog_curve("C1").unwrap(), 7, CountOptions::default(), &Tolerances::default()).unwrap();
        assert_eq!(l.coeffs[0], 1);
        assert_eq!(l.coeffs[10], 16807);
        assert!(weil.ok);
    }
}
