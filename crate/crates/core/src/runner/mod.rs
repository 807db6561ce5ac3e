//! Config-driven experiments: seeded trials on a work queue, per-ensemble
//! CSV records, a JSON summary and an overlaid-histogram plot.

mod config;
mod plot;
mod trial;

pub use config::{compatible, parse_epsilon, studied, ExperimentConfig};
pub use plot::{histogram_svg, write_histogram_svg};
pub use trial::{run_trial, Prepared, TrialOutput, DEFAULT_GA_MAX_ITER};

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{Algorithm, Ensemble};
use crate::rng::RngStream;
use crate::stats::{fluctuations, ks_distance, FluctuationSet};

pub const CSV_HEADER: [&str; 5] = ["trial_index", "halting_time", "capped", "seed_stream", "extra_json"];
pub const SUMMARY_FILE: &str = "summary.json";
pub const PLOT_FILE: &str = "histogram.svg";
/// Capped fraction above which a batch is reported as degraded.
pub const DEGRADED_FRACTION: f64 = 0.01;

/// Stream index of trial `trial` of `ensemble`: the ensemble's ordinal in
/// the high 32 bits, so streams never collide across ensembles.
pub fn stream_index(ensemble: Ensemble, trial: usize) -> u64 {
    let ordinal = Ensemble::ALL.iter().position(|&e| e == ensemble).expect("ensemble is listed") as u64;
    (ordinal << 32) | trial as u64
}

/// One CSV row. `halting_time` is `None` when the trial failed; the error
/// is then recorded in `extra_json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub trial_index: usize,
    pub halting_time: Option<f64>,
    pub capped: bool,
    pub seed_stream: u64,
    pub extra_json: String,
}

impl Row {
    pub fn is_valid(&self) -> bool {
        self.halting_time.is_some() && !self.capped
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub ensemble: String,
    pub trials: usize,
    /// Trials that halted before the cap without error.
    pub completed: usize,
    pub capped: usize,
    pub failed: usize,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub degraded: bool,
    /// Why no fluctuations could be formed, if so.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsEntry {
    pub a: String,
    pub b: String,
    pub distance: f64,
}

/// Everything in the summary that is a function of the CSV records.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub algorithm: String,
    pub n: usize,
    pub epsilon: f64,
    pub trials: usize,
    pub master_seed: u64,
    pub ensembles: Vec<EnsembleSummary>,
    pub ks: Vec<KsEntry>,
    pub degraded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    #[serde(flatten)]
    pub stats: SummaryStats,
    pub wall_clock_seconds: f64,
}

#[derive(Clone, Debug)]
pub struct EnsembleResult {
    pub ensemble: Ensemble,
    pub rows: Vec<Row>,
    pub fluctuations: Option<FluctuationSet>,
}

#[derive(Clone, Debug)]
pub struct ResultBundle {
    pub config: ExperimentConfig,
    pub results: Vec<EnsembleResult>,
    pub summary: Summary,
    /// Directory the outputs were written to, if any.
    pub out_dir: Option<PathBuf>,
}

impl ResultBundle {
    pub fn result(&self, ensemble: Ensemble) -> Option<&EnsembleResult> {
        self.results.iter().find(|r| r.ensemble == ensemble)
    }

    pub fn tau(&self, ensemble: Ensemble) -> Option<&[f64]> {
        self.result(ensemble)?.fluctuations.as_ref().map(|f| f.tau.as_slice())
    }

    /// KS distance between the fluctuations of two ensembles.
    pub fn ks(&self, a: Ensemble, b: Ensemble) -> Option<f64> {
        self.summary
            .stats
            .ks
            .iter()
            .find(|k| (k.a == a.name() && k.b == b.name()) || (k.a == b.name() && k.b == a.name()))
            .map(|k| k.distance)
    }
}

pub fn csv_path(dir: &Path, ensemble: Ensemble) -> PathBuf {
    dir.join(format!("{}.csv", ensemble.name()))
}

fn error_row(trial_index: usize, seed_stream: u64, err: &Error) -> Row {
    Row {
        trial_index,
        halting_time: None,
        capped: false,
        seed_stream,
        extra_json: serde_json::json!({ "error": err.to_string() }).to_string(),
    }
}

/// Runs every trial of every ensemble on `cfg.workers` threads. Results do
/// not depend on the worker count: each trial derives its own stream.
pub fn collect_rows(cfg: &ExperimentConfig) -> Result<Vec<Vec<Row>>> {
    cfg.validate()?;
    let prep = Prepared::new(cfg)?;
    let jobs: Vec<(usize, Ensemble, usize)> = cfg
        .ensembles
        .iter()
        .enumerate()
        .flat_map(|(slot, &e)| (0..cfg.trials).map(move |i| (slot, e, i)))
        .collect();
    let next = AtomicUsize::new(0);
    let workers = cfg.workers.min(jobs.len()).max(1);
    let run = || {
        let mut done = Vec::new();
        loop {
            let j = next.fetch_add(1, Ordering::Relaxed);
            let Some(&(_, ensemble, i)) = jobs.get(j) else { break };
            let stream = stream_index(ensemble, i);
            let row = match run_trial(cfg, &prep, ensemble, RngStream::new(cfg.seed, stream)) {
                Ok(out) => Row {
                    trial_index: i,
                    halting_time: Some(out.record.halting_time),
                    capped: out.record.capped,
                    seed_stream: stream,
                    extra_json: out.extra.to_string(),
                },
                Err(e) => error_row(i, stream, &e),
            };
            done.push((j, row));
        }
        done
    };
    let mut finished: Vec<(usize, Row)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers).map(|_| s.spawn(run)).collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("trial worker panicked"))
            .collect()
    });
    finished.sort_by_key(|(j, _)| *j);
    let mut per_ensemble: Vec<Vec<Row>> = vec![Vec::with_capacity(cfg.trials); cfg.ensembles.len()];
    for (j, row) in finished {
        per_ensemble[jobs[j].0].push(row);
    }
    Ok(per_ensemble)
}

fn summarize_ensemble(ensemble: Ensemble, rows: &[Row]) -> (EnsembleSummary, Option<FluctuationSet>) {
    let capped = rows.iter().filter(|r| r.capped).count();
    let failed = rows.iter().filter(|r| r.halting_time.is_none()).count();
    let valid: Vec<f64> = rows.iter().filter(|r| r.is_valid()).filter_map(|r| r.halting_time).collect();
    let (fl, error) = match fluctuations(&valid) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let trials = rows.len();
    let summary = EnsembleSummary {
        ensemble: ensemble.name().to_string(),
        trials,
        completed: valid.len(),
        capped,
        failed,
        mean: fl.as_ref().map(|f| f.mean),
        sd: fl.as_ref().map(|f| f.sd),
        degraded: (capped + failed) as f64 > DEGRADED_FRACTION * trials as f64 || fl.is_none(),
        error,
    };
    (summary, fl)
}

/// Per-ensemble fluctuations, KS matrix and degradation flags from the records.
pub fn summarize(cfg: &ExperimentConfig, rows: &[Vec<Row>]) -> (SummaryStats, Vec<Option<FluctuationSet>>) {
    let (ensembles, fls): (Vec<_>, Vec<_>) = cfg
        .ensembles
        .iter()
        .zip(rows)
        .map(|(&e, r)| summarize_ensemble(e, r))
        .unzip();
    let mut ks = Vec::new();
    for i in 0..cfg.ensembles.len() {
        for j in i + 1..cfg.ensembles.len() {
            if let (Some(a), Some(b)) = (&fls[i], &fls[j]) {
                ks.push(KsEntry {
                    a: cfg.ensembles[i].name().to_string(),
                    b: cfg.ensembles[j].name().to_string(),
                    distance: ks_distance(&a.tau, &b.tau),
                });
            }
        }
    }
    let degraded = ensembles.iter().any(|e| e.degraded);
    let stats = SummaryStats {
        algorithm: cfg.algorithm.name().to_string(),
        n: cfg.n,
        epsilon: cfg.epsilon,
        trials: cfg.trials,
        master_seed: cfg.seed,
        ensembles,
        ks,
        degraded,
    };
    (stats, fls)
}

/// Runs the experiment and, when `cfg.out` is set, writes one CSV per
/// ensemble, `summary.json` and `histogram.svg` there.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultBundle> {
    let start = Instant::now();
    let rows = collect_rows(cfg)?;
    let (stats, fls) = summarize(cfg, &rows);
    let summary = Summary {
        stats,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    };
    let results: Vec<EnsembleResult> = cfg
        .ensembles
        .iter()
        .zip(rows)
        .zip(fls)
        .map(|((&ensemble, rows), fluctuations)| EnsembleResult {
            ensemble,
            rows,
            fluctuations,
        })
        .collect();
    let bundle = ResultBundle {
        config: cfg.clone(),
        results,
        summary,
        out_dir: cfg.out.clone(),
    };
    if let Some(dir) = &cfg.out {
        write_bundle(&bundle, dir)?;
    }
    Ok(bundle)
}

fn write_bundle(bundle: &ResultBundle, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    for r in &bundle.results {
        write_csv(&csv_path(dir, r.ensemble), &r.rows)?;
    }
    let mut json = serde_json::to_string_pretty(&bundle.summary)?;
    json.push('\n');
    fs::write(dir.join(SUMMARY_FILE), json)?;
    emit_plots(bundle, &dir.join(PLOT_FILE))
}

/// Overlaid histograms of every ensemble that produced fluctuations.
pub fn emit_plots(bundle: &ResultBundle, path: &Path) -> Result<()> {
    let series: Vec<(String, Vec<f64>)> = bundle
        .results
        .iter()
        .filter_map(|r| r.fluctuations.as_ref().map(|f| (r.ensemble.name().to_string(), f.tau.clone())))
        .collect();
    let cfg = &bundle.config;
    let title = format!("{} halting-time fluctuations, n = {}, ε = {:e}", algorithm_title(cfg.algorithm), cfg.n, cfg.epsilon);
    write_histogram_svg(path, &title, &series)
}

fn algorithm_title(a: Algorithm) -> &'static str {
    match a {
        Algorithm::Jacobi => "Jacobi",
        Algorithm::Qr => "QR",
        Algorithm::Cg => "CG",
        Algorithm::Gmres => "GMRES",
        Algorithm::Genetic => "Genetic",
        Algorithm::CurieWeiss => "Curie–Weiss",
    }
}

fn csv_writer<W: std::io::Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

pub fn write_csv(path: &Path, rows: &[Row]) -> Result<()> {
    let mut w = csv_writer(fs::File::create(path)?);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        let time = r.halting_time.map(|t| t.to_string()).unwrap_or_default();
        w.write_record([
            r.trial_index.to_string(),
            time,
            r.capped.to_string(),
            r.seed_stream.to_string(),
            r.extra_json.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<Row>> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::ConfigInvalid(format!(
            "{} has columns {header:?}, expected {CSV_HEADER:?}",
            path.display()
        )));
    }
    r.records()
        .map(|rec| {
            let rec = rec?;
            let field = |i: usize| rec.get(i).unwrap_or("");
            let bad = |what: &str| Error::ConfigInvalid(format!("{}: bad {what} in row {:?}", path.display(), rec));
            Ok(Row {
                trial_index: field(0).parse().map_err(|_| bad("trial_index"))?,
                halting_time: match field(1) {
                    "" => None,
                    t => Some(t.parse().map_err(|_| bad("halting_time"))?),
                },
                capped: field(2).parse().map_err(|_| bad("capped"))?,
                seed_stream: field(3).parse().map_err(|_| bad("seed_stream"))?,
                extra_json: field(4).to_string(),
            })
        })
        .collect()
}

/// Recomputes the record-derived summary from the CSV files in `dir`.
pub fn recompute_summary(cfg: &ExperimentConfig, dir: &Path) -> Result<SummaryStats> {
    let rows = cfg
        .ensembles
        .iter()
        .map(|&e| read_csv(&csv_path(dir, e)))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(cfg, &rows).0)
}

pub fn read_summary(dir: &Path) -> Result<Summary> {
    Ok(serde_json::from_str(&fs::read_to_string(dir.join(SUMMARY_FILE))?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(algorithm: &str, ensembles: &str, n: usize, eps: &str, trials: usize) -> ExperimentConfig {
        ExperimentConfig::parse(&format!(
            "algorithm = {algorithm}\nensembles = {ensembles}\nn = {n}\nepsilon = {eps}\ntrials = {trials}\nseed = 11\n"
        ))
        .unwrap()
    }

    #[test]
    fn stream_indices_are_distinct_across_ensembles() {
        assert_ne!(stream_index(Ensemble::Goe, 3), stream_index(Ensemble::Be, 3));
        assert_eq!(stream_index(Ensemble::Goe, 3) & 0xffff_ffff, 3);
    }

    #[test]
    fn worker_count_does_not_change_rows() {
        let mut cfg = small("qr", "GOE, BE", 8, "1e-6", 24);
        let one = collect_rows(&cfg).unwrap();
        cfg.workers = 5;
        let five = collect_rows(&cfg).unwrap();
        assert_eq!(one, five);
        assert!(one.iter().all(|r| r.len() == 24));
        assert!(one[0].iter().enumerate().all(|(i, r)| r.trial_index == i));
    }

    #[test]
    fn outputs_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = small("cg", "cLOE, cPBE", 20, "1e-8", 30);
        cfg.out = Some(dir.path().to_path_buf());
        cfg.workers = 3;
        let bundle = run_experiment(&cfg).unwrap();
        let text = fs::read_to_string(csv_path(dir.path(), Ensemble::Cloe)).unwrap();
        assert!(text.starts_with("trial_index,halting_time,capped,seed_stream,extra_json\n"));
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().count(), 31);
        let stored = read_summary(dir.path()).unwrap();
        assert_eq!(stored, bundle.summary);
        assert_eq!(recompute_summary(&cfg, dir.path()).unwrap(), stored.stats);
        assert_eq!(bundle.summary.stats.ks.len(), 1);
        assert!(dir.path().join(PLOT_FILE).exists());
    }

    #[test]
    fn trial_errors_are_recorded_not_fatal() {
        // CG breaks down on indefinite GOE draws.
        let cfg = ExperimentConfig::parse(
            "algorithm = cg\nensembles = GOE\nn = 10\nepsilon = 1e-8\ntrials = 10\nexperimental = true\n",
        )
        .unwrap();
        let bundle = run_experiment(&cfg).unwrap();
        let rows = &bundle.results[0].rows;
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().any(|r| r.halting_time.is_none() && r.extra_json.contains("error")));
        assert!(bundle.summary.stats.degraded);
    }

    #[test]
    fn capped_batches_are_degraded() {
        let mut cfg = small("jacobi", "GOE", 10, "1e-12", 10);
        cfg.max_iter = Some(2);
        let bundle = run_experiment(&cfg).unwrap();
        let s = &bundle.summary.stats.ensembles[0];
        assert_eq!(s.capped, 10);
        assert!(s.degraded && bundle.summary.stats.degraded);
        assert!(s.mean.is_none());
    }
}
