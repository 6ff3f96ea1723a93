//! Experiment harness: layer-count sweeps over random graphs, transition
//! location, exact gap tables and strategy comparisons.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{generate_er, Graph, GraphError, RngStream};
use crate::layers::{decompose, EnergyMeasure, LayerError, Strategy, StrategyConfig, DEFAULT_THRESHOLD};
use crate::matching::matching_number;
use crate::oracle::{exact_mvc, OracleError, DEFAULT_BUDGET};

pub const CSV_HEADER: &str = "n,avg_degree,seed,strategy,energy,layers,mvc_estimate,wall_time_s";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("degree grid is empty")]
    EmptyGrid,
    #[error("invalid degree grid: {0}")]
    InvalidGrid(String),
    #[error("no strategy or energy measure selected")]
    NoConfigurations,
    #[error("degree {degree} has {count} samples, at least 2 are needed")]
    InsufficientSamples { degree: f64, count: usize },
    #[error("records mix several (n, strategy, energy) configurations")]
    MixedConfigurations,
    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Layer(#[from] LayerError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("io: {0}")]
    Io(#[from] io::Error),
}

/// One decomposition of one sampled graph.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub n: usize,
    pub avg_degree: f64,
    pub seed: u64,
    pub strategy: Strategy,
    pub energy: EnergyMeasure,
    pub layers: usize,
    pub mvc_estimate: usize,
    /// Only measured on request, so that default output is reproducible.
    pub wall_time_s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub n: usize,
    pub degree_grid: Vec<f64>,
    pub samples: usize,
    pub strategies: Vec<Strategy>,
    pub measures: Vec<EnergyMeasure>,
    pub threshold: f64,
    pub base_seed: u64,
    pub timing: bool,
}

impl SweepConfig {
    pub fn new(n: usize, degree_grid: Vec<f64>, samples: usize, base_seed: u64) -> Self {
        SweepConfig {
            n,
            degree_grid,
            samples,
            strategies: vec![Strategy::RandomPairs],
            measures: vec![EnergyMeasure::MatchingNumber],
            threshold: DEFAULT_THRESHOLD,
            base_seed,
            timing: false,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of sample `sample` at `degree`. Depends only on these three values,
/// so graph samples do not move when strategies are added or removed.
pub fn sample_seed(base_seed: u64, degree: f64, sample: usize) -> u64 {
    splitmix64(base_seed ^ splitmix64(degree.to_bits() ^ splitmix64(sample as u64)))
}

/// Seed of the switching strategies on a sample, kept apart from the stream
/// that generated the graph.
fn strategy_seed(sample_seed: u64) -> u64 {
    splitmix64(sample_seed ^ 0x5354_5241_5445_4759)
}

/// The random graph for `(degree, sample)` and its seed.
pub fn sample_graph(
    n: usize,
    degree: f64,
    sample: usize,
    base_seed: u64,
) -> Result<(u64, Graph), ExperimentError> {
    let seed = sample_seed(base_seed, degree, sample);
    let g = generate_er(n, degree, &mut RngStream::new(seed))?;
    Ok((seed, g))
}

/// `start, start + step, ..` up to and including `end` (within rounding).
pub fn degree_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>, ExperimentError> {
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !end.is_finite() || end < start {
        return Err(ExperimentError::InvalidGrid(format!(
            "start {start}, end {end}, step {step}"
        )));
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9)
        .collect())
}

fn check_grid(grid: &[f64]) -> Result<(), ExperimentError> {
    if grid.is_empty() {
        return Err(ExperimentError::EmptyGrid);
    }
    if let Some(d) = grid.iter().find(|d| !d.is_finite() || **d < 0.0) {
        return Err(ExperimentError::InvalidGrid(format!("degree {d}")));
    }
    Ok(())
}

/// One record per (degree, sample, strategy, measure), ordered by degree as
/// given, then sample, strategy and measure.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>, ExperimentError> {
    check_grid(&cfg.degree_grid)?;
    if cfg.strategies.is_empty() || cfg.measures.is_empty() {
        return Err(ExperimentError::NoConfigurations);
    }
    if !(0.0..=1.0).contains(&cfg.threshold) {
        return Err(LayerError::InvalidThreshold(cfg.threshold).into());
    }
    let tasks: Vec<(f64, usize)> = cfg
        .degree_grid
        .iter()
        .flat_map(|&d| (0..cfg.samples).map(move |s| (d, s)))
        .collect();
    let chunks = tasks
        .par_iter()
        .map(|&(degree, sample)| sweep_sample(cfg, degree, sample))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

fn sweep_sample(
    cfg: &SweepConfig,
    degree: f64,
    sample: usize,
) -> Result<Vec<SweepRecord>, ExperimentError> {
    let (seed, g) = sample_graph(cfg.n, degree, sample, cfg.base_seed)?;
    let mut out = Vec::with_capacity(cfg.strategies.len() * cfg.measures.len());
    for &strategy in &cfg.strategies {
        for &energy in &cfg.measures {
            let mut sc = StrategyConfig::new(strategy, energy, strategy_seed(seed));
            sc.threshold = cfg.threshold;
            let start = Instant::now();
            let d = decompose(&g, &sc)?;
            let elapsed = start.elapsed().as_secs_f64();
            out.push(SweepRecord {
                n: cfg.n,
                avg_degree: degree,
                seed,
                strategy,
                energy,
                layers: d.layer_count,
                mvc_estimate: d.mvc_estimate,
                wall_time_s: cfg.timing.then_some(elapsed),
            });
        }
    }
    Ok(out)
}

/// Per-degree layer-count statistics of one configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitionEstimate {
    pub degree_grid: Vec<f64>,
    pub mean_layer: Vec<f64>,
    /// Sample standard deviation (divisor `count - 1`).
    pub std_layer: Vec<f64>,
    /// Degree with the largest standard deviation, lowest on ties.
    pub peak_degree: f64,
}

/// Sample mean and standard deviation (divisor `len - 1`).
pub fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Degree-sorted groups of records, by exact degree value.
fn group_by_degree(records: &[SweepRecord]) -> Vec<(f64, Vec<&SweepRecord>)> {
    let mut groups: BTreeMap<u64, (f64, Vec<&SweepRecord>)> = BTreeMap::new();
    for r in records {
        // Order-preserving key for nonnegative floats.
        groups
            .entry(r.avg_degree.to_bits())
            .or_insert_with(|| (r.avg_degree, Vec::new()))
            .1
            .push(r);
    }
    groups.into_values().collect()
}

pub fn estimate_transition(records: &[SweepRecord]) -> Result<TransitionEstimate, ExperimentError> {
    let first = records.first().ok_or(ExperimentError::EmptyGrid)?;
    if records
        .iter()
        .any(|r| (r.n, r.strategy, r.energy) != (first.n, first.strategy, first.energy))
    {
        return Err(ExperimentError::MixedConfigurations);
    }
    let mut est = TransitionEstimate {
        degree_grid: Vec::new(),
        mean_layer: Vec::new(),
        std_layer: Vec::new(),
        peak_degree: 0.0,
    };
    for (degree, group) in group_by_degree(records) {
        if group.len() < 2 {
            return Err(ExperimentError::InsufficientSamples {
                degree,
                count: group.len(),
            });
        }
        let layers: Vec<f64> = group.iter().map(|r| r.layers as f64).collect();
        let (mean, std) = mean_and_std(&layers);
        est.degree_grid.push(degree);
        est.mean_layer.push(mean);
        est.std_layer.push(std);
    }
    let mut peak = 0;
    for i in 1..est.std_layer.len() {
        if est.std_layer[i] > est.std_layer[peak] {
            peak = i;
        }
    }
    est.peak_degree = est.degree_grid[peak];
    Ok(est)
}

/// Mean relative gap between the layer estimate and the exact cover number.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapRow {
    pub n: usize,
    pub avg_degree: f64,
    pub samples: usize,
    /// Mean of `(mvc_estimate - exact) / n`, in percent.
    pub mean_gap_percent: f64,
    pub std_gap_percent: f64,
}

pub fn gap_table(
    n_values: &[usize],
    degree_values: &[f64],
    samples: usize,
    strategy: Strategy,
    energy: EnergyMeasure,
    base_seed: u64,
) -> Result<Vec<GapRow>, ExperimentError> {
    check_grid(degree_values)?;
    if let Some(&n) = n_values.iter().find(|&&n| n > DEFAULT_BUDGET) {
        return Err(OracleError::BudgetExceeded {
            n,
            budget: DEFAULT_BUDGET,
        }
        .into());
    }
    let mut rows = Vec::new();
    for &n in n_values {
        for &degree in degree_values {
            let gaps = (0..samples)
                .into_par_iter()
                .map(|s| -> Result<f64, ExperimentError> {
                    let (seed, g) = sample_graph(n, degree, s, base_seed)?;
                    let d = decompose(&g, &StrategyConfig::new(strategy, energy, strategy_seed(seed)))?;
                    let exact = exact_mvc(&g, DEFAULT_BUDGET)?.mvc_number;
                    Ok(100.0 * (d.mvc_estimate as f64 - exact as f64) / n as f64)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let (mean, std) = mean_and_std(&gaps);
            rows.push(GapRow {
                n,
                avg_degree: degree,
                samples,
                mean_gap_percent: mean,
                std_gap_percent: std,
            });
        }
    }
    Ok(rows)
}

/// Mean cover ratio of one configuration at one degree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareRow {
    pub avg_degree: f64,
    pub strategy: Strategy,
    pub energy: EnergyMeasure,
    /// Mean of `mvc_estimate / n`.
    pub mean_ratio: f64,
    /// Mean of `matching number / n`, a lower bound on any cover ratio.
    pub lower_bound_ratio: f64,
}

/// All six strategy and energy combinations on shared samples.
pub fn compare(
    n: usize,
    degree_grid: &[f64],
    samples: usize,
    base_seed: u64,
) -> Result<Vec<CompareRow>, ExperimentError> {
    let mut cfg = SweepConfig::new(n, degree_grid.to_vec(), samples, base_seed);
    cfg.strategies = Strategy::ALL.to_vec();
    cfg.measures = EnergyMeasure::ALL.to_vec();
    let records = run_sweep(&cfg)?;
    let mut rows = Vec::new();
    for (degree, group) in group_by_degree(&records) {
        let bounds = (0..samples)
            .into_par_iter()
            .map(|s| sample_graph(n, degree, s, base_seed).map(|(_, g)| matching_number(&g)))
            .collect::<Result<Vec<_>, _>>()?;
        let lower = bounds.iter().sum::<usize>() as f64 / (samples * n) as f64;
        for strategy in Strategy::ALL {
            for energy in EnergyMeasure::ALL {
                let ratios: Vec<f64> = group
                    .iter()
                    .filter(|r| r.strategy == strategy && r.energy == energy)
                    .map(|r| r.mvc_estimate as f64 / n as f64)
                    .collect();
                rows.push(CompareRow {
                    avg_degree: degree,
                    strategy,
                    energy,
                    mean_ratio: mean_and_std(&ratios).0,
                    lower_bound_ratio: lower,
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(records: &[SweepRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        let time = r.wall_time_s.map(|t| format!("{t:.6}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.n, r.avg_degree, r.seed, r.strategy, r.energy, r.layers, r.mvc_estimate, time
        )?;
    }
    Ok(())
}

pub fn read_csv<R: BufRead>(input: R) -> Result<Vec<SweepRecord>, ExperimentError> {
    let mut lines = input.lines().enumerate();
    let header = lines.next().map(|(_, h)| h).transpose()?;
    if header.as_deref() != Some(CSV_HEADER) {
        return Err(ExperimentError::Csv {
            line: 1,
            message: "missing header".into(),
        });
    }
    let mut records = Vec::new();
    for (i, line) in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| ExperimentError::Csv { line: i + 1, message };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(bad(format!("expected 8 fields, found {}", f.len())));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|e| bad(format!("`{s}`: {e}")));
        records.push(SweepRecord {
            n: num(f[0])? as usize,
            avg_degree: f[1].parse().map_err(|e| bad(format!("`{}`: {e}", f[1])))?,
            seed: num(f[2])?,
            strategy: f[3].parse().map_err(|e: LayerError| bad(e.to_string()))?,
            energy: f[4].parse().map_err(|e: LayerError| bad(e.to_string()))?,
            layers: num(f[5])? as usize,
            mvc_estimate: num(f[6])? as usize,
            wall_time_s: if f[7].is_empty() {
                None
            } else {
                Some(f[7].parse().map_err(|e| bad(format!("`{}`: {e}", f[7])))?)
            },
        });
    }
    Ok(records)
}
