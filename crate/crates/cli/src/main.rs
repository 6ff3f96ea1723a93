use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use kelayer::experiment::{
    compare, degree_grid, estimate_transition, gap_table, run_sweep, write_csv, SweepConfig,
};
use kelayer::graph::{generate_er, Graph, RngStream};
use kelayer::layers::{cover_from_decomposition, decompose, EnergyMeasure, Strategy, StrategyConfig};
use kelayer::oracle::{enumerate_all_mvc, exact_mvc, DEFAULT_BUDGET};
use kelayer::verify::verify_ke;

/// König-Egerváry verification, KE-layer decomposition and vertex-cover
/// experiments.
#[derive(Parser, Debug)]
#[command(name = "kelayer", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a random graph with a given average degree.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a graph is KE and summarize its backbones.
    Verify {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Peel KE layers and report the cover estimate.
    Decompose {
        graph: PathBuf,
        #[command(flatten)]
        strategy: StrategyArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also print the cover built from the layers.
        #[arg(long)]
        cover: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact minimum vertex cover.
    Oracle {
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Enumerate every minimum cover, up to this many.
        #[arg(long)]
        all: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Layer counts over a degree grid; CSV records or a transition summary.
    Sweep {
        #[command(flatten)]
        grid: GridArgs,
        /// Strategies to run (repeatable).
        #[arg(long = "strategy", value_parser = parse_strategy, default_values = ["2"])]
        strategies: Vec<Strategy>,
        /// Energy measures to run (repeatable).
        #[arg(long = "energy", value_parser = parse_energy, default_values = ["matching"])]
        measures: Vec<EnergyMeasure>,
        #[arg(long, value_parser = parse_threshold, default_value_t = kelayer::layers::DEFAULT_THRESHOLD)]
        threshold: f64,
        /// Fill the wall_time_s column (makes output run dependent).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Mean cover ratio of all six strategy and energy combinations.
    Compare {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Mean gap between the layer estimate and the exact cover number.
    Gaps {
        /// Node counts (comma separated).
        #[arg(long, value_delimiter = ',', default_values = ["80", "100", "120"])]
        n: Vec<usize>,
        /// Average degrees (comma separated).
        #[arg(long, value_delimiter = ',', default_values = ["3", "4", "5", "6", "7"])]
        degrees: Vec<f64>,
        #[arg(long, default_value_t = 30)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        strategy: StrategyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Debug)]
struct StrategyArgs {
    /// Switching strategy: 1 greedy, 2 random pairs, 3 threshold.
    #[arg(long, value_parser = parse_strategy, default_value = "2")]
    strategy: Strategy,
    #[arg(long, value_parser = parse_energy, default_value = "matching")]
    energy: EnergyMeasure,
    /// Revert probability for non-improving moves under strategy 3.
    #[arg(long, value_parser = parse_threshold, default_value_t = kelayer::layers::DEFAULT_THRESHOLD)]
    threshold: f64,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    from: f64,
    #[arg(long, default_value_t = 20.0)]
    to: f64,
    #[arg(long, default_value_t = 0.5)]
    step: f64,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: kelayer::layers::LayerError| e.to_string())
}

fn parse_energy(s: &str) -> Result<EnergyMeasure, String> {
    s.parse().map_err(|e: kelayer::layers::LayerError| e.to_string())
}

fn parse_threshold(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&t) {
        Ok(t)
    } else {
        Err(format!("{t} is outside [0, 1]"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load(path: &Path) -> Result<Graph> {
    Graph::read_from_path(path).with_context(|| format!("reading {}", path.display()))
}

fn join(nodes: impl Iterator<Item = usize>) -> String {
    nodes.map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn strategy_config(args: &StrategyArgs, seed: u64) -> Result<StrategyConfig> {
    Ok(StrategyConfig::new(args.strategy, args.energy, seed).with_threshold(args.threshold)?)
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Generate { n, degree, seed, out } => {
            let g = generate_er(n, degree, &mut RngStream::new(seed))?;
            let mut w = output(out.as_deref())?;
            kelayer::graph::write_graph(&g, &mut w)?;
            w.flush()?;
        }
        Command::Verify { graph, format } => {
            let g = load(&graph)?;
            let v = verify_ke(&g);
            let s = &v.solution;
            let cover = s.min_cover().ok();
            let mut w = output(None)?;
            match format {
                Format::Json => {
                    let value = serde_json::json!({
                        "ke": v.is_ke(),
                        "matching": v.matching_number(),
                        "cover": cover.as_ref().map(|c| c.to_vec()),
                        "positive_backbones": s.positive_backbones().to_vec(),
                        "negative_backbones": s.negative_backbones().to_vec(),
                        "free": s.free_nodes().to_vec(),
                    });
                    writeln!(w, "{}", serde_json::to_string_pretty(&value)?)?;
                }
                _ => {
                    writeln!(w, "KE: {}", if v.is_ke() { "yes" } else { "no" })?;
                    writeln!(w, "matching: {}", v.matching_number())?;
                    if let Some(c) = &cover {
                        writeln!(w, "cover: {}", c.len())?;
                        writeln!(w, "cover nodes: {}", join(c.iter()))?;
                        writeln!(
                            w,
                            "backbones: {} uncovered, {} covered, {} free",
                            s.positive_backbones().len(),
                            s.negative_backbones().len(),
                            s.free_nodes().len()
                        )?;
                        writeln!(w, "states: {}", s.state_string())?;
                    }
                }
            }
            w.flush()?;
        }
        Command::Decompose { graph, strategy, seed, cover, format } => {
            let g = load(&graph)?;
            let d = decompose(&g, &strategy_config(&strategy, seed)?)?;
            let c = cover_from_decomposition(&g, &d)?;
            let mut w = output(None)?;
            match format {
                Format::Json => {
                    let value = serde_json::json!({
                        "layer_count": d.layer_count,
                        "layer_classes": d.layer_classes.iter().map(|c| c.to_vec()).collect::<Vec<_>>(),
                        "final_class": d.final_class.to_vec(),
                        "final_matching_size": d.final_matching_size,
                        "mvc_estimate": d.mvc_estimate,
                        "cover": c.to_vec(),
                    });
                    writeln!(w, "{}", serde_json::to_string_pretty(&value)?)?;
                }
                _ => {
                    write!(w, "{}", d.to_text())?;
                    writeln!(w, "cover: {}", c.len())?;
                    if cover {
                        writeln!(w, "cover nodes: {}", join(c.iter()))?;
                    }
                }
            }
            w.flush()?;
        }
        Command::Oracle { graph, budget, all, format } => {
            let g = load(&graph)?;
            let r = match all {
                Some(cap) => {
                    if g.node_count() > budget {
                        exact_mvc(&g, budget)?;
                    }
                    enumerate_all_mvc(&g, cap)?
                }
                None => exact_mvc(&g, budget)?,
            };
            let mut w = output(None)?;
            match format {
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&r)?)?,
                _ => {
                    writeln!(w, "mvc: {}", r.mvc_number)?;
                    writeln!(w, "cover nodes: {}", join(r.one_cover.iter()))?;
                    if let Some(covers) = &r.all_covers {
                        writeln!(w, "minimum covers: {}", covers.len())?;
                        for c in covers {
                            writeln!(w, "  {}", join(c.iter()))?;
                        }
                    }
                }
            }
            w.flush()?;
        }
        Command::Sweep { grid, strategies, measures, threshold, timing, out, format } => {
            let mut cfg = SweepConfig::new(
                grid.n,
                degree_grid(grid.from, grid.to, grid.step)?,
                grid.samples,
                grid.seed,
            );
            cfg.strategies = strategies;
            cfg.measures = measures;
            cfg.threshold = threshold;
            cfg.timing = timing;
            let records = run_sweep(&cfg)?;
            let mut w = output(out.as_deref())?;
            match format {
                Format::Csv => write_csv(&records, &mut w)?,
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&records)?)?,
                Format::Text => {
                    for strategy in &cfg.strategies {
                        for energy in &cfg.measures {
                            let subset: Vec<_> = records
                                .iter()
                                .filter(|r| r.strategy == *strategy && r.energy == *energy)
                                .cloned()
                                .collect();
                            let est = estimate_transition(&subset)?;
                            writeln!(w, "strategy {strategy} energy {energy}")?;
                            writeln!(w, "degree mean_layers std_layers")?;
                            for i in 0..est.degree_grid.len() {
                                writeln!(
                                    w,
                                    "{} {:.4} {:.4}",
                                    est.degree_grid[i], est.mean_layer[i], est.std_layer[i]
                                )?;
                            }
                            writeln!(w, "peak degree: {}", est.peak_degree)?;
                        }
                    }
                }
            }
            w.flush()?;
        }
        Command::Compare { grid, out, format } => {
            let grid_values = degree_grid(grid.from, grid.to, grid.step)?;
            let rows = compare(grid.n, &grid_values, grid.samples, grid.seed)?;
            let mut w = output(out.as_deref())?;
            match format {
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&rows)?)?,
                _ => {
                    let sep = if format == Format::Csv { "," } else { " " };
                    writeln!(
                        w,
                        "{}",
                        ["avg_degree", "strategy", "energy", "mean_ratio", "lower_bound_ratio"].join(sep)
                    )?;
                    for r in &rows {
                        writeln!(
                            w,
                            "{}{sep}{}{sep}{}{sep}{:.6}{sep}{:.6}",
                            r.avg_degree, r.strategy, r.energy, r.mean_ratio, r.lower_bound_ratio
                        )?;
                    }
                }
            }
            w.flush()?;
        }
        Command::Gaps { n, degrees, samples, seed, strategy, out, format } => {
            let rows = gap_table(&n, &degrees, samples, strategy.strategy, strategy.energy, seed)?;
            let mut w = output(out.as_deref())?;
            match format {
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&rows)?)?,
                _ => {
                    let sep = if format == Format::Csv { "," } else { " " };
                    writeln!(
                        w,
                        "{}",
                        ["n", "avg_degree", "samples", "mean_gap_percent", "std_gap_percent"].join(sep)
                    )?;
                    for r in &rows {
                        writeln!(
                            w,
                            "{}{sep}{}{sep}{}{sep}{:.3}{sep}{:.3}",
                            r.n, r.avg_degree, r.samples, r.mean_gap_percent, r.std_gap_percent
                        )?;
                    }
                }
            }
            w.flush()?;
        }
    }
    Ok(())
}
