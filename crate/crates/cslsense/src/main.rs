//! Command-line front end: theory sweeps, single-shot sensing diagnostics,
//! Monte Carlo presets, and the self-check suite.

use clap::{Parser, Subcommand};

use cslsense::csl::{Algorithm, RankRule};
use cslsense::harness::{
    self, emit_csv, emit_theory_csv, run_plan, FileConfig, Preset,
};
use cslsense::numerics::SeededRng;
use cslsense::sampler::build_random_demodulator;
use cslsense::theory;

#[derive(Parser)]
#[command(name = "cslsense", about = "Sub-Nyquist wideband spectrum sensing with antenna cross-correlations", version)]
struct Cli {
    /// Worker threads (overrides CSLSENSE_WORKERS; 0 = library default)
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form gain and bound sweeps against brute-force oracles, as CSV
    Theory {
        /// Output CSV path
        #[arg(long, default_value = "theory.csv")]
        out: String,
        /// Largest antenna count in the sweep
        #[arg(long, default_value_t = 8)]
        max_m: usize,
    },
    /// One sensing realization with verbose diagnostics
    Sense {
        /// TOML configuration file
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        snr_db: Option<f64>,
        #[arg(long)]
        compression: Option<usize>,
    },
    /// Monte Carlo detection sweeps
    Montecarlo {
        /// Preset: fig2, fig3, fig4, fig5, fig6, custom
        #[arg(long)]
        preset: String,
        #[arg(long, default_value = "results.csv")]
        out: String,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Sensing-period scale for the SNR sweep preset
        #[arg(long, default_value_t = 1)]
        st: usize,
        /// TOML configuration file (required for the custom preset)
        #[arg(long)]
        config: Option<String>,
    },
    /// Run the property suite; exits nonzero on any failure
    Verify,
}

fn workers_from(cli: &Cli) -> usize {
    cli.workers.unwrap_or_else(|| {
        std::env::var("CSLSENSE_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0)
    })
}

fn main() {
    let cli = Cli::parse();
    let workers = workers_from(&cli);
    let code = match run(cli, workers) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli, workers: usize) -> cslsense::Result<i32> {
    match cli.command {
        Command::Theory { out, max_m } => {
            let rho_abs: Vec<f64> = (0..=19).map(|k| 0.05 * k as f64).collect();
            let phases = [0.0, std::f64::consts::PI / 7.0, std::f64::consts::PI / 3.0];
            let reports = theory::theory_grid(max_m, &rho_abs, &phases)?;
            let failed = reports.iter().filter(|r| !r.passed).count();
            emit_theory_csv(&reports, &out)?;
            println!("wrote {} reports to {out}; {failed} failed", reports.len());
            Ok(if failed == 0 { 0 } else { 1 })
        }
        Command::Sense { config, seed, snr_db, compression } => {
            let mut fc = match config {
                Some(p) => FileConfig::load(&p)?,
                None => FileConfig::default(),
            };
            if let Some(s) = seed {
                fc.scenario.seed = s;
            }
            if let Some(s) = snr_db {
                fc.scenario.snr_db = s;
            }
            if let Some(c) = compression {
                fc.sampler.compression = c;
            }
            sense_once(&fc)?;
            Ok(0)
        }
        Command::Montecarlo { preset, out, trials, seed, st, config } => {
            let preset = Preset::parse(&preset)?;
            match preset {
                Preset::Fig2GainVsRho => {
                    // gain against correlation magnitude at the reference array
                    let rho_abs: Vec<f64> = (0..=19).map(|k| 0.05 * k as f64).collect();
                    let reports = theory::theory_grid(6, &rho_abs, &[0.0])?;
                    emit_theory_csv(&reports, &out)?;
                    println!("wrote {} theory reports to {out}", reports.len());
                    Ok(0)
                }
                Preset::Fig3GainVsAntennas => {
                    let reports = theory::theory_grid(12, &[0.6], &[0.0])?;
                    emit_theory_csv(&reports, &out)?;
                    println!("wrote {} theory reports to {out}", reports.len());
                    Ok(0)
                }
                Preset::Fig4PdVsCompression => {
                    let plan = harness::plan_fig4(seed, trials);
                    let rows = run_plan(&plan, workers)?;
                    emit_csv(&rows, &out)?;
                    print_rows(&rows);
                    Ok(0)
                }
                Preset::Fig5PdVsPuCount => {
                    let plan = harness::plan_fig5(seed, trials);
                    let rows = run_plan(&plan, workers)?;
                    emit_csv(&rows, &out)?;
                    print_rows(&rows);
                    Ok(0)
                }
                Preset::Fig6PdVsSnr => {
                    let plan = harness::plan_fig6(seed, trials, st);
                    let rows = run_plan(&plan, workers)?;
                    emit_csv(&rows, &out)?;
                    print_rows(&rows);
                    Ok(0)
                }
                Preset::Custom => {
                    let path = config.ok_or_else(|| {
                        cslsense::Error::Config("custom preset needs --config".into())
                    })?;
                    let mut fc = FileConfig::load(&path)?;
                    fc.scenario.seed = seed;
                    let mut plan = fc.custom_plan()?;
                    plan.trials = trials;
                    let rows = run_plan(&plan, workers)?;
                    emit_csv(&rows, &out)?;
                    print_rows(&rows);
                    Ok(0)
                }
            }
        }
        Command::Verify => {
            let outcomes = harness::verify_suite();
            let mut failed = 0;
            for o in &outcomes {
                let tag = if o.passed { "PASS" } else { "FAIL" };
                println!("[{tag}] {}: {}", o.name, o.detail);
                if !o.passed {
                    failed += 1;
                }
            }
            Ok(if failed == 0 { 0 } else { 1 })
        }
    }
}

fn print_rows(rows: &[harness::ResultRow]) {
    for row in rows {
        println!(
            "{:>6} {:>20} {:>12}  pd={:.3} pf={:.3} (se {:.3}) [{:.1}s]",
            row.preset, row.point, row.algorithm, row.pd, row.pf, row.stderr, row.wall_time
        );
    }
}

fn sense_once(fc: &FileConfig) -> cslsense::Result<()> {
    let cfg = fc.scenario_config();
    cfg.validate()?;
    let rule: RankRule = fc.rank_rule()?;
    let algorithms: Vec<Algorithm> = fc.algorithms()?;
    let compression = fc.sampler.compression;
    if !cfg.q.is_multiple_of(compression) {
        return Err(cslsense::Error::Config(format!(
            "compression {compression} must divide Q={}",
            cfg.q
        )));
    }
    let p = cfg.q / compression;
    let root = SeededRng::new(cfg.seed);
    let mut op_rng = root.derive(&[0x01, 0]);
    let op = build_random_demodulator(p, cfg.q, &mut op_rng)?;
    let sparsity_cap = cfg.k * cfg.bins_per_band();
    let mut rng = root.derive(&[0x02, 0, 0]);
    println!(
        "scenario: M={} K={} Q={} L={} P={} bands={} rho={:.2}∠{:.2} snr={} dB (sigma2={:.3})",
        cfg.m,
        cfg.k,
        cfg.q,
        cfg.l,
        p,
        cfg.band_count(),
        cfg.rho.norm(),
        cfg.rho.arg(),
        cfg.snr_db,
        cfg.noise_variance()
    );
    let out = harness::run_trial(
        &cfg,
        &op,
        fc.subarray.i,
        fc.subarray.j,
        &algorithms,
        &rule,
        sparsity_cap,
        &mut rng,
        false,
    )?;
    let mut truth = out.support.clone();
    truth.sort_unstable();
    println!("occupied bands: {:?}", truth);
    for (alg, stats) in algorithms.iter().zip(&out.per_alg_stats) {
        let mut ranked: Vec<(usize, f64)> =
            stats.iter().copied().enumerate().collect();
        ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        let top: Vec<String> = ranked
            .iter()
            .take(cfg.k.max(3))
            .map(|(b, s)| format!("{b}:{s:.3}"))
            .collect();
        println!("{:>12}  top bands {}", alg.name(), top.join("  "));
    }
    Ok(())
}
