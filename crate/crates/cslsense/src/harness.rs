//! Experiment harness: configuration, figure presets, deterministic Monte
//! Carlo execution across a worker pool, threshold calibration, CSV output,
//! and the self-check suite behind `verify`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::time::Instant;

use crate::csl::{run_algorithm, Algorithm, RankRule};
use crate::error::{Error, Result};
use crate::numerics::SeededRng;
use crate::sampler::{build_random_demodulator, subsample, MeasurementOperator, SubSampleSet};
use crate::scenario::{draw_channel, draw_support, synthesize_frame, ScenarioConfig, SignalGen};
use crate::sensing::{band_statistics, noise_floor_epsilon, somp, RecoveryConfig};

const TAG_OPERATOR: u64 = 0x01;
const TAG_TRIAL: u64 = 0x02;
const TAG_CALIBRATION: u64 = 0x03;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Fig2GainVsRho,
    Fig3GainVsAntennas,
    Fig4PdVsCompression,
    Fig5PdVsPuCount,
    Fig6PdVsSnr,
    Custom,
}

impl Preset {
    pub fn parse(s: &str) -> Result<Preset> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fig2" | "gain_vs_rho" => Ok(Preset::Fig2GainVsRho),
            "fig3" | "gain_vs_antennas" => Ok(Preset::Fig3GainVsAntennas),
            "fig4" | "pd_vs_compression" => Ok(Preset::Fig4PdVsCompression),
            "fig5" | "pd_vs_pu_count" => Ok(Preset::Fig5PdVsPuCount),
            "fig6" | "pd_vs_snr" => Ok(Preset::Fig6PdVsSnr),
            "custom" => Ok(Preset::Custom),
            other => Err(Error::Config(format!("unknown preset {other}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig2GainVsRho => "fig2",
            Preset::Fig3GainVsAntennas => "fig3",
            Preset::Fig4PdVsCompression => "fig4",
            Preset::Fig5PdVsPuCount => "fig5",
            Preset::Fig6PdVsSnr => "fig6",
            Preset::Custom => "custom",
        }
    }
}

/// One point of a parameter sweep with its fully resolved scenario.
#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub label: String,
    pub cfg: ScenarioConfig,
    pub compression: usize,
    pub i: usize,
    pub j: usize,
}

#[derive(Clone, Debug)]
pub struct ExperimentPlan {
    pub preset: Preset,
    pub sweep: Vec<SweepPoint>,
    pub trials: usize,
    pub calibration_trials: usize,
    pub target_pf: f64,
    pub algorithms: Vec<Algorithm>,
    pub rank_rule: RankRule,
}

#[derive(Clone, Debug)]
pub struct ResultRow {
    pub preset: String,
    pub point: String,
    pub algorithm: String,
    pub pd: f64,
    pub pf: f64,
    pub stderr: f64,
    /// seconds spent on this sweep point (not written to CSV so output stays
    /// reproducible)
    pub wall_time: f64,
}

/// The default algorithm roster used by the detection figures.
pub fn default_algorithms() -> Vec<Algorithm> {
    vec![
        Algorithm::McslAcc { r: 0 },
        Algorithm::McslAcc { r: 1 },
        Algorithm::McslsAcc,
        Algorithm::VcslAcc { r: 0 },
        Algorithm::VcslAcc { r: 2 },
        Algorithm::TmaCsl,
        Algorithm::TsaCsl,
    ]
}

fn base_scenario(seed: u64) -> ScenarioConfig {
    ScenarioConfig {
        m: 6,
        k: 3,
        w_hz: 1e9,
        b_hz: 2e7,
        q: 300,
        l: 100,
        rho: Complex64::new(0.6, 0.0),
        snr_db: -16.0,
        tx_powers: vec![1.0; 3],
        seed,
    }
}

/// Compression sweep: Q = 300 at -16 dB. Ratios that do not divide Q evenly
/// cannot be realized by the integrate-and-dump front end and are skipped.
pub fn plan_fig4(seed: u64, trials: usize) -> ExperimentPlan {
    let base = base_scenario(seed);
    let sweep = (3..=10)
        .filter(|c| base.q.is_multiple_of(*c))
        .map(|c| SweepPoint {
            label: format!("compression={c}"),
            cfg: base.clone(),
            compression: c,
            i: 2,
            j: 3,
        })
        .collect();
    ExperimentPlan {
        preset: Preset::Fig4PdVsCompression,
        sweep,
        trials,
        calibration_trials: 100,
        target_pf: 0.1,
        algorithms: default_algorithms(),
        rank_rule: RankRule::default(),
    }
}

/// Occupancy sweep: P = 100, Q = 500 at -18 dB, K from 4 to 32.
pub fn plan_fig5(seed: u64, trials: usize) -> ExperimentPlan {
    let mut base = base_scenario(seed);
    base.q = 500;
    base.snr_db = -18.0;
    let sweep = [4usize, 8, 16, 24, 32]
        .iter()
        .map(|&k| {
            let mut cfg = base.clone();
            cfg.k = k;
            cfg.tx_powers = vec![1.0; k];
            SweepPoint {
                label: format!("pu_count={k}"),
                cfg,
                compression: 5,
                i: 2,
                j: 3,
            }
        })
        .collect();
    ExperimentPlan {
        preset: Preset::Fig5PdVsPuCount,
        sweep,
        trials,
        calibration_trials: 100,
        target_pf: 0.1,
        algorithms: default_algorithms(),
        rank_rule: RankRule::default(),
    }
}

/// SNR sweep: P = 100, Q = 200; `st` scales (P, Q) jointly to keep the SCM
/// dimension while lengthening the sensing period.
pub fn plan_fig6(seed: u64, trials: usize, st: usize) -> ExperimentPlan {
    let mut base = base_scenario(seed);
    base.q = 200 * st.max(1);
    let sweep = [-20.0f64, -15.0, -10.0, -5.0, 0.0]
        .iter()
        .map(|&snr| {
            let mut cfg = base.clone();
            cfg.snr_db = snr;
            SweepPoint {
                label: format!("snr_db={snr}"),
                cfg,
                compression: 2,
                i: 2,
                j: 3,
            }
        })
        .collect();
    ExperimentPlan {
        preset: Preset::Fig6PdVsSnr,
        sweep,
        trials,
        calibration_trials: 100,
        target_pf: 0.1,
        algorithms: default_algorithms(),
        rank_rule: RankRule::default(),
    }
}

/// Band statistics for every algorithm in one Monte Carlo realization.
pub struct TrialOutput {
    pub per_alg_stats: Vec<Vec<f64>>,
    pub support: Vec<usize>,
}

#[allow(clippy::too_many_arguments)]
pub fn run_trial(
    cfg: &ScenarioConfig,
    op: &MeasurementOperator,
    i: usize,
    j: usize,
    algorithms: &[Algorithm],
    rule: &RankRule,
    sparsity_cap: usize,
    rng: &mut SeededRng,
    noise_only: bool,
) -> Result<TrialOutput> {
    let channel = draw_channel(cfg, rng)?;
    let support = if noise_only { vec![] } else { draw_support(cfg, rng)? };
    let gen = SignalGen::new(cfg.q);
    let mut segments = Vec::with_capacity(cfg.l);
    let zero_s = crate::numerics::CMat::zeros(cfg.q, cfg.k);
    for _ in 0..cfg.l {
        let s = if noise_only {
            zero_s.clone()
        } else {
            gen.segment(cfg, &support, rng)
        };
        let frame = synthesize_frame(cfg, &channel, &s, &support, rng)?;
        segments.push(subsample(op, &frame.x_bar)?);
    }
    let set = SubSampleSet::new(segments)?;
    let alpha = op.compression_ratio();
    let band_count = cfg.band_count();

    let mut per_alg_stats = Vec::with_capacity(algorithms.len());
    for &alg in algorithms {
        let (clean, sub) = run_algorithm(&set, alg, i, j, rule)?;
        let c = clean.data.ncols();
        let epsilon = noise_floor_epsilon(op.p, c, alpha, sub.floor().median_sv);
        let rec_cfg = RecoveryConfig {
            epsilon,
            max_sparsity: sparsity_cap,
            band_count,
        };
        let rec = somp(&clean.data, &op.a, &rec_cfg)?;
        per_alg_stats.push(band_statistics(&rec.z_hat, op.q, band_count));
    }
    Ok(TrialOutput { per_alg_stats, support })
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let t = pos - lo as f64;
        sorted[lo] * (1.0 - t) + sorted[hi] * t
    }
}

fn point_rows(
    plan: &ExperimentPlan,
    point_idx: usize,
    point: &SweepPoint,
) -> Result<Vec<ResultRow>> {
    let start = Instant::now();
    let cfg = &point.cfg;
    cfg.validate()?;
    if !cfg.q.is_multiple_of(point.compression) {
        return Err(Error::IndivisibleRatio { p: cfg.q / point.compression, q: cfg.q });
    }
    let p = cfg.q / point.compression;
    let root = SeededRng::new(cfg.seed);
    let mut op_rng = root.derive(&[TAG_OPERATOR, point_idx as u64]);
    let op = build_random_demodulator(p, cfg.q, &mut op_rng)?;
    let sparsity_cap = (cfg.k * cfg.bins_per_band()).max(1).min(p.saturating_sub(1).max(1));
    let n_alg = plan.algorithms.len();
    let band_count = cfg.band_count();

    // threshold calibration on noise-only realizations
    let cal: Vec<Result<TrialOutput>> = (0..plan.calibration_trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = root.derive(&[TAG_CALIBRATION, point_idx as u64, t as u64]);
            run_trial(
                cfg,
                &op,
                point.i,
                point.j,
                &plan.algorithms,
                &plan.rank_rule,
                sparsity_cap,
                &mut rng,
                true,
            )
        })
        .collect();
    let mut pooled: Vec<Vec<f64>> = vec![Vec::new(); n_alg];
    for out in cal {
        let out = out?;
        for (a, stats) in out.per_alg_stats.iter().enumerate() {
            pooled[a].extend_from_slice(stats);
        }
    }
    let gammas: Vec<f64> = pooled
        .iter_mut()
        .map(|v| {
            v.sort_by(|x, y| x.partial_cmp(y).unwrap());
            quantile(v, 1.0 - plan.target_pf)
        })
        .collect();

    // measurement trials
    let outs: Vec<Result<TrialOutput>> = (0..plan.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = root.derive(&[TAG_TRIAL, point_idx as u64, t as u64]);
            run_trial(
                cfg,
                &op,
                point.i,
                point.j,
                &plan.algorithms,
                &plan.rank_rule,
                sparsity_cap,
                &mut rng,
                false,
            )
        })
        .collect();

    let outs: Vec<TrialOutput> = outs.into_iter().collect::<Result<_>>()?;

    let mut hits = vec![0usize; n_alg];
    let mut occupied = vec![0usize; n_alg];
    let mut alarms = vec![0usize; n_alg];
    let mut vacant = vec![0usize; n_alg];
    for out in &outs {
        for (a, stats) in out.per_alg_stats.iter().enumerate() {
            for (band, stat) in stats.iter().enumerate().take(band_count) {
                let truth = out.support.contains(&band);
                let said = *stat > gammas[a];
                if truth {
                    occupied[a] += 1;
                    if said {
                        hits[a] += 1;
                    }
                } else {
                    vacant[a] += 1;
                    if said {
                        alarms[a] += 1;
                    }
                }
            }
        }
    }
    let wall = start.elapsed().as_secs_f64();
    let rows = plan
        .algorithms
        .iter()
        .enumerate()
        .map(|(a, alg)| {
            let pd = if occupied[a] > 0 { hits[a] as f64 / occupied[a] as f64 } else { 0.0 };
            let pf = if vacant[a] > 0 { alarms[a] as f64 / vacant[a] as f64 } else { 0.0 };
            let stderr = (pd * (1.0 - pd) / plan.trials.max(1) as f64).sqrt();
            ResultRow {
                preset: plan.preset.name().to_string(),
                point: point.label.clone(),
                algorithm: alg.name(),
                pd,
                pf,
                stderr,
                wall_time: wall,
            }
        })
        .collect();
    Ok(rows)
}

/// Run every sweep point of a plan. `workers` sizes the thread pool; zero
/// means the library default. Output is deterministic in (plan, seed) and
/// independent of the worker count: trials are collected in index order and
/// aggregated sequentially.
pub fn run_plan(plan: &ExperimentPlan, workers: usize) -> Result<Vec<ResultRow>> {
    if plan.sweep.is_empty() || plan.trials == 0 {
        return Err(Error::Config("empty sweep or zero trials".into()));
    }
    let body = || -> Result<Vec<ResultRow>> {
        let mut rows = Vec::new();
        for (idx, point) in plan.sweep.iter().enumerate() {
            rows.extend(point_rows(plan, idx, point)?);
        }
        Ok(rows)
    };
    if workers == 0 {
        body()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(body)
    }
}

fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let formatted = format!("{:.6e}", x);
    // re-render in plain decimal when the exponent is small
    let mag = x.abs();
    if (1e-4..1e7).contains(&mag) {
        let digits = 6 - mag.log10().floor() as i32 - 1;
        let digits = digits.clamp(0, 12) as usize;
        format!("{:.*}", digits, x)
    } else {
        formatted
    }
}

/// Write rows as CSV: header plus one line per row, floats at six significant
/// digits. Timing is reported separately so repeated runs are byte identical.
pub fn emit_csv(rows: &[ResultRow], path: &str) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "preset,point,algorithm,pd,pf,stderr")?;
    for row in rows {
        writeln!(
            file,
            "{},{},{},{},{},{}",
            row.preset,
            row.point,
            row.algorithm,
            fmt_sig(row.pd),
            fmt_sig(row.pf),
            fmt_sig(row.stderr)
        )?;
    }
    Ok(())
}

pub fn rows_to_csv_string(rows: &[ResultRow]) -> String {
    let mut out = String::from("preset,point,algorithm,pd,pf,stderr\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.preset,
            row.point,
            row.algorithm,
            fmt_sig(row.pd),
            fmt_sig(row.pf),
            fmt_sig(row.stderr)
        ));
    }
    out
}

/// Theory report CSV with the documented column schema.
pub fn emit_theory_csv(reports: &[crate::theory::AmplificationReport], path: &str) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "M,i,j,r,rho_abs,rho_phase,formula,oracle,lower,upper,passed")?;
    for rep in reports {
        writeln!(
            file,
            "{},{},{},{},{},{},{},{},{},{},{}",
            rep.m,
            rep.i,
            rep.j,
            rep.r,
            fmt_sig(rep.rho.norm()),
            fmt_sig(rep.rho.arg()),
            rep.formula.map(fmt_sig).unwrap_or_default(),
            fmt_sig(rep.oracle),
            rep.lower.map(fmt_sig).unwrap_or_default(),
            rep.upper.map(fmt_sig).unwrap_or_default(),
            rep.passed
        )?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// configuration file

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
#[derive(Default)]
pub struct FileConfig {
    pub scenario: ScenarioSection,
    pub subarray: SubArraySection,
    pub sampler: SamplerSection,
    pub recovery: RecoverySection,
    pub plan: PlanSection,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioSection {
    pub m: usize,
    pub k: usize,
    pub w_hz: f64,
    pub b_hz: f64,
    pub q: usize,
    pub l: usize,
    pub rho_abs: f64,
    pub rho_phase: f64,
    pub snr_db: f64,
    pub tx_powers: Option<Vec<f64>>,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SubArraySection {
    pub i: usize,
    pub j: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerSection {
    pub compression: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct RecoverySection {
    pub target_pf: f64,
    pub rank_rule: String,
    pub gap_eps_rel: f64,
    pub energy_fraction: f64,
    pub floor_sigmas: f64,
    pub fixed_rank: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct PlanSection {
    pub trials: usize,
    pub calibration_trials: usize,
    pub algorithms: Vec<String>,
}

impl Default for ScenarioSection {
    fn default() -> Self {
        ScenarioSection {
            m: 6,
            k: 3,
            w_hz: 1e9,
            b_hz: 2e7,
            q: 300,
            l: 100,
            rho_abs: 0.6,
            rho_phase: 0.0,
            snr_db: -16.0,
            tx_powers: None,
            seed: 1,
        }
    }
}

impl Default for SubArraySection {
    fn default() -> Self {
        SubArraySection { i: 2, j: 3 }
    }
}

impl Default for SamplerSection {
    fn default() -> Self {
        SamplerSection { compression: 5 }
    }
}

impl Default for RecoverySection {
    fn default() -> Self {
        RecoverySection {
            target_pf: 0.1,
            rank_rule: "floor".into(),
            gap_eps_rel: 1e-3,
            energy_fraction: 0.95,
            floor_sigmas: 4.0,
            fixed_rank: 0,
        }
    }
}

impl Default for PlanSection {
    fn default() -> Self {
        PlanSection {
            trials: 500,
            calibration_trials: 100,
            algorithms: vec![],
        }
    }
}


impl FileConfig {
    pub fn load(path: &str) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("config parse: {e}")))
    }

    pub fn scenario_config(&self) -> ScenarioConfig {
        let s = &self.scenario;
        ScenarioConfig {
            m: s.m,
            k: s.k,
            w_hz: s.w_hz,
            b_hz: s.b_hz,
            q: s.q,
            l: s.l,
            rho: Complex64::from_polar(s.rho_abs, s.rho_phase),
            snr_db: s.snr_db,
            tx_powers: s
                .tx_powers
                .clone()
                .unwrap_or_else(|| vec![1.0; s.k]),
            seed: s.seed,
        }
    }

    pub fn rank_rule(&self) -> Result<RankRule> {
        match self.recovery.rank_rule.as_str() {
            "gap" => Ok(RankRule::Gap { eps_rel: self.recovery.gap_eps_rel }),
            "energy" => Ok(RankRule::Energy { fraction: self.recovery.energy_fraction }),
            "floor" => Ok(RankRule::Floor { n_sigmas: self.recovery.floor_sigmas }),
            "fixed" => Ok(RankRule::Fixed(self.recovery.fixed_rank.max(1))),
            other => Err(Error::Config(format!("unknown rank rule {other}"))),
        }
    }

    pub fn algorithms(&self) -> Result<Vec<Algorithm>> {
        if self.plan.algorithms.is_empty() {
            return Ok(default_algorithms());
        }
        self.plan.algorithms.iter().map(|s| Algorithm::parse(s)).collect()
    }

    pub fn custom_plan(&self) -> Result<ExperimentPlan> {
        let cfg = self.scenario_config();
        cfg.validate()?;
        Ok(ExperimentPlan {
            preset: Preset::Custom,
            sweep: vec![SweepPoint {
                label: format!("snr_db={}", self.scenario.snr_db),
                cfg,
                compression: self.sampler.compression,
                i: self.subarray.i,
                j: self.subarray.j,
            }],
            trials: self.plan.trials,
            calibration_trials: self.plan.calibration_trials,
            target_pf: self.recovery.target_pf,
            algorithms: self.algorithms()?,
            rank_rule: self.rank_rule()?,
        })
    }
}

// ---------------------------------------------------------------------------
// self checks for the `verify` subcommand

pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn verify_suite() -> Vec<CheckOutcome> {
    let mut out = Vec::new();

    // closed forms against oracles on a reduced grid
    let grid = crate::theory::theory_grid(
        8,
        &[0.0, 0.2, 0.5, 0.8, 0.95],
        &[0.0, std::f64::consts::PI / 7.0],
    );
    match grid {
        Ok(reports) => {
            let bad = reports.iter().filter(|r| !r.passed).count();
            out.push(CheckOutcome {
                name: "closed_forms_match_oracles",
                passed: bad == 0,
                detail: format!("{} of {} grid reports failed", bad, reports.len()),
            });
        }
        Err(e) => out.push(CheckOutcome {
            name: "closed_forms_match_oracles",
            passed: false,
            detail: format!("{e}"),
        }),
    }

    // Hermitian root round trip
    {
        let corr = crate::scenario::build_exponential_correlation(
            6,
            Complex64::from_polar(0.6, std::f64::consts::PI / 7.0),
        )
        .unwrap();
        let root = crate::numerics::hermitian_sqrt(&corr.matrix).unwrap();
        let err = crate::numerics::frob(&(&root * &root - &corr.matrix))
            / crate::numerics::frob(&corr.matrix);
        out.push(CheckOutcome {
            name: "hermitian_root_round_trip",
            passed: err < 1e-9,
            detail: format!("relative error {err:.3e}"),
        });
        // column product law of the root
        let mut worst: f64 = 0.0;
        for u in 0..6 {
            for v in u..6 {
                let p: Complex64 = root.column(u).dotc(&root.column(v));
                let expect = corr.matrix[(u, v)];
                worst = worst.max((p - expect).norm());
            }
        }
        out.push(CheckOutcome {
            name: "root_column_products",
            passed: worst < 1e-9,
            detail: format!("worst deviation {worst:.3e}"),
        });
    }

    // noise folding of the front end
    {
        let mut rng = SeededRng::new(7);
        let op = build_random_demodulator(100, 300, &mut rng).unwrap();
        let est = crate::sampler::estimate_noise_folding(&op, 1.0, &mut rng, 400);
        let passed = (est.alpha - 3.0).abs() < 0.1;
        out.push(CheckOutcome {
            name: "noise_folding_ratio",
            passed,
            detail: format!("alpha {:.4} (expect 3.0)", est.alpha),
        });
    }

    // greedy recovery on easy noiseless instances
    {
        let mut rng = SeededRng::new(11);
        let mut ok = 0;
        let total = 50;
        for _ in 0..total {
            if somp_instance_exact(&mut rng) {
                ok += 1;
            }
        }
        out.push(CheckOutcome {
            name: "greedy_recovery_noiseless",
            passed: ok == total,
            detail: format!("{ok}/{total} exact"),
        });
    }

    // determinism of a small Monte Carlo plan
    {
        let mut plan = plan_fig6(99, 4, 1);
        plan.sweep.truncate(1);
        plan.calibration_trials = 4;
        let a = run_plan(&plan, 1).map(|r| rows_to_csv_string(&r));
        let b = run_plan(&plan, 2).map(|r| rows_to_csv_string(&r));
        let passed = matches!((&a, &b), (Ok(x), Ok(y)) if x == y);
        out.push(CheckOutcome {
            name: "deterministic_across_workers",
            passed,
            detail: if passed { "identical CSV".into() } else { "outputs differ".into() },
        });
    }

    out
}

fn somp_instance_exact(rng: &mut SeededRng) -> bool {
    use crate::numerics::{complex_gaussian, CMat};
    let (p, q, c, k) = (8usize, 20usize, 3usize, 2usize);
    let a = complex_gaussian(rng, p, q, 1.0);
    let mut truth: Vec<usize> = rng.distinct(q, k);
    let mut y = CMat::zeros(p, c);
    for &col in &truth {
        let z = complex_gaussian(rng, 1, c, 1.0);
        for cc in 0..c {
            for row in 0..p {
                y[(row, cc)] += a[(row, col)] * z[(0, cc)];
            }
        }
    }
    let cfg = RecoveryConfig { epsilon: 1e-9, max_sparsity: k, band_count: q };
    let rec = somp(&y, &a, &cfg).unwrap();
    truth.sort_unstable();
    rec.support_bins == truth
}
