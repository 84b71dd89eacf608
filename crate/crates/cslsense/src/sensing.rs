//! Sparse recovery and detection: simultaneous orthogonal matching pursuit
//! over the compressive dictionary, bin-to-band support mapping, the
//! energy-detection statistic, and detection/false-alarm probabilities.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{CMat};

#[derive(Clone, Debug)]
pub struct RecoveryConfig {
    /// residual Frobenius norm at which the pursuit stops
    pub epsilon: f64,
    /// cap on selected dictionary atoms
    pub max_sparsity: usize,
    /// number of narrowband channels
    pub band_count: usize,
}

#[derive(Clone, Debug)]
pub struct RecoveryResult {
    /// Q x C recovered coefficients, zero outside the selected rows
    pub z_hat: CMat,
    pub support_bins: Vec<usize>,
    pub support_bands: Vec<usize>,
    pub residual_norm: f64,
    /// set when the pursuit stopped because the atoms became dependent
    pub flagged_singular: bool,
}

/// Greedy joint-sparse recovery: at each step select the dictionary column
/// with the largest summed correlation magnitude against all residual
/// columns, then re-fit all selected atoms by least squares and update the
/// residual. Stops at the residual bound or the sparsity cap.
pub fn somp(y: &CMat, a: &CMat, cfg: &RecoveryConfig) -> Result<RecoveryResult> {
    let (p, c) = (y.nrows(), y.ncols());
    let q = a.ncols();
    if a.nrows() != p {
        return Err(Error::DimensionMismatch {
            expected: format!("{} dictionary rows", p),
            got: format!("{}", a.nrows()),
        });
    }
    let mut selected: Vec<usize> = Vec::new();
    let mut residual = y.clone();
    let mut coeffs = CMat::zeros(0, 0);
    let mut flagged = false;
    let mut res_norm = crate::numerics::frob(&residual);

    while res_norm > cfg.epsilon && selected.len() < cfg.max_sparsity {
        // correlation energy of every unselected atom with the residual
        let mut best = None;
        let mut best_val = -1.0;
        for col in 0..q {
            if selected.contains(&col) {
                continue;
            }
            let atom = a.column(col);
            let norm2: f64 = atom.iter().map(|z| z.norm_sqr()).sum();
            if norm2 <= 0.0 {
                continue;
            }
            let mut val = 0.0;
            for cc in 0..c {
                let corr: Complex64 = atom.dotc(&residual.column(cc));
                val += corr.norm_sqr();
            }
            // normalize so atoms of unequal norm compete fairly
            val /= norm2;
            if val > best_val {
                best_val = val;
                best = Some(col);
            }
        }
        let Some(pick) = best else { break };
        if best_val <= 0.0 {
            break;
        }
        selected.push(pick);

        // orthogonal projection: least-squares fit on the selected atoms
        let k = selected.len();
        let mut a_s = CMat::zeros(p, k);
        for (idx, &col) in selected.iter().enumerate() {
            a_s.set_column(idx, &a.column(col));
        }
        let dec = crate::numerics::svd(&a_s)?;
        let s0 = dec.singular_values[0];
        let sk = dec.singular_values[k - 1];
        if sk <= 0.0 || s0 / sk > 1e12 {
            selected.pop();
            flagged = true;
            break;
        }
        // coeffs = V diag(1/s) U^H y
        let uty = dec.u.adjoint() * y;
        let mut scaled = uty;
        for row in 0..k {
            let inv = Complex64::new(1.0 / dec.singular_values[row], 0.0);
            for cc in 0..c {
                scaled[(row, cc)] *= inv;
            }
        }
        coeffs = &dec.v * scaled;
        residual = y - &a_s * &coeffs;
        res_norm = crate::numerics::frob(&residual);
    }

    let mut z_hat = CMat::zeros(q, c);
    for (idx, &col) in selected.iter().enumerate() {
        for cc in 0..c {
            if coeffs.nrows() > idx {
                z_hat[(col, cc)] = coeffs[(idx, cc)];
            }
        }
    }
    let mut support_bins = selected.clone();
    support_bins.sort_unstable();
    let support_bands = bins_to_bands(&support_bins, q, cfg.band_count);
    Ok(RecoveryResult {
        z_hat,
        support_bins,
        support_bands,
        residual_norm: res_norm,
        flagged_singular: flagged,
    })
}

/// Band b is flagged when at least one selected bin falls into its bin range
/// [b*q/band_count, (b+1)*q/band_count).
pub fn bins_to_bands(bins: &[usize], q: usize, band_count: usize) -> Vec<usize> {
    let per = q / band_count;
    let mut bands: Vec<usize> = bins.iter().map(|&b| (b / per).min(band_count - 1)).collect();
    bands.sort_unstable();
    bands.dedup();
    bands
}

/// Per-band energy statistic: mean over the reconstructed streams of the
/// recovered coefficient energy inside the band.
pub fn band_statistics(z_hat: &CMat, q: usize, band_count: usize) -> Vec<f64> {
    let per = q / band_count;
    let c = z_hat.ncols().max(1);
    let mut stats = vec![0.0; band_count];
    for bin in 0..z_hat.nrows() {
        let band = (bin / per).min(band_count - 1);
        for cc in 0..z_hat.ncols() {
            stats[band] += z_hat[(bin, cc)].norm_sqr();
        }
    }
    for s in stats.iter_mut() {
        *s /= c as f64;
    }
    stats
}

/// Threshold test per band: occupied when the statistic exceeds gamma.
pub fn energy_detect(stats: &[f64], gamma: f64) -> Vec<bool> {
    stats.iter().map(|&t| t > gamma).collect()
}

#[derive(Clone, Debug)]
pub struct DetectionMetrics {
    pub pd: f64,
    pub pf: f64,
    pub threshold: f64,
    pub n_occupied: usize,
    pub n_vacant: usize,
}

/// Detection probability averaged over truly occupied bands and false-alarm
/// probability averaged over vacant bands, across all trials.
pub fn compute_pd_pf(
    decisions: &[Vec<bool>],
    true_supports: &[Vec<usize>],
    band_count: usize,
    threshold: f64,
) -> Result<DetectionMetrics> {
    if decisions.len() != true_supports.len() || decisions.is_empty() {
        return Err(Error::Config("decisions and supports must align".into()));
    }
    let mut hits = 0usize;
    let mut occupied = 0usize;
    let mut alarms = 0usize;
    let mut vacant = 0usize;
    for (dec, support) in decisions.iter().zip(true_supports) {
        for band in 0..band_count {
            let truth = support.contains(&band);
            let said = dec.get(band).copied().unwrap_or(false);
            if truth {
                occupied += 1;
                if said {
                    hits += 1;
                }
            } else {
                vacant += 1;
                if said {
                    alarms += 1;
                }
            }
        }
    }
    let pd = if occupied > 0 { hits as f64 / occupied as f64 } else { 0.0 };
    let pf = if vacant > 0 { alarms as f64 / vacant as f64 } else { 0.0 };
    Ok(DetectionMetrics { pd, pf, threshold, n_occupied: occupied, n_vacant: vacant })
}

/// Default stopping bound from the discarded singular spectrum of the SCM:
/// epsilon^2 = P * C * alpha * sigma_hat^2 with sigma_hat^2 estimated as
/// median_residual^2 / (P * alpha), which reduces to sqrt(C) times the
/// residual floor.
pub fn noise_floor_epsilon(p: usize, c: usize, alpha: f64, median_residual_sv: f64) -> f64 {
    let sigma_hat2 = median_residual_sv * median_residual_sv / (p as f64 * alpha).max(1e-300);
    (p as f64 * c as f64 * alpha * sigma_hat2).sqrt()
}
