//! Closed-form amplification factors and singular-value bounds for the
//! cross-correlation SCMs, each checked against brute-force oracles built
//! from the Hermitian root of the correlation matrix and full SVDs.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{frob, hermitian_sqrt, kronecker, singular_values, CMat, SeededRng};
use crate::sampler::build_random_demodulator;
use crate::scenario::build_exponential_correlation;

/// Sub-block of the exponential correlation matrix: rows i..j, columns
/// i+r..j+r (1-based, inclusive). Equivalently the product of the matching
/// row/column slices of the Hermitian root; both constructions are compared
/// on the way out.
#[derive(Clone, Debug)]
pub struct CorrelationBlock {
    pub t: CMat,
    pub i: usize,
    pub j: usize,
    pub r: i64,
    pub rho: Complex64,
    pub m: usize,
}

pub fn correlation_block(
    i: usize,
    j: usize,
    r: i64,
    rho: Complex64,
    m: usize,
) -> Result<CorrelationBlock> {
    if i < 1 || i > j || j > m || i as i64 + r < 1 || j as i64 + r > m as i64 {
        return Err(Error::IndexOutOfRange { i, j, r, m });
    }
    let corr = build_exponential_correlation(m, rho)?;
    let w = j - i + 1;
    let col0 = (i as i64 + r - 1) as usize;
    let t = corr.matrix.view((i - 1, col0), (w, w)).into_owned();

    // independent construction from the Hermitian root
    let root = hermitian_sqrt(&corr.matrix)?;
    let rows = root.rows(0, m).columns_range(..).into_owned();
    let mut t2 = CMat::zeros(w, w);
    for a in 0..w {
        for b in 0..w {
            let u = i - 1 + a;
            let v = col0 + b;
            let mut acc = Complex64::new(0.0, 0.0);
            for s in 0..m {
                acc += rows[(s, u)].conj() * rows[(s, v)];
            }
            t2[(a, b)] = acc;
        }
    }
    let diff = frob(&(&t - &t2));
    if diff > 1e-10 * frob(&t).max(1.0) {
        return Err(Error::Config(format!(
            "correlation block constructions disagree by {diff:.3e}"
        )));
    }
    Ok(CorrelationBlock { t, i, j, r, rho, m })
}

pub fn sigma_max_block(i: usize, j: usize, r: i64, rho: Complex64, m: usize) -> Result<f64> {
    let block = correlation_block(i, j, r, rho, m)?;
    Ok(singular_values(&block.t)?[0])
}

/// Closed-form amplification of the single-shift matrix-form SCM:
/// (j - i + 1) |rho|^r.
pub fn gain_mcslacc(i: usize, j: usize, r: i64, rho: Complex64) -> Result<f64> {
    if rho.norm() > 1.0 + 1e-12 {
        return Err(Error::InvalidRho(rho.norm()));
    }
    if r < 0 {
        return Err(Error::ShiftOutOfRange { i, j, r });
    }
    Ok((j - i + 1) as f64 * rho.norm().powi(r as i32))
}

/// Oracle for the same quantity: |sum over the sub-array of column products
/// of the Hermitian root|.
pub fn gain_mcslacc_oracle(
    i: usize,
    j: usize,
    r: i64,
    rho: Complex64,
    m: usize,
) -> Result<f64> {
    if i < 1 || i > j || j as i64 + r > m as i64 || i as i64 + r < 1 {
        return Err(Error::IndexOutOfRange { i, j, r, m });
    }
    let corr = build_exponential_correlation(m, rho)?;
    let root = hermitian_sqrt(&corr.matrix)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for u in i..=j {
        let a = root.column(u - 1);
        let b = root.column((u as i64 + r - 1) as usize);
        acc += a.dotc(&b);
    }
    Ok(acc.norm())
}

/// Closed-form amplification of the shift-summed combined SCM:
/// (j - i + 1)(2|rho| - |rho|^i - |rho|^(M-j+1)) / (1 - |rho|).
pub fn gain_mcslsacc(i: usize, j: usize, m: usize, rho: Complex64) -> Result<f64> {
    let ar = rho.norm();
    if ar > 1.0 + 1e-12 {
        return Err(Error::InvalidRho(ar));
    }
    if (ar - 1.0).abs() < 1e-12 {
        return Err(Error::RhoAtUnity);
    }
    let w = (j - i + 1) as f64;
    Ok(w * (2.0 * ar - ar.powi(i as i32) - ar.powi((m - j + 1) as i32)) / (1.0 - ar))
}

/// Oracle: sum of per-shift amplifications over every nonzero shift in both
/// directions.
pub fn gain_mcslsacc_oracle(i: usize, j: usize, m: usize, rho: Complex64) -> Result<f64> {
    let corr = build_exponential_correlation(m, rho)?;
    let root = hermitian_sqrt(&corr.matrix)?;
    let mut total = 0.0;
    for r in -((i as i64) - 1)..=(m as i64 - j as i64) {
        if r == 0 {
            continue;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for u in i..=j {
            let a = root.column(u - 1);
            let b = root.column((u as i64 + r - 1) as usize);
            acc += a.dotc(&b);
        }
        total += acc.norm();
    }
    Ok(total)
}

/// Bounds on the peak singular value of the r = 0 correlation block of size
/// n = j - i + 1 (a Hermitian Toeplitz exponential block). The lower bound is
/// never below one.
pub fn bounds_vcslacc_r0(i: usize, j: usize, rho: Complex64) -> Result<(f64, f64)> {
    let ar = rho.norm();
    if ar > 1.0 + 1e-12 {
        return Err(Error::InvalidRho(ar));
    }
    if (ar - 1.0).abs() < 1e-12 {
        return Err(Error::RhoAtUnity);
    }
    let n = j - i + 1;
    if ar == 0.0 {
        return Ok((1.0, 1.0));
    }
    let nf = n as f64;
    let lower = (1.0 + ar) / (1.0 - ar)
        - 2.0 * ar * (1.0 - ar.powi(n as i32)) / (nf * (1.0 - ar) * (1.0 - ar));
    let upper = if n % 2 == 1 {
        (1.0 + ar) / (1.0 - ar) - 2.0 * ar.powi(n.div_ceil(2) as i32) / (1.0 - ar)
    } else {
        (1.0 + ar) * (1.0 - ar.powi((n / 2) as i32)) / (1.0 - ar)
    };
    Ok((lower, upper))
}

/// Trace-average chain for intermediate shifts 0 < r <= j - i: the peak
/// singular value dominates sqrt(trace(T^H T)/(s+1)) which dominates 1, with
/// equality only at rho = 0. Returns (sqrt average, peak singular value).
pub fn trace_bound_vcslacc(i: usize, j: usize, r: i64, rho: Complex64) -> Result<(f64, f64)> {
    if r <= 0 || r > (j - i) as i64 {
        return Err(Error::ShiftOutOfRange { i, j, r });
    }
    let m = j + r as usize;
    let block = correlation_block(i, j, r, rho, m)?;
    let s = (j - i) as i64 - r; // the block has numeric rank s + 1
    let tht = block.t.adjoint() * &block.t;
    let tr: f64 = (0..tht.nrows()).map(|k| tht[(k, k)].re).sum();
    let avg = (tr / (s as f64 + 1.0)).sqrt();
    let sigma_max = singular_values(&block.t)?[0];
    Ok((avg, sigma_max))
}

/// Numeric rank of the correlation block for 0 < r <= j - i is j - i - r + 1.
pub fn block_rank(i: usize, j: usize, r: i64, rho: Complex64) -> Result<usize> {
    let m = j + r.max(0) as usize;
    let block = correlation_block(i, j, r, rho, m)?;
    let sv = singular_values(&block.t)?;
    let s0 = sv[0];
    if s0 <= 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > 1e-12 * s0).count())
}

/// Bounds on the peak singular value of the correlation block in the
/// noise-free shift range r >= j - i, where the block is rank one. The lower
/// bound is exact there.
pub fn bounds_vcslacc_noisefree(
    i: usize,
    j: usize,
    r: i64,
    rho: Complex64,
) -> Result<(f64, f64)> {
    let ar = rho.norm();
    if ar > 1.0 + 1e-12 {
        return Err(Error::InvalidRho(ar));
    }
    if ar == 0.0 {
        return Err(Error::RhoZero);
    }
    if (ar - 1.0).abs() < 1e-12 {
        return Err(Error::RhoAtUnity);
    }
    if r < (j - i) as i64 {
        return Err(Error::ShiftOutOfRange { i, j, r });
    }
    let n = (j - i + 1) as i32;
    let arn = ar.powi(n);
    let common = ar.powi(r as i32 + 1) * (1.0 - arn) / (arn * (1.0 - ar));
    let lower = common * (1.0 + arn) / (1.0 + ar);
    let upper = common * ((1.0 + arn) / (1.0 + ar)).sqrt();
    Ok((lower, upper))
}

/// Predicted singular spectrum of the matrix-form SCM from the spectrum of
/// the single-antenna signal SCM: scaled by the amplification factor, plus
/// the folded noise floor for r = 0.
pub fn singular_relation_matrixform(
    i: usize,
    j: usize,
    r: i64,
    rho: Complex64,
    m: usize,
    rsa_spectrum: &[f64],
    alpha_sigma2: f64,
) -> Result<Vec<f64>> {
    let gain = gain_mcslacc_oracle(i, j, r, rho, m)?;
    let w = (j - i + 1) as f64;
    let out = rsa_spectrum
        .iter()
        .map(|&s| {
            if r == 0 {
                w * s + w * alpha_sigma2
            } else {
                gain * s
            }
        })
        .collect();
    Ok(out)
}

/// Predicted singular spectrum of the vector-form SCM: Kronecker combination
/// of the block spectrum and the signal spectrum, optionally perturbed by a
/// per-entry noise spectrum (root sum of squares).
pub fn singular_relation_vectorform(
    block_spectrum: &[f64],
    rsa_spectrum: &[f64],
    noise_spectrum: Option<&[f64]>,
) -> Vec<f64> {
    let mut prods: Vec<f64> = block_spectrum
        .iter()
        .flat_map(|&t| rsa_spectrum.iter().map(move |&s| t * s))
        .collect();
    prods.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if let Some(noise) = noise_spectrum {
        for (k, v) in prods.iter_mut().enumerate() {
            let n = noise.get(k).copied().unwrap_or(0.0);
            *v = (*v * *v + n * n).sqrt();
        }
    }
    prods
}

/// Effective noise level after subspace cleaning: lambda_n^2 / lambda_y for
/// each retained direction, never above lambda_n itself.
pub fn cleaned_noise_level(lambda_n: f64, lambda_y: f64) -> f64 {
    if lambda_y <= 0.0 {
        return 0.0;
    }
    (lambda_n * lambda_n / lambda_y).min(lambda_n)
}

/// Statistical SCM validation scenario: the channel is drawn repeatedly while
/// the signal covariance is a fixed flat-spectrum band model, so the only
/// estimation error is the channel expectation.
#[derive(Clone, Debug)]
pub struct RelationScenario {
    pub m: usize,
    pub i: usize,
    pub j: usize,
    pub r: i64,
    pub rho: Complex64,
    pub p: usize,
    pub q: usize,
    pub band_count: usize,
    pub supports: Vec<usize>,
    pub tx_powers: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ScmRelationReport {
    pub arrangement: crate::csl::Arrangement,
    pub relative_error: f64,
    pub predicted_norm: f64,
    pub n_channel_draws: usize,
    /// (draw count, relative error) at logarithmic checkpoints
    pub checkpoints: Vec<(usize, f64)>,
    /// least-squares slope of log error against log draws
    pub decay_exponent: f64,
}

/// Empirical mean SCM over channel draws against the closed-form prediction:
/// coefficient times the compressed signal SCM for the matrix form, block
/// Kronecker signal SCM for the vector form.
pub fn validate_scm_expectation(
    sc: &RelationScenario,
    arrangement: crate::csl::Arrangement,
    n_draws: usize,
    rng: &mut SeededRng,
) -> Result<ScmRelationReport> {
    use crate::csl::Arrangement::*;
    let k = sc.supports.len();
    if sc.tx_powers.len() != k {
        return Err(Error::Config("tx_powers length must match supports".into()));
    }
    let op = build_random_demodulator(sc.p, sc.q, rng)?;
    let bins = sc.q / sc.band_count;
    // unit-power compressed band covariances: (q/bins) * A_band A_band^H
    let mut base = Vec::with_capacity(k);
    for &band in &sc.supports {
        let a_band = op.a.columns(band * bins, bins).into_owned();
        let scale = Complex64::new(sc.q as f64 / bins as f64, 0.0);
        let mut b = CMat::zeros(sc.p, sc.p);
        b.gemm(scale, &a_band, &a_band.adjoint(), Complex64::new(0.0, 0.0));
        base.push(b);
    }
    let rsa: CMat = {
        let mut acc = CMat::zeros(sc.p, sc.p);
        for (kk, b) in base.iter().enumerate() {
            acc += b.map(|z| z * Complex64::new(sc.tx_powers[kk], 0.0));
        }
        acc
    };

    let corr = build_exponential_correlation(sc.m, sc.rho)?;
    let root = hermitian_sqrt(&corr.matrix)?;
    let w = sc.j - sc.i + 1;

    let predicted: CMat = match arrangement {
        MatrixForm => {
            let mut coef = Complex64::new(0.0, 0.0);
            for u in sc.i..=sc.j {
                coef += corr.matrix[(u - 1, (u as i64 + sc.r - 1) as usize)];
            }
            rsa.map(|z| z * coef)
        }
        VectorForm => {
            let block = correlation_block(sc.i, sc.j, sc.r, sc.rho, sc.m)?;
            kronecker(&block.t, &rsa)?
        }
    };

    let dim = match arrangement {
        MatrixForm => sc.p,
        VectorForm => sc.p * w,
    };
    let mut acc = CMat::zeros(dim, dim);
    let mut checkpoints = Vec::new();
    let mut next_cp = 100usize.min(n_draws);
    let pred_norm = frob(&predicted);

    for draw in 1..=n_draws {
        let g_w = crate::numerics::complex_gaussian(rng, sc.m, k, 1.0);
        let g = &root * &g_w; // unit-power channel columns
        match arrangement {
            MatrixForm => {
                for (kk, b) in base.iter().enumerate() {
                    let mut c = Complex64::new(0.0, 0.0);
                    for u in sc.i..=sc.j {
                        c += g[(u - 1, kk)] * g[((u as i64 + sc.r - 1) as usize, kk)].conj();
                    }
                    let c = c * sc.tx_powers[kk];
                    for row in 0..dim {
                        for col in 0..dim {
                            acc[(row, col)] += c * b[(row, col)];
                        }
                    }
                }
            }
            VectorForm => {
                for (kk, b) in base.iter().enumerate() {
                    for bu in 0..w {
                        for bv in 0..w {
                            let u = sc.i - 1 + bu;
                            let v = (sc.i as i64 + sc.r - 1) as usize + bv;
                            let c = g[(u, kk)] * g[(v, kk)].conj() * sc.tx_powers[kk];
                            for row in 0..sc.p {
                                for col in 0..sc.p {
                                    acc[(bu * sc.p + row, bv * sc.p + col)] +=
                                        c * b[(row, col)];
                                }
                            }
                        }
                    }
                }
            }
        }
        if draw == next_cp || draw == n_draws {
            let mean = acc.map(|z| z / draw as f64);
            let err_abs = frob(&(&mean - &predicted));
            let err = if pred_norm > 1e-12 { err_abs / pred_norm } else { err_abs };
            if checkpoints.last().map(|&(n, _)| n) != Some(draw) {
                checkpoints.push((draw, err));
            }
            next_cp = (next_cp as f64 * 3.1623).round() as usize;
            if next_cp > n_draws {
                next_cp = n_draws;
            }
        }
    }

    let relative_error = checkpoints.last().map(|&(_, e)| e).unwrap_or(f64::NAN);
    let decay_exponent = fit_loglog_slope(&checkpoints);
    Ok(ScmRelationReport {
        arrangement,
        relative_error,
        predicted_norm: pred_norm,
        n_channel_draws: n_draws,
        checkpoints,
        decay_exponent,
    })
}

pub fn fit_loglog_slope(points: &[(usize, f64)]) -> f64 {
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(_, e)| e > 0.0)
        .map(|&(n, e)| ((n as f64).ln(), e.ln()))
        .collect();
    if data.len() < 2 {
        return f64::NAN;
    }
    let n = data.len() as f64;
    let sx: f64 = data.iter().map(|p| p.0).sum();
    let sy: f64 = data.iter().map(|p| p.1).sum();
    let sxx: f64 = data.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = data.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// One row of the theory report emitted by the CLI.
#[derive(Clone, Debug)]
pub struct AmplificationReport {
    pub m: usize,
    pub i: usize,
    pub j: usize,
    pub r: i64,
    pub rho: Complex64,
    pub formula: Option<f64>,
    pub oracle: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub passed: bool,
    pub delta: f64,
}

/// Full verification grid: every sub-array of arrays up to `max_m` antennas,
/// every admissible shift, magnitudes from `rho_abs` and phases from
/// `phases`. Covers the single-shift gain, the shift-summed gain, the r = 0
/// bounds, the trace chain, the rank-one bounds with their exactness, and the
/// strict decrease of the peak singular value in the shift.
pub fn theory_grid(
    max_m: usize,
    rho_abs: &[f64],
    phases: &[f64],
) -> Result<Vec<AmplificationReport>> {
    let mut out = Vec::new();
    for m in 2..=max_m {
        for i in 1..=m {
            for j in i..=m {
                for &ar in rho_abs {
                    for &ph in phases {
                        let rho = Complex64::from_polar(ar, ph);
                        grid_point(m, i, j, rho, &mut out)?;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn grid_point(
    m: usize,
    i: usize,
    j: usize,
    rho: Complex64,
    out: &mut Vec<AmplificationReport>,
) -> Result<()> {
    let ar = rho.norm();
    // single-shift gain for every admissible r
    for r in 0..=(m - j) as i64 {
        let formula = gain_mcslacc(i, j, r, rho)?;
        let oracle = gain_mcslacc_oracle(i, j, r, rho, m)?;
        let delta = (formula - oracle).abs();
        out.push(AmplificationReport {
            m,
            i,
            j,
            r,
            rho,
            formula: Some(formula),
            oracle,
            lower: None,
            upper: None,
            passed: delta <= 1e-10,
            delta,
        });
    }
    // shift-summed gain
    if !(i == 1 && j == m) && (ar - 1.0).abs() > 1e-12 {
        let formula = gain_mcslsacc(i, j, m, rho)?;
        let oracle = gain_mcslsacc_oracle(i, j, m, rho)?;
        let delta = (formula - oracle).abs();
        out.push(AmplificationReport {
            m,
            i,
            j,
            r: 0,
            rho,
            formula: Some(formula),
            oracle,
            lower: None,
            upper: None,
            passed: delta <= 1e-9,
            delta,
        });
    }
    // r = 0 stacked-block bounds
    if (ar - 1.0).abs() > 1e-12 {
        let (lo, hi) = bounds_vcslacc_r0(i, j, rho)?;
        let oracle = sigma_max_block(i, j, 0, rho, m)?;
        let passed = lo <= oracle + 1e-9 && oracle <= hi + 1e-9 && lo >= 1.0 - 1e-12;
        let delta = (oracle - lo).min(hi - oracle);
        out.push(AmplificationReport {
            m,
            i,
            j,
            r: 0,
            rho,
            formula: None,
            oracle,
            lower: Some(lo),
            upper: Some(hi),
            passed,
            delta,
        });
    }
    // trace chain on intermediate shifts
    for r in 1..=(j - i) as i64 {
        if j + r as usize > m {
            break;
        }
        let (avg, sigma_max) = trace_bound_vcslacc(i, j, r, rho)?;
        let tol = 1e-12;
        let chain_ok = sigma_max + tol >= avg && avg + tol >= 1.0;
        let equality_ok = if ar == 0.0 {
            (sigma_max - 1.0).abs() <= 1e-9 && (avg - 1.0).abs() <= 1e-9
        } else {
            true
        };
        out.push(AmplificationReport {
            m,
            i,
            j,
            r,
            rho,
            formula: Some(avg),
            oracle: sigma_max,
            lower: Some(1.0),
            upper: None,
            passed: chain_ok && equality_ok,
            delta: sigma_max - avg,
        });
    }
    // rank-one range bounds, exactness of the lower bound, strict decrease
    if ar > 0.0 && (ar - 1.0).abs() > 1e-12 {
        let mut prev_sigma: Option<f64> = None;
        for r in (j - i) as i64..=(m - j) as i64 {
            if r == 0 {
                continue;
            }
            let (lo, hi) = bounds_vcslacc_noisefree(i, j, r, rho)?;
            let oracle = sigma_max_block(i, j, r, rho, m)?;
            let exact = (lo - oracle).abs() <= 1e-9;
            let sandwiched = oracle <= hi + 1e-9;
            let monotone = match prev_sigma {
                // relative strictness: absolute margins vanish at tiny |rho|
                Some(prev) => oracle < prev - 1e-12 * prev.max(oracle),
                None => true,
            };
            prev_sigma = Some(oracle);
            out.push(AmplificationReport {
                m,
                i,
                j,
                r,
                rho,
                formula: None,
                oracle,
                lower: Some(lo),
                upper: Some(hi),
                passed: exact && sandwiched && monotone,
                delta: (lo - oracle).abs(),
            });
        }
    }
    Ok(())
}
