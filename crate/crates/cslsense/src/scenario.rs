//! Physical-layer world generation: exponentially correlated receive antennas,
//! Kronecker MIMO channel draws, sparse multiband BPSK primary-user signals at
//! Nyquist rate, AWGN, and the received sample matrix X = G S + N.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{complex_gaussian, hermitian_sqrt, CMat, SeededRng};

/// All scalar parameters defining one experiment.
#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    /// receive antenna count
    pub m: usize,
    /// active primary user count
    pub k: usize,
    /// total monitored bandwidth, Hz
    pub w_hz: f64,
    /// per-user bandwidth, Hz
    pub b_hz: f64,
    /// Nyquist samples per segment
    pub q: usize,
    /// segments per sensing period
    pub l: usize,
    /// antenna correlation coefficient, |rho| <= 1
    pub rho: Complex64,
    /// per-antenna SNR in dB (total received signal power over noise power)
    pub snr_db: f64,
    /// transmit powers, one per user
    pub tx_powers: Vec<f64>,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::Config("need at least one antenna".into()));
        }
        if self.q < 1 || self.l < 1 {
            return Err(Error::Config("Q and L must be positive".into()));
        }
        if self.rho.norm() > 1.0 + 1e-12 {
            return Err(Error::InvalidRho(self.rho.norm()));
        }
        if self.k as f64 * self.b_hz > self.w_hz * (1.0 + 1e-12) {
            return Err(Error::Config("K*B exceeds total bandwidth".into()));
        }
        if self.tx_powers.len() != self.k {
            return Err(Error::Config("tx_powers length must equal K".into()));
        }
        if self.tx_powers.iter().any(|&p| p < 0.0) {
            return Err(Error::Config("tx_powers must be non-negative".into()));
        }
        let nb = self.band_count();
        if nb == 0 || !self.q.is_multiple_of(nb) {
            return Err(Error::Config(format!(
                "band count {} must divide Q = {}",
                nb, self.q
            )));
        }
        if self.k > nb {
            return Err(Error::BandOverflow(self.k, nb));
        }
        Ok(())
    }

    /// Number of equal narrowband channels the monitored band is split into.
    pub fn band_count(&self) -> usize {
        (self.w_hz / self.b_hz).round() as usize
    }

    /// DFT bins covered by one narrowband channel.
    pub fn bins_per_band(&self) -> usize {
        self.q / self.band_count()
    }

    /// Noise variance implied by the SNR definition: total mean received
    /// signal power per antenna (sum of transmit powers, since the correlation
    /// matrix has unit diagonal) over 10^(snr/10).
    pub fn noise_variance(&self) -> f64 {
        let total: f64 = self.tx_powers.iter().sum();
        if total == 0.0 {
            return 0.0;
        }
        total / 10f64.powf(self.snr_db / 10.0)
    }
}

/// Exponential antenna correlation: unit diagonal, entry (m1, m2) = rho^(m2-m1)
/// above the diagonal, conjugate-reflected below. Hermitian Toeplitz, PSD for
/// |rho| < 1.
#[derive(Clone, Debug)]
pub struct ExponentialCorrelation {
    pub m: usize,
    pub rho: Complex64,
    pub matrix: CMat,
}

pub fn build_exponential_correlation(m: usize, rho: Complex64) -> Result<ExponentialCorrelation> {
    if rho.norm() > 1.0 + 1e-12 {
        return Err(Error::InvalidRho(rho.norm()));
    }
    let mat = CMat::from_fn(m, m, |r, c| {
        if r <= c {
            rho.powu((c - r) as u32)
        } else {
            rho.conj().powu((r - c) as u32)
        }
    });
    Ok(ExponentialCorrelation { m, rho, matrix: mat })
}

/// One channel realization G = Q^(1/2) Gw P^(1/2), fixed for a sensing period.
#[derive(Clone, Debug)]
pub struct ChannelDraw {
    pub g: CMat,
    pub q_sqrt: CMat,
    pub p_sqrt: CMat,
    pub g_w: CMat,
}

pub fn draw_channel(cfg: &ScenarioConfig, rng: &mut SeededRng) -> Result<ChannelDraw> {
    cfg.validate()?;
    let corr = build_exponential_correlation(cfg.m, cfg.rho)?;
    let q_sqrt = hermitian_sqrt(&corr.matrix)?;
    let mut p_sqrt = CMat::zeros(cfg.k, cfg.k);
    for k in 0..cfg.k {
        p_sqrt[(k, k)] = Complex64::new(cfg.tx_powers[k].sqrt(), 0.0);
    }
    let g_w = complex_gaussian(rng, cfg.m, cfg.k, 1.0);
    let g = &q_sqrt * &g_w * &p_sqrt;
    Ok(ChannelDraw { g, q_sqrt, p_sqrt, g_w })
}

/// Cached FFT plans for one segment length.
pub struct SignalGen {
    q: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl SignalGen {
    pub fn new(q: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(q);
        let inv = planner.plan_fft_inverse(q);
        SignalGen { q, fwd, inv }
    }

    /// One user's Nyquist-rate samples for one segment: BPSK symbols at rate B
    /// on the band's center frequency with a random carrier phase, then
    /// band-limited to the band's DFT bins and renormalized so the per-sample
    /// power is exactly `power`.
    pub fn bpsk_band(
        &self,
        band: usize,
        bins_per_band: usize,
        power: f64,
        rng: &mut SeededRng,
    ) -> Vec<Complex64> {
        let q = self.q;
        let band_count = q / bins_per_band;
        let sym_len = band_count; // W/B samples per symbol
        let phase = 2.0 * std::f64::consts::PI * rng.uniform();
        let n_sym = q / sym_len;
        let syms: Vec<f64> = (0..n_sym).map(|_| rng.sign()).collect();
        let fc = (band as f64 + 0.5) / sym_len as f64; // cycles per sample
        let mut buf: Vec<Complex64> = (0..q)
            .map(|n| {
                let arg = 2.0 * std::f64::consts::PI * fc * n as f64 + phase;
                syms[n / sym_len] * Complex64::new(arg.cos(), arg.sin())
            })
            .collect();
        self.fwd.process(&mut buf);
        let lo = band * bins_per_band;
        let hi = lo + bins_per_band;
        for (idx, v) in buf.iter_mut().enumerate() {
            if idx < lo || idx >= hi {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        self.inv.process(&mut buf);
        let energy: f64 = buf.iter().map(|z| z.norm_sqr()).sum();
        let scale = if energy > 0.0 {
            (power * q as f64 / energy).sqrt()
        } else {
            0.0
        };
        for v in buf.iter_mut() {
            *v *= scale;
        }
        buf
    }

    /// Q x K signal matrix for one segment over a fixed support.
    pub fn segment(
        &self,
        cfg: &ScenarioConfig,
        support: &[usize],
        rng: &mut SeededRng,
    ) -> CMat {
        let bpb = cfg.bins_per_band();
        let mut s = CMat::zeros(self.q, cfg.k);
        for (k, &band) in support.iter().enumerate() {
            if cfg.tx_powers[k] == 0.0 {
                continue;
            }
            let col = self.bpsk_band(band, bpb, cfg.tx_powers[k], rng);
            for (n, v) in col.into_iter().enumerate() {
                s[(n, k)] = v;
            }
        }
        s
    }
}

/// Draw K pairwise-disjoint narrowband indices, fixed for a sensing period.
pub fn draw_support(cfg: &ScenarioConfig, rng: &mut SeededRng) -> Result<Vec<usize>> {
    let nb = cfg.band_count();
    if cfg.k > nb {
        return Err(Error::BandOverflow(cfg.k, nb));
    }
    Ok(rng.distinct(nb, cfg.k))
}

/// Per-segment signal matrices plus the shared support.
pub fn generate_pu_signals(
    cfg: &ScenarioConfig,
    rng: &mut SeededRng,
) -> Result<(Vec<CMat>, Vec<usize>)> {
    cfg.validate()?;
    let gen = SignalGen::new(cfg.q);
    let support = draw_support(cfg, rng)?;
    let segs = (0..cfg.l).map(|_| gen.segment(cfg, &support, rng)).collect();
    Ok((segs, support))
}

/// Received Nyquist samples for one segment.
#[derive(Clone, Debug)]
pub struct NyquistFrame {
    /// Q x K transmitted samples
    pub s: CMat,
    /// M x Q received samples
    pub x_bar: CMat,
    /// M x Q noise
    pub n_bar: CMat,
    pub support: Vec<usize>,
}

pub fn synthesize_frame(
    cfg: &ScenarioConfig,
    channel: &ChannelDraw,
    s: &CMat,
    support: &[usize],
    rng: &mut SeededRng,
) -> Result<NyquistFrame> {
    if s.nrows() != cfg.q || s.ncols() != cfg.k {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", cfg.q, cfg.k),
            got: format!("{}x{}", s.nrows(), s.ncols()),
        });
    }
    let sigma2 = cfg.noise_variance();
    let n_bar = complex_gaussian(rng, cfg.m, cfg.q, sigma2);
    let mut x_bar = n_bar.clone();
    // X = G S^T + N
    x_bar.gemm(
        Complex64::new(1.0, 0.0),
        &channel.g,
        &s.transpose(),
        Complex64::new(1.0, 0.0),
    );
    Ok(NyquistFrame { s: s.clone(), x_bar, n_bar, support: support.to_vec() })
}
