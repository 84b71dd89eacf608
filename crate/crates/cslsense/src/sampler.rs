//! Sub-Nyquist front end: random demodulator measurement matrix, unitary
//! inverse-DFT dictionary, sensing matrix A = Omega Psi, per-segment
//! sub-sampling Y = Omega X^T, and the noise folding factor.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{CMat, SeededRng};
use crate::scenario::NyquistFrame;

/// Random demodulator: chip the input by a +-1 sequence, then integrate and
/// dump Q/P consecutive samples per output. Rows have disjoint supports, so
/// they are orthogonal with squared norm Q/P.
pub struct MeasurementOperator {
    pub omega: CMat,
    pub psi: CMat,
    pub a: CMat,
    pub chipping: Vec<f64>,
    pub p: usize,
    pub q: usize,
}

impl MeasurementOperator {
    pub fn compression_ratio(&self) -> f64 {
        self.q as f64 / self.p as f64
    }

    pub fn block_len(&self) -> usize {
        self.q / self.p
    }
}

pub fn build_random_demodulator(
    p: usize,
    q: usize,
    rng: &mut SeededRng,
) -> Result<MeasurementOperator> {
    if p == 0 || !q.is_multiple_of(p) {
        return Err(Error::IndivisibleRatio { p, q });
    }
    let chipping: Vec<f64> = (0..q).map(|_| rng.sign()).collect();
    let block = q / p;
    let mut omega = CMat::zeros(p, q);
    for row in 0..p {
        for n in row * block..(row + 1) * block {
            omega[(row, n)] = Complex64::new(chipping[n], 0.0);
        }
    }
    // unitary inverse DFT dictionary: time samples = psi * fourier coefficients
    let qf = q as f64;
    let psi = CMat::from_fn(q, q, |n, k| {
        let arg = 2.0 * std::f64::consts::PI * (n * k) as f64 / qf;
        Complex64::new(arg.cos(), arg.sin()) / qf.sqrt()
    });
    let a = &omega * &psi;
    Ok(MeasurementOperator { omega, psi, a, chipping, p, q })
}

/// Y = Omega X^T for one segment; output is P x M. Uses the sparse block
/// structure of Omega directly.
pub fn subsample(op: &MeasurementOperator, x_bar: &CMat) -> Result<CMat> {
    let m = x_bar.nrows();
    if x_bar.ncols() != op.q {
        return Err(Error::DimensionMismatch {
            expected: format!("M x {}", op.q),
            got: format!("{}x{}", x_bar.nrows(), x_bar.ncols()),
        });
    }
    let block = op.block_len();
    let mut y = CMat::zeros(op.p, m);
    for ant in 0..m {
        for row in 0..op.p {
            let mut acc = Complex64::new(0.0, 0.0);
            for n in row * block..(row + 1) * block {
                acc += op.chipping[n] * x_bar[(ant, n)];
            }
            y[(row, ant)] = acc;
        }
    }
    Ok(y)
}

pub fn subsample_frame(op: &MeasurementOperator, frame: &NyquistFrame) -> Result<CMat> {
    subsample(op, &frame.x_bar)
}

/// L sub-sampled segments, each P x M.
pub struct SubSampleSet {
    pub segments: Vec<CMat>,
    pub p: usize,
    pub m: usize,
}

impl SubSampleSet {
    pub fn new(segments: Vec<CMat>) -> Result<Self> {
        let first = segments.first().ok_or(Error::EmptySegments)?;
        let (p, m) = (first.nrows(), first.ncols());
        if segments.iter().any(|s| s.nrows() != p || s.ncols() != m) {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{}", p, m),
                got: "ragged segment list".into(),
            });
        }
        Ok(SubSampleSet { segments, p, m })
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }
}

/// Output/input noise power ratio of the front end. With unnormalized +-1
/// rows this is Q/P: each output accumulates Q/P unit-power chips.
pub struct NoiseFoldingEstimate {
    pub alpha: f64,
    pub stderr: f64,
}

pub fn estimate_noise_folding(
    op: &MeasurementOperator,
    sigma2: f64,
    rng: &mut SeededRng,
    n_trials: usize,
) -> NoiseFoldingEstimate {
    let mut ratios = Vec::with_capacity(n_trials);
    for _ in 0..n_trials {
        let noise = crate::numerics::complex_gaussian(rng, 1, op.q, sigma2);
        let y = subsample(op, &noise).expect("dims fixed");
        let out_p: f64 = y.iter().map(|z| z.norm_sqr()).sum::<f64>() / op.p as f64;
        ratios.push(out_p / sigma2);
    }
    let n = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / n;
    let var = ratios.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / n.max(2.0);
    NoiseFoldingEstimate { alpha: mean, stderr: (var / n).sqrt() }
}
