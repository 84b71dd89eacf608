//! Compressive subspace learning core: sub-sample arrangements, cross- and
//! auto-correlation SCM estimation over L segments, the shift-summed combined
//! SCM, adaptive signal-subspace extraction, clean sub-sample reconstruction,
//! and the traditional full-array / single-antenna baselines.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{svd, CMat};
use crate::sampler::SubSampleSet;

/// Scale of the discarded singular spectrum, used to derive recovery
/// stopping thresholds.
#[derive(Clone, Copy, Debug)]
pub struct SubspaceFloor {
    pub median_sv: f64,
}

/// Sub-array selection: antennas i..j (1-based, inclusive) correlated against
/// antennas i+r..j+r. Negative r is used by the shift-summed combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubArraySpec {
    pub i: usize,
    pub j: usize,
    pub r: i64,
    pub m: usize,
}

impl SubArraySpec {
    pub fn new(i: usize, j: usize, r: i64, m: usize) -> Result<Self> {
        let ok = i >= 1
            && i <= j
            && j <= m
            && i as i64 + r >= 1
            && j as i64 + r <= m as i64;
        if !ok {
            return Err(Error::IndexOutOfRange { i, j, r, m });
        }
        Ok(SubArraySpec { i, j, r, m })
    }

    /// Sub-array width j - i + 1.
    pub fn width(&self) -> usize {
        self.j - self.i + 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arrangement {
    /// keep the P x width sub-sample block as a matrix
    MatrixForm,
    /// stack the sub-array columns into one P*width vector
    VectorForm,
}

/// Estimated SCM with its provenance.
#[derive(Clone, Debug)]
pub struct ScmEstimate {
    pub matrix: CMat,
    pub arrangement: Arrangement,
    pub spec: SubArraySpec,
    pub segments_used: usize,
}

/// Column slices [Y]_{:,i..j} and [Y]_{:,i+r..j+r} (1-based antenna indices).
pub fn arrange_matrix(y: &CMat, spec: &SubArraySpec) -> Result<(CMat, CMat)> {
    if y.ncols() < spec.m {
        return Err(Error::DimensionMismatch {
            expected: format!("P x {}", spec.m),
            got: format!("{}x{}", y.nrows(), y.ncols()),
        });
    }
    let w = spec.width();
    let a = y.columns(spec.i - 1, w).into_owned();
    let shifted_start = (spec.i as i64 + spec.r - 1) as usize;
    let b = y.columns(shifted_start, w).into_owned();
    Ok((a, b))
}

/// Same slices, column-stacked into P*width vectors in antenna order.
pub fn arrange_vector(y: &CMat, spec: &SubArraySpec) -> Result<(CMat, CMat)> {
    let (a, b) = arrange_matrix(y, spec)?;
    Ok((stack_columns(&a), stack_columns(&b)))
}

fn stack_columns(a: &CMat) -> CMat {
    let (p, c) = (a.nrows(), a.ncols());
    let mut v = CMat::zeros(p * c, 1);
    for col in 0..c {
        for row in 0..p {
            v[(col * p + row, 0)] = a[(row, col)];
        }
    }
    v
}

/// (1/L) sum over segments of A(Y_I0) A^H(Y_Ir). Matrix form gives P x P,
/// vector form P*width square. Only this orientation is estimated; the
/// conjugate-transposed twin carries the same information.
pub fn estimate_scm(
    segments: &SubSampleSet,
    spec: &SubArraySpec,
    arrangement: Arrangement,
) -> Result<ScmEstimate> {
    if segments.is_empty() {
        return Err(Error::EmptySegments);
    }
    let l = segments.len();
    let (dim, cols_per_seg) = match arrangement {
        Arrangement::MatrixForm => (segments.p, spec.width()),
        Arrangement::VectorForm => (segments.p * spec.width(), 1),
    };
    // stack all segment arrangements side by side and take one big product:
    // far faster than L rank-w updates
    let mut left = CMat::zeros(dim, cols_per_seg * l);
    let mut right = CMat::zeros(dim, cols_per_seg * l);
    for (idx, y) in segments.segments.iter().enumerate() {
        let (a, b) = match arrangement {
            Arrangement::MatrixForm => arrange_matrix(y, spec)?,
            Arrangement::VectorForm => arrange_vector(y, spec)?,
        };
        left.view_mut((0, idx * cols_per_seg), (dim, cols_per_seg)).copy_from(&a);
        right.view_mut((0, idx * cols_per_seg), (dim, cols_per_seg)).copy_from(&b);
    }
    let mut acc = CMat::zeros(dim, dim);
    acc.gemm(
        Complex64::new(1.0 / l as f64, 0.0),
        &left,
        &right.adjoint(),
        Complex64::new(0.0, 0.0),
    );
    Ok(ScmEstimate {
        matrix: acc,
        arrangement,
        spec: *spec,
        segments_used: l,
    })
}

/// Combined SCM summing every nonzero shift in both directions:
/// r in {-(i-1)..-1} and {1..M-j}. The r = 0 term is excluded on purpose,
/// which is what makes the combination noise free in expectation.
pub fn combined_scm_mcslsacc(
    segments: &SubSampleSet,
    i: usize,
    j: usize,
    m: usize,
) -> Result<ScmEstimate> {
    if i == 1 && j == m {
        return Err(Error::NoShiftAvailable);
    }
    let mut acc: Option<CMat> = None;
    let mut reference = SubArraySpec::new(i, j, 0, m)?;
    for r in -((i as i64) - 1)..=(m as i64 - j as i64) {
        if r == 0 {
            continue;
        }
        let spec = SubArraySpec::new(i, j, r, m)?;
        let scm = estimate_scm(segments, &spec, Arrangement::MatrixForm)?;
        acc = Some(match acc {
            None => scm.matrix,
            Some(a) => a + scm.matrix,
        });
        reference = spec;
    }
    Ok(ScmEstimate {
        matrix: acc.expect("at least one shift"),
        arrangement: Arrangement::MatrixForm,
        spec: reference,
        segments_used: segments.len(),
    })
}

/// How the signal-subspace rank is chosen from the singular spectrum.
#[derive(Clone, Copy, Debug)]
pub enum RankRule {
    /// largest relative gap (sigma_k - sigma_{k+1}) / sigma_k over candidates
    /// with sigma_k >= eps_rel * sigma_1
    Gap { eps_rel: f64 },
    /// smallest s capturing `fraction` of the total singular mass
    Energy { fraction: f64 },
    /// keep directions standing clear of the estimated noise floor: median
    /// plus `n_sigmas` robust deviations of the lower half of the spectrum
    Floor { n_sigmas: f64 },
    /// fixed rank, clamped to the spectrum length
    Fixed(usize),
}

impl Default for RankRule {
    fn default() -> Self {
        // the relative-gap rule degenerates on noise-dominated spectra
        // (it latches onto the tail cliff and keeps nearly every direction),
        // so the robust floor threshold is the default
        RankRule::Floor { n_sigmas: 4.0 }
    }
}

/// Dominant singular directions of an SCM.
#[derive(Clone, Debug)]
pub struct SubspaceEstimate {
    pub u_s: CMat,
    pub lambda_s: Vec<f64>,
    pub s: usize,
    pub residual_spectrum: Vec<f64>,
}

fn choose_rank(sv: &[f64], rule: &RankRule) -> usize {
    let dim = sv.len();
    if dim == 1 {
        return 1;
    }
    match *rule {
        RankRule::Gap { eps_rel } => {
            let floor = eps_rel * sv[0];
            let mut best = 1;
            let mut best_gap = -1.0;
            for k in 1..dim {
                if sv[k - 1] < floor {
                    break;
                }
                let gap = (sv[k - 1] - sv[k]) / sv[k - 1];
                if gap > best_gap {
                    best_gap = gap;
                    best = k;
                }
            }
            best
        }
        RankRule::Energy { fraction } => {
            let total: f64 = sv.iter().sum();
            let mut acc = 0.0;
            for (k, &s) in sv.iter().enumerate() {
                acc += s;
                if acc >= fraction * total {
                    return k + 1;
                }
            }
            dim
        }
        RankRule::Floor { n_sigmas } => {
            let tail = &sv[dim / 2..];
            let mut sorted = tail.to_vec();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let med = sorted[sorted.len() / 2];
            let mut dev: Vec<f64> = tail.iter().map(|&x| (x - med).abs()).collect();
            dev.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mad = dev[dev.len() / 2] * 1.4826;
            let thr = med + n_sigmas * mad.max(1e-3 * sv[0]);
            let s = sv.iter().filter(|&&x| x > thr).count();
            s.clamp(1, (dim / 2).max(1))
        }
        RankRule::Fixed(s) => s.clamp(1, dim),
    }
}

/// SVD of the SCM and adaptive rank selection. Cross-correlation SCMs with
/// r != 0 are generally non-Hermitian, so singular vectors are used
/// throughout, never eigenvectors.
pub fn extract_subspace(scm: &ScmEstimate, rule: &RankRule) -> Result<SubspaceEstimate> {
    let dec = svd(&scm.matrix)?;
    let sv = &dec.singular_values;
    if sv.is_empty() || sv[0] <= 1e-14 {
        // degenerate spectrum: report an empty basis, caller treats all bands
        // as vacant
        return Ok(SubspaceEstimate {
            u_s: CMat::zeros(scm.matrix.nrows(), 0),
            lambda_s: vec![],
            s: 0,
            residual_spectrum: sv.clone(),
        });
    }
    let s = choose_rank(sv, rule);
    let u_s = dec.u.columns(0, s).into_owned();
    Ok(SubspaceEstimate {
        u_s,
        lambda_s: sv[..s].to_vec(),
        s,
        residual_spectrum: sv[s..].to_vec(),
    })
}

impl SubspaceEstimate {
    /// Noise-floor scale of the discarded spectrum (median of the residual
    /// singular values; 0 when nothing was discarded).
    pub fn floor(&self) -> SubspaceFloor {
        let tail = &self.residual_spectrum;
        if tail.is_empty() {
            return SubspaceFloor { median_sv: 0.0 };
        }
        let mut sorted = tail.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        SubspaceFloor { median_sv: sorted[sorted.len() / 2] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CleanKind {
    /// P x 1 clean sub-sample vector (matrix-form algorithms)
    Vector,
    /// P x width clean sub-sample matrix (vector-form algorithm, reshaped)
    Matrix,
}

/// Clean sub-samples reconstructed from the signal subspace: y = U_s lambda_s,
/// reshaped column-major for the vector-form algorithm.
#[derive(Clone, Debug)]
pub struct CleanSubsamples {
    pub kind: CleanKind,
    pub data: CMat,
    pub projection: Option<CMat>,
}

pub fn reconstruct(
    sub: &SubspaceEstimate,
    kind: CleanKind,
    p: usize,
    cols: usize,
) -> Result<CleanSubsamples> {
    let dim = sub.u_s.nrows();
    let mut y = CMat::zeros(dim, 1);
    for k in 0..sub.s {
        let lam = Complex64::new(sub.lambda_s[k], 0.0);
        for row in 0..dim {
            y[(row, 0)] += lam * sub.u_s[(row, k)];
        }
    }
    let data = match kind {
        CleanKind::Vector => {
            if dim != p || cols != 1 {
                return Err(Error::ReshapeMismatch { len: dim, rows: p, cols });
            }
            y
        }
        CleanKind::Matrix => {
            if dim != p * cols {
                return Err(Error::ReshapeMismatch { len: dim, rows: p, cols });
            }
            let mut out = CMat::zeros(p, cols);
            for c in 0..cols {
                for row in 0..p {
                    out[(row, c)] = y[(c * p + row, 0)];
                }
            }
            out
        }
    };
    Ok(CleanSubsamples { kind, data, projection: None })
}

/// Attach the projector P_s = U_s U_s^H (optional, used by diagnostics).
pub fn with_projection(sub: &SubspaceEstimate, mut clean: CleanSubsamples) -> CleanSubsamples {
    clean.projection = Some(&sub.u_s * sub.u_s.adjoint());
    clean
}

/// Traditional full-array baseline: r = 0 auto-correlation SCM over the whole
/// array (noise corrupted by construction).
pub fn baseline_tmacsl(
    segments: &SubSampleSet,
    rule: &RankRule,
) -> Result<(CleanSubsamples, SubspaceEstimate)> {
    let spec = SubArraySpec::new(1, segments.m, 0, segments.m)?;
    let scm = estimate_scm(segments, &spec, Arrangement::MatrixForm)?;
    let sub = extract_subspace(&scm, rule)?;
    let clean = reconstruct(&sub, CleanKind::Vector, segments.p, 1)?;
    Ok((clean, sub))
}

/// Traditional single-antenna baseline: antenna 1 auto-correlation SCM.
pub fn baseline_tsacsl(
    segments: &SubSampleSet,
    rule: &RankRule,
) -> Result<(CleanSubsamples, SubspaceEstimate)> {
    let spec = SubArraySpec::new(1, 1, 0, segments.m)?;
    let scm = estimate_scm(segments, &spec, Arrangement::MatrixForm)?;
    let sub = extract_subspace(&scm, rule)?;
    let clean = reconstruct(&sub, CleanKind::Vector, segments.p, 1)?;
    Ok((clean, sub))
}

/// Algorithm selector shared with the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    McslAcc { r: i64 },
    McslsAcc,
    VcslAcc { r: i64 },
    TmaCsl,
    TsaCsl,
}

impl Algorithm {
    pub fn name(&self) -> String {
        match self {
            Algorithm::McslAcc { r } => format!("mcslacc_r{}", r),
            Algorithm::McslsAcc => "mcslsacc".into(),
            Algorithm::VcslAcc { r } => format!("vcslacc_r{}", r),
            Algorithm::TmaCsl => "tmacsl".into(),
            Algorithm::TsaCsl => "tsacsl".into(),
        }
    }

    pub fn is_proposed(&self) -> bool {
        !matches!(self, Algorithm::TmaCsl | Algorithm::TsaCsl)
    }

    pub fn parse(s: &str) -> Result<Algorithm> {
        let s = s.trim().to_ascii_lowercase();
        if s == "mcslsacc" {
            return Ok(Algorithm::McslsAcc);
        }
        if s == "tmacsl" {
            return Ok(Algorithm::TmaCsl);
        }
        if s == "tsacsl" {
            return Ok(Algorithm::TsaCsl);
        }
        if let Some(rest) = s.strip_prefix("mcslacc_r") {
            let r = rest.parse().map_err(|_| Error::Config(format!("bad shift in {s}")))?;
            return Ok(Algorithm::McslAcc { r });
        }
        if let Some(rest) = s.strip_prefix("vcslacc_r") {
            let r = rest.parse().map_err(|_| Error::Config(format!("bad shift in {s}")))?;
            return Ok(Algorithm::VcslAcc { r });
        }
        Err(Error::Config(format!("unknown algorithm {s}")))
    }
}

/// Run one algorithm end to end from sub-samples to clean sub-samples.
pub fn run_algorithm(
    segments: &SubSampleSet,
    alg: Algorithm,
    i: usize,
    j: usize,
    rule: &RankRule,
) -> Result<(CleanSubsamples, SubspaceEstimate)> {
    let m = segments.m;
    match alg {
        Algorithm::McslAcc { r } => {
            let spec = SubArraySpec::new(i, j, r, m)?;
            let scm = estimate_scm(segments, &spec, Arrangement::MatrixForm)?;
            let sub = extract_subspace(&scm, rule)?;
            let clean = reconstruct(&sub, CleanKind::Vector, segments.p, 1)?;
            Ok((clean, sub))
        }
        Algorithm::McslsAcc => {
            let scm = combined_scm_mcslsacc(segments, i, j, m)?;
            let sub = extract_subspace(&scm, rule)?;
            let clean = reconstruct(&sub, CleanKind::Vector, segments.p, 1)?;
            Ok((clean, sub))
        }
        Algorithm::VcslAcc { r } => {
            let spec = SubArraySpec::new(i, j, r, m)?;
            let scm = estimate_scm(segments, &spec, Arrangement::VectorForm)?;
            let sub = extract_subspace(&scm, rule)?;
            let width = spec.width();
            let clean = reconstruct(&sub, CleanKind::Matrix, segments.p, width)?;
            Ok((clean, sub))
        }
        Algorithm::TmaCsl => baseline_tmacsl(segments, rule),
        Algorithm::TsaCsl => baseline_tsacsl(segments, rule),
    }
}
