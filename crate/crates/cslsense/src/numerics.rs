//! Dense complex linear algebra substrate: Hermitian eigendecomposition, SVD,
//! Hermitian PSD square root, Kronecker product, seeded complex-Gaussian sampling.
//!
//! All operations are pure; matrices are plain `nalgebra` dynamic matrices of
//! `Complex64`. Tolerances are relative to the Frobenius norm of the input so
//! behaviour is scale invariant.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Hard cap on either dimension of a Kronecker product output.
pub const KRON_DIM_CAP: usize = 1 << 14;

pub fn frob(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn is_finite(a: &CMat) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMat,
}

fn hermitian_defect(a: &CMat) -> f64 {
    let d = a - a.adjoint();
    frob(&d)
}

pub fn hermitian_eigen(a: &CMat) -> Result<EigenDecomposition> {
    let scale = frob(a).max(1.0);
    let defect = hermitian_defect(a);
    if defect > 1e-10 * scale {
        return Err(Error::NonHermitianInput(defect / scale));
    }
    let se = nalgebra::SymmetricEigen::new(a.clone());
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| se.eigenvalues[x].partial_cmp(&se.eigenvalues[y]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &se.eigenvectors.column(src));
    }
    Ok(EigenDecomposition { eigenvalues, eigenvectors: vecs })
}

/// Hermitian PSD square root: eigendecompose, clamp tiny negative eigenvalues
/// to zero, take real square roots, recompose. The result is Hermitian PSD,
/// which is what the cross-correlation algebra downstream relies on (a
/// Cholesky factor would not do).
pub fn hermitian_sqrt(q: &CMat) -> Result<CMat> {
    let scale = frob(q).max(1.0);
    let eig = hermitian_eigen(q)?;
    let tol = 1e-10 * scale;
    if let Some(&min) = eig.eigenvalues.first() {
        if min < -tol {
            return Err(Error::NegativeEigenvalue(min));
        }
    }
    let n = q.nrows();
    let mut b = CMat::zeros(n, n);
    for k in 0..n {
        let lam = eig.eigenvalues[k].max(0.0);
        let s = Complex64::new(lam.sqrt(), 0.0);
        let vk = eig.eigenvectors.column(k);
        // b += sqrt(lam) * vk vk^H
        for r in 0..n {
            for c in 0..n {
                b[(r, c)] += s * vk[r] * vk[c].conj();
            }
        }
    }
    // symmetrize away accumulation noise
    let bh = b.adjoint();
    Ok((b + bh).map(|z| z * 0.5))
}

/// SVD with U, singular values (non-increasing) and V (not V^H).
pub struct SvdResult {
    pub u: CMat,
    pub singular_values: Vec<f64>,
    pub v: CMat,
}

impl SvdResult {
    pub fn reconstruct(&self) -> CMat {
        let (m, k) = (self.u.nrows(), self.singular_values.len());
        let n = self.v.nrows();
        let mut s = CMat::zeros(k, k);
        for i in 0..k {
            s[(i, i)] = Complex64::new(self.singular_values[i], 0.0);
        }
        let mut out = CMat::zeros(m, n);
        out.gemm(Complex64::new(1.0, 0.0), &(&self.u * s), &self.v.adjoint(), Complex64::new(0.0, 0.0));
        out
    }

    pub fn rank(&self, rel_tol: f64) -> usize {
        let s0 = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values.iter().filter(|&&s| s > rel_tol * s0).count()
    }
}

pub fn svd(a: &CMat) -> Result<SvdResult> {
    let max_dim = a.nrows().max(a.ncols()).max(1);
    let svd = a
        .clone()
        .try_svd(true, true, 1e-12, 100 * max_dim)
        .ok_or_else(|| {
            // crude condition estimate from the norm and the smallest pivot scale
            Error::ConvergenceFailure(frob(a))
        })?;
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].partial_cmp(&svd.singular_values[x]).unwrap());
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut u_s = CMat::zeros(u.nrows(), k);
    let mut v_s = CMat::zeros(v_t.ncols(), k);
    let v = v_t.adjoint();
    for (dst, &src) in order.iter().enumerate() {
        u_s.set_column(dst, &u.column(src));
        v_s.set_column(dst, &v.column(src));
    }
    Ok(SvdResult { u: u_s, singular_values, v: v_s })
}

/// Singular values only, non-increasing.
pub fn singular_values(a: &CMat) -> Result<Vec<f64>> {
    let max_dim = a.nrows().max(a.ncols()).max(1);
    let svd = a
        .clone()
        .try_svd(false, false, 1e-12, 100 * max_dim)
        .ok_or_else(|| Error::ConvergenceFailure(frob(a)))?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(sv)
}

pub fn kronecker(a: &CMat, b: &CMat) -> Result<CMat> {
    let rows = a.nrows().saturating_mul(b.nrows());
    let cols = a.ncols().saturating_mul(b.ncols());
    if rows > KRON_DIM_CAP || cols > KRON_DIM_CAP {
        return Err(Error::DimensionOverflow(rows, cols));
    }
    Ok(a.kronecker(b))
}

/// Deterministic seeded RNG with cheap derivation of independent sub-streams.
#[derive(Clone)]
pub struct SeededRng {
    seed: u64,
    rng: ChaCha8Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derive an independent stream keyed by e.g. (sweep point, trial).
    pub fn derive(&self, keys: &[u64]) -> SeededRng {
        let mut s = splitmix64(self.seed ^ 0xA5A5_5A5A_C3C3_3C3C);
        for &k in keys {
            s = splitmix64(s ^ splitmix64(k));
        }
        SeededRng::new(s)
    }

    pub fn uniform(&mut self) -> f64 {
        use rand::Rng;
        self.rng.gen::<f64>()
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn below(&mut self, n: usize) -> usize {
        use rand::Rng;
        self.rng.gen_range(0..n)
    }

    pub fn sign(&mut self) -> f64 {
        if self.uniform() < 0.5 {
            -1.0
        } else {
            1.0
        }
    }

    /// k distinct values from 0..n, in draw order.
    pub fn distinct(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut picked = Vec::with_capacity(k);
        while picked.len() < k {
            let c = self.below(n);
            if !picked.contains(&c) {
                picked.push(c);
            }
        }
        picked
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}

/// Circularly symmetric complex Gaussian matrix: real and imaginary parts are
/// each N(0, variance/2).
pub fn complex_gaussian(rng: &mut SeededRng, rows: usize, cols: usize, variance: f64) -> CMat {
    let s = (variance / 2.0).sqrt();
    CMat::from_fn(rows, cols, |_, _| {
        let re = s * rng.normal();
        let im = s * rng.normal();
        Complex64::new(re, im)
    })
}

pub fn trace(a: &CMat) -> Complex64 {
    let n = a.nrows().min(a.ncols());
    (0..n).map(|i| a[(i, i)]).sum()
}

/// x^H A x / x^H x
pub fn rayleigh_quotient(a: &CMat, x: &CVec) -> Complex64 {
    let ax = a * x;
    let num: Complex64 = x.dotc(&ax);
    let den: f64 = x.iter().map(|z| z.norm_sqr()).sum();
    num / den
}
