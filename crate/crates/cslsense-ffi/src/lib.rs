//! C ABI over the compressive subspace sensing library. Handles are opaque,
//! every call returns a status code, and the last failure message is kept in
//! thread-local storage for retrieval with `cslsense_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cslsense::csl::{Algorithm, RankRule};
use cslsense::harness::run_trial;
use cslsense::numerics::SeededRng;
use cslsense::sampler::{build_random_demodulator, MeasurementOperator};
use cslsense::scenario::ScenarioConfig;
use cslsense::theory;
use num_complex::Complex64;

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CslStatus {
    CslOk = 0,
    CslNullPointer = 1,
    CslInvalidArgument = 2,
    CslComputeError = 3,
    CslBufferTooSmall = 4,
    CslPanic = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Message for the most recent failure on this thread. Valid until the next
/// failing call; never null.
#[no_mangle]
pub extern "C" fn cslsense_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cslsense_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

fn guarded<F: FnOnce() -> CslStatus>(f: F) -> CslStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            CslStatus::CslPanic
        }
    }
}

fn write_out(out: *mut f64, value: f64) -> CslStatus {
    if out.is_null() {
        set_error("null output pointer");
        return CslStatus::CslNullPointer;
    }
    unsafe { *out = value };
    CslStatus::CslOk
}

fn from_result(r: cslsense::Result<f64>, out: *mut f64) -> CslStatus {
    match r {
        Ok(v) => write_out(out, v),
        Err(e) => {
            set_error(&e.to_string());
            CslStatus::CslInvalidArgument
        }
    }
}

/// Closed-form amplification of a single cross-correlation at shift `r`.
#[no_mangle]
pub extern "C" fn cslsense_gain_single_shift(
    i: usize,
    j: usize,
    r: i64,
    rho_abs: f64,
    rho_phase: f64,
    out: *mut f64,
) -> CslStatus {
    guarded(|| {
        let rho = Complex64::from_polar(rho_abs, rho_phase);
        from_result(theory::gain_mcslacc(i, j, r, rho), out)
    })
}

/// Closed-form amplification of the shift-summed cross-correlation.
#[no_mangle]
pub extern "C" fn cslsense_gain_shift_sum(
    i: usize,
    j: usize,
    m: usize,
    rho_abs: f64,
    rho_phase: f64,
    out: *mut f64,
) -> CslStatus {
    guarded(|| {
        let rho = Complex64::from_polar(rho_abs, rho_phase);
        from_result(theory::gain_mcslsacc(i, j, m, rho), out)
    })
}

/// Peak singular value of the correlation block for sub-array (i, j) at
/// shift `r` inside an `m`-antenna array.
#[no_mangle]
pub extern "C" fn cslsense_sigma_max(
    i: usize,
    j: usize,
    r: i64,
    m: usize,
    rho_abs: f64,
    rho_phase: f64,
    out: *mut f64,
) -> CslStatus {
    guarded(|| {
        let rho = Complex64::from_polar(rho_abs, rho_phase);
        from_result(theory::sigma_max_block(i, j, r, rho, m), out)
    })
}

fn from_bounds(
    r: cslsense::Result<(f64, f64)>,
    out_lower: *mut f64,
    out_upper: *mut f64,
) -> CslStatus {
    match r {
        Ok((lo, hi)) => {
            let s = write_out(out_lower, lo);
            if s != CslStatus::CslOk {
                return s;
            }
            write_out(out_upper, hi)
        }
        Err(e) => {
            set_error(&e.to_string());
            CslStatus::CslInvalidArgument
        }
    }
}

/// Bounds on the stacked-block peak singular value at zero shift.
#[no_mangle]
pub extern "C" fn cslsense_bounds_zero_shift(
    i: usize,
    j: usize,
    rho_abs: f64,
    rho_phase: f64,
    out_lower: *mut f64,
    out_upper: *mut f64,
) -> CslStatus {
    guarded(|| {
        let rho = Complex64::from_polar(rho_abs, rho_phase);
        from_bounds(theory::bounds_vcslacc_r0(i, j, rho), out_lower, out_upper)
    })
}

/// Bounds in the rank-one shift range r >= j - i; the lower bound is exact.
#[no_mangle]
pub extern "C" fn cslsense_bounds_rank_one(
    i: usize,
    j: usize,
    r: i64,
    rho_abs: f64,
    rho_phase: f64,
    out_lower: *mut f64,
    out_upper: *mut f64,
) -> CslStatus {
    guarded(|| {
        let rho = Complex64::from_polar(rho_abs, rho_phase);
        from_bounds(
            theory::bounds_vcslacc_noisefree(i, j, r, rho),
            out_lower,
            out_upper,
        )
    })
}

/// Scenario description for a sensing session. Transmit powers are all one.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct CslScenarioParams {
    /// receive antenna count
    pub m: usize,
    /// active primary user count
    pub k: usize,
    /// monitored bandwidth, Hz
    pub w_hz: f64,
    /// per-user bandwidth, Hz
    pub b_hz: f64,
    /// Nyquist samples per segment
    pub q: usize,
    /// segments per sensing period
    pub l: usize,
    /// antenna correlation magnitude and phase
    pub rho_abs: f64,
    pub rho_phase: f64,
    /// per-antenna SNR in dB
    pub snr_db: f64,
    /// sub-Nyquist compression factor (must divide q)
    pub compression: usize,
    /// sub-array bounds, 1-based, 1 <= i <= j <= m
    pub i: usize,
    pub j: usize,
    /// root seed for the operator and all trials
    pub seed: u64,
}

/// Opaque sensing session: a fixed scenario, a fixed measurement operator,
/// and a deterministic per-trial random stream.
pub struct CslSession {
    cfg: ScenarioConfig,
    op: MeasurementOperator,
    i: usize,
    j: usize,
    rule: RankRule,
    sparsity_cap: usize,
    root: SeededRng,
    trial: u64,
}

const TAG_OPERATOR: u64 = 1;
const TAG_TRIAL: u64 = 2;

/// Create a session. Returns null on invalid parameters; the reason is
/// available from `cslsense_last_error`. Free with `cslsense_session_free`.
///
/// # Safety
/// `params` must be null or point to a valid `CslScenarioParams`.
#[no_mangle]
pub unsafe extern "C" fn cslsense_session_new(
    params: *const CslScenarioParams,
) -> *mut CslSession {
    let result = catch_unwind(|| {
        if params.is_null() {
            set_error("null params");
            return std::ptr::null_mut();
        }
        let p = unsafe { *params };
        let cfg = ScenarioConfig {
            m: p.m,
            k: p.k,
            w_hz: p.w_hz,
            b_hz: p.b_hz,
            q: p.q,
            l: p.l,
            rho: Complex64::from_polar(p.rho_abs, p.rho_phase),
            snr_db: p.snr_db,
            tx_powers: vec![1.0; p.k],
            seed: p.seed,
        };
        if let Err(e) = cfg.validate() {
            set_error(&e.to_string());
            return std::ptr::null_mut();
        }
        if p.compression == 0 || p.q % p.compression != 0 {
            set_error("compression must be positive and divide q");
            return std::ptr::null_mut();
        }
        if p.i < 1 || p.i > p.j || p.j > p.m {
            set_error("sub-array bounds must satisfy 1 <= i <= j <= m");
            return std::ptr::null_mut();
        }
        let root = SeededRng::new(p.seed);
        let mut op_rng = root.derive(&[TAG_OPERATOR, 0]);
        let op = match build_random_demodulator(p.q / p.compression, p.q, &mut op_rng) {
            Ok(op) => op,
            Err(e) => {
                set_error(&e.to_string());
                return std::ptr::null_mut();
            }
        };
        let sparsity_cap = (p.k * cfg.bins_per_band()).max(1).min(p.q / p.compression - 1);
        Box::into_raw(Box::new(CslSession {
            cfg,
            op,
            i: p.i,
            j: p.j,
            rule: RankRule::default(),
            sparsity_cap,
            root,
            trial: 0,
        }))
    });
    match result {
        Ok(ptr) => ptr,
        Err(_) => {
            set_error("internal panic");
            std::ptr::null_mut()
        }
    }
}

/// Number of bands the session senses; band statistics buffers must hold
/// this many values.
///
/// # Safety
/// `session` must be null or a live handle from `cslsense_session_new`.
#[no_mangle]
pub unsafe extern "C" fn cslsense_session_band_count(session: *const CslSession) -> usize {
    if session.is_null() {
        return 0;
    }
    unsafe { &*session }.cfg.band_count()
}

/// Run one sensing trial with the named recovery variant (for example
/// "mcslsacc" or "tmacsl"). Writes one energy statistic per band into
/// `stats`, and the indices of the truly occupied bands into `support`
/// (exactly k entries). Each call advances the trial counter, so repeated
/// calls walk a deterministic Monte Carlo stream.
///
/// # Safety
/// `session` must be a live handle, `algorithm` a null-terminated string,
/// and the output pointers must reference buffers of the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn cslsense_session_sense(
    session: *mut CslSession,
    algorithm: *const c_char,
    stats: *mut f64,
    stats_len: usize,
    support: *mut usize,
    support_len: usize,
) -> CslStatus {
    guarded(|| {
        if session.is_null() || algorithm.is_null() {
            set_error("null session or algorithm");
            return CslStatus::CslNullPointer;
        }
        let s = unsafe { &mut *session };
        let name = match unsafe { std::ffi::CStr::from_ptr(algorithm) }.to_str() {
            Ok(n) => n,
            Err(_) => {
                set_error("algorithm name is not valid UTF-8");
                return CslStatus::CslInvalidArgument;
            }
        };
        let alg = match Algorithm::parse(name) {
            Ok(a) => a,
            Err(e) => {
                set_error(&e.to_string());
                return CslStatus::CslInvalidArgument;
            }
        };
        let bands = s.cfg.band_count();
        if stats.is_null() || support.is_null() {
            set_error("null output buffer");
            return CslStatus::CslNullPointer;
        }
        if stats_len < bands || support_len < s.cfg.k {
            set_error("output buffer too small");
            return CslStatus::CslBufferTooSmall;
        }
        let mut rng = s.root.derive(&[TAG_TRIAL, 0, s.trial]);
        s.trial += 1;
        let out = match run_trial(
            &s.cfg,
            &s.op,
            s.i,
            s.j,
            std::slice::from_ref(&alg),
            &s.rule,
            s.sparsity_cap,
            &mut rng,
            false,
        ) {
            Ok(o) => o,
            Err(e) => {
                set_error(&e.to_string());
                return CslStatus::CslComputeError;
            }
        };
        let alg_stats = &out.per_alg_stats[0];
        for (n, &v) in alg_stats.iter().enumerate() {
            unsafe { *stats.add(n) = v };
        }
        let mut truth = out.support.clone();
        truth.sort_unstable();
        for (n, &b) in truth.iter().enumerate() {
            unsafe { *support.add(n) = b };
        }
        CslStatus::CslOk
    })
}

/// Reset the per-trial stream so the next sense call repeats trial zero.
///
/// # Safety
/// `session` must be null or a live handle from `cslsense_session_new`.
#[no_mangle]
pub unsafe extern "C" fn cslsense_session_reset(session: *mut CslSession) -> CslStatus {
    if session.is_null() {
        set_error("null session");
        return CslStatus::CslNullPointer;
    }
    unsafe { &mut *session }.trial = 0;
    CslStatus::CslOk
}

/// Destroy a session created by `cslsense_session_new`. Null is a no-op.
///
/// # Safety
/// `session` must be null or a live handle, and must not be used afterward.
#[no_mangle]
pub unsafe extern "C" fn cslsense_session_free(session: *mut CslSession) {
    if !session.is_null() {
        drop(unsafe { Box::from_raw(session) });
    }
}
