//! Exported C functions: opaque parameter handles plus status codes.

use libc::{c_double, c_int, size_t};

use qrabi::{bgrwa, dynamics, exact, vvp, Error, ModelParams};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QrabiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    DegenerateNorm = 3,
    TruncationTooSmall = 4,
    ResonantDenominator = 5,
    SolverFailure = 6,
    IncompleteBasis = 7,
    InvalidArgument = 8,
}

fn status_of(err: &Error) -> QrabiStatus {
    match err {
        Error::NonPositiveOmega(_)
        | Error::NegativeCoupling(_)
        | Error::NonFiniteInput(_)
        | Error::InvalidFluxParams(_) => QrabiStatus::InvalidParams,
        Error::DegenerateNorm => QrabiStatus::DegenerateNorm,
        Error::TruncationTooSmall { .. } => QrabiStatus::TruncationTooSmall,
        Error::ResonantDenominator { .. } => QrabiStatus::ResonantDenominator,
        Error::EigensolverFailure | Error::NoConvergence(_) => QrabiStatus::SolverFailure,
        Error::IncompleteBasis(_) => QrabiStatus::IncompleteBasis,
        Error::InsufficientLevels { .. } | Error::IndexOrder { .. } => {
            QrabiStatus::InvalidArgument
        }
    }
}

/// Opaque handle around a validated parameter set.
pub struct QrabiParams {
    inner: ModelParams,
}

/// Create a parameter handle; returns NULL on invalid input.
///
/// # Safety
/// The returned pointer must be released with [`qrabi_params_free`].
#[no_mangle]
pub extern "C" fn qrabi_params_new(
    delta: c_double,
    epsilon: c_double,
    omega: c_double,
    g: c_double,
) -> *mut QrabiParams {
    match ModelParams::new(delta, epsilon, omega, g) {
        Ok(inner) => Box::into_raw(Box::new(QrabiParams { inner })),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Release a handle created by [`qrabi_params_new`]. NULL is a no-op.
///
/// # Safety
/// `params` must be a pointer previously returned by `qrabi_params_new`
/// and not freed twice.
#[no_mangle]
pub unsafe extern "C" fn qrabi_params_free(params: *mut QrabiParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

unsafe fn slice_out<'a>(ptr: *mut c_double, len: size_t) -> Option<&'a mut [f64]> {
    if ptr.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts_mut(ptr, len))
    }
}

/// Closed-form ground-state energy.
///
/// # Safety
/// `params` must be a live handle, `out` a writable double.
#[no_mangle]
pub unsafe extern "C" fn qrabi_bgrwa_ground_energy(
    params: *const QrabiParams,
    out: *mut c_double,
) -> QrabiStatus {
    let (Some(p), false) = (params.as_ref(), out.is_null()) else {
        return QrabiStatus::NullPointer;
    };
    *out = bgrwa::ground_energy(&p.inner);
    QrabiStatus::Ok
}

/// Lowest `n_levels` sorted energies of the chosen engine into `out`.
/// `method`: 0 = closed-form, 1 = exact diagonalization.
/// `detail` selects the Van Vleck offset when `method` is 2.
///
/// # Safety
/// `params` must be a live handle and `out` must hold `n_levels` doubles.
#[no_mangle]
pub unsafe extern "C" fn qrabi_levels(
    params: *const QrabiParams,
    method: c_int,
    n_levels: size_t,
    detail: c_int,
    out: *mut c_double,
) -> QrabiStatus {
    let Some(p) = params.as_ref() else {
        return QrabiStatus::NullPointer;
    };
    let Some(out) = slice_out(out, n_levels) else {
        return QrabiStatus::NullPointer;
    };
    if n_levels == 0 {
        return QrabiStatus::InvalidArgument;
    }
    let table = match method {
        0 => bgrwa::spectrum(&p.inner, n_levels),
        1 => exact::spectrum(&p.inner, n_levels, 1e-8),
        2 => {
            if detail < 0 {
                return QrabiStatus::InvalidArgument;
            }
            vvp::vvp_spectrum(&p.inner, n_levels, &vvp::LPolicy::Fixed(detail as usize))
                .map(|s| s.table)
        }
        _ => return QrabiStatus::InvalidArgument,
    };
    match table.and_then(|t| t.sorted_levels(n_levels)) {
        Ok(levels) => {
            out.copy_from_slice(&levels);
            QrabiStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// σz(t) from |↑⟩|0⟩ on a uniform grid of `samples` points over
/// [0, tmax/ω]. `method`: 0 = closed-form expansion, 1 = exact propagator.
/// Writes times to `t_out` and expectations to `s_out` (both `samples`
/// doubles); `completeness_out` may be NULL.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn qrabi_sigma_z_evolution(
    params: *const QrabiParams,
    method: c_int,
    tmax: c_double,
    samples: size_t,
    n_modes: size_t,
    t_out: *mut c_double,
    s_out: *mut c_double,
    completeness_out: *mut c_double,
) -> QrabiStatus {
    let Some(p) = params.as_ref() else {
        return QrabiStatus::NullPointer;
    };
    let (Some(t_out), Some(s_out)) = (slice_out(t_out, samples), slice_out(s_out, samples))
    else {
        return QrabiStatus::NullPointer;
    };
    if samples == 0 || !tmax.is_finite() || tmax < 0.0 {
        return QrabiStatus::InvalidArgument;
    }
    let grid = dynamics::time_grid(tmax, samples);
    let run = || -> qrabi::Result<dynamics::TimeSeries> {
        let n_base = exact::converge(&p.inner, 4, 1e-8)?.n_used;
        match method {
            1 => dynamics::evolve_ed(&p.inner, &grid, n_base),
            0 => {
                let mut n = n_base;
                loop {
                    match dynamics::evolve_bgrwa(&p.inner, &grid, n_modes, n) {
                        Err(Error::TruncationTooSmall { .. }) if n < 4096 => n *= 2,
                        other => break other,
                    }
                }
            }
            _ => Err(Error::InsufficientLevels { have: 0, want: 0 }),
        }
    };
    match run() {
        Ok(ts) => {
            for (i, (tau, s)) in ts.samples.iter().enumerate() {
                t_out[i] = *tau;
                s_out[i] = *s;
            }
            if !completeness_out.is_null() {
                *completeness_out = ts.completeness;
            }
            QrabiStatus::Ok
        }
        Err(e) => {
            if matches!(e, Error::InsufficientLevels { .. }) {
                QrabiStatus::InvalidArgument
            } else {
                status_of(&e)
            }
        }
    }
}

/// Short static description of a status code.
#[no_mangle]
pub extern "C" fn qrabi_status_message(status: QrabiStatus) -> *const libc::c_char {
    let text: &'static [u8] = match status {
        QrabiStatus::Ok => b"ok\0",
        QrabiStatus::NullPointer => b"null pointer argument\0",
        QrabiStatus::InvalidParams => b"invalid model parameters\0",
        QrabiStatus::DegenerateNorm => b"epsilon = delta = 0 is degenerate\0",
        QrabiStatus::TruncationTooSmall => b"Fock truncation too small\0",
        QrabiStatus::ResonantDenominator => b"resonant Van Vleck denominator\0",
        QrabiStatus::SolverFailure => b"eigensolver failure or no convergence\0",
        QrabiStatus::IncompleteBasis => b"retained eigenbasis is incomplete\0",
        QrabiStatus::InvalidArgument => b"invalid argument\0",
    };
    text.as_ptr() as *const libc::c_char
}
