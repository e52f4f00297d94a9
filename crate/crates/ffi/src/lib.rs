//! C ABI over `shockprof`.
//!
//! Every fallible function returns a [`ShockprofStatus`] and writes results
//! through out-pointers. On failure the message is available from
//! [`shockprof_last_error`] on the same thread. Objects created by the
//! library are opaque handles released with their `_free` function; strings
//! returned by the library are released with [`shockprof_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use shockprof::causality::{classify_causality, Causality};
use shockprof::dissipation::{det_b_closed_form, DissipationParams};
use shockprof::dynamics::{find_profile, IntegratorControls, ProfileVerdict, VerdictKind};
use shockprof::error::Error;
use shockprof::hugoniot::shock_states;
use shockprof::sweep::{critical_q, linspace, sweep_q, sweep_to_csv};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShockprofStatus {
    Ok = 0,
    InvalidInput = 1,
    /// The amplitude lies outside (3/4, 1).
    NoShock = 2,
    DegenerateClassification = 3,
    SingularLinearization = 4,
    NumericalFailure = 5,
    NullPointer = 6,
    /// A Rust panic was caught at the boundary.
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShockprofVerdict {
    Exists = 0,
    NotExistsAttractor = 1,
    NotExistsMissed = 2,
    Inconclusive = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShockprofCausalityClass {
    AcausalNonreal = 0,
    AcausalSuperluminal = 1,
    StrictlyCausal = 2,
    SharplyCausal = 3,
}

/// Upstream (`minus`) and downstream (`plus`) states of a normalized shock.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ShockprofShockPair {
    pub v_minus: f64,
    pub theta_minus: f64,
    pub v_plus: f64,
    pub theta_plus: f64,
    pub q0: f64,
    pub q1: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockprofCausalityReport {
    /// Squared characteristic speeds, ascending (real parts if complex).
    pub sigma2_lo: f64,
    pub sigma2_hi: f64,
    pub classification: ShockprofCausalityClass,
    pub pi_at_one: f64,
    pub discriminant: f64,
    /// The closed-form coefficient inequality, for comparison.
    pub inequality_holds: bool,
}

/// Integrator settings; start from [`shockprof_controls_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShockprofControls {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub launch_offset: f64,
    pub convergence_ball: f64,
    pub max_steps: usize,
    pub max_arc_length: f64,
}

/// Opaque dissipation coefficients.
pub struct ShockprofParams(DissipationParams);

/// Opaque result of a profile search.
pub struct ShockprofProfile(ProfileVerdict);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ShockprofStatus {
    match e {
        Error::InvalidInput(_) => ShockprofStatus::InvalidInput,
        Error::NoShock { .. } => ShockprofStatus::NoShock,
        Error::DegenerateClassification(_) => ShockprofStatus::DegenerateClassification,
        Error::SingularLinearization(_) => ShockprofStatus::SingularLinearization,
        Error::NumericalFailure(_) => ShockprofStatus::NumericalFailure,
    }
}

/// Runs `f` behind the panic boundary and records the error message.
fn guard(f: impl FnOnce() -> Result<(), (ShockprofStatus, String)>) -> ShockprofStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ShockprofStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            ShockprofStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (ShockprofStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (ShockprofStatus, String) {
    (ShockprofStatus::NullPointer, format!("{name} is null"))
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, (ShockprofStatus, String)> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn write<T>(p: *mut T, name: &str, value: T) -> Result<(), (ShockprofStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    p.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn shockprof_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn shockprof_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shockprof_params_new(
    eta: f64,
    mu: f64,
    nu: f64,
    out: *mut *mut ShockprofParams,
) -> ShockprofStatus {
    guard(|| {
        let p = DissipationParams::new(eta, mu, nu).map_err(lib_err)?;
        write(out, "out", Box::into_raw(Box::new(ShockprofParams(p))))
    })
}

/// # Safety
/// `params` must come from [`shockprof_params_new`] (or be null) and not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn shockprof_params_free(params: *mut ShockprofParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Threshold `ν*`; writes `found = false` when `3μ ≤ η`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn shockprof_nu_star(
    params: *const ShockprofParams,
    out: *mut f64,
    found: *mut bool,
) -> ShockprofStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let ns = p.0.nu_star();
        write(out, "out", ns.unwrap_or(f64::NAN))?;
        write(found, "found", ns.is_some())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn shockprof_shock_states(
    q_tilde: f64,
    out: *mut ShockprofShockPair,
) -> ShockprofStatus {
    guard(|| {
        let pair = shock_states(q_tilde).map_err(lib_err)?;
        write(
            out,
            "out",
            ShockprofShockPair {
                v_minus: pair.minus.v(),
                theta_minus: pair.minus.theta(),
                v_plus: pair.plus.v(),
                theta_plus: pair.plus.theta(),
                q0: pair.q.q0,
                q1: pair.q.q1,
            },
        )
    })
}

/// Classification by the roots of the dispersion polynomial; `tol` is the
/// luminal tolerance on `max σ²`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn shockprof_causality(
    params: *const ShockprofParams,
    tol: f64,
    out: *mut ShockprofCausalityReport,
) -> ShockprofStatus {
    guard(|| {
        let p = deref(params, "params")?;
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err((
                ShockprofStatus::InvalidInput,
                format!("tolerance {tol} must be nonnegative"),
            ));
        }
        let r = classify_causality(&p.0, tol);
        let [lo, hi] = r.sigma_squared.real_parts();
        let classification = match r.classification {
            Causality::AcausalNonreal => ShockprofCausalityClass::AcausalNonreal,
            Causality::AcausalSuperluminal => ShockprofCausalityClass::AcausalSuperluminal,
            Causality::StrictlyCausal => ShockprofCausalityClass::StrictlyCausal,
            Causality::SharplyCausal => ShockprofCausalityClass::SharplyCausal,
        };
        write(
            out,
            "out",
            ShockprofCausalityReport {
                sigma2_lo: lo,
                sigma2_hi: hi,
                classification,
                pi_at_one: r.pi_at_one,
                discriminant: r.discriminant,
                inequality_holds: r.inequality_holds,
            },
        )
    })
}

/// `det B` at speed `v` (independent of the temperature).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn shockprof_det_b(
    params: *const ShockprofParams,
    v: f64,
    out: *mut f64,
) -> ShockprofStatus {
    guard(|| {
        let p = deref(params, "params")?;
        if !v.is_finite() {
            return Err((
                ShockprofStatus::InvalidInput,
                format!("speed {v} is not finite"),
            ));
        }
        write(out, "out", det_b_closed_form(v * v, &p.0))
    })
}

/// Amplitude of the saddle/attractor transition of the upstream state;
/// `found = false` when there is none.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn shockprof_critical_q(
    params: *const ShockprofParams,
    tol: f64,
    out: *mut f64,
    found: *mut bool,
) -> ShockprofStatus {
    guard(|| {
        let p = deref(params, "params")?;
        if !(tol > 0.0 && tol.is_finite()) {
            return Err((
                ShockprofStatus::InvalidInput,
                format!("tolerance {tol} must be positive"),
            ));
        }
        let q = critical_q(&p.0, tol);
        write(out, "out", q.unwrap_or(f64::NAN))?;
        write(found, "found", q.is_some())
    })
}

#[no_mangle]
pub extern "C" fn shockprof_controls_default() -> ShockprofControls {
    let d = IntegratorControls::default();
    ShockprofControls {
        rel_tol: d.rel_tol,
        abs_tol: d.abs_tol,
        launch_offset: d.launch_offset,
        convergence_ball: d.convergence_ball,
        max_steps: d.max_steps,
        max_arc_length: d.max_arc_length,
    }
}

unsafe fn controls_from(c: *const ShockprofControls) -> IntegratorControls {
    let d = IntegratorControls::default();
    match c.as_ref() {
        None => d,
        Some(c) => IntegratorControls {
            rel_tol: c.rel_tol,
            abs_tol: c.abs_tol,
            launch_offset: c.launch_offset,
            convergence_ball: c.convergence_ball,
            max_steps: c.max_steps,
            max_arc_length: c.max_arc_length,
            ..d
        },
    }
}

/// Runs the profile search. `controls` may be null for the defaults.
///
/// # Safety
/// `params` must be a live handle, `controls` null or valid, `out` valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn shockprof_find_profile(
    params: *const ShockprofParams,
    q_tilde: f64,
    controls: *const ShockprofControls,
    out: *mut *mut ShockprofProfile,
) -> ShockprofStatus {
    guard(|| {
        let p = deref(params, "params")?;
        let c = controls_from(controls);
        let v = find_profile(q_tilde, &p.0, &c).map_err(lib_err)?;
        write(out, "out", Box::into_raw(Box::new(ShockprofProfile(v))))
    })
}

/// # Safety
/// `profile` must come from [`shockprof_find_profile`] (or be null) and not
/// be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn shockprof_profile_free(profile: *mut ShockprofProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn shockprof_profile_verdict(
    profile: *const ShockprofProfile,
    out: *mut ShockprofVerdict,
) -> ShockprofStatus {
    guard(|| {
        let v = deref(profile, "profile")?;
        let k = match v.0.kind() {
            VerdictKind::Exists => ShockprofVerdict::Exists,
            VerdictKind::NotExistsAttractor => ShockprofVerdict::NotExistsAttractor,
            VerdictKind::NotExistsMissed => ShockprofVerdict::NotExistsMissed,
            VerdictKind::Inconclusive => ShockprofVerdict::Inconclusive,
        };
        write(out, "out", k)
    })
}

/// Number of samples of the connecting orbit (0 unless the verdict is
/// `Exists`).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn shockprof_profile_orbit_len(
    profile: *const ShockprofProfile,
    out: *mut usize,
) -> ShockprofStatus {
    guard(|| {
        let v = deref(profile, "profile")?;
        write(out, "out", v.0.orbit().map_or(0, |o| o.samples.len()))
    })
}

/// Sample `index` of the connecting orbit: pseudo-time and `(ψ⁰, ψ¹)`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn shockprof_profile_orbit_sample(
    profile: *const ShockprofProfile,
    index: usize,
    t: *mut f64,
    psi0: *mut f64,
    psi1: *mut f64,
) -> ShockprofStatus {
    guard(|| {
        let v = deref(profile, "profile")?;
        let s =
            v.0.orbit()
                .and_then(|o| o.samples.get(index))
                .ok_or_else(|| {
                    (
                        ShockprofStatus::InvalidInput,
                        format!("no orbit sample {index}"),
                    )
                })?;
        let psi = s.state.psi();
        write(t, "t", s.t)?;
        write(psi0, "psi0", psi[0])?;
        write(psi1, "psi1", psi[1])
    })
}

/// Sweep over `count` evenly spaced amplitudes as CSV text; release with
/// [`shockprof_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn shockprof_sweep_csv(
    params: *const ShockprofParams,
    q_min: f64,
    q_max: f64,
    count: usize,
    out: *mut *mut c_char,
) -> ShockprofStatus {
    guard(|| {
        let p = deref(params, "params")?;
        if !(q_min.is_finite() && q_max.is_finite() && q_min <= q_max) {
            return Err((
                ShockprofStatus::InvalidInput,
                format!("bad amplitude range [{q_min}, {q_max}]"),
            ));
        }
        let rows = sweep_q(
            &p.0,
            &linspace(q_min, q_max, count),
            &IntegratorControls::default(),
        );
        let text = CString::new(sweep_to_csv(&rows)).expect("csv has no NUL");
        write(out, "out", text.into_raw())
    })
}

/// # Safety
/// `s` must come from this library (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn shockprof_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reads the last error as an owned string (test and Rust-caller helper).
pub fn last_error_string() -> Option<String> {
    let p = shockprof_last_error();
    if p.is_null() {
        None
    } else {
        Some(unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
    }
}
