//! C ABI over `mkdv-core`.
//!
//! Every function returns an [`MkdvStatus`]; on failure a message is
//! available from [`mkdv_last_error`] on the same thread. Handles are opaque
//! and owned by the caller, who releases them with the matching `_free`.
//! Panics never cross the boundary: they are reported as `MKDV_STATUS_INTERNAL`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mkdv_core::evolution::{ModelConfig, SimulationState, Solver};
use mkdv_core::fourier_core::sobolev_norm;
use mkdv_core::modified_energy::{EnergyConfig, ModeEnergyPlan};
use mkdv_core::resonance::checked_omega3;
use mkdv_core::{Error, FourierField};
use num_complex::Complex64;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MkdvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    NonHermitian = 3,
    MismatchedModes = 4,
    /// Result does not fit the output type, or a domain violation.
    Domain = 5,
    BlowUp = 6,
    Config = 7,
    Internal = 8,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap_or_default());
}

fn status_of(e: &Error) -> MkdvStatus {
    match e {
        Error::NonHermitian => MkdvStatus::NonHermitian,
        Error::MismatchedModes(..) => MkdvStatus::MismatchedModes,
        Error::Domain(_) => MkdvStatus::Domain,
        Error::BlowUp { .. } => MkdvStatus::BlowUp,
        Error::Config(_) => MkdvStatus::Config,
        _ => MkdvStatus::InvalidInput,
    }
}

fn fail(status: MkdvStatus, msg: impl Into<String>) -> MkdvStatus {
    set_error(msg);
    status
}

fn from_core(e: Error) -> MkdvStatus {
    let s = status_of(&e);
    fail(s, e.to_string())
}

/// Run `f`, converting panics into `Internal`.
fn guard(f: impl FnOnce() -> MkdvStatus) -> MkdvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(MkdvStatus::Internal, "internal panic"),
    }
}

macro_rules! deref {
    ($p:expr) => {
        match unsafe { $p.as_ref() } {
            Some(r) => r,
            None => return fail(MkdvStatus::NullPointer, concat!("null pointer: ", stringify!($p))),
        }
    };
}

macro_rules! deref_mut {
    ($p:expr) => {
        match unsafe { $p.as_mut() } {
            Some(r) => r,
            None => return fail(MkdvStatus::NullPointer, concat!("null pointer: ", stringify!($p))),
        }
    };
}

/// Message of the last failed call on this thread ("" if none). Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mkdv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Real-valued field: Fourier coefficients on |k| ≤ max_mode.
pub struct MkdvField {
    inner: FourierField,
}

/// Zero field. Free with `mkdv_field_free`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mkdv_field_new(max_mode: usize, out: *mut *mut MkdvField) -> MkdvStatus {
    guard(|| {
        let out = deref_mut!(out);
        if max_mode == 0 || max_mode > (1 << 24) {
            return fail(MkdvStatus::InvalidInput, format!("max_mode {max_mode} outside 1..=2^24"));
        }
        *out = Box::into_raw(Box::new(MkdvField { inner: FourierField::zeros(max_mode) }));
        MkdvStatus::Ok
    })
}

/// # Safety
/// `field` must come from `mkdv_field_new` (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mkdv_field_free(field: *mut MkdvField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mkdv_field_max_mode(field: *const MkdvField, out: *mut usize) -> MkdvStatus {
    guard(|| {
        *deref_mut!(out) = deref!(field).inner.max_mode();
        MkdvStatus::Ok
    })
}

/// Set û(k) = re + i·im and û(−k) to its conjugate (im must be 0 for k = 0).
///
/// # Safety
/// `field` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mkdv_field_set(field: *mut MkdvField, k: i64, re: f64, im: f64) -> MkdvStatus {
    guard(|| {
        let f = deref_mut!(field);
        let km = f.inner.max_mode() as i64;
        if k.checked_abs().map_or(true, |a| a > km) {
            return fail(MkdvStatus::InvalidInput, format!("mode {k} outside ±{km}"));
        }
        if !(re.is_finite() && im.is_finite()) {
            return fail(MkdvStatus::InvalidInput, "coefficient is not finite");
        }
        if k == 0 && im != 0.0 {
            return fail(MkdvStatus::NonHermitian, "mode 0 of a real field must be real");
        }
        f.inner.set_pair(k, Complex64::new(re, im));
        MkdvStatus::Ok
    })
}

/// û(k); zero for |k| > max_mode.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mkdv_field_get(field: *const MkdvField, k: i64, re: *mut f64, im: *mut f64) -> MkdvStatus {
    guard(|| {
        let f = deref!(field);
        let (re, im) = (deref_mut!(re), deref_mut!(im));
        let c = f.inner.get(k);
        *re = c.re;
        *im = c.im;
        MkdvStatus::Ok
    })
}

/// ‖u‖_{H^s} = (Σ ⟨k⟩^{2s}|û(k)|²)^{1/2}.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mkdv_field_sobolev_norm(field: *const MkdvField, s: f64, out: *mut f64) -> MkdvStatus {
    guard(|| {
        let f = deref!(field);
        if !s.is_finite() {
            return fail(MkdvStatus::InvalidInput, "s must be finite");
        }
        *deref_mut!(out) = sobolev_norm(&f.inner, s);
        MkdvStatus::Ok
    })
}

/// Ω₃ = −3(k₁+k₂)(k₁+k₃)(k₂+k₃); `Domain` if it does not fit in i64.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mkdv_omega3(k1: i64, k2: i64, k3: i64, out: *mut i64) -> MkdvStatus {
    guard(|| {
        let out = deref_mut!(out);
        match checked_omega3(k1, k2, k3).and_then(|w| i64::try_from(w).ok()) {
            Some(w) => {
                *out = w;
                MkdvStatus::Ok
            }
            None => fail(MkdvStatus::Domain, "omega3 overflows i64"),
        }
    })
}

/// Model parameters; see `mkdv_model_default`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct MkdvModel {
    /// ±1 in front of the nonlinearity.
    pub sign: i8,
    pub renormalized: bool,
    pub max_mode: usize,
    pub dt: f64,
    pub t_final: f64,
    pub dealias: bool,
}

impl From<MkdvModel> for ModelConfig {
    fn from(m: MkdvModel) -> Self {
        ModelConfig {
            sign: m.sign,
            renormalized: m.renormalized,
            max_mode: m.max_mode,
            dt: m.dt,
            t_final: m.t_final,
            dealias: m.dealias,
            ..Default::default()
        }
    }
}

#[no_mangle]
pub extern "C" fn mkdv_model_default() -> MkdvModel {
    let m = ModelConfig::default();
    MkdvModel {
        sign: m.sign,
        renormalized: m.renormalized,
        max_mode: m.max_mode,
        dt: m.dt,
        t_final: m.t_final,
        dealias: m.dealias,
    }
}

/// Time stepper with its current state.
pub struct MkdvSimulation {
    solver: Solver,
    state: SimulationState,
    steps: u64,
}

/// Start a simulation at t = 0 from a copy of `u0`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mkdv_sim_new(
    model: *const MkdvModel,
    u0: *const MkdvField,
    out: *mut *mut MkdvSimulation,
) -> MkdvStatus {
    guard(|| {
        let (model, u0, out) = (deref!(model), deref!(u0), deref_mut!(out));
        let cfg = ModelConfig::from(*model);
        let solver = match Solver::new(&cfg) {
            Ok(s) => s,
            Err(e) => return from_core(e),
        };
        if u0.inner.max_mode() != cfg.max_mode {
            return from_core(Error::MismatchedModes(u0.inner.max_mode(), cfg.max_mode));
        }
        if !u0.inner.is_hermitian() {
            return from_core(Error::NonHermitian);
        }
        *out = Box::into_raw(Box::new(MkdvSimulation {
            solver,
            state: SimulationState::initial(u0.inner.clone()),
            steps: 0,
        }));
        MkdvStatus::Ok
    })
}

/// # Safety
/// `sim` must come from `mkdv_sim_new` (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn mkdv_sim_free(sim: *mut MkdvSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Advance `n` steps of size dt. On blow-up the state stays at the last
/// finite step and `BlowUp` is returned.
///
/// # Safety
/// `sim` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mkdv_sim_step(sim: *mut MkdvSimulation, n: usize) -> MkdvStatus {
    guard(|| {
        let sim = deref_mut!(sim);
        let dt = sim.solver.model().dt;
        for _ in 0..n {
            match sim.solver.step(&sim.state) {
                Ok(mut s) => {
                    sim.steps += 1;
                    s.t = sim.steps as f64 * dt;
                    sim.state = s;
                }
                Err(e) => return from_core(e),
            }
        }
        MkdvStatus::Ok
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mkdv_sim_time(sim: *const MkdvSimulation, out: *mut f64) -> MkdvStatus {
    guard(|| {
        *deref_mut!(out) = deref!(sim).state.t;
        MkdvStatus::Ok
    })
}

/// Copy the current field into `dest`, which must have the model's max_mode.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mkdv_sim_copy_field(sim: *const MkdvSimulation, dest: *mut MkdvField) -> MkdvStatus {
    guard(|| {
        let (sim, dest) = (deref!(sim), deref_mut!(dest));
        if dest.inner.max_mode() != sim.state.field.max_mode() {
            return from_core(Error::MismatchedModes(dest.inner.max_mode(), sim.state.field.max_mode()));
        }
        dest.inner = sim.state.field.clone();
        MkdvStatus::Ok
    })
}

/// Modified-energy parameters; see `mkdv_energy_config_default`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct MkdvEnergyConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub ll_ratio: f64,
    pub k_threshold: i64,
    pub sign: i8,
}

impl From<MkdvEnergyConfig> for EnergyConfig {
    fn from(c: MkdvEnergyConfig) -> Self {
        EnergyConfig {
            alpha: c.alpha,
            beta: c.beta,
            gamma: c.gamma,
            theta1: c.theta1,
            theta2: c.theta2,
            ll_ratio: c.ll_ratio,
            k_threshold: c.k_threshold,
            sign: c.sign,
        }
    }
}

#[no_mangle]
pub extern "C" fn mkdv_energy_config_default() -> MkdvEnergyConfig {
    let c = EnergyConfig::default();
    MkdvEnergyConfig {
        alpha: c.alpha,
        beta: c.beta,
        gamma: c.gamma,
        theta1: c.theta1,
        theta2: c.theta2,
        ll_ratio: c.ll_ratio,
        k_threshold: c.k_threshold,
        sign: c.sign,
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct MkdvEnergyReport {
    pub k: i64,
    pub quadratic: f64,
    pub e31: f64,
    pub e32: f64,
    pub e5: f64,
    pub total: f64,
}

/// Modified energy of mode k (1 ≤ k ≤ max_mode) and its pieces.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mkdv_energy_mode(
    field: *const MkdvField,
    k: i64,
    config: *const MkdvEnergyConfig,
    out: *mut MkdvEnergyReport,
) -> MkdvStatus {
    guard(|| {
        let (f, cfg, out) = (deref!(field), deref!(config), deref_mut!(out));
        let r = ModeEnergyPlan::new(k, f.inner.max_mode(), &EnergyConfig::from(*cfg)).and_then(|p| p.eval(&f.inner));
        match r {
            Ok(r) => {
                *out = MkdvEnergyReport {
                    k: r.k,
                    quadratic: r.quadratic,
                    e31: r.e31,
                    e32: r.e32,
                    e5: r.e5,
                    total: r.total,
                };
                MkdvStatus::Ok
            }
            Err(e) => from_core(e),
        }
    })
}
