//! C ABI over `unruh_qfi`.
//!
//! Conventions:
//! - every fallible function returns a [`UqStatus`]; on anything other than
//!   `UQ_STATUS_OK` the out-parameters are left untouched and
//!   [`uq_last_error_message`] describes the failure (per thread);
//! - channels and sweeps are opaque handles created by `*_new` functions and
//!   released with the matching `*_free`, which accepts NULL;
//! - enumerated inputs are plain `uint32_t` codes (`UQ_PARAM_*`, `UQ_NORM_*`,
//!   `UQ_METHOD_*`, `UQ_MODE_*`, `UQ_PRESET_*`) and are range-checked;
//! - matrices are written row-major into caller-provided arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use unruh_qfi::channel::{validate_physical, ChannelPreset, CorrelationDyadic};
use unruh_qfi::fisher::{fisher, DerivativeMethod, EstimandParam, NormalizationMode};
use unruh_qfi::sweep::{run_sweep, FigurePreset, SweepRow};
use unruh_qfi::teleport::{teleport_analytic, InputState};
use unruh_qfi::unruh::{accelerate, r_from_acceleration, ModePreset, UnruhParams};
use unruh_qfi::Error;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UqStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// An enumerated code or string argument is not recognized.
    InvalidArgument = 2,
    /// A numeric argument lies outside its domain.
    Domain = 3,
    /// The two-qubit state has a negative eigenvalue.
    UnphysicalChannel = 4,
    /// The measurement branch has zero probability.
    DegenerateBranch = 5,
    /// An internal consistency check failed (Bloch vector or Fisher value).
    Numerical = 6,
    /// A sweep row index is past the end.
    OutOfRange = 7,
    /// A Rust panic was caught at the boundary.
    Panic = 8,
}

pub const UQ_PARAM_THETA: u32 = 0;
pub const UQ_PARAM_PHI: u32 = 1;
pub const UQ_PARAM_R: u32 = 2;

pub const UQ_NORM_NORMALIZED: u32 = 0;
pub const UQ_NORM_AS_PUBLISHED: u32 = 1;

pub const UQ_METHOD_ANALYTIC: u32 = 0;
pub const UQ_METHOD_FINITE_DIFFERENCE: u32 = 1;

pub const UQ_MODE_WSMA: u32 = 0;
pub const UQ_MODE_BSMA: u32 = 1;

pub const UQ_PRESET_BELL_PHI_PLUS: u32 = 0;
pub const UQ_PRESET_BELL_PSI_MINUS: u32 = 1;
/// Werner state; the fidelity argument of [`uq_channel_new_preset`] applies.
pub const UQ_PRESET_WERNER: u32 = 2;
/// The X-state used by the figure presets, (-0.9, -0.8, -0.7).
pub const UQ_PRESET_FIGURE_X_STATE: u32 = 3;

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UqComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for UqComplex {
    fn from(z: Complex64) -> Self {
        UqComplex { re: z.re, im: z.im }
    }
}

impl From<UqComplex> for Complex64 {
    fn from(z: UqComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Bob's state after Alice measures 00.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct UqBobState {
    /// Unnormalized branch state, row-major; its trace is `outcome_prob`.
    pub rho: [UqComplex; 4],
    pub rho_normalized: [UqComplex; 4],
    pub outcome_prob: f64,
    /// Bloch vector (x, y, z) of `rho_normalized`.
    pub bloch: [f64; 3],
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct UqFisherResult {
    pub value: f64,
    /// The state was pure to within 1e-9 and the pure-state formula was used.
    pub pure_branch_taken: bool,
    /// A rounding-level negative value was clamped to zero.
    pub clamped: bool,
}

/// Shared two-qubit state plus the mode weights of Bob's excitation.
pub struct UqChannel {
    dyadic: CorrelationDyadic,
    q_r: Complex64,
    q_l: Complex64,
}

/// Evaluated figure-preset grid.
pub struct UqSweep {
    axes: usize,
    rows: Vec<SweepRow>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
}

struct Failure(UqStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let status = match err {
            Error::Domain { .. } | Error::Spec(_) => UqStatus::Domain,
            Error::Parse { .. } => UqStatus::InvalidArgument,
            Error::UnphysicalChannel(_) => UqStatus::UnphysicalChannel,
            Error::DegenerateBranch(_) => UqStatus::DegenerateBranch,
            _ => UqStatus::Numerical,
        };
        Failure(status, err.to_string())
    }
}

type Outcome<T> = Result<T, Failure>;

fn invalid(what: &str, code: u32) -> Failure {
    Failure(UqStatus::InvalidArgument, format!("unknown {what} code {code}"))
}

fn null(name: &str) -> Failure {
    Failure(UqStatus::NullPointer, format!("{name} is NULL"))
}

/// Runs `body` behind a panic guard and records the error message.
fn guard(body: impl FnOnce() -> Outcome<()>) -> UqStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => UqStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("panic inside unruh-qfi");
            UqStatus::Panic
        }
    }
}

fn out_ref<'a, T>(ptr: *mut T, name: &str) -> Outcome<&'a mut T> {
    // SAFETY: callers promise that non-NULL out pointers are valid and aligned.
    unsafe { ptr.as_mut() }.ok_or_else(|| null(name))
}

fn channel_ref<'a>(ptr: *const UqChannel) -> Outcome<&'a UqChannel> {
    // SAFETY: non-NULL handles come from `uq_channel_new*` and are live.
    unsafe { ptr.as_ref() }.ok_or_else(|| null("channel"))
}

fn param(code: u32) -> Outcome<EstimandParam> {
    match code {
        UQ_PARAM_THETA => Ok(EstimandParam::Theta),
        UQ_PARAM_PHI => Ok(EstimandParam::Phi),
        UQ_PARAM_R => Ok(EstimandParam::UnruhR),
        _ => Err(invalid("estimand", code)),
    }
}

fn norm(code: u32) -> Outcome<NormalizationMode> {
    match code {
        UQ_NORM_NORMALIZED => Ok(NormalizationMode::Normalized),
        UQ_NORM_AS_PUBLISHED => Ok(NormalizationMode::AsPublished),
        _ => Err(invalid("normalization", code)),
    }
}

fn method(code: u32) -> Outcome<DerivativeMethod> {
    match code {
        UQ_METHOD_ANALYTIC => Ok(DerivativeMethod::Analytic),
        UQ_METHOD_FINITE_DIFFERENCE => Ok(DerivativeMethod::FD),
        _ => Err(invalid("derivative method", code)),
    }
}

fn mode(code: u32) -> Outcome<ModePreset> {
    match code {
        UQ_MODE_WSMA => Ok(ModePreset::Wsma),
        UQ_MODE_BSMA => Ok(ModePreset::Bsma),
        _ => Err(invalid("mode", code)),
    }
}

impl UqChannel {
    fn new(dyadic: CorrelationDyadic) -> Self {
        let (q_r, q_l) = ModePreset::Wsma.weights();
        UqChannel { dyadic, q_r, q_l }
    }

    fn unruh(&self, r: f64) -> Outcome<UnruhParams> {
        Ok(UnruhParams::new(r, self.q_r, self.q_l)?)
    }

    fn physical(&self) -> Outcome<CorrelationDyadic> {
        let physicality = validate_physical(&self.dyadic);
        if !physicality.physical {
            return Err(Error::UnphysicalChannel(physicality.min_eigenvalue).into());
        }
        Ok(self.dyadic)
    }
}

fn out_slice<'a>(ptr: *mut UqComplex, len: usize) -> Outcome<&'a mut [UqComplex]> {
    if ptr.is_null() {
        return Err(null("out"));
    }
    // SAFETY: callers promise `len` writable, aligned values at `ptr`.
    Ok(unsafe { std::slice::from_raw_parts_mut(ptr, len) })
}

fn write_matrix(out: &mut [UqComplex], values: impl IntoIterator<Item = Complex64>) {
    for (slot, z) in out.iter_mut().zip(values) {
        *slot = z.into();
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn uq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buffer` (always
/// NUL-terminated when `len > 0`) and returns the full message length in
/// bytes, excluding the terminator. Pass `buffer = NULL` to query the length.
///
/// # Safety
/// `buffer` must be NULL or point to at least `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn uq_last_error_message(buffer: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let message = slot.borrow();
        let bytes = message.as_bytes();
        if !buffer.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            // SAFETY: the caller guarantees `len` writable bytes at `buffer`.
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buffer, n);
                *buffer.add(n) = 0;
            }
        }
        bytes.len()
    })
}

/// Creates a channel from correlation coefficients, each in [-1, 1]. The
/// state is not required to be physical here; evaluation functions reject
/// unphysical channels. Mode weights start as the single-mode pair.
///
/// # Safety
/// `out` must be NULL or a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn uq_channel_new(c11: f64, c22: f64, c33: f64, out: *mut *mut UqChannel) -> UqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let dyadic = CorrelationDyadic::new(c11, c22, c33)?;
        *out = Box::into_raw(Box::new(UqChannel::new(dyadic)));
        Ok(())
    })
}

/// Creates a channel from a `UQ_PRESET_*` code. `fidelity` is only read for
/// `UQ_PRESET_WERNER`.
///
/// # Safety
/// `out` must be NULL or a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn uq_channel_new_preset(preset: u32, fidelity: f64, out: *mut *mut UqChannel) -> UqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let preset = match preset {
            UQ_PRESET_BELL_PHI_PLUS => ChannelPreset::BellPhiPlus,
            UQ_PRESET_BELL_PSI_MINUS => ChannelPreset::BellPsiMinus,
            UQ_PRESET_WERNER => ChannelPreset::Werner { f: fidelity },
            UQ_PRESET_FIGURE_X_STATE => ChannelPreset::FIGURE_X_STATE,
            code => return Err(invalid("preset", code)),
        };
        *out = Box::into_raw(Box::new(UqChannel::new(preset.dyadic()?)));
        Ok(())
    })
}

/// Releases a channel. NULL is ignored.
///
/// # Safety
/// `channel` must be NULL or a handle from `uq_channel_new*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn uq_channel_free(channel: *mut UqChannel) {
    if !channel.is_null() {
        // SAFETY: the handle was produced by `Box::into_raw` and is freed once.
        drop(unsafe { Box::from_raw(channel) });
    }
}

/// Selects the single-mode (`UQ_MODE_WSMA`) or symmetric (`UQ_MODE_BSMA`) weights.
///
/// # Safety
/// `channel` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn uq_channel_set_mode(channel: *mut UqChannel, mode_code: u32) -> UqStatus {
    guard(|| {
        let channel = out_ref(channel, "channel")?;
        (channel.q_r, channel.q_l) = mode(mode_code)?.weights();
        Ok(())
    })
}

/// Sets explicit mode weights; |qR|^2 + |qL|^2 must be 1.
///
/// # Safety
/// `channel` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn uq_channel_set_weights(channel: *mut UqChannel, q_r: UqComplex, q_l: UqComplex) -> UqStatus {
    guard(|| {
        let channel = out_ref(channel, "channel")?;
        let params = UnruhParams::new(0.0, q_r.into(), q_l.into())?;
        channel.q_r = params.q_r();
        channel.q_l = params.q_l();
        Ok(())
    })
}

/// Reports whether the unaccelerated state is positive semidefinite and its
/// smallest eigenvalue.
///
/// # Safety
/// `channel` must be NULL or a live handle; out pointers NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn uq_channel_physicality(
    channel: *const UqChannel,
    physical: *mut bool,
    min_eigenvalue: *mut f64,
) -> UqStatus {
    guard(|| {
        let channel = channel_ref(channel)?;
        let (physical, min_eigenvalue) = (out_ref(physical, "physical")?, out_ref(min_eigenvalue, "min_eigenvalue")?);
        let p = validate_physical(&channel.dyadic);
        *physical = p.physical;
        *min_eigenvalue = p.min_eigenvalue;
        Ok(())
    })
}

/// Accelerated coefficients B1..B8 at Unruh parameter `r`.
///
/// # Safety
/// `channel` must be NULL or a live handle; `out` NULL or 8 writable values.
#[no_mangle]
pub unsafe extern "C" fn uq_channel_coefficients(channel: *const UqChannel, r: f64, out: *mut UqComplex) -> UqStatus {
    guard(|| {
        let channel = channel_ref(channel)?;
        let out = out_slice(out, 8)?;
        write_matrix(out, accelerate(&channel.dyadic, &channel.unruh(r)?).coefficients());
        Ok(())
    })
}

/// Accelerated 4x4 density matrix at `r`, row-major in the basis
/// |00>, |01>, |10>, |11> with Alice's qubit first.
///
/// # Safety
/// `channel` must be NULL or a live handle; `out` NULL or 16 writable values.
#[no_mangle]
pub unsafe extern "C" fn uq_channel_density(channel: *const UqChannel, r: f64, out: *mut UqComplex) -> UqStatus {
    guard(|| {
        let channel = channel_ref(channel)?;
        let out = out_slice(out, 16)?;
        let rho = accelerate(&channel.dyadic, &channel.unruh(r)?).density();
        write_matrix(out, rho.transpose().iter().copied());
        Ok(())
    })
}

/// Teleports cos(theta/2)|0> + sin(theta/2) e^{i phi}|1> through the channel
/// accelerated to `r` and returns Bob's state for Alice's 00 outcome.
///
/// # Safety
/// `channel` must be NULL or a live handle; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn uq_teleport(
    channel: *const UqChannel,
    theta: f64,
    phi: f64,
    r: f64,
    out: *mut UqBobState,
) -> UqStatus {
    guard(|| {
        let channel = channel_ref(channel)?;
        let out = out_ref(out, "out")?;
        let input = InputState::new(theta, phi)?;
        let bob = teleport_analytic(&input, &accelerate(&channel.physical()?, &channel.unruh(r)?))?;
        let s = bob.bloch();
        let mut state = UqBobState {
            outcome_prob: bob.outcome_prob,
            bloch: [s.x, s.y, s.z],
            ..UqBobState::default()
        };
        write_matrix(&mut state.rho, bob.rho.transpose().iter().copied());
        write_matrix(&mut state.rho_normalized, bob.rho_normalized.transpose().iter().copied());
        *out = state;
        Ok(())
    })
}

/// Quantum Fisher information about `param_code` (`UQ_PARAM_*`) at one point.
///
/// # Safety
/// `channel` must be NULL or a live handle; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn uq_fisher(
    channel: *const UqChannel,
    theta: f64,
    phi: f64,
    r: f64,
    param_code: u32,
    norm_code: u32,
    method_code: u32,
    out: *mut UqFisherResult,
) -> UqStatus {
    guard(|| {
        let channel = channel_ref(channel)?;
        let out = out_ref(out, "out")?;
        let input = InputState::new(theta, phi)?;
        let result = fisher(
            &input,
            &channel.physical()?,
            &channel.unruh(r)?,
            norm(norm_code)?,
            param(param_code)?,
            method(method_code)?,
        )?;
        *out = UqFisherResult {
            value: result.value,
            pure_branch_taken: result.pure_branch_taken,
            clamped: result.clamped,
        };
        Ok(())
    })
}

/// Unruh parameter r = arctan(exp(-pi omega c / a)); `accel = 0` gives 0.
///
/// # Safety
/// `out` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn uq_r_from_acceleration(omega: f64, accel: f64, c: f64, out: *mut f64) -> UqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = r_from_acceleration(omega, accel, c)?;
        Ok(())
    })
}

/// Evaluates a figure-panel dataset. `id` is a panel such as "1a" or "6d";
/// `grid` is the point count per axis (at least 2); `norm_code` selects the
/// normalization (the figures use `UQ_NORM_AS_PUBLISHED`).
///
/// # Safety
/// `id` must be NULL or a NUL-terminated string; `out` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn uq_figure_sweep_new(
    id: *const c_char,
    grid: usize,
    norm_code: u32,
    out: *mut *mut UqSweep,
) -> UqStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if id.is_null() {
            return Err(null("id"));
        }
        // SAFETY: `id` is non-NULL and NUL-terminated per the contract.
        let id = unsafe { CStr::from_ptr(id) }
            .to_str()
            .map_err(|_| Failure(UqStatus::InvalidArgument, "figure id is not UTF-8".into()))?;
        let preset: FigurePreset = id.parse()?;
        let mut spec = preset.spec(&[grid]);
        spec.mode = norm(norm_code)?;
        let rows = run_sweep(&spec)?;
        *out = Box::into_raw(Box::new(UqSweep { axes: spec.axes.len(), rows }));
        Ok(())
    })
}

/// Releases a sweep. NULL is ignored.
///
/// # Safety
/// `sweep` must be NULL or a handle from `uq_figure_sweep_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn uq_sweep_free(sweep: *mut UqSweep) {
    if !sweep.is_null() {
        // SAFETY: the handle was produced by `Box::into_raw` and is freed once.
        drop(unsafe { Box::from_raw(sweep) });
    }
}

/// Number of rows, or 0 for NULL.
///
/// # Safety
/// `sweep` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn uq_sweep_len(sweep: *const UqSweep) -> usize {
    // SAFETY: non-NULL handles are live per the contract.
    unsafe { sweep.as_ref() }.map_or(0, |s| s.rows.len())
}

/// Number of swept axes (coordinates per row), or 0 for NULL.
///
/// # Safety
/// `sweep` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn uq_sweep_axes(sweep: *const UqSweep) -> usize {
    // SAFETY: non-NULL handles are live per the contract.
    unsafe { sweep.as_ref() }.map_or(0, |s| s.axes)
}

/// Row `index` in lexicographic axis order (outer axis first). Writes
/// `uq_sweep_axes` coordinates into `coords` (radians), the Fisher value and
/// the pure-branch flag.
///
/// # Safety
/// `sweep` must be NULL or a live handle; `coords` NULL or room for
/// `uq_sweep_axes(sweep)` doubles; the other out pointers NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn uq_sweep_row(
    sweep: *const UqSweep,
    index: usize,
    coords: *mut f64,
    fisher_value: *mut f64,
    pure_branch: *mut bool,
) -> UqStatus {
    guard(|| {
        // SAFETY: non-NULL handles are live per the contract.
        let sweep = unsafe { sweep.as_ref() }.ok_or_else(|| null("sweep"))?;
        if coords.is_null() {
            return Err(null("coords"));
        }
        let (fisher_value, pure_branch) = (out_ref(fisher_value, "fisher")?, out_ref(pure_branch, "pure_branch")?);
        let row = sweep.rows.get(index).ok_or_else(|| {
            Failure(UqStatus::OutOfRange, format!("row {index} of {}", sweep.rows.len()))
        })?;
        // SAFETY: `coords` has room for `axes` doubles per the contract.
        unsafe { ptr::copy_nonoverlapping(row.coords.as_ptr(), coords, row.coords.len()) };
        *fisher_value = row.fisher;
        *pure_branch = row.pure_branch;
        Ok(())
    })
}
