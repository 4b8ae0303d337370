//! C ABI for the Otto engine simulator.
//!
//! Every function returns an [`OttoStatus`]. Results are written through out
//! pointers; on failure the out pointers are left untouched and
//! [`otto_last_error`] describes what went wrong. Objects are opaque handles
//! released with their matching `_free` function. Strings returned by the
//! library are released with [`otto_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use otto_core::circuit::{self, CircuitProgram, Execution};
use otto_core::optics;
use otto_core::quantum::{self, c, ComplexMatrix, DensityOperator};
use otto_core::runner::{self, OutputFormat, SweepConfig, SweepReport};
use otto_core::thermo::{self, CycleLedger, EngineParams};
use otto_core::tomography::{self, Basis, IntensityRecord};
use otto_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OttoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A matrix or operator set violates its invariants.
    InvalidState = 3,
    Parse = 4,
    Compile = 5,
    Tomography = 6,
    /// Relative entropy with a support mismatch.
    Support = 7,
    Io = 8,
    BufferTooSmall = 9,
    Internal = 10,
}

/// Output format for [`otto_report_emit`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OttoFormat {
    Csv = 0,
    Json = 1,
}

/// One row of a sweep. Energies in units of ħω₀, entropies in nats.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct OttoCycle {
    pub theta_v_deg: f64,
    pub kappa: f64,
    pub r: f64,
    pub w_ab: f64,
    pub q_bc: f64,
    pub w_cd: f64,
    pub q_da: f64,
    pub du_cycle: f64,
    pub w_extracted: f64,
    pub sigma_e: f64,
    pub sigma_c: f64,
    pub sigma_cycle: f64,
    pub max_delta_vs_closed_form: f64,
}

impl OttoCycle {
    fn new(ledger: &CycleLedger, max_delta: f64) -> Self {
        let e = &ledger.energetics;
        Self {
            theta_v_deg: ledger.theta_v_deg,
            kappa: ledger.kappa,
            r: ledger.r,
            w_ab: e.w_ab,
            q_bc: e.q_bc,
            w_cd: e.w_cd,
            q_da: e.q_da,
            du_cycle: ledger.du_cycle,
            w_extracted: ledger.w_extracted,
            sigma_e: ledger.sigma_e,
            sigma_c: ledger.sigma_c,
            sigma_cycle: ledger.sigma_cycle,
            max_delta_vs_closed_form: max_delta,
        }
    }
}

/// A polarization or polarization ⊗ path density operator.
pub struct OttoDensity(DensityOperator);

/// A parsed circuit.
pub struct OttoProgram(CircuitProgram);

/// The snapshots of one circuit run.
pub struct OttoExecution(Execution);

/// A sweep report.
pub struct OttoReport(SweepReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

struct Failure(OttoStatus, String);

fn status_of(error: &Error) -> OttoStatus {
    match error {
        Error::DimensionMismatch { .. }
        | Error::UnsupportedDimension(_)
        | Error::EntryCount { .. }
        | Error::OutOfRange { .. }
        | Error::Config(_) => OttoStatus::InvalidArgument,
        Error::NotHermitian { .. }
        | Error::TraceNotOne { .. }
        | Error::NotPositive { .. }
        | Error::IncompleteKraus { .. }
        | Error::EmptyKraus => OttoStatus::InvalidState,
        Error::SupportViolation { .. } => OttoStatus::Support,
        Error::Parse(_) => OttoStatus::Parse,
        Error::Compile { .. } | Error::MissingRealization { .. } => OttoStatus::Compile,
        Error::Tomography(_) | Error::GoldenData { .. } => OttoStatus::Tomography,
        Error::Stroke { source, .. } => status_of(source),
        Error::Io(_) => OttoStatus::Io,
        _ => OttoStatus::Internal,
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        let message = match &error {
            Error::Parse(errors) => errors.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"),
            other => other.to_string(),
        };
        Failure(status_of(&error), message)
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure(OttoStatus::InvalidArgument, message.into())
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> OttoStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => OttoStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            OttoStatus::Internal
        }
    }
}

unsafe fn out<'a, T>(ptr: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    ptr.as_mut()
        .ok_or_else(|| Failure(OttoStatus::NullPointer, format!("{name} is null")))
}

unsafe fn handle<'a, T>(ptr: *const T, name: &str) -> Result<&'a T, Failure> {
    ptr.as_ref()
        .ok_or_else(|| Failure(OttoStatus::NullPointer, format!("{name} is null")))
}

unsafe fn text<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(Failure(OttoStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| invalid(format!("{name} is not UTF-8")))
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

fn owned_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(OttoStatus::Internal, "string contains NUL".into()))
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn otto_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn otto_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn otto_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Thermal polarization state `½(𝟙 − tanh(x) σ_y)`; `x` may be infinite.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_density_thermal(x: f64, out: *mut *mut OttoDensity) -> OttoStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        let state = thermo::thermal_state(x)?;
        *out = boxed(OttoDensity(state.rho().clone()));
        Ok(())
    })
}

/// Right-circular polarization `|R⟩⟨R|`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_density_right_circular(out: *mut *mut OttoDensity) -> OttoStatus {
    guard(|| {
        *self::out(out, "out")? = boxed(OttoDensity(DensityOperator::right_circular()));
        Ok(())
    })
}

/// Density operator from `2·dim²` doubles: row-major entries as
/// interleaved `re, im` pairs. `dim` is 2 or 4.
///
/// # Safety
/// `entries` must point to `2·dim²` readable doubles; `out` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_density_from_entries(
    dim: usize,
    entries: *const f64,
    out: *mut *mut OttoDensity,
) -> OttoStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        if dim != 2 && dim != 4 {
            return Err(invalid(format!("dimension {dim} is not 2 or 4")));
        }
        let raw = std::slice::from_raw_parts(handle(entries, "entries")?, 2 * dim * dim);
        let values: Vec<_> = raw.chunks_exact(2).map(|p| c(p[0], p[1])).collect();
        let state = DensityOperator::new(ComplexMatrix::from_row_slice(dim, &values)?)?;
        *out = boxed(OttoDensity(state));
        Ok(())
    })
}

/// # Safety
/// `rho` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn otto_density_free(rho: *mut OttoDensity) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

/// # Safety
/// `rho` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_density_dim(rho: *const OttoDensity, out: *mut usize) -> OttoStatus {
    guard(|| {
        *self::out(out, "out")? = handle(rho, "rho")?.0.dim();
        Ok(())
    })
}

/// Copies the entries as interleaved `re, im` pairs, row-major. `len` is
/// the buffer length in doubles and must be at least `2·dim²`.
///
/// # Safety
/// `rho` must be a live handle; `buffer` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn otto_density_entries(
    rho: *const OttoDensity,
    buffer: *mut f64,
    len: usize,
) -> OttoStatus {
    guard(|| {
        let rho = &handle(rho, "rho")?.0;
        let entries = rho.matrix().entries();
        if len < 2 * entries.len() {
            return Err(Failure(
                OttoStatus::BufferTooSmall,
                format!("need {} doubles, got {len}", 2 * entries.len()),
            ));
        }
        let buffer = std::slice::from_raw_parts_mut(out(buffer, "buffer")?, len);
        for (slot, z) in buffer.chunks_exact_mut(2).zip(entries) {
            slot[0] = z.re;
            slot[1] = z.im;
        }
        Ok(())
    })
}

/// Squared Uhlmann fidelity.
///
/// # Safety
/// `a`, `b` must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_fidelity(
    a: *const OttoDensity,
    b: *const OttoDensity,
    out: *mut f64,
) -> OttoStatus {
    guard(|| {
        *self::out(out, "out")? = quantum::fidelity(&handle(a, "a")?.0, &handle(b, "b")?.0)?;
        Ok(())
    })
}

/// Von Neumann entropy in nats.
///
/// # Safety
/// `rho` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_entropy(rho: *const OttoDensity, out: *mut f64) -> OttoStatus {
    guard(|| {
        *self::out(out, "out")? = quantum::von_neumann_entropy(&handle(rho, "rho")?.0);
        Ok(())
    })
}

/// `D(rho ‖ sigma)` in nats.
///
/// # Safety
/// `rho`, `sigma` must be live handles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_relative_entropy(
    rho: *const OttoDensity,
    sigma: *const OttoDensity,
    out: *mut f64,
) -> OttoStatus {
    guard(|| {
        *self::out(out, "out")? =
            quantum::relative_entropy(&handle(rho, "rho")?.0, &handle(sigma, "sigma")?.0)?;
        Ok(())
    })
}

/// Runs a polarization state through the dephasing interferometer set to
/// `theta_v` radians (0 to π/4) and traces the path out.
///
/// # Safety
/// `rho` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_dephase(
    rho: *const OttoDensity,
    theta_v: f64,
    out: *mut *mut OttoDensity,
) -> OttoStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        let result = optics::pd_block(theta_v)?.apply_dilated(&handle(rho, "rho")?.0)?;
        *out = boxed(OttoDensity(result));
        Ok(())
    })
}

/// Parses circuit source text.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_program_parse(
    source: *const c_char,
    out: *mut *mut OttoProgram,
) -> OttoStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        if source.is_null() {
            return Err(Failure(OttoStatus::NullPointer, "source is null".into()));
        }
        let program = circuit::parse_bytes(CStr::from_ptr(source).to_bytes())?;
        *out = boxed(OttoProgram(program));
        Ok(())
    })
}

/// # Safety
/// `program` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn otto_program_free(program: *mut OttoProgram) {
    if !program.is_null() {
        drop(Box::from_raw(program));
    }
}

/// Canonical text of a program; free with [`otto_string_free`].
///
/// # Safety
/// `program` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_program_format(
    program: *const OttoProgram,
    out: *mut *mut c_char,
) -> OttoStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        *out = owned_string(circuit::format(&handle(program, "program")?.0))?;
        Ok(())
    })
}

/// Compiles and runs a program.
///
/// # Safety
/// `program` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_program_run(
    program: *const OttoProgram,
    out: *mut *mut OttoExecution,
) -> OttoStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        let execution = circuit::compile(&handle(program, "program")?.0)?.run()?;
        *out = boxed(OttoExecution(execution));
        Ok(())
    })
}

/// # Safety
/// `execution` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn otto_execution_free(execution: *mut OttoExecution) {
    if !execution.is_null() {
        drop(Box::from_raw(execution));
    }
}

/// # Safety
/// `execution` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_execution_snapshot_count(
    execution: *const OttoExecution,
    out: *mut usize,
) -> OttoStatus {
    guard(|| {
        *self::out(out, "out")? = handle(execution, "execution")?.0.snapshots.len();
        Ok(())
    })
}

/// Copy of the snapshot tapped under `label`.
///
/// # Safety
/// `execution` must be a live handle, `label` a NUL-terminated string and
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_execution_snapshot(
    execution: *const OttoExecution,
    label: *const c_char,
    out: *mut *mut OttoDensity,
) -> OttoStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        let label = text(label, "label")?;
        let snapshot = handle(execution, "execution")?
            .0
            .snapshot(label)
            .ok_or_else(|| invalid(format!("no snapshot labeled `{label}`")))?;
        *out = boxed(OttoDensity(snapshot.clone()));
        Ok(())
    })
}

/// Closed-form stroke energetics `W_AB, Q_BC, W_CD, Q_DA`.
///
/// # Safety
/// `out` must be writable for 4 doubles.
#[no_mangle]
pub unsafe extern "C" fn otto_closed_form(kappa: f64, n: f64, x_c: f64, out: *mut f64) -> OttoStatus {
    guard(|| {
        let out = std::slice::from_raw_parts_mut(self::out(out, "out")?, 4);
        let params = EngineParams::new(1.0, n, x_c)?;
        out.copy_from_slice(&thermo::closed_form_energetics(kappa, &params)?.values());
        Ok(())
    })
}

fn config(n: f64, x_c: f64) -> SweepConfig {
    SweepConfig {
        n,
        x_c,
        ..SweepConfig::default()
    }
}

/// One ideal cycle at `theta_v_deg` degrees with `ω₀τ = π`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_run_cycle(
    theta_v_deg: f64,
    n: f64,
    x_c: f64,
    out: *mut OttoCycle,
) -> OttoStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        let run = runner::run_cycle(theta_v_deg, &config(n, x_c))?;
        *out = OttoCycle::new(&run.ledger, run.max_delta_vs_closed_form);
        Ok(())
    })
}

/// Sweeps the given θ_V values (degrees). Passing `thetas = NULL` with
/// `len = 0` uses the default seven settings.
///
/// # Safety
/// `thetas` must be readable for `len` doubles; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_sweep(
    thetas: *const f64,
    len: usize,
    n: f64,
    x_c: f64,
    noise_sigma: f64,
    seed: u64,
    out: *mut *mut OttoReport,
) -> OttoStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        let mut config = config(n, x_c);
        if len > 0 {
            config.theta_list = std::slice::from_raw_parts(handle(thetas, "thetas")?, len).to_vec();
        }
        config.noise_sigma = noise_sigma;
        config.seed = seed;
        *out = boxed(OttoReport(runner::run_sweep(&config)?));
        Ok(())
    })
}

/// # Safety
/// `report` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn otto_report_free(report: *mut OttoReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Number of successful rows.
///
/// # Safety
/// `report` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_report_row_count(report: *const OttoReport, out: *mut usize) -> OttoStatus {
    guard(|| {
        *self::out(out, "out")? = handle(report, "report")?.0.rows.len();
        Ok(())
    })
}

/// Row `index`, rows sorted by `r` ascending.
///
/// # Safety
/// `report` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_report_row(
    report: *const OttoReport,
    index: usize,
    out: *mut OttoCycle,
) -> OttoStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        let rows = &handle(report, "report")?.0.rows;
        let row = rows
            .get(index)
            .ok_or_else(|| invalid(format!("row {index} out of range ({} rows)", rows.len())))?;
        *out = OttoCycle::new(&row.ledger, row.max_delta_vs_closed_form);
        Ok(())
    })
}

/// Report as CSV or JSON text; free with [`otto_string_free`].
///
/// # Safety
/// `report` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_report_emit(
    report: *const OttoReport,
    format: OttoFormat,
    out: *mut *mut c_char,
) -> OttoStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        let format = match format {
            OttoFormat::Csv => OutputFormat::Csv,
            OttoFormat::Json => OutputFormat::Json,
        };
        let bytes = runner::emit(&handle(report, "report")?.0, format)?;
        *out = owned_string(String::from_utf8(bytes).map_err(|e| Failure(OttoStatus::Internal, e.to_string()))?)?;
        Ok(())
    })
}

/// Reconstructs a polarization state from six intensities ordered
/// `I_H, I_V, I_D, I_AD, I_L, I_R`. `projected` (may be NULL) is set to 1
/// when the Stokes vector had to be pulled back onto the Bloch sphere.
///
/// # Safety
/// `intensities` must be readable for 6 doubles; `out` valid for writes;
/// `projected` NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn otto_tomography_reconstruct(
    intensities: *const f64,
    out: *mut *mut OttoDensity,
    projected: *mut i32,
) -> OttoStatus {
    guard(|| {
        let out = self::out(out, "out")?;
        let i = std::slice::from_raw_parts(handle(intensities, "intensities")?, 6);
        let records = [
            IntensityRecord::new(Basis::HV, i[0], i[1])?,
            IntensityRecord::new(Basis::DAD, i[2], i[3])?,
            IntensityRecord::new(Basis::RL, i[4], i[5])?,
        ];
        let result = tomography::reconstruct(&tomography::stokes_from_intensities(&records)?)?;
        if let Some(flag) = projected.as_mut() {
            *flag = i32::from(result.projected);
        }
        *out = boxed(OttoDensity(result.rho));
        Ok(())
    })
}
