//! C ABI over `oblivious_mimo`.
//!
//! Every function returns an [`OmimoStatus`]; on failure a message is kept in
//! thread-local storage and read with [`omimo_last_error_message`]. Channels
//! and sweeps are opaque heap handles released with their `_free` function.
//! Link capacities are plain doubles where `INFINITY` means an ideal link.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use oblivious_mimo::schemes::{evaluate, Capacity, LinkBudget, Scheme, SchemeRate};
use oblivious_mimo::sweep::{
    db_to_linear, write_csv, write_figure2, SchemeSelection, SweepGrid, SweepRow,
};
use oblivious_mimo::waterfill::rate_wf_channel;
use oblivious_mimo::{waterfill, ChannelSpec, Error, SnrDensity};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmimoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Degenerate = 4,
    NonConvergence = 5,
    Precondition = 6,
    Io = 7,
    Panic = 8,
}

/// Scheme identifiers accepted wherever a `uint32_t scheme` is taken.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmimoScheme {
    UpperBound = 0,
    IndependentMessages = 1,
    QuantizedWaterfilling = 2,
    ElementaryCompression = 3,
    DistributedCompression = 4,
    ImEc = 5,
    ImDc = 6,
    QwEc = 7,
    QwDc = 8,
}

/// Opaque channel handle.
pub struct OmimoChannel {
    spec: ChannelSpec,
}

/// Opaque sweep result handle.
pub struct OmimoSweep {
    rows: Vec<SweepRow>,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OmimoWaterfill {
    pub mu: f64,
    pub rate: f64,
    pub power_used: f64,
    /// Active band is `[0, band_edge] U [1 - band_edge, 1)`; zero when empty.
    pub band_edge: f64,
    pub iterations: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OmimoRate {
    pub rate: f64,
    pub has_printed_bound: bool,
    pub printed_bound: f64,
    /// 1 when the printed equality conditions hold, 0 when not, -1 when the
    /// scheme has no printed bound.
    pub bound_tight: i32,
    pub has_fixed_point: bool,
    pub fixed_point: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OmimoSweepRow {
    pub alpha2: f64,
    pub p_db: f64,
    pub c: f64,
    pub cprime: f64,
    pub scheme: u32,
    pub result: OmimoRate,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(OmimoStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain { .. } | Error::SingularAlpha { .. } => OmimoStatus::Domain,
            Error::DegenerateDensity { .. }
            | Error::DivisionDegeneracy { .. }
            | Error::InfiniteNoise => OmimoStatus::Degenerate,
            Error::Bracket { .. } | Error::NonConvergence { .. } => OmimoStatus::NonConvergence,
            Error::Precondition { .. } => OmimoStatus::Precondition,
            Error::Grid(_) | Error::Parse(_) => OmimoStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(OmimoStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(OmimoStatus::InvalidArgument, msg.into())
}

/// Runs `f`, converting errors and panics to a status and a stored message.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> OmimoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            OmimoStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            OmimoStatus::Panic
        }
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Boxes `value` into `*out`; checks `out` first so nothing leaks.
unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

unsafe fn channel_ref<'a>(ch: *const OmimoChannel) -> Result<&'a OmimoChannel, Failure> {
    ch.as_ref().ok_or_else(|| null("channel"))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn scheme_from(id: u32) -> Result<Scheme, Failure> {
    Scheme::ALL
        .get(id as usize)
        .copied()
        .ok_or_else(|| invalid(format!("unknown scheme id {id}")))
}

fn scheme_id(s: Scheme) -> u32 {
    Scheme::ALL.iter().position(|&x| x == s).unwrap_or(0) as u32
}

fn capacity(bits: f64, name: &str) -> Result<Capacity, Failure> {
    Capacity::new(bits).map_err(|_| invalid(format!("{name} = {bits} must be >= 0 or INFINITY")))
}

fn rate_out(r: &SchemeRate) -> OmimoRate {
    OmimoRate {
        rate: r.rate,
        has_printed_bound: r.printed_bound.is_some(),
        printed_bound: r.printed_bound.unwrap_or(f64::NAN),
        bound_tight: r.bound_tight.map_or(-1, i32::from),
        has_fixed_point: r.fixed_point.is_some(),
        fixed_point: r.fixed_point.unwrap_or(f64::NAN),
    }
}

/// Null-terminated message for the last failing call on this thread; empty
/// after a successful call. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn omimo_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static null-terminated string.
#[no_mangle]
pub extern "C" fn omimo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a channel with interference gain `alpha` in `[0, 1]`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn omimo_channel_new(alpha: f64, out: *mut *mut OmimoChannel) -> OmimoStatus {
    guard(|| {
        let spec = ChannelSpec::new(alpha)?;
        write_handle(out, OmimoChannel { spec })
    })
}

/// Creates a channel from the interference power `alpha^2` in `[0, 1]`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn omimo_channel_from_alpha2(
    alpha2: f64,
    out: *mut *mut OmimoChannel,
) -> OmimoStatus {
    guard(|| {
        let spec = ChannelSpec::from_alpha2(alpha2)?;
        write_handle(out, OmimoChannel { spec })
    })
}

/// # Safety
/// `ch` must be null or a handle from `omimo_channel_new`/`_from_alpha2` not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn omimo_channel_free(ch: *mut OmimoChannel) {
    if !ch.is_null() {
        drop(Box::from_raw(ch));
    }
}

/// Spectral gain `G(f)` for `f` in `[0, 1)`.
///
/// # Safety
/// `ch` must be a live channel handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omimo_channel_gain(
    ch: *const OmimoChannel,
    f: f64,
    out: *mut f64,
) -> OmimoStatus {
    guard(|| {
        let ch = channel_ref(ch)?;
        write_out(out, ch.spec.gain(f)?)
    })
}

/// Waterfilling over the density `kappa G / (u + v G)` with power `power`.
///
/// # Safety
/// `ch` must be a live channel handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omimo_waterfill(
    ch: *const OmimoChannel,
    kappa: f64,
    u: f64,
    v: f64,
    power: f64,
    out: *mut OmimoWaterfill,
) -> OmimoStatus {
    guard(|| {
        let ch = channel_ref(ch)?;
        let d = SnrDensity::new(ch.spec, kappa, u, v)?;
        let sol = waterfill(&d, power)?;
        write_out(
            out,
            OmimoWaterfill {
                mu: sol.mu,
                rate: sol.rate,
                power_used: sol.power_used,
                band_edge: sol.active_band.last().map_or(0.0, |b| b.end),
                iterations: sol.iterations as u64,
            },
        )
    })
}

/// Waterfilling rate of the plain channel, `R_WF(P)`.
///
/// # Safety
/// `ch` must be a live channel handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omimo_rate_wf(
    ch: *const OmimoChannel,
    power: f64,
    out: *mut f64,
) -> OmimoStatus {
    guard(|| {
        let ch = channel_ref(ch)?;
        write_out(out, rate_wf_channel(ch.spec, power)?)
    })
}

/// Rate of `scheme` (an `OmimoScheme` value) at power `power` and link
/// capacities `c`, `cprime`.
///
/// # Safety
/// `ch` must be a live channel handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omimo_scheme_rate(
    ch: *const OmimoChannel,
    scheme: u32,
    power: f64,
    c: f64,
    cprime: f64,
    out: *mut OmimoRate,
) -> OmimoStatus {
    guard(|| {
        let ch = channel_ref(ch)?;
        let scheme = scheme_from(scheme)?;
        let b = LinkBudget::new(power, capacity(c, "C")?, capacity(cprime, "C'")?)?;
        if !scheme.applies_to(&b) {
            return Err(Failure(
                OmimoStatus::Precondition,
                format!("{scheme} is not defined at C = {c}, C' = {cprime}"),
            ));
        }
        let r = evaluate(scheme, ch.spec, &b)?;
        write_out(out, rate_out(&r))
    })
}

/// Evaluates the grid `alpha2 x p_db x c x cprime`. With `n_schemes == 0`
/// every scheme applicable at each point is evaluated; otherwise exactly the
/// listed ones. Rows are ordered by alpha2, p_db, c, cprime, scheme.
///
/// # Safety
/// Each array must hold at least its stated number of elements (or be null
/// when the count is zero); `out` must be a valid pointer.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn omimo_sweep_new(
    alpha2: *const f64,
    n_alpha2: usize,
    p_db: *const f64,
    n_p_db: usize,
    c: *const f64,
    n_c: usize,
    cprime: *const f64,
    n_cprime: usize,
    schemes: *const u32,
    n_schemes: usize,
    out: *mut *mut OmimoSweep,
) -> OmimoStatus {
    guard(|| {
        let caps = |p, n, name| -> Result<Vec<Capacity>, Failure> {
            slice(p, n, name)?
                .iter()
                .map(|&x| capacity(x, name))
                .collect()
        };
        let selection = if n_schemes == 0 {
            SchemeSelection::All
        } else {
            let ids = slice(schemes, n_schemes, "schemes")?;
            SchemeSelection::Only(
                ids.iter()
                    .map(|&i| scheme_from(i))
                    .collect::<Result<_, _>>()?,
            )
        };
        let grid = SweepGrid {
            alpha2_values: slice(alpha2, n_alpha2, "alpha2")?.to_vec(),
            p_db_values: slice(p_db, n_p_db, "p_db")?.to_vec(),
            c_values: caps(c, n_c, "c")?,
            cprime_values: caps(cprime, n_cprime, "cprime")?,
            schemes: selection,
        };
        grid.validate()?;
        let rows = grid.evaluate()?;
        write_handle(out, OmimoSweep { rows })
    })
}

/// Number of rows in a sweep; zero for a null handle.
///
/// # Safety
/// `sweep` must be null or a live sweep handle.
#[no_mangle]
pub unsafe extern "C" fn omimo_sweep_len(sweep: *const OmimoSweep) -> usize {
    sweep.as_ref().map_or(0, |s| s.rows.len())
}

/// Copies row `index` of a sweep into `out`.
///
/// # Safety
/// `sweep` must be a live sweep handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omimo_sweep_row(
    sweep: *const OmimoSweep,
    index: usize,
    out: *mut OmimoSweepRow,
) -> OmimoStatus {
    guard(|| {
        let s = sweep.as_ref().ok_or_else(|| null("sweep"))?;
        let r = s
            .rows
            .get(index)
            .ok_or_else(|| invalid(format!("row {index} out of range (len {})", s.rows.len())))?;
        let rate = SchemeRate {
            scheme: r.scheme,
            rate: r.rate,
            printed_bound: r.printed_bound,
            bound_tight: r.bound_tight,
            fixed_point: r.fixed_point,
        };
        write_out(
            out,
            OmimoSweepRow {
                alpha2: r.alpha2,
                p_db: r.p_db,
                c: r.c.bits(),
                cprime: r.cprime.bits(),
                scheme: scheme_id(r.scheme),
                result: rate_out(&rate),
            },
        )
    })
}

/// Renders a sweep as CSV. The string is owned by the caller and released
/// with `omimo_string_free`.
///
/// # Safety
/// `sweep` must be a live sweep handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn omimo_sweep_to_csv(
    sweep: *const OmimoSweep,
    out: *mut *mut c_char,
) -> OmimoStatus {
    guard(|| {
        let s = sweep.as_ref().ok_or_else(|| null("sweep"))?;
        let mut buf = Vec::new();
        write_csv(&s.rows, &mut buf).map_err(|e| Failure(OmimoStatus::Io, e.to_string()))?;
        let text = CString::new(buf).map_err(|e| invalid(e.to_string()))?;
        write_out(out, text.into_raw())
    })
}

/// # Safety
/// `sweep` must be null or a live sweep handle.
#[no_mangle]
pub unsafe extern "C" fn omimo_sweep_free(sweep: *mut OmimoSweep) {
    if !sweep.is_null() {
        drop(Box::from_raw(sweep));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn omimo_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Writes `figure2.csv` and `README.md` for the rates-versus-SNR dataset into
/// `dir`, creating it if needed. `rows_out` may be null.
///
/// # Safety
/// `dir` must be a valid null-terminated UTF-8 path.
#[no_mangle]
pub unsafe extern "C" fn omimo_figure2_write(
    dir: *const c_char,
    rows_out: *mut usize,
) -> OmimoStatus {
    guard(|| {
        if dir.is_null() {
            return Err(null("dir"));
        }
        let dir = CStr::from_ptr(dir)
            .to_str()
            .map_err(|_| invalid("dir is not valid UTF-8"))?;
        let n = write_figure2(Path::new(dir))
            .map_err(|e| Failure(OmimoStatus::Io, format!("{dir}: {e}")))?;
        if !rows_out.is_null() {
            rows_out.write(n);
        }
        Ok(())
    })
}

/// Converts decibels to linear power.
#[no_mangle]
pub extern "C" fn omimo_db_to_linear(db: f64) -> f64 {
    db_to_linear(db)
}
