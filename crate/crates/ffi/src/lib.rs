//! C ABI over `strongblock`.
//!
//! Objects are opaque heap handles released with their `*_free` function.
//! Every fallible call returns an [`SbStatus`]; on failure
//! [`sb_last_error_message`] describes the error on the calling thread.
//! Field elements cross the boundary as ordering codes: 0 is zero and
//! `i + 1` is `g^i`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use strongblock::bounds::interval_violation_report;
use strongblock::cli::{cmd_pipeline, PipelineArgs};
use strongblock::code::{check_minimal, GeneratorMatrix, MinimalStatus};
use strongblock::independence::{find_independent_tuple, SearchStrategy};
use strongblock::strong::{union_subgeometries, verify_strong_blocking, StrongStatus};
use strongblock::{Budget, Error, FieldElem, FieldHandle, PointSet, PointSetJson, RGroup, SubgeometryPartition};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BudgetExceeded = 3,
    /// The search came back empty.
    NotFound = 4,
    Io = 5,
    /// A Rust panic was caught at the boundary.
    Internal = 6,
}

/// A finite field GF(p^m).
pub struct SbField(Arc<FieldHandle>);

/// The group R* with its ambient field and coset subgeometries.
pub struct SbRGroup {
    rgroup: Arc<RGroup>,
    partition: SubgeometryPartition,
}

/// A set of points of a projective space.
pub struct SbPointSet(PointSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> SbStatus {
    match err {
        Error::BudgetExceeded { .. } => SbStatus::BudgetExceeded,
        Error::Io(_) => SbStatus::Io,
        _ => SbStatus::InvalidArgument,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (SbStatus, String)>) -> SbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SbStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SbStatus::Internal
        }
    }
}

fn lift(err: Error) -> (SbStatus, String) {
    (status_of(&err), err.to_string())
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (SbStatus, String)> {
    p.as_ref()
        .ok_or_else(|| (SbStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (SbStatus, String)> {
    p.as_mut()
        .ok_or_else(|| (SbStatus::NullPointer, format!("{what} is null")))
}

fn into_c_string(s: String) -> Result<*mut c_char, (SbStatus, String)> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (SbStatus::Internal, "string contains nul".into()))
}

/// The last error on this thread, or null. Valid until the next failing call
/// on the same thread; do not free.
#[no_mangle]
pub extern "C" fn sb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds GF(p^m) with its default primitive modulus.
///
/// # Safety
/// `out_field` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_field_new(p: u32, m: u32, out_field: *mut *mut SbField) -> SbStatus {
    guard(|| {
        let slot = out(out_field, "out_field")?;
        let f = FieldHandle::new(p, m, None).map_err(lift)?;
        *slot = Box::into_raw(Box::new(SbField(Arc::new(f))));
        Ok(())
    })
}

/// # Safety
/// `field` must come from [`sb_field_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sb_field_free(field: *mut SbField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sb_field_order(field: *const SbField) -> u64 {
    field.as_ref().map_or(0, |f| u64::from(f.0.order()))
}

unsafe fn field_binop(
    field: *const SbField,
    a: u32,
    b: u32,
    out_code: *mut u32,
    op: fn(&FieldHandle, FieldElem, FieldElem) -> FieldElem,
) -> SbStatus {
    guard(|| {
        let f = &deref(field, "field")?.0;
        let slot = out(out_code, "out_code")?;
        let a = f.validate(FieldElem::from_code(a)).map_err(lift)?;
        let b = f.validate(FieldElem::from_code(b)).map_err(lift)?;
        *slot = op(f, a, b).code();
        Ok(())
    })
}

/// `a + b` on element codes.
///
/// # Safety
/// `field` must be a live handle and `out_code` valid.
#[no_mangle]
pub unsafe extern "C" fn sb_field_add(field: *const SbField, a: u32, b: u32, out_code: *mut u32) -> SbStatus {
    field_binop(field, a, b, out_code, FieldHandle::add)
}

/// `a * b` on element codes.
///
/// # Safety
/// `field` must be a live handle and `out_code` valid.
#[no_mangle]
pub unsafe extern "C" fn sb_field_mul(field: *const SbField, a: u32, b: u32, out_code: *mut u32) -> SbStatus {
    field_binop(field, a, b, out_code, FieldHandle::mul)
}

/// Builds R* for (q, k) inside GF(q^(k(k-1))) together with the coset
/// subgeometries of PG(k-1, q^(k-1)).
///
/// # Safety
/// `out_rgroup` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_rgroup_new(q: u64, k: u32, out_rgroup: *mut *mut SbRGroup) -> SbStatus {
    guard(|| {
        let slot = out(out_rgroup, "out_rgroup")?;
        let rgroup = Arc::new(RGroup::build(q, k).map_err(lift)?);
        let partition = SubgeometryPartition::new(rgroup.clone()).map_err(lift)?;
        *slot = Box::into_raw(Box::new(SbRGroup { rgroup, partition }));
        Ok(())
    })
}

/// # Safety
/// `rgroup` must come from [`sb_rgroup_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sb_rgroup_free(rgroup: *mut SbRGroup) {
    if !rgroup.is_null() {
        drop(Box::from_raw(rgroup));
    }
}

/// Number of cosets of R*, i.e. of subgeometries. 0 for a null handle.
///
/// # Safety
/// `rgroup` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sb_rgroup_cosets(rgroup: *const SbRGroup) -> u32 {
    rgroup.as_ref().map_or(0, |r| r.rgroup.stride())
}

/// Samples an R-independent (k-1)-tuple with `seed` and returns the union of
/// its subgeometries. `SB_STATUS_NOT_FOUND` if `max_iters` samples all fail.
///
/// # Safety
/// `rgroup` must be a live handle and `out_set` valid.
#[no_mangle]
pub unsafe extern "C" fn sb_union_from_seed(
    rgroup: *const SbRGroup,
    seed: u64,
    max_iters: u64,
    out_set: *mut *mut SbPointSet,
) -> SbStatus {
    guard(|| {
        let rg = deref(rgroup, "rgroup")?;
        let slot = out(out_set, "out_set")?;
        let m = rg.rgroup.k() as usize - 1;
        let strategy = SearchStrategy::Random { seed, max_iters };
        let found = find_independent_tuple(&rg.rgroup, None, m, strategy, &Budget::default()).map_err(lift)?;
        let alphas = found
            .alphas
            .ok_or((SbStatus::NotFound, format!("no independent tuple in {max_iters} samples")))?;
        let set = union_subgeometries(&alphas, &rg.partition).map_err(lift)?;
        *slot = Box::into_raw(Box::new(SbPointSet(set)));
        Ok(())
    })
}

/// Parses a point set from its JSON form.
///
/// # Safety
/// `json` must be a nul-terminated string and `out_set` valid.
#[no_mangle]
pub unsafe extern "C" fn sb_pointset_from_json(json: *const c_char, out_set: *mut *mut SbPointSet) -> SbStatus {
    guard(|| {
        let json = deref(json, "json")?;
        let slot = out(out_set, "out_set")?;
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| (SbStatus::InvalidArgument, e.to_string()))?;
        let j: PointSetJson = serde_json::from_str(text).map_err(|e| lift(e.into()))?;
        let set = PointSet::from_json(&j).map_err(lift)?;
        *slot = Box::into_raw(Box::new(SbPointSet(set)));
        Ok(())
    })
}

/// Serializes a point set; free the result with [`sb_string_free`].
///
/// # Safety
/// `set` must be a live handle and `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn sb_pointset_to_json(set: *const SbPointSet, out_json: *mut *mut c_char) -> SbStatus {
    guard(|| {
        let set = deref(set, "set")?;
        let slot = out(out_json, "out_json")?;
        let s = serde_json::to_string(&set.0.to_json()).map_err(|e| lift(e.into()))?;
        *slot = into_c_string(s)?;
        Ok(())
    })
}

/// Number of points, or 0 for a null handle.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sb_pointset_len(set: *const SbPointSet) -> u64 {
    set.as_ref().map_or(0, |s| s.0.len() as u64)
}

/// # Safety
/// `set` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sb_pointset_free(set: *mut SbPointSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Exhaustive strong blocking check. On a negative answer `out_witness` gets
/// the canonical index of the first failing hyperplane, else -1.
///
/// # Safety
/// `set` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sb_verify_strong(
    set: *const SbPointSet,
    out_strong: *mut bool,
    out_witness: *mut i64,
) -> SbStatus {
    guard(|| {
        let set = deref(set, "set")?;
        let strong = out(out_strong, "out_strong")?;
        let witness = out(out_witness, "out_witness")?;
        let v = verify_strong_blocking(&set.0, &Budget::default()).map_err(lift)?;
        *strong = v.status == StrongStatus::Strong;
        *witness = v.witness_index.map_or(-1, |i| i as i64);
        Ok(())
    })
}

/// Whether the code with the set's points as columns is minimal.
///
/// # Safety
/// `set` must be a live handle and `out_minimal` valid.
#[no_mangle]
pub unsafe extern "C" fn sb_check_minimal(set: *const SbPointSet, out_minimal: *mut bool) -> SbStatus {
    guard(|| {
        let set = deref(set, "set")?;
        let slot = out(out_minimal, "out_minimal")?;
        let g = GeneratorMatrix::from_points(&set.0).map_err(lift)?;
        let v = check_minimal(&g, &Budget::default()).map_err(lift)?;
        *slot = v.status == MinimalStatus::Minimal;
        Ok(())
    })
}

/// Runs the full pipeline and returns its JSON report; free it with
/// [`sb_string_free`].
///
/// # Safety
/// `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_pipeline_json(q: u64, k: u32, seed: u64, out_json: *mut *mut c_char) -> SbStatus {
    guard(|| {
        let slot = out(out_json, "out_json")?;
        let args = PipelineArgs {
            q,
            k,
            strategy: SearchStrategy::Random {
                seed,
                max_iters: 100_000,
            },
            save_set: None,
            save_code: None,
        };
        let outcome = cmd_pipeline(&args, &Budget::default()).map_err(|e| (status_of(&e.error), e.to_string()))?;
        let s = serde_json::to_string_pretty(&outcome.json).map_err(|e| lift(e.into()))?;
        *slot = into_c_string(s)?;
        Ok(())
    })
}

/// Whether |B(4, q)| is certified to lie outside every small-blocking-set
/// interval, for odd prime powers q.
///
/// # Safety
/// `out_certified` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sb_bounds_certify(q: u64, out_certified: *mut bool) -> SbStatus {
    guard(|| {
        let slot = out(out_certified, "out_certified")?;
        *slot = interval_violation_report(q).map_err(lift)?.certified;
        Ok(())
    })
}
