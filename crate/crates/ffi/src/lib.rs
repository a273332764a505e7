//! Flat C ABI over the contractor registry.
//!
//! ```c
//! uint64_t hcp_open(void);
//! int32_t  hcp_close(uint64_t handle);
//! int64_t  hcp_create_contractor(uint64_t handle, const char *const *functions,
//!                                size_t n_functions, size_t arity);
//! int32_t  hcp_contract(uint64_t handle, size_t index, double *bounds, size_t len);
//! const char *hcp_last_error(void);
//! ```
//!
//! `hcp_contract` returns a status code (FAIL=0, ENTAILED=1, CONTRACT=2,
//! NOTHING=3) or one of the negative `HCP_E*` codes; the message of the last
//! error on the calling thread is available from `hcp_last_error`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::{Arc, Mutex, MutexGuard, OnceLock};

use hybridcp::contractor::ContractError;
use hybridcp::ContractorRegistry;

pub const HCP_EHANDLE: i32 = -1;
pub const HCP_EPARSE: i32 = -2;
pub const HCP_EINDEX: i32 = -3;
pub const HCP_EBOUNDS: i32 = -4;
pub const HCP_EARG: i32 = -5;
pub const HCP_EINTERNAL: i32 = -6;

type Shared = Arc<Mutex<ContractorRegistry>>;

#[derive(Default)]
struct Handles {
    next: u64,
    open: HashMap<u64, Shared>,
}

fn handles() -> MutexGuard<'static, Handles> {
    static HANDLES: OnceLock<Mutex<Handles>> = OnceLock::new();
    HANDLES
        .get_or_init(Default::default)
        .lock()
        .unwrap_or_else(|e| e.into_inner())
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(code: i32, message: impl Into<String>) -> i32 {
    let msg = CString::new(message.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
    code
}

fn registry(handle: u64) -> Result<Shared, i32> {
    handles()
        .open
        .get(&handle)
        .cloned()
        .ok_or_else(|| fail(HCP_EHANDLE, format!("handle {handle} is not open")))
}

fn guard(f: impl FnOnce() -> Result<i32, i32>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) | Ok(Err(v)) => v,
        Err(_) => fail(HCP_EINTERNAL, "internal error"),
    }
}

fn error_code(e: &ContractError) -> i32 {
    match e {
        ContractError::Parse { .. } | ContractError::NoFunctions => HCP_EPARSE,
        ContractError::UnknownContractor(_) => HCP_EINDEX,
        ContractError::MalformedBounds(_) => HCP_EBOUNDS,
    }
}

/// Opens a fresh registry. Handles are never 0 and never reused.
#[no_mangle]
pub extern "C" fn hcp_open() -> u64 {
    let mut h = handles();
    h.next += 1;
    let id = h.next;
    h.open
        .insert(id, Arc::new(Mutex::new(ContractorRegistry::new())));
    id
}

/// Frees the registry and all its contractors.
#[no_mangle]
pub extern "C" fn hcp_close(handle: u64) -> i32 {
    match handles().open.remove(&handle) {
        Some(_) => 0,
        None => fail(HCP_EHANDLE, format!("handle {handle} is not open")),
    }
}

/// Creates a contractor from `n_functions` UTF-8 strings over `arity`
/// variables. Returns its id (0, 1, ... per handle) or a negative code.
///
/// # Safety
/// `functions` must point to `n_functions` valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn hcp_create_contractor(
    handle: u64,
    functions: *const *const c_char,
    n_functions: usize,
    arity: usize,
) -> i64 {
    let mut id = 0i64;
    let code = guard(|| {
        let reg = registry(handle)?;
        if functions.is_null() && n_functions > 0 {
            return Err(fail(HCP_EARG, "functions is null"));
        }
        let mut fs = Vec::with_capacity(n_functions);
        for i in 0..n_functions {
            let p = *functions.add(i);
            if p.is_null() {
                return Err(fail(HCP_EARG, format!("function {i} is null")));
            }
            match CStr::from_ptr(p).to_str() {
                Ok(s) => fs.push(s.to_string()),
                Err(_) => return Err(fail(HCP_EARG, format!("function {i} is not valid UTF-8"))),
            }
        }
        let mut reg = reg.lock().unwrap_or_else(|e| e.into_inner());
        match reg.create_contractor(&fs, arity) {
            Ok(i) => {
                id = i as i64;
                Ok(0)
            }
            Err(e) => Err(fail(error_code(&e), e.to_string())),
        }
    });
    if code < 0 {
        code as i64
    } else {
        id
    }
}

/// Contracts `bounds` (`x1-, x1+, ..., xn-, xn+`, `len` doubles) in place.
///
/// # Safety
/// `bounds` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hcp_contract(
    handle: u64,
    index: usize,
    bounds: *mut f64,
    len: usize,
) -> i32 {
    guard(|| {
        let reg = registry(handle)?;
        if bounds.is_null() {
            return Err(fail(HCP_EARG, "bounds is null"));
        }
        // one copy in, one copy out, like the array marshalling of a JNI bridge
        let mut local = std::slice::from_raw_parts(bounds, len).to_vec();
        let reg = reg.lock().unwrap_or_else(|e| e.into_inner());
        match reg.contract(index, &mut local) {
            Ok(status) => {
                std::slice::from_raw_parts_mut(bounds, len).copy_from_slice(&local);
                Ok(status.code())
            }
            Err(e) => Err(fail(error_code(&e), e.to_string())),
        }
    })
}

/// Message of the last failed call on this thread; valid until the next
/// call that fails on the same thread.
#[no_mangle]
pub extern "C" fn hcp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
