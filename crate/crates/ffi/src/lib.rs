//! C interface to itlex.
//!
//! Every fallible function returns an [`ItlexStatus`]; on failure a message
//! is kept per thread and can be read with [`itlex_last_error`]. Results are
//! written through out-pointers. Strings returned by the library are owned by
//! the caller and must be released with [`itlex_string_free`]; models with
//! [`itlex_model_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use itlex::extraction::SamplePair;
use itlex::fstructure::FStructure;
use itlex::itnet::{load_model, save_model, CountStore, ModelFileError, NetError, Network};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItlexStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    ParseError = 4,
    NoHead = 5,
    NotInVocabulary = 6,
    Mismatch = 7,
    SmoothingRequired = 8,
    EmptyVocabulary = 9,
    Io = 10,
    ModelFormat = 11,
    Panic = 12,
}

/// Opaque handle to one category's network.
pub struct ItlexModel {
    net: Network,
}

struct Failure(ItlexStatus, String);

impl Failure {
    fn new(status: ItlexStatus, message: impl Into<String>) -> Self {
        Failure(status, message.into())
    }
}

impl From<NetError> for Failure {
    fn from(e: NetError) -> Self {
        let status = match e {
            NetError::CategoryMismatch { .. } | NetError::LambdaMismatch { .. } => {
                ItlexStatus::Mismatch
            }
            NetError::InvalidLambda(_) => ItlexStatus::InvalidArgument,
            NetError::NotInVocabulary(_) => ItlexStatus::NotInVocabulary,
            NetError::EmptyVocabulary => ItlexStatus::EmptyVocabulary,
            NetError::SmoothingRequired => ItlexStatus::SmoothingRequired,
        };
        Failure(status, e.to_string())
    }
}

impl From<ModelFileError> for Failure {
    fn from(e: ModelFileError) -> Self {
        let status = match e {
            ModelFileError::Io { .. } => ItlexStatus::Io,
            _ => ItlexStatus::ModelFormat,
        };
        Failure(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> ItlexStatus {
    let result = catch_unwind(AssertUnwindSafe(body))
        .unwrap_or_else(|_| Err(Failure::new(ItlexStatus::Panic, "internal panic")));
    match result {
        Ok(()) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ItlexStatus::Ok
        }
        Err(Failure(status, message)) => {
            set_last_error(&message);
            status
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(
            ItlexStatus::NullPointer,
            format!("{name} is null"),
        ));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(ItlexStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn str_array<'a>(p: *const *const c_char, n: usize) -> Result<Vec<&'a str>, Failure> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if p.is_null() {
        return Err(Failure::new(ItlexStatus::NullPointer, "inputs is null"));
    }
    std::slice::from_raw_parts(p, n)
        .iter()
        .map(|&s| str_arg(s, "input"))
        .collect()
}

unsafe fn model_ref<'a>(p: *const ItlexModel) -> Result<&'a ItlexModel, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(ItlexStatus::NullPointer, "model is null"))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(
            ItlexStatus::NullPointer,
            "output pointer is null",
        ));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s)
        .map_err(|_| Failure::new(ItlexStatus::InvalidArgument, "string contains nul"))?;
    if out.is_null() {
        return Err(Failure::new(
            ItlexStatus::NullPointer,
            "output pointer is null",
        ));
    }
    out.write(c.into_raw());
    Ok(())
}

unsafe fn put_model(out: *mut *mut ItlexModel, store: CountStore) -> Result<(), Failure> {
    put(
        out,
        Box::into_raw(Box::new(ItlexModel {
            net: Network::new(store),
        })),
    )
}

/// Library version, as a static string.
#[no_mangle]
pub extern "C" fn itlex_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn itlex_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn itlex_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates an empty model for `category` with smoothing constant `lambda`.
///
/// # Safety
/// `category` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn itlex_model_new(
    category: *const c_char,
    lambda: f64,
    out: *mut *mut ItlexModel,
) -> ItlexStatus {
    guard(|| {
        let category = str_arg(category, "category")?.to_lowercase();
        put_model(out, CountStore::new(&category, lambda)?)
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn itlex_model_free(model: *mut ItlexModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Counts one training sample of the model's category.
///
/// # Safety
/// `inputs` must point to `n_inputs` valid C strings; `output` must be a
/// valid C string.
#[no_mangle]
pub unsafe extern "C" fn itlex_model_add_sample(
    model: *mut ItlexModel,
    inputs: *const *const c_char,
    n_inputs: usize,
    output: *const c_char,
) -> ItlexStatus {
    guard(|| {
        let model = model
            .as_mut()
            .ok_or_else(|| Failure::new(ItlexStatus::NullPointer, "model is null"))?;
        let inputs = str_array(inputs, n_inputs)?;
        let output = str_arg(output, "output")?;
        let sample = SamplePair::new(
            model.net.category(),
            inputs.iter().map(|s| s.to_lowercase()),
            &output.to_lowercase(),
        );
        model.net.update(&sample)?;
        Ok(())
    })
}

/// Writes a new model holding the summed counts of `a` and `b`.
///
/// # Safety
/// `a` and `b` must be live models and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn itlex_model_merge(
    a: *const ItlexModel,
    b: *const ItlexModel,
    out: *mut *mut ItlexModel,
) -> ItlexStatus {
    guard(|| {
        let merged = model_ref(a)?.net.store().merge(model_ref(b)?.net.store())?;
        put_model(out, merged)
    })
}

/// Number of samples counted so far; 0 for a null model.
///
/// # Safety
/// `model` must be null or a live model.
#[no_mangle]
pub unsafe extern "C" fn itlex_model_n_samples(model: *const ItlexModel) -> u64 {
    model.as_ref().map_or(0, |m| m.net.store().n_samples())
}

/// # Safety
/// `path` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn itlex_model_load(
    path: *const c_char,
    out: *mut *mut ItlexModel,
) -> ItlexStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        put_model(out, load_model(Path::new(path))?)
    })
}

/// # Safety
/// `model` must be live and `path` a valid C string.
#[no_mangle]
pub unsafe extern "C" fn itlex_model_save(
    model: *const ItlexModel,
    path: *const c_char,
) -> ItlexStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        save_model(model_ref(model)?.net.store(), Path::new(path))?;
        Ok(())
    })
}

/// Model file text for `model`.
///
/// # Safety
/// `model` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn itlex_model_to_string(
    model: *const ItlexModel,
    out: *mut *mut c_char,
) -> ItlexStatus {
    guard(|| put_string(out, model_ref(model)?.net.store().to_model_string()))
}

/// # Safety
/// `text` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn itlex_model_from_string(
    text: *const c_char,
    out: *mut *mut ItlexModel,
) -> ItlexStatus {
    guard(|| put_model(out, CountStore::from_model_str(str_arg(text, "text")?)?))
}

/// Association weight between input `i` and output `j`.
///
/// # Safety
/// `model` must be live, `i` and `j` valid C strings, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn itlex_model_weight(
    model: *const ItlexModel,
    i: *const c_char,
    j: *const c_char,
    out: *mut f64,
) -> ItlexStatus {
    guard(|| {
        let w = model_ref(model)?
            .net
            .weight(str_arg(i, "i")?, str_arg(j, "j")?)?;
        put(out, w)
    })
}

/// Bias of output `j`.
///
/// # Safety
/// `model` must be live, `j` a valid C string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn itlex_model_bias(
    model: *const ItlexModel,
    j: *const c_char,
    out: *mut f64,
) -> ItlexStatus {
    guard(|| put(out, model_ref(model)?.net.bias(str_arg(j, "j")?)?))
}

/// Selects the output most activated by the input set. Unknown inputs are
/// ignored.
///
/// # Safety
/// `model` must be live, `inputs` must point to `n_inputs` valid C strings,
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn itlex_model_select(
    model: *const ItlexModel,
    inputs: *const *const c_char,
    n_inputs: usize,
    out: *mut *mut c_char,
) -> ItlexStatus {
    guard(|| {
        let inputs: Vec<String> = str_array(inputs, n_inputs)?
            .iter()
            .map(|s| s.to_lowercase())
            .collect();
        put_string(out, model_ref(model)?.net.select(&inputs)?)
    })
}

unsafe fn parse_fs(text: *const c_char) -> Result<FStructure, Failure> {
    FStructure::parse(str_arg(text, "text")?)
        .map_err(|e| Failure::new(ItlexStatus::ParseError, e.to_string()))
}

/// Parses a bracketed f-structure and writes its canonical form.
///
/// # Safety
/// `text` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn itlex_fs_canonicalize(
    text: *const c_char,
    out: *mut *mut c_char,
) -> ItlexStatus {
    guard(|| put_string(out, parse_fs(text)?.serialize()))
}

/// Parses a bracketed f-structure and writes its head.
///
/// # Safety
/// `text` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn itlex_fs_head(text: *const c_char, out: *mut *mut c_char) -> ItlexStatus {
    guard(|| {
        let head = parse_fs(text)?
            .head()
            .map_err(|e| Failure::new(ItlexStatus::NoHead, e.to_string()))?;
        put_string(out, head.into_string())
    })
}
