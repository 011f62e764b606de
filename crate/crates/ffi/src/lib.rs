//! C ABI over the treepiece tokenizer.
//!
//! Every fallible call returns a [`TpStatus`]. On failure a message is kept
//! per thread and can be read with [`tp_last_error`]. Strings handed out by
//! this library must be released with [`tp_string_free`], vocabularies with
//! [`tp_vocab_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use treepiece::commands::{detokenize_line, OOV_SENTINEL};
use treepiece::{io, rng, serialize_placeholder_nest, Error, Skeleton, Tokenizer, Vocabulary};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TpStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Io = 3,
    CorruptVocab = 4,
    Parse = 5,
    /// The skeleton cannot be covered by the vocabulary.
    Oov = 6,
    TooLarge = 7,
    Assembly = 8,
    InvalidArgument = 9,
    Panic = 10,
}

/// Values accepted by the `mode` argument of [`tp_tokenize`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TpMode {
    Viterbi = 0,
    Sample = 1,
}

/// Opaque vocabulary handle.
pub struct TpVocab {
    inner: Vocabulary,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let msg = CString::new(msg).unwrap_or_else(|_| CString::from(c"error message contained NUL"));
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> TpStatus {
    match err {
        Error::FileNotFound(_) | Error::Io(_) => TpStatus::Io,
        Error::CorruptVocabFile(_) | Error::EmptyVocabulary => TpStatus::CorruptVocab,
        Error::OovSkeleton => TpStatus::Oov,
        Error::SkeletonTooLarge { .. } => TpStatus::TooLarge,
        Error::InvalidAttachPosition { .. }
        | Error::DisconnectedComponent
        | Error::NoOpenPlaceholder(_)
        | Error::UnfilledPlaceholders(_)
        | Error::InvalidPartition => TpStatus::Assembly,
        Error::InvalidTheta(_) | Error::PhaseMismatch { .. } | Error::EmptyCorpus => {
            TpStatus::InvalidArgument
        }
        _ => TpStatus::Parse,
    }
}

struct Failure(TpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TpStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TpStatus::Panic
        }
    }
}

/// # Safety
/// `p` is null or a NUL-terminated string valid for reads.
unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(TpStatus::NullArgument, format!("`{name}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(TpStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

/// # Safety
/// `p` is null or valid for writes for the lifetime `'a`.
unsafe fn out_arg<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(TpStatus::NullArgument, format!("`{name}` is null")))
}

/// # Safety
/// `out` is null or valid for writes.
unsafe fn give_string(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    let out = out_arg(out, "out")?;
    let s = CString::new(s).map_err(|_| Failure(TpStatus::Parse, "output contains NUL".into()))?;
    *out = s.into_raw();
    Ok(())
}

/// Loads a vocabulary file. On success `*out` owns a new handle.
///
/// # Safety
/// `path` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tp_vocab_load(path: *const c_char, out: *mut *mut TpVocab) -> TpStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let inner = io::load_vocab(Path::new(path))?;
        *out = Box::into_raw(Box::new(TpVocab { inner }));
        Ok(())
    })
}

/// # Safety
/// `vocab` is null or a handle from [`tp_vocab_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tp_vocab_free(vocab: *mut TpVocab) {
    if !vocab.is_null() {
        drop(Box::from_raw(vocab));
    }
}

/// Number of units, or 0 for a null handle.
///
/// # Safety
/// `vocab` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tp_vocab_len(vocab: *const TpVocab) -> usize {
    vocab.as_ref().map_or(0, |v| v.inner.len())
}

/// Tokenizes one logical form into tab-separated units. `mode` takes a
/// [`TpMode`] value; `theta` and `seed` are read only in sample mode. An
/// uncoverable skeleton returns `TP_STATUS_OOV` and writes nothing.
///
/// # Safety
/// `vocab` is a live handle, `logical_form` a NUL-terminated string and
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tp_tokenize(
    vocab: *const TpVocab,
    logical_form: *const c_char,
    mode: u32,
    theta: f64,
    seed: u64,
    out: *mut *mut c_char,
) -> TpStatus {
    guard(|| {
        let vocab = vocab
            .as_ref()
            .ok_or_else(|| Failure(TpStatus::NullArgument, "`vocab` is null".into()))?;
        let skeleton = Skeleton::parse(str_arg(logical_form, "logical_form")?)?;
        let tokenizer = Tokenizer::new(&vocab.inner);
        let result = match mode {
            m if m == TpMode::Viterbi as u32 => tokenizer.viterbi(&skeleton)?,
            m if m == TpMode::Sample as u32 => {
                tokenizer.ffbs(&skeleton, theta, rng::derive_seed(seed, 0, 0))?
            }
            m => {
                return Err(Failure(
                    TpStatus::InvalidArgument,
                    format!("unknown mode {m}"),
                ))
            }
        };
        give_string(result.partition.to_line(), out)
    })
}

/// Assembles a line of tab-separated units into a skeleton. The `<OOV>`
/// sentinel is echoed back.
///
/// # Safety
/// `line` is a NUL-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tp_detokenize(line: *const c_char, out: *mut *mut c_char) -> TpStatus {
    guard(|| {
        let line = str_arg(line, "line")?;
        give_string(detokenize_line(line)?, out)
    })
}

/// Tokenizes by Viterbi and writes the placeholder-nest serialization.
///
/// # Safety
/// As for [`tp_tokenize`].
#[no_mangle]
pub unsafe extern "C" fn tp_placeholder_nest(
    vocab: *const TpVocab,
    logical_form: *const c_char,
    out: *mut *mut c_char,
) -> TpStatus {
    guard(|| {
        let vocab = vocab
            .as_ref()
            .ok_or_else(|| Failure(TpStatus::NullArgument, "`vocab` is null".into()))?;
        let skeleton = Skeleton::parse(str_arg(logical_form, "logical_form")?)?;
        let result = Tokenizer::new(&vocab.inner).viterbi(&skeleton)?;
        give_string(
            serialize_placeholder_nest(&skeleton, &result.partition)?,
            out,
        )
    })
}

/// # Safety
/// `s` is null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// The sentinel written by the command-line tokenizer for OOV lines.
#[no_mangle]
pub extern "C" fn tp_oov_sentinel() -> *const c_char {
    static SENTINEL: &CStr = c"<OOV>";
    debug_assert_eq!(SENTINEL.to_str(), Ok(OOV_SENTINEL));
    SENTINEL.as_ptr()
}
