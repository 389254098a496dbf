//! C interface to hextet: catalog lookup, mesh scanning and exact
//! verification of realizations.
//!
//! Objects are opaque handles created by `hextet_*_new`/`_load`/`_build` and
//! released with the matching `_free`. Every fallible call returns a
//! [`HextetStatus`]; the message of the most recent failure on the calling
//! thread is available from [`hextet_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use hextet::meshscan::{classify_occurrences, find_hexahedra, load_mesh, TetMesh};
use hextet::realize::{verify_realization, Realization};
use hextet::{Catalog, Error, Triangulation};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HextetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Parse = 4,
    NotFound = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Number of tetrahedron counts (5 through 15) in a scan histogram.
pub const HEXTET_SIZE_BINS: usize = 11;

/// A catalog of triangulation classes.
pub struct HextetCatalog(Catalog);

/// A tetrahedral mesh with its adjacency.
pub struct HextetMesh(TetMesh);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: HextetStatus, msg: impl Into<String>) -> HextetStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
    status
}

fn from_error(e: Error) -> HextetStatus {
    let status = match &e {
        Error::Io(_) => HextetStatus::Io,
        Error::Parse { .. } | Error::Json(_) | Error::Schema(_) => HextetStatus::Parse,
        Error::UnknownPattern(_) => HextetStatus::NotFound,
        _ => HextetStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> HextetStatus) -> HextetStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(HextetStatus::Panic, "internal panic"))
}

/// # Safety
/// `s` is null or a NUL-terminated string.
unsafe fn path_arg<'a>(s: *const c_char) -> Result<&'a Path, HextetStatus> {
    if s.is_null() {
        return Err(fail(HextetStatus::NullPointer, "path is null"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map(Path::new)
        .map_err(|_| fail(HextetStatus::InvalidArgument, "path is not UTF-8"))
}

fn write_str(s: &str, buf: *mut c_char, len: usize) -> HextetStatus {
    if buf.is_null() {
        return fail(HextetStatus::NullPointer, "buffer is null");
    }
    if s.len() >= len {
        return fail(HextetStatus::BufferTooSmall, format!("need {} bytes", s.len() + 1));
    }
    // SAFETY: the caller provides `len` writable bytes and `s.len() + 1 <= len`.
    unsafe {
        std::ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
        *buf.add(s.len()) = 0;
    }
    HextetStatus::Ok
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn hextet_status_message(status: HextetStatus) -> *const c_char {
    let s: &'static CStr = match status {
        HextetStatus::Ok => c"ok",
        HextetStatus::NullPointer => c"null pointer",
        HextetStatus::InvalidArgument => c"invalid argument",
        HextetStatus::Io => c"i/o error",
        HextetStatus::Parse => c"parse error",
        HextetStatus::NotFound => c"not found",
        HextetStatus::BufferTooSmall => c"buffer too small",
        HextetStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Copies the last error message of this thread into `buf` and returns its
/// length in bytes, excluding the terminator. Truncates to fit.
///
/// # Safety
/// `buf` is null or points to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn hextet_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = e.len().min(len - 1);
            std::ptr::copy_nonoverlapping(e.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        e.len()
    })
}

/// Enumerates the catalog searching up to `max_tets` tetrahedra.
///
/// # Safety
/// `out` is null or a valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn hextet_catalog_build(max_tets: usize, out: *mut *mut HextetCatalog) -> HextetStatus {
    guard(|| {
        if out.is_null() {
            return fail(HextetStatus::NullPointer, "out is null");
        }
        if !(5..=18).contains(&max_tets) {
            return fail(HextetStatus::InvalidArgument, format!("max_tets {max_tets} outside 5..=18"));
        }
        *out = Box::into_raw(Box::new(HextetCatalog(Catalog::build(max_tets))));
        HextetStatus::Ok
    })
}

/// Loads a catalog JSON file.
///
/// # Safety
/// `path` is a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hextet_catalog_load(path: *const c_char, out: *mut *mut HextetCatalog) -> HextetStatus {
    guard(|| {
        if out.is_null() {
            return fail(HextetStatus::NullPointer, "out is null");
        }
        let path = match path_arg(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match std::fs::read_to_string(path).map_err(Error::from).and_then(|t| Catalog::from_json(&t)) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(HextetCatalog(c)));
                HextetStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Number of classes, or 0 for a null handle.
///
/// # Safety
/// `catalog` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hextet_catalog_len(catalog: *const HextetCatalog) -> usize {
    catalog.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `catalog` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hextet_catalog_free(catalog: *mut HextetCatalog) {
    if !catalog.is_null() {
        drop(Box::from_raw(catalog));
    }
}

/// Writes the class id of a labeled triangulation into `buf`. `labels`
/// holds `n_tets` groups of four template labels in 1..=8.
///
/// # Safety
/// `catalog` is a live handle, `labels` points to `4 * n_tets` bytes and
/// `buf` to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn hextet_classify(
    catalog: *const HextetCatalog,
    labels: *const u8,
    n_tets: usize,
    buf: *mut c_char,
    len: usize,
) -> HextetStatus {
    guard(|| {
        let Some(catalog) = catalog.as_ref() else {
            return fail(HextetStatus::NullPointer, "catalog is null");
        };
        if labels.is_null() {
            return fail(HextetStatus::NullPointer, "labels is null");
        }
        let flat = std::slice::from_raw_parts(labels, 4 * n_tets);
        let lists: Vec<[u8; 4]> = flat.chunks_exact(4).map(|c| [c[0], c[1], c[2], c[3]]).collect();
        let t = match Triangulation::from_label_lists(&lists) {
            Ok(t) => t,
            Err(e) => return from_error(e),
        };
        match catalog.0.lookup(&t) {
            Some(e) => write_str(&e.id, buf, len),
            None => fail(HextetStatus::NotFound, "not a triangulation of the hexahedron"),
        }
    })
}

/// Builds a mesh from `n_vertices` xyz triples and `n_tets` groups of four
/// 0-based vertex indices.
///
/// # Safety
/// `coords` points to `3 * n_vertices` doubles, `tets` to `4 * n_tets`
/// indices, `out` is a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hextet_mesh_new(
    coords: *const f64,
    n_vertices: usize,
    tets: *const usize,
    n_tets: usize,
    out: *mut *mut HextetMesh,
) -> HextetStatus {
    guard(|| {
        if out.is_null() || (coords.is_null() && n_vertices > 0) || (tets.is_null() && n_tets > 0) {
            return fail(HextetStatus::NullPointer, "null argument");
        }
        let slice = |p: *const f64, n| if n == 0 { &[][..] } else { std::slice::from_raw_parts(p, n) };
        let vertices = slice(coords, 3 * n_vertices).chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        let tets = if n_tets == 0 { &[][..] } else { std::slice::from_raw_parts(tets, 4 * n_tets) };
        let tets = tets.chunks_exact(4).map(|c| [c[0], c[1], c[2], c[3]]).collect();
        match TetMesh::new(vertices, tets) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(HextetMesh(m)));
                HextetStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Loads a MEDIT `.mesh` or TetGen `.node`/`.ele` file.
///
/// # Safety
/// `path` is a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hextet_mesh_load(path: *const c_char, out: *mut *mut HextetMesh) -> HextetStatus {
    guard(|| {
        if out.is_null() {
            return fail(HextetStatus::NullPointer, "out is null");
        }
        let path = match path_arg(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match load_mesh(path) {
            Ok(m) => {
                *out = Box::into_raw(Box::new(HextetMesh(m)));
                HextetStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `mesh` is null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hextet_mesh_free(mesh: *mut HextetMesh) {
    if !mesh.is_null() {
        drop(Box::from_raw(mesh));
    }
}

/// Counts the hexahedra of `mesh` by tetrahedron count: `counts[i]` receives
/// the number with `5 + i` tetrahedra. Hexahedra failing the validity proxy
/// are counted only if `include_invalid` is set.
///
/// # Safety
/// Handles are live and `counts` points to `HEXTET_SIZE_BINS` writable values.
#[no_mangle]
pub unsafe extern "C" fn hextet_scan(
    catalog: *const HextetCatalog,
    mesh: *const HextetMesh,
    include_invalid: bool,
    counts: *mut usize,
) -> HextetStatus {
    guard(|| {
        let (Some(catalog), Some(mesh)) = (catalog.as_ref(), mesh.as_ref()) else {
            return fail(HextetStatus::NullPointer, "null handle");
        };
        if counts.is_null() {
            return fail(HextetStatus::NullPointer, "counts is null");
        }
        match find_hexahedra(&mesh.0, &catalog.0) {
            Ok(occ) => {
                let kept: Vec<_> = occ.into_iter().filter(|o| include_invalid || o.valid).collect();
                let table = classify_occurrences(&kept);
                std::ptr::copy_nonoverlapping(table.occurrences.as_ptr(), counts, HEXTET_SIZE_BINS);
                HextetStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Exactly re-verifies one realization given as JSON. On return `valid`
/// tells whether it passed; the reason for a rejection is available from
/// [`hextet_last_error`].
///
/// # Safety
/// `json` is a NUL-terminated string and `valid` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hextet_verify_realization(json: *const c_char, valid: *mut bool) -> HextetStatus {
    guard(|| {
        if json.is_null() || valid.is_null() {
            return fail(HextetStatus::NullPointer, "null argument");
        }
        let Ok(text) = CStr::from_ptr(json).to_str() else {
            return fail(HextetStatus::InvalidArgument, "json is not UTF-8");
        };
        let r: Realization = match serde_json::from_str(text) {
            Ok(r) => r,
            Err(e) => return from_error(e.into()),
        };
        match verify_realization(&r) {
            Ok(()) => *valid = true,
            Err(f) => {
                *valid = false;
                fail(HextetStatus::Ok, format!("{f:?}"));
            }
        }
        HextetStatus::Ok
    })
}
