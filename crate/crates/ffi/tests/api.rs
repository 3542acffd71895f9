use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use pcgroup_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

struct Graph(*mut PcgGraph);

impl Graph {
    fn new(text: &str) -> Self {
        let mut g = ptr::null_mut();
        assert_eq!(unsafe { pcg_graph_parse(c(text).as_ptr(), &mut g) }, PcgStatus::Ok);
        Graph(g)
    }
}

impl Drop for Graph {
    fn drop(&mut self) {
        unsafe { pcg_graph_free(self.0) }
    }
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { pcg_string_free(s) };
    out
}

fn last_error() -> String {
    let p = pcg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

const G1: &str = "gens: a b c\nedge: a b\n";

#[test]
fn normalize_and_word_problem() {
    let g = Graph::new(G1);
    assert_eq!(unsafe { pcg_graph_size(g.0) }, 3);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pcg_normalize(g.0, c("b a a^-1 c c^-1").as_ptr(), &mut out) }, PcgStatus::Ok);
    assert_eq!(take(out), "b");
    let mut eq = false;
    assert_eq!(unsafe { pcg_equals(g.0, c("a b").as_ptr(), c("b a").as_ptr(), &mut eq) }, PcgStatus::Ok);
    assert!(eq);
    assert_eq!(unsafe { pcg_equals(g.0, c("a c").as_ptr(), c("c a").as_ptr(), &mut eq) }, PcgStatus::Ok);
    assert!(!eq);
    let mut geo = true;
    assert_eq!(unsafe { pcg_is_geodesic(g.0, c("a b a^-1").as_ptr(), &mut geo) }, PcgStatus::Ok);
    assert!(!geo);
}

#[test]
fn json_entry_points() {
    let g = Graph::new(G1);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pcg_conjugate_json(g.0, c("a c").as_ptr(), c("c a").as_ptr(), &mut out) }, PcgStatus::Ok);
    let j: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(j["conjugate"], true);
    assert_eq!(unsafe { pcg_centralizer_json(g.0, c("a").as_ptr(), &mut out) }, PcgStatus::Ok);
    let j: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(j["cyclic_parts"], serde_json::json!(["a"]));
    assert_eq!(j["abelian_part"], serde_json::json!(["b"]));
    assert_eq!(unsafe { pcg_root_json(g.0, c("a c a c a c").as_ptr(), &mut out) }, PcgStatus::Ok);
    let j: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(j["root"], "a c");
    assert_eq!(j["exponent"], 3);
    assert_eq!(unsafe { pcg_solve_json(g.0, c("?x a ?x^-1 a^-1").as_ptr(), 1, 0, &mut out) }, PcgStatus::Ok);
    let j: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(j["count"], 5);
}

#[test]
fn errors_are_reported() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { pcg_graph_parse(c("gens: a a\n").as_ptr(), &mut g) }, PcgStatus::InvalidInput);
    assert!(g.is_null());
    assert!(!last_error().is_empty());
    let g = Graph::new(G1);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pcg_normalize(g.0, c("a^x").as_ptr(), &mut out) }, PcgStatus::ParseError);
    assert_eq!(unsafe { pcg_normalize(g.0, ptr::null(), &mut out) }, PcgStatus::NullPointer);
    assert_eq!(unsafe { pcg_normalize(ptr::null(), c("a").as_ptr(), &mut out) }, PcgStatus::NullPointer);
    assert_eq!(unsafe { pcg_normalize(g.0, c("a").as_ptr(), ptr::null_mut()) }, PcgStatus::NullPointer);
    assert_eq!(unsafe { pcg_centralizer_json(g.0, c("1").as_ptr(), &mut out) }, PcgStatus::DomainError);
    assert_eq!(unsafe { pcg_solve_json(g.0, c("?x ?y ?z").as_ptr(), 3, 10, &mut out) }, PcgStatus::GuardExceeded);
    assert_eq!(unsafe { pcg_graph_size(ptr::null()) }, 0);
    unsafe { pcg_graph_free(ptr::null_mut()) };
    unsafe { pcg_string_free(ptr::null_mut()) };
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let lib = target_dir().join("libpcgroup_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("pcg_smoke");
    let status = Command::new(&cc)
        .arg(root.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(root.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke program failed to compile");
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "C smoke program exited with {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).contains("\"count\":5"));
}
