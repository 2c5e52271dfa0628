use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use goodcolour_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(gc_last_error()) }.to_str().unwrap().to_string()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { gc_string_free(p) };
    s
}

#[test]
fn triangle_round_trip() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(gc_hypergraph_parse(cstr("a b\nb c\na c\n").as_ptr(), &mut g), GcStatus::Ok);
        assert_eq!(gc_hypergraph_num_vertices(g), 3);
        assert_eq!(gc_hypergraph_num_edges(g), 3);
        assert_eq!(gc_hypergraph_max_degree(g), 2);

        let mut inst = ptr::null_mut();
        assert_eq!(gc_instance_proper(g, &mut inst), GcStatus::Ok);
        gc_hypergraph_free(g);

        let (mut beta, mut c) = (0.0, 0u64);
        assert_eq!(gc_optimize_beta(inst, &mut beta, &mut c), GcStatus::Ok);
        assert_eq!((beta, c), (1.0, 3));

        let (mut ok, mut slack) = (false, 0.0);
        assert_eq!(gc_check_key(inst, 1.0, 3, &mut ok, &mut slack), GcStatus::Ok);
        assert!(ok);
        assert_eq!(slack, 0.0);

        let mut out = ptr::null_mut();
        assert_eq!(gc_count_good(inst, 3, 1000, &mut out), GcStatus::Ok);
        assert_eq!(take_string(out), "6");
        assert_eq!(last_error(), "");

        assert_eq!(gc_count_good(inst, 3, 10, &mut out), GcStatus::BudgetExceeded);
        assert!(last_error().contains("budget"));
        assert_eq!(gc_count_good(inst, 0, 10, &mut out), GcStatus::InvalidArgument);
        assert_eq!(gc_check_key(inst, -1.0, 3, &mut ok, &mut slack), GcStatus::InvalidArgument);
        gc_instance_free(inst);
    }
}

#[test]
fn instance_json_with_lists() {
    let text = r#"{"vertices": ["x", "y"], "edges": [["x", "y"]], "lists": {"x": [1, 2], "y": [2]}}"#;
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(gc_instance_parse(cstr(text).as_ptr(), &mut inst), GcStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(gc_count_good(inst, 0, 100, &mut out), GcStatus::Ok);
        assert_eq!(take_string(out), "1");
        gc_instance_free(inst);
    }
}

#[test]
fn closed_forms() {
    unsafe {
        let mut out = ptr::null_mut();
        let req = cstr(r#"{"app": "proper-hypergraph", "r": 3, "delta": 4}"#);
        assert_eq!(gc_closed_form_json(req.as_ptr(), &mut out), GcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["c"], 4);
        assert_eq!(v["beta"], 2.0);

        let req = cstr(r#"{"app": "proper-graph", "delta": 3, "beta": "3/2"}"#);
        assert_eq!(gc_closed_form_json(req.as_ptr(), &mut out), GcStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["c"], 5);

        let req = cstr(r#"{"app": "star"}"#);
        assert_eq!(gc_closed_form_json(req.as_ptr(), &mut out), GcStatus::InvalidArgument);
        assert!(last_error().contains("delta"));
        let req = cstr("not json");
        assert_eq!(gc_closed_form_json(req.as_ptr(), &mut out), GcStatus::ParseError);
    }
}

#[test]
fn error_paths() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(gc_hypergraph_parse(ptr::null(), &mut g), GcStatus::NullPointer);
        assert_eq!(gc_hypergraph_parse(cstr("a\n").as_ptr(), &mut g), GcStatus::ParseError);
        assert!(last_error().contains("line 1"));
        assert_eq!(gc_hypergraph_parse(cstr("a b").as_ptr(), ptr::null_mut()), GcStatus::NullPointer);
        let bad = [0xffu8, 0xfe, 0];
        assert_eq!(gc_hypergraph_parse(bad.as_ptr().cast(), &mut g), GcStatus::InvalidUtf8);
        let (mut b, mut c) = (0.0, 0);
        assert_eq!(gc_optimize_beta(ptr::null(), &mut b, &mut c), GcStatus::NullPointer);
        assert_eq!(gc_hypergraph_num_vertices(ptr::null()), 0);
        gc_hypergraph_free(ptr::null_mut());
        gc_instance_free(ptr::null_mut());
        gc_string_free(ptr::null_mut());
        let v = CStr::from_ptr(gc_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn header_declares_the_abi() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/goodcolour.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "gc_hypergraph_parse",
        "gc_hypergraph_free",
        "gc_instance_parse",
        "gc_instance_proper",
        "gc_instance_free",
        "gc_check_key",
        "gc_optimize_beta",
        "gc_count_good",
        "gc_closed_form_json",
        "gc_string_free",
        "gc_last_error",
        "typedef struct GcInstance GcInstance",
        "GC_STATUS_BUDGET_EXCEEDED = 5",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    // Compile a C translation unit against the header when a compiler exists.
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"goodcolour.h\"\nint main(void) { GcInstance *i = NULL; uint64_t c; double b;\n\
         return gc_optimize_beta(i, &b, &c) == GC_STATUS_NULL_POINTER ? 0 : 1; }\n",
    )
    .unwrap();
    match Command::new("cc")
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&src)
        .output()
    {
        Ok(out) => assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr)),
        Err(_) => eprintln!("no C compiler; skipped the compile check"),
    }
}
