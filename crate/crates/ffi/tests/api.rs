use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use btd_ffi::*;

fn parse(text: &str) -> *mut BtdForest {
    let c = CString::new(text).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { btd_forest_parse(c.as_ptr(), &mut f) }, BtdStatus::Ok);
    f
}

fn last_error() -> String {
    let p = btd_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn rank_and_read_back() {
    let f = parse("0 1\n1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n");
    unsafe {
        assert_eq!(btd_forest_edge_count(f), 7);
        assert_eq!(btd_forest_vertex_count(f), 8);
        let mut e = ptr::null_mut();
        assert_eq!(btd_rank_optimal(f, &mut e), BtdStatus::Ok);
        assert_eq!(btd_elim_height(e), 3);
        let mut buf = [0u32; 7];
        assert_eq!(btd_elim_levels(e, buf.as_mut_ptr(), 7), BtdStatus::Ok);
        let mut bad = 0usize;
        assert_eq!(btd_validate_levels(f, buf.as_ptr(), 7, &mut bad), BtdStatus::Ok);
        assert_eq!(bad, 0);
        let mut short = [0u32; 3];
        assert_eq!(btd_elim_levels(e, short.as_mut_ptr(), 3), BtdStatus::OutOfRange);
        let mut roots = 0;
        for edge in 0..7 {
            let mut p = 0i64;
            assert_eq!(btd_elim_parent(e, edge, &mut p), BtdStatus::Ok);
            roots += (p == -1) as usize;
        }
        assert_eq!(roots, 1);
        btd_elim_free(e);

        let mut a = ptr::null_mut();
        assert_eq!(btd_approx_tree(f, 4, &mut a), BtdStatus::Ok);
        assert!(btd_elim_width(a) <= 4);
        assert_eq!(btd_elim_height(a), 3);
        btd_elim_free(a);

        let mut x = ptr::null_mut();
        assert_eq!(btd_exact(f, 1, 0, &mut x), BtdStatus::Ok);
        assert_eq!(btd_elim_height(x), 7);
        btd_elim_free(x);
        btd_forest_free(f);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let c = CString::new("0 1\n1 2\n2 0\n").unwrap();
        let mut f = ptr::null_mut();
        assert_eq!(btd_forest_parse(c.as_ptr(), &mut f), BtdStatus::Parse);
        assert!(f.is_null());
        assert!(last_error().contains("cycle"));
        assert_eq!(btd_forest_parse(ptr::null(), &mut f), BtdStatus::NullPointer);

        let f = parse("0 1\n1 2\n2 3\n");
        let lv = [1u32, 1, 1];
        let mut e = ptr::null_mut();
        assert_eq!(btd_elim_from_levels(f, lv.as_ptr(), 3, &mut e), BtdStatus::InvalidRanking);
        assert!(last_error().contains("invalid ranking"));
        let mut bad = 0;
        assert_eq!(btd_validate_levels(f, lv.as_ptr(), 3, &mut bad), BtdStatus::Ok);
        assert!(bad > 0);
        assert_eq!(btd_validate_levels(f, lv.as_ptr(), 2, &mut bad), BtdStatus::InvalidRanking);
        assert_eq!(btd_approx_tree(f, 0, &mut e), BtdStatus::InvalidArgument);
        btd_forest_free(f);

        let edges: Vec<u32> = (0..20).flat_map(|i| [i, i + 1]).collect();
        let mut big = ptr::null_mut();
        assert_eq!(btd_forest_from_edges(21, edges.as_ptr(), 20, &mut big), BtdStatus::Ok);
        assert_eq!(btd_exact(big, 2, 0, &mut e), BtdStatus::GuardExceeded);
        let mut g = ptr::null_mut();
        assert_eq!(btd_forest_from_edges(3, [0u32, 5].as_ptr(), 1, &mut g), BtdStatus::OutOfRange);
        btd_forest_free(big);
        btd_forest_free(ptr::null_mut());
        assert_eq!(btd_elim_height(ptr::null()), 0);
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(btd_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// The generated header compiles as C and as C++.
#[test]
fn header_compiles() {
    let dir = tempfile_dir();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"btd.h\"\nint main(void) {\n  BtdForest *f = 0;\n  BtdElim *e = 0;\n  \
         BtdStatus s = btd_forest_parse(\"0 1\", &f);\n  if (s == BTD_STATUS_OK) btd_rank_optimal(f, &e);\n  \
         btd_elim_free(e);\n  btd_forest_free(f);\n  return (int)btd_elim_height(0);\n}\n",
    )
    .unwrap();
    let include = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    for (cc, lang) in [("cc", "c"), ("c++", "c++")] {
        let status = Command::new(cc)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I", include])
            .arg(&src)
            .status()
            .expect("a C compiler is installed");
        assert!(status.success(), "{cc} rejected the header");
    }
}

fn tempfile_dir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("btd-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
