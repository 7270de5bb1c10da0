use std::path::{Path, PathBuf};
use std::process::Command;

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<this test>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/xrat.h")).unwrap();
    for name in [
        "xrat_group_new",
        "xrat_group_from_json",
        "xrat_group_free",
        "xrat_group_degree",
        "xrat_group_order",
        "xrat_group_contains",
        "xrat_group_orbit_sizes",
        "xrat_decide",
        "xrat_verdict_kind",
        "xrat_verdict_validate",
        "xrat_verdict_to_json",
        "xrat_verdict_free",
        "xrat_cross_ratio",
        "xrat_set_enumeration_cap",
        "xrat_string_free",
        "xrat_last_error_message",
        "typedef struct XratGroup XratGroup",
        "XRAT_STATUS_CAP_EXCEEDED = 4",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libxrat_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler ({cc})");
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "smoke test failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
