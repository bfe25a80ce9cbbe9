//! Compiles and runs `examples/smoke.c` against the static library,
//! exercising the generated header from real C. Skips quietly when no C
//! compiler is on the PATH.

use std::path::PathBuf;
use std::process::Command;

fn find_cc() -> Option<&'static str> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok() {
            return Some(cc);
        }
    }
    None
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = find_cc() else {
        eprintln!("skipping: no C compiler found");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target_dir = std::env::var_os("CARGO_TARGET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| manifest.join("../../target"));
    // Integration tests build alongside the library in the debug profile.
    let lib = target_dir.join("debug").join("libwangcount_capi.a");
    if !lib.exists() {
        eprintln!("skipping: static library not found at {}", lib.display());
        return;
    }
    let out_dir = std::env::temp_dir().join("wangcount-c-smoke");
    std::fs::create_dir_all(&out_dir).unwrap();
    let exe = out_dir.join("smoke");
    let status = Command::new(cc)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(manifest.join("examples/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .expect("compiler runs");
    assert!(status.success(), "C compilation failed");
    let output = Command::new(&exe).output().expect("smoke binary runs");
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("4 29 257 2408"), "unexpected output: {stdout}");
}
