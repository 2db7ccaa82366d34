//! Compiles a small C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "dlvsym.h"

int main(void) {
    DlvSystem *sys = NULL;
    DlvField *q = NULL;
    int passed = -1;
    char *witness = NULL;
    if (dlv_system_parse("lambda1 = 1\nlambda2 = 2\nlambda3 = 3", &sys) != DLV_STATUS_OK) return 10;
    if (dlv_field_parse("0; 1; 0; 0; 0", &q) != DLV_STATUS_OK) return 11;
    if (dlv_check(sys, q, DLV_KIND_LIE, &passed, &witness) != DLV_STATUS_OK) return 12;
    if (passed != 1 || witness != NULL) return 13;
    dlv_field_free(q);
    if (dlv_field_parse("1; 0; u; 0; 0", &q) != DLV_STATUS_OK) return 14;
    if (dlv_check(sys, q, DLV_KIND_LIE, &passed, &witness) != DLV_STATUS_OK) return 15;
    if (passed != 0 || witness == NULL) return 16;
    printf("%s\n", witness);
    dlv_string_free(witness);
    dlv_field_free(q);
    dlv_system_free(sys);
    if (dlv_field_parse("1; 0", &q) != DLV_STATUS_CONFIG) return 17;
    if (strlen(dlv_last_error()) == 0) return 18;
    if (dlv_catalog_size(2) != 9) return 19;
    return 0;
}
"#;

/// Build the static library into its own target directory, so the outer
/// cargo invocation's lock is not contended.
fn build_staticlib(manifest: &std::path::Path) -> Option<PathBuf> {
    let cargo = std::env::var("CARGO").ok()?;
    let target = manifest.join("../../target/c-abi");
    let status = Command::new(cargo)
        .args(["build", "--quiet", "--lib", "-p", "dlv-symmetry-ffi", "--target-dir"])
        .arg(&target)
        .current_dir(manifest)
        .status()
        .ok()?;
    assert!(status.success(), "building the static library failed");
    Some(target.join("debug/libdlv_symmetry_ffi.a"))
}

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler available, skipping");
        return;
    }
    let Some(lib) = build_staticlib(&manifest) else {
        eprintln!("not run under cargo, skipping");
        return;
    };
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with('S'));
}
