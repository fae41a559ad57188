//! Compiles a C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include "heightbound.h"
#include <math.h>
#include <stdio.h>
#include <string.h>

int main(void) {
    const char *a[5] = {"0", "0", "0", "-1", "0"};
    HbCurve *c = NULL;
    if (hb_curve_new(a, &c) != HB_OK) return 1;
    HbFaltings f;
    if (hb_curve_faltings(c, 1e-12, 4096, &f) != HB_OK) return 2;
    if (fabs(f.hf_plus.mid - 0.5273441404978) > 1e-12) return 3;
    char *s = NULL;
    if (hb_curve_discriminant(c, &s) != HB_OK || strcmp(s, "64") != 0) return 4;
    hb_string_free(s);
    HbBall h;
    /* (0, 0) has order two */
    if (hb_curve_canonical_height(c, "0", "0", 1e-10, &h) != HB_OK || fabs(h.mid) > h.rad) return 5;
    if (hb_curve_canonical_height(c, "2", "2", 1e-10, &h) != HB_NOT_ON_CURVE) return 6;
    if (strlen(hb_last_error()) == 0) return 7;
    hb_curve_free(c);
    printf("%s %.13f\n", hb_version(), f.hf_plus.mid);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // .../target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler, skipping");
        return;
    }
    let lib = target_dir().join("libheightbound_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let st = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(st.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let line = String::from_utf8(out.stdout).unwrap();
    assert!(line.starts_with(env!("CARGO_PKG_VERSION")), "{line}");
}
