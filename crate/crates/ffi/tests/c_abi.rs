//! Compiles a small C program against the generated header and static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "waring_lab.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "line %d: %s\n", __LINE__, #cond); return 1; } } while (0)

int main(void) {
    char *g = NULL;
    CHECK(wl_g_of_k(3, &g) == WL_STATUS_OK);
    CHECK(strcmp(g, "9") == 0);
    wl_string_free(g);

    WlSegment *seg = NULL;
    CHECK(wl_segment_bounds(57, 128, &seg) == WL_STATUS_OK);
    int straddles = 1;
    CHECK(wl_segment_straddles(seg, &straddles) == WL_STATUS_OK && straddles == 0);
    WlInterval *u = NULL;
    CHECK(wl_segment_intervals(seg, &u, NULL, NULL) == WL_STATUS_OK);
    double mid = 0, width = 1;
    CHECK(wl_interval_get(u, &mid, &width) == WL_STATUS_OK);
    CHECK(mid > 10.0142 && mid < 10.0143 && width < 1e-30);
    wl_interval_free(u);
    wl_segment_free(seg);

    WlInterval *t = NULL;
    CHECK(wl_t_n(1, 64, &t) == WL_STATUS_DOMAIN && t == NULL);
    CHECK(wl_last_error_message() != NULL);

    WlLemmaReport *rep = NULL;
    CHECK(wl_lemma_run(WL_LEMMA_LEMMA1, 2, 100, 0, 64, 0, &rep) == WL_STATUS_OK);
    uint64_t checked = 0, failures = 1;
    CHECK(wl_lemma_counts(rep, &checked, NULL, &failures, NULL) == WL_STATUS_OK);
    CHECK(checked == 99 && failures == 0);
    wl_lemma_report_free(rep);

    printf("ok %s\n", wl_version());
    return 0;
}
"#;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// `target/<profile>`, the directory holding the static library.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn header_is_valid_c() {
    let header = crate_dir().join("include/waring_lab.h");
    let status = Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-std=c99"])
        .arg(&header)
        .status();
    match status {
        Ok(s) => assert!(s.success()),
        Err(e) => eprintln!("skipping: no C compiler ({e})"),
    }
}

#[test]
fn c_program_links_and_runs() {
    let lib = profile_dir().join("libwaring_lab_ffi.a");
    if !lib.exists() {
        eprintln!("skipping: {} not built", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let compiled = Command::new("cc")
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status();
    match compiled {
        Ok(s) => assert!(s.success(), "cc failed"),
        Err(e) => {
            eprintln!("skipping: no C compiler ({e})");
            return;
        }
    }
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok 0.1.0"));
}
