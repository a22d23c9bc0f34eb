//! Builds a small C program against the generated header and the static
//! library, then runs it.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include <string.h>
#include "itlex.h"

#define CHECK(x) do { if ((x) != ITLEX_STATUS_OK) { \
    fprintf(stderr, "%s: %s\n", #x, itlex_last_error()); return 1; } } while (0)

int main(void) {
    ItlexModel *m = NULL;
    CHECK(itlex_model_new("vp", 0.5, &m));
    const char *s1[] = {"eat", "apple"};
    const char *s2[] = {"eat", "bread"};
    const char *s3[] = {"drink", "water"};
    CHECK(itlex_model_add_sample(m, s1, 2, "essen"));
    CHECK(itlex_model_add_sample(m, s2, 2, "essen"));
    CHECK(itlex_model_add_sample(m, s3, 2, "trinken"));

    const char *q[] = {"nobody", "drink", "water"};
    char *winner = NULL;
    CHECK(itlex_model_select(m, q, 3, &winner));
    printf("select %s\n", winner);
    itlex_string_free(winner);

    double w = 0.0;
    CHECK(itlex_model_weight(m, "drink", "trinken", &w));
    printf("weight %.6f\n", w);

    ItlexStatus st = itlex_model_bias(m, "fly", &w);
    printf("status %d\n", (int)st);

    char *head = NULL;
    CHECK(itlex_fs_head("[xcomp [subj I] Register]", &head));
    printf("head %s\n", head);
    itlex_string_free(head);

    itlex_model_free(m);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib = target_dir().join("libitlex_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("client.c");
    let exe = tmp.path().join("client");
    std::fs::write(&src, PROGRAM).unwrap();

    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let build = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("C compiler");
    assert!(
        build.status.success(),
        "{}",
        String::from_utf8_lossy(&build.stderr)
    );

    let run = Command::new(&exe).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let expected_w = ((1.5f64 / 8.0) / ((1.5 / 5.5) * (1.5 / 4.0))).ln();
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert_eq!(
        stdout,
        format!("select trinken\nweight {expected_w:.6}\nstatus 6\nhead register\n")
    );
}
