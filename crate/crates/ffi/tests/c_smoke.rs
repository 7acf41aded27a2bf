//! Compiles a small C program against the generated header and the static
//! library. Skipped when no C compiler is available.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "biped_gait.h"

int main(void) {
    BgRobot *robot = bg_robot_default();
    double t = 0.0;
    if (bg_stride_time(robot, 110.0 * M_PI / 180.0, 70.0 * M_PI / 180.0, 800.0, &t) != BG_STATUS_OK) return 1;
    if (fabs(t - 0.84) > 0.01) return 2;
    if (bg_stride_time(robot, 2.0, 1.0, 700.0, &t) != BG_STATUS_INFEASIBLE) return 3;
    if (bg_last_error() == NULL) return 4;

    BgGait gait = {70.0 * M_PI / 180.0, 110.0 * M_PI / 180.0, 800.0, 0.6, 0.7, -80.0 * M_PI / 180.0};
    BgSurface *surface = NULL;
    if (bg_surface_from_json("{\"type\":\"pwl\",\"k\":0.12}", &surface) != BG_STATUS_OK) return 5;
    BgWalk *walk = NULL;
    if (bg_walk_new(robot, &gait, surface, 0.0, 6, 16, false, &walk) != BG_STATUS_OK) return 6;
    if (bg_walk_stride_count(walk) != 6) return 7;
    BgStrideInfo last;
    if (bg_walk_stride(walk, 5, &last) != BG_STATUS_OK) return 8;
    if (!(last.strike_x > 2.0)) return 9;
    printf("%.6f\n", t);
    bg_walk_free(walk);
    bg_surface_free(surface);
    bg_robot_free(robot);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
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
    let lib = target_dir().join("libbiped_gait_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-D_DEFAULT_SOURCE")
        .arg(&src)
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    let t: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((t - 0.8407).abs() < 1e-4);
}
