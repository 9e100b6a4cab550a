#![allow(dead_code)]

use std::path::PathBuf;

use qhf::{io, synth, EdgeMap};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

/// Input fixture shared by the golden tests, written on first use.
pub fn house_fixture() -> PathBuf {
    let path = data_path("house128.png");
    if !path.exists() {
        // tests run in parallel: write aside, then rename into place
        let tmp = data_path(&format!("house128.{}.tmp.png", std::process::id()));
        io::save_image(&synth::house(128), &tmp).unwrap();
        std::fs::rename(&tmp, &path).unwrap();
    }
    path
}

/// Compares `actual` with the stored golden map. The golden file is written
/// when missing or when `UPDATE_GOLDEN` is set.
pub fn assert_golden(name: &str, actual: &EdgeMap) {
    let path = data_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() || !path.exists() {
        io::save_edge_map(actual, &path).unwrap();
    }
    let expected = io::load_edge_map(&path).unwrap();
    assert_eq!(
        &expected,
        actual,
        "edge map differs from {}",
        path.display()
    );
}
