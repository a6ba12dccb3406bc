#![allow(dead_code)]

use std::path::PathBuf;

/// Instances built directly with the library, shared with the core tests.
#[path = "../../../core/tests/common/mod.rs"]
pub mod fixtures;

/// Run the CLI in-process; returns (status, stdout, stderr).
pub fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("schedmatch").chain(args.iter().copied());
    let code = schedmatch_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

pub fn crate_path(relative: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(relative)
}

/// Compare with a checked-in file; `SCHEDMATCH_BLESS=1` rewrites it instead.
pub fn golden(relative: &str, actual: &str) {
    let path = crate_path(relative);
    if std::env::var_os("SCHEDMATCH_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{} differs; rerun with SCHEDMATCH_BLESS=1 to update", path.display());
}
