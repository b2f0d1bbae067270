//! Report bytes are frozen under `tests/golden/`. Set `UPDATE_GOLDEN=1` to
//! rewrite them.

mod common;

use std::fs;

use common::{golden_path, run, CASES};

#[test]
fn reports_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut stale = Vec::new();
    for (name, args) in CASES {
        let (code, out) = run(args, Some(1));
        assert_eq!(code, 0, "{name} exited with {code}");
        let path = golden_path(name);
        if update {
            fs::write(&path, &out).unwrap();
            continue;
        }
        let want = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
        if want != out {
            stale.push(*name);
        }
    }
    assert!(stale.is_empty(), "reports differ from golden files: {stale:?}");
}

#[test]
fn error_report_shape() {
    let (code, out) = run(&["check", "--matroid", "fixtures/absent.json", "--degree", "1"], None);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "mcb/1");
    assert_eq!(v["error"]["kind"], "input");
}
