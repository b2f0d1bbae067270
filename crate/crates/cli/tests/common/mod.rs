use std::path::{Path, PathBuf};
use std::process::Command;

/// Golden name and the arguments that produce it, run from `tests/`.
pub const CASES: &[(&str, &[&str])] = &[
    (
        "check_u23",
        &["check", "--matroid", "fixtures/u23.json", "--degree", "1"],
    ),
    (
        "check_u33",
        &["check", "--matroid", "fixtures/u33.json", "--degree", "1"],
    ),
    (
        "check_k4_2",
        &["check", "--matroid", "fixtures/k4.json", "--degree", "2"],
    ),
    (
        "profile_u23",
        &["profile", "--matroid", "fixtures/u23.json", "--k", "2"],
    ),
    (
        "construct_nobd",
        &["construct", "nobd", "--n", "12", "--B", "6", "--m", "2"],
    ),
    (
        "construct_negpaving",
        &["construct", "negpaving", "--n", "8", "--A", "1,2,3", "--m", "3"],
    ),
    ("construct_pavexmp", &["construct", "pavexmp", "--n", "8", "--B", "4"]),
    (
        "decompose_u12",
        &["polytope", "decompose", "--matroid", "fixtures/u12.json"],
    ),
    (
        "decompose_k4",
        &["polytope", "decompose", "--matroid", "fixtures/k4.json"],
    ),
    ("flacets_k4", &["polytope", "flacets", "--matroid", "fixtures/k4.json"]),
    (
        "fan_u13_u23",
        &[
            "polytope",
            "fan-eq",
            "--matroid",
            "fixtures/u13.json",
            "--other",
            "fixtures/u23.json",
        ],
    ),
    (
        "equivalence_u23",
        &[
            "polytope",
            "equivalence",
            "--matroid",
            "fixtures/u23.json",
            "--degree",
            "1",
        ],
    ),
    (
        "covers_2_2",
        &["covers", "count", "--a", "2", "--b", "2", "--mode", "both"],
    ),
    ("covers_disjoint_5_3", &["covers", "disjoint", "--a", "5", "--r", "3"]),
    (
        "kcircuits_k4",
        &["graph", "kcircuits", "--graph", "fixtures/k4_graph.json", "--k", "2"],
    ),
    ("twoconn_k4", &["graph", "twoconn", "--graph", "fixtures/k4_graph.json"]),
    (
        "dirgraph_triangle",
        &[
            "graph",
            "dirgraph-check",
            "--graph",
            "fixtures/triangle.json",
            "--r",
            "2",
        ],
    ),
    (
        "digraph_family",
        &["graph", "digraph", "--family", "fixtures/family.json", "--paths", "2"],
    ),
];

pub fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub fn golden_path(name: &str) -> PathBuf {
    tests_dir().join("golden").join(format!("{name}.json"))
}

/// Runs the binary and returns (exit code, stdout).
pub fn run(args: &[&str], threads: Option<usize>) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mcb"));
    cmd.current_dir(tests_dir());
    if let Some(t) = threads {
        cmd.arg("--threads").arg(t.to_string());
    }
    let out = cmd.args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 output"),
    )
}
