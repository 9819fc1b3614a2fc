#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

/// The documented subcommand examples, each pinned to a golden file.
pub const CASES: &[GoldenCase] = &[
    GoldenCase { name: "chain_analyze_2_2_3", args: &["chain", "analyze", "2", "2", "3"], exit: 0 },
    GoldenCase { name: "chain_analyze_5", args: &["chain", "analyze", "5"], exit: 0 },
    GoldenCase { name: "chain_analyze_3_1", args: &["chain", "analyze", "3", "1"], exit: 1 },
    GoldenCase { name: "chain_analyze_json", args: &["--json", "chain", "analyze", "3", "2", "2"], exit: 0 },
    GoldenCase { name: "ifunction_2_2_3_k3", args: &["ifunction", "2", "2", "3", "--k-max", "3"], exit: 0 },
    GoldenCase {
        name: "ifunction_2_2_3_pf30",
        args: &["ifunction", "2", "2", "3", "--k-max", "30", "--verify-pf"],
        exit: 0,
    },
    GoldenCase { name: "ifunction_2_2_3_limit", args: &["ifunction", "2", "2", "3", "--k-max", "6", "--limit"], exit: 0 },
    GoldenCase { name: "ifunction_3_2", args: &["ifunction", "3", "2", "--k-max", "2"], exit: 1 },
    GoldenCase {
        name: "classes_identity_random",
        args: &["classes", "identity", "--job", "jobs/identity_random.json"],
        exit: 0,
    },
    GoldenCase { name: "classes_hodge_empty", args: &["classes", "hodge", "--job", "jobs/hodge_empty.json"], exit: 0 },
    GoldenCase {
        name: "classes_hodge_divergent",
        args: &["classes", "hodge", "--job", "jobs/hodge_divergent.json"],
        exit: 2,
    },
    GoldenCase {
        name: "classes_hodge_divergent_json",
        args: &["--json", "classes", "hodge", "--job", "jobs/hodge_divergent.json"],
        exit: 2,
    },
    GoldenCase { name: "classes_hodge_chain", args: &["classes", "hodge", "--job", "jobs/hodge_chain.json"], exit: 0 },
    GoldenCase {
        name: "classes_general_fjrw",
        args: &["classes", "general", "--job", "jobs/general_fjrw.json", "--q-max", "3"],
        exit: 2,
    },
    GoldenCase {
        name: "classes_tautrel_divergent",
        args: &["classes", "tautrel", "--job", "jobs/tautrel_divergent.json", "--q-max", "1"],
        exit: 0,
    },
    GoldenCase { name: "classes_bad_schema", args: &["classes", "hodge", "--job", "jobs/bad_schema.json"], exit: 1 },
    GoldenCase { name: "classes_unresolved", args: &["classes", "hodge", "--job", "jobs/unresolved.json"], exit: 1 },
];

pub fn tests_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests")
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    /// The text stored in a golden file.
    pub fn transcript(&self) -> String {
        let mut s = self.stdout.clone();
        if !self.stderr.is_empty() {
            s.push_str("--- stderr ---\n");
            s.push_str(&self.stderr);
        }
        s.push_str(&format!("--- exit {} ---\n", self.code));
        s
    }
}

pub fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_chloc"))
        .args(args)
        .current_dir(tests_dir())
        .env_remove("CHLOC_Q_MAX")
        .output()
        .expect("chloc runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn golden_path(name: &str) -> PathBuf {
    tests_dir().join("golden").join(format!("{name}.txt"))
}

/// Runs a case twice; returns a description of the first problem found.
pub fn check_case(case: &GoldenCase) -> Result<(), String> {
    let first = run(case.args);
    let second = run(case.args);
    if first.transcript() != second.transcript() {
        return Err(format!("{}: output differs between runs", case.name));
    }
    if first.code != case.exit {
        return Err(format!("{}: exit {} instead of {}\n{}", case.name, first.code, case.exit, first.stderr));
    }
    let path = golden_path(case.name);
    if std::env::var_os("CHLOC_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, first.transcript()).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected != first.transcript() {
        return Err(format!("{}: output differs from {}", case.name, path.display()));
    }
    Ok(())
}
