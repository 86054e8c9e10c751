//! The worked-example corpus: a manifest of command invocations with their
//! expected exit codes and byte-exact outputs.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use torocob::to_canonical_pretty;

use crate::run::{run_args, Outcome};
use crate::schema::{SCHEMA_KEY, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub name: String,
    pub command: String,
    /// Input path relative to the corpus directory.
    pub input: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(with = "torocob::dec")]
    pub exit: i32,
    /// Expected standard output, relative to the corpus directory. Absent
    /// means the command must print nothing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "corpus")]
pub struct Manifest {
    #[serde(rename = "torocob-schema")]
    pub schema: String,
    pub cases: Vec<Case>,
}

pub fn load_manifest(dir: &Path) -> Result<Manifest, String> {
    let path = dir.join("manifest.json");
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| format!("bad manifest: {e}"))?;
    if m.schema != SCHEMA_VERSION {
        return Err(format!("unsupported {SCHEMA_KEY} {}", m.schema));
    }
    Ok(m)
}

/// Runs one case from the corpus directory.
pub fn run_case(dir: &Path, case: &Case) -> Outcome {
    let mut args = vec!["torocob".to_string(), case.command.clone(), dir.join(&case.input).display().to_string()];
    args.extend(case.flags.iter().cloned());
    run_args(args)
}

/// Differences between a case's recorded and actual behaviour.
pub fn case_failures(dir: &Path, case: &Case) -> Vec<String> {
    let mut out = Vec::new();
    let first = run_case(dir, case);
    if first.code != case.exit {
        out.push(format!("exit {} (expected {}): {}", first.code, case.exit, first.stderr.trim()));
    }
    match &case.expected {
        Some(rel) => match fs::read(dir.join(rel)) {
            Ok(bytes) if bytes == first.stdout => {}
            Ok(_) => out.push(format!("output differs from {rel}")),
            Err(e) => out.push(format!("cannot read {rel}: {e}")),
        },
        None if !first.stdout.is_empty() => out.push("unexpected output".into()),
        None => {}
    }
    if run_case(dir, case) != first {
        out.push("second run differs".into());
    }
    out
}

fn json_files(dir: &Path, acc: &mut Vec<PathBuf>) {
    let Ok(entries) = fs::read_dir(dir) else { return };
    let mut paths: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
    paths.sort();
    for p in paths {
        if p.is_dir() {
            json_files(&p, acc);
        } else if p.extension().is_some_and(|e| e == "json") {
            acc.push(p);
        }
    }
}

/// Whether the file is already in canonical form.
pub fn round_trips(path: &Path) -> Result<(), String> {
    let bytes = fs::read_to_string(path).map_err(|e| e.to_string())?;
    let v: Value = serde_json::from_str(&bytes).map_err(|e| e.to_string())?;
    if to_canonical_pretty(&v) == bytes {
        Ok(())
    } else {
        Err("not in canonical form".into())
    }
}

pub fn check(dir: &Path) -> Outcome {
    let manifest = match load_manifest(dir) {
        Ok(m) => m,
        Err(e) => return Outcome { code: 2, stdout: Vec::new(), stderr: format!("error: {e}\n") },
    };
    let mut report = String::new();
    let mut failures = 0;
    for case in &manifest.cases {
        let problems = case_failures(dir, case);
        if problems.is_empty() {
            writeln!(report, "ok   {}", case.name).unwrap();
        } else {
            failures += 1;
            writeln!(report, "FAIL {}: {}", case.name, problems.join("; ")).unwrap();
        }
    }
    // inputs of parse-error cases are deliberately malformed
    let malformed: BTreeSet<PathBuf> =
        manifest.cases.iter().filter(|c| c.exit == 2).map(|c| dir.join(&c.input)).collect();
    let mut files = Vec::new();
    json_files(dir, &mut files);
    for f in files.iter().filter(|f| !malformed.contains(*f)) {
        if let Err(e) = round_trips(f) {
            failures += 1;
            writeln!(report, "FAIL round-trip {}: {e}", f.display()).unwrap();
        }
    }
    writeln!(report, "{} cases, {} files, {failures} failures", manifest.cases.len(), files.len()).unwrap();
    Outcome { code: if failures == 0 { 0 } else { 1 }, stdout: report.into_bytes(), stderr: String::new() }
}
