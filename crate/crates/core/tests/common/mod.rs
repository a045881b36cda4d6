#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub fn workspaces_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("workspaces")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

pub struct Case {
    pub name: String,
    pub code: i32,
    pub args: Vec<String>,
}

/// The shipped command list: `name exit-code args...` per line.
pub fn cases() -> Vec<Case> {
    let text =
        std::fs::read_to_string(workspaces_dir().join("commands.txt")).expect("commands.txt");
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut words = l.split_whitespace().map(String::from);
            let name = words.next().expect("name");
            let code = words
                .next()
                .expect("exit code")
                .parse()
                .expect("numeric exit code");
            Case {
                name,
                code,
                args: words.collect(),
            }
        })
        .collect()
}

/// Run the `cinf` binary from the workspaces directory.
pub fn cinf(args: &[String]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cinf"))
        .args(args)
        .current_dir(workspaces_dir())
        .output()
        .expect("run cinf");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

pub mod strategies;
pub mod truncated;
