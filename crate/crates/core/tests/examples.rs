//! Runs every cargo example and requires a clean exit.

use std::path::PathBuf;
use std::process::Command;

const EXAMPLES: &[&str] = &["forms", "weil", "lifts", "padic", "certificate", "oldnew", "theorem"];

fn examples_dir() -> PathBuf {
    // target/<profile>/deps/<this test> → target/<profile>/examples
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().join("examples")
}

#[test]
fn all_examples_run() {
    let dir = examples_dir();
    for name in EXAMPLES {
        let path = dir.join(format!("{name}{}", std::env::consts::EXE_SUFFIX));
        let output = if path.exists() {
            Command::new(&path).output().unwrap()
        } else {
            Command::new(env!("CARGO"))
                .args(["run", "--quiet", "--example", name])
                .current_dir(env!("CARGO_MANIFEST_DIR"))
                .output()
                .unwrap()
        };
        assert!(
            output.status.success(),
            "example {name} failed:\n{}\n{}",
            String::from_utf8_lossy(&output.stdout),
            String::from_utf8_lossy(&output.stderr)
        );
        assert!(!output.stdout.is_empty(), "example {name} printed nothing");
    }
}
