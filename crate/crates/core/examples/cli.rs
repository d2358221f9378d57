//! Driving the command line from code, as the `concordia` binary does.
//!
//! Run with `cargo run --example cli`.

use concordia::cli::run_cli;

fn main() -> concordia::Result<()> {
    let dir = std::env::temp_dir().join("concordia-cli-example");
    std::fs::create_dir_all(&dir)?;
    let fixture = dir.join("counts.json");
    std::fs::write(&fixture, r#"{"tt": 64, "tf": 23, "ft": 988, "ff": 6720}"#)?;
    let path = fixture.to_str().expect("utf-8 temp path");

    for args in [
        vec!["agree", "cohen", "--confusion", path],
        vec!["test", "mcnemar", "--confusion", path],
        vec!["test", "mcnemar", "--confusion", path, "--format", "json"],
        vec!["power", "size", "--p1", "0.5", "--p2", "0.6"],
        vec!["agree", "cohen"],
    ] {
        let out = run_cli(std::iter::once("concordia").chain(args.iter().copied()));
        println!("$ concordia {} -> exit {}", args.join(" "), out.code);
        print!("{}{}", out.stdout, out.stderr);
    }
    Ok(())
}
