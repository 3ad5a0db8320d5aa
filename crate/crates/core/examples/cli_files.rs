//! Load the bundled fixture the way the command line does, write it back
//! out, and run a command in-process.
//!
//! cargo run --example cli_files

use clap::Parser;
use fairkit::cli::{io, run_to_string, Cli};

fn main() -> fairkit::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let spec = io::InputSpec {
        points: Some(format!("{dir}/six_points.csv").into()),
        inline_groups: true,
        ..io::InputSpec::default()
    };
    let ds = io::load_dataset(&spec)?;
    let mut buf = Vec::new();
    io::write_points(&ds, &mut buf)?;
    print!("{}", String::from_utf8_lossy(&buf));

    let cli = Cli::parse_from([
        "fairkit", "cluster", "--points", &format!("{dir}/six_points.csv"), "--inline-groups",
        "--k", "2", "--alpha", "1/2,1/2", "--beta", "1/2,1/2", "--seed", "1",
    ]);
    let text = run_to_string(&cli)?;
    let v: serde_json::Value = serde_json::from_str(&text)?;
    println!("cluster cost {}", v["cost"]);
    Ok(())
}
