//! Runs a named demo and writes its files to a temporary directory.

use limitgen::scenario::demo;

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "chain-switch".into());
    let cfg = demo(&name).unwrap();
    let out = cfg.execute().unwrap();
    let dir = std::env::temp_dir().join(format!("limitgen-{name}"));
    out.write_to(&dir).unwrap();
    println!("{}", serde_json::to_string_pretty(&out.report_json()["report"]).unwrap());
    println!("density curve:\n{}", out.curve.to_csv());
    println!("files in {}", dir.display());
}
