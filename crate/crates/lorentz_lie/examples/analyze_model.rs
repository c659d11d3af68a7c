//! Loads a JSON model file and prints the analysis report as Markdown, then
//! the classification of one algebra.
//!
//! Run with `cargo run --example analyze_model [path]`; defaults to
//! `examples/models/twisted.json`.

use lorentz_lie::cli::{cmd_analyze, cmd_classify, AnalyzeOptions, Mode};

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/models/twisted.json").to_string());
    let text = std::fs::read_to_string(&path).expect("readable model file");
    match cmd_analyze(&text, &AnalyzeOptions::default()) {
        Ok(report) => print!("{}", report.to_markdown()),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
    let numeric = cmd_analyze(&text, &AnalyzeOptions { mode: Mode::Numeric, tolerance: 1e-9 }).unwrap();
    println!("\nnumeric mode: {} entries", numeric.entries.len());
    let product = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/models/product.json")).unwrap();
    println!("product.json: {}", cmd_classify(&product).unwrap());
}
