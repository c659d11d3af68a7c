use clap::Parser;
use lorentz_lie::cli::{run, Cli};

fn main() {
    match run(Cli::parse()) {
        Ok(out) => print!("{out}"),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
