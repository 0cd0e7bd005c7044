use clap::Parser;
use polyhaar_cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
