use clap::Parser;
use levcool::cli::{self, Cli};

fn main() {
    let args = Cli::parse();
    std::process::exit(cli::run(&args));
}
