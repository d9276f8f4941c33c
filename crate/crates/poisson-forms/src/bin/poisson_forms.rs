use clap::Parser;
use poisson_forms::cli::{run, Cli};

fn main() {
    // clap exits with code 2 on usage errors by itself
    let cli = Cli::parse();
    std::process::exit(run(cli));
}
