use clap::Parser;
use gl3_bethe::cli::{run, CliArgs};

fn main() {
    std::process::exit(run(&CliArgs::parse()));
}
