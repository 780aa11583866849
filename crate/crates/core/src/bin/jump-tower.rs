use clap::Parser;
use jump_tower::harness::cli::{main_with, Cli};

fn main() {
    let code = match main_with(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    std::process::exit(code);
}
