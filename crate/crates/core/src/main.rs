use clap::Parser;

use arraycode::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error kind={} exit={}: {e}", e.kind(), e.exit_code());
            std::process::exit(e.exit_code());
        }
    }
}
