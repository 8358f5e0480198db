use clap::Parser;

use patchline::cli::{run_cli, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // Clap prints its own usage/help text and exits 0 for --help/--version
        // or 2 for usage errors.
        Err(e) => e.exit(),
    };
    if let Err(e) = run_cli(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
