use clap::Parser;
use fde::cli::{run_command, Cli};

fn main() {
    let cli = Cli::parse();
    let outcome = run_command(&cli);
    if outcome.code == fde::cli::EXIT_ERROR {
        eprint!("{}", outcome.text);
    } else {
        print!("{}", outcome.text);
    }
    std::process::exit(outcome.code);
}
