use clap::Parser;
use sadic_cli::{execute, Cli, RunConfig, EXIT_USAGE};

fn main() {
    let cli = Cli::parse();
    let code = match RunConfig::try_from(cli) {
        Ok(config) => execute(&config, &mut std::io::stdout().lock(), &mut std::io::stderr().lock()),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    };
    std::process::exit(code);
}
