use clap::Parser;
use eccoax::commands::{run, Command, Overrides};

/// Eigenmodes of eccentric coaxial waveguides with lossy uniaxial fillings.
#[derive(Debug, Parser)]
#[command(name = "eccoax", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

fn main() {
    // Usage errors are configuration errors; exit code 2 is kept for solver failures.
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        let code = if e.use_stderr() { 1 } else { 0 };
        let _ = e.print();
        std::process::exit(code);
    });
    if let Err(e) = run(cli.command, &cli.overrides) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
