use clap::Parser;
use netheal_cli::cli::Cli;
use netheal_cli::commands::execute;

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    if let Err(e) = execute(cli.command, &mut stdout.lock()) {
        eprintln!("netheal: {e}");
        std::process::exit(e.exit_code());
    }
}
