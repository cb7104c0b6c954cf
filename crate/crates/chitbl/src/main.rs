use clap::Parser;

fn main() {
    let cli = chitbl::cli::Cli::parse();
    let mut out = std::io::stdout().lock();
    if let Err(e) = chitbl::cli::run(cli, &mut out) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
