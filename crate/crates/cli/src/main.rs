use clap::Parser;

fn main() {
    let cli = stellar_qec_cli::args::Cli::parse();
    std::process::exit(stellar_qec_cli::run(cli));
}
