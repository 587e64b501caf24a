use clap::Parser;

fn main() {
    let cli = harmonic_lab::cli::Cli::parse();
    std::process::exit(harmonic_lab::cli::run(&cli));
}
