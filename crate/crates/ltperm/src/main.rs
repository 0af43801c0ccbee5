use clap::Parser;

fn main() {
    let cli = ltperm::cli::Cli::parse();
    std::process::exit(ltperm::cli::run(cli));
}
