use clap::Parser;

fn main() {
    env_logger::init();
    std::process::exit(hpcris::cli::main_with(hpcris::cli::Cli::parse()));
}
