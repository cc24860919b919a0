fn main() {
    std::process::exit(densq_cli::run(std::env::args()));
}
