fn main() {
    std::process::exit(prstrata_cli::run(std::env::args()));
}
