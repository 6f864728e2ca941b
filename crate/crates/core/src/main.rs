fn main() {
    std::process::exit(definetti_core::cli::run(std::env::args_os()));
}
