fn main() {
    std::process::exit(cavity_bo::io::cli::main_with_args(std::env::args().collect()));
}
