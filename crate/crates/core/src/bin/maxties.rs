fn main() {
    std::process::exit(maxties::cli::main_with_args(std::env::args_os()));
}
