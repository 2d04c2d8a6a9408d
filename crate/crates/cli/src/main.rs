fn main() {
    std::process::exit(twostein_cli::main_with_args(std::env::args_os()));
}
