fn main() {
    std::process::exit(touchard::cli::main_with_args(std::env::args_os()));
}
