fn main() {
    std::process::exit(genrest::cli::main_with_args(std::env::args_os()));
}
