fn main() {
    std::process::exit(uzstem::cli::main_with_args(std::env::args_os()));
}
