fn main() {
    std::process::exit(weakconj::cli::main_with_args(std::env::args_os()));
}
