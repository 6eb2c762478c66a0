fn main() {
    std::process::exit(attrvote::cli::main_with_args(std::env::args_os()));
}
