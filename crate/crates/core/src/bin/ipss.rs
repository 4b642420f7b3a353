fn main() {
    std::process::exit(ipss::cli::main_with_args(std::env::args_os()));
}
