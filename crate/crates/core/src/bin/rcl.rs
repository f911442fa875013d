fn main() {
    std::process::exit(rcl::cli::main_with_args(std::env::args_os()));
}
