fn main() {
    std::process::exit(ifropt::main_with_args(std::env::args_os()));
}
