fn main() {
    std::process::exit(mermin_cli::main_with_args(std::env::args_os()));
}
