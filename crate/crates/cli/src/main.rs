fn main() {
    std::process::exit(jetmorse_cli::main_with_args(std::env::args_os()));
}
