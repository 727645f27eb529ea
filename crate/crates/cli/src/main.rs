fn main() {
    std::process::exit(heilbronn_cli::main_with_args(std::env::args_os()));
}
