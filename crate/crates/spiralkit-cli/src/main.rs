fn main() {
    std::process::exit(spiralkit_cli::run(std::env::args_os()));
}
