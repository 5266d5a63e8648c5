fn main() {
    std::process::exit(kvforge::cli::run(std::env::args_os()));
}
