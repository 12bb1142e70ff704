fn main() {
    std::process::exit(evidential::cli::run(std::env::args_os()));
}
