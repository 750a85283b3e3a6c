fn main() {
    std::process::exit(tanaka_core::cli::run(std::env::args_os()));
}
