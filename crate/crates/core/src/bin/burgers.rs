fn main() {
    std::process::exit(burgers_core::cli::run(std::env::args_os()));
}
