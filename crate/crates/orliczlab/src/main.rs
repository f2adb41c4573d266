fn main() {
    std::process::exit(orliczlab::cli::run(std::env::args_os()));
}
