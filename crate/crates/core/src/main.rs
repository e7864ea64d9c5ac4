fn main() {
    std::process::exit(gbcolor::cli::run(std::env::args_os()));
}
