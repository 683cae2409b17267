fn main() {
    std::process::exit(ringsum::cli::run(std::env::args_os()));
}
