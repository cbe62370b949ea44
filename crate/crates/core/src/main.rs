fn main() {
    std::process::exit(gpoly::cli::run(std::env::args_os()));
}
