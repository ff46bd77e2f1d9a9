fn main() {
    std::process::exit(smoothcvx::cli::execute(std::env::args_os()));
}
