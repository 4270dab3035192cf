fn main() {
    std::process::exit(tmpascal::cli::run(std::env::args_os()));
}
