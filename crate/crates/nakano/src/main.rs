fn main() {
    std::process::exit(nakano::cli::run(std::env::args_os()));
}
