fn main() {
    std::process::exit(strongblock::cli::run(std::env::args_os()));
}
