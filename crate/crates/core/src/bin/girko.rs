fn main() {
    std::process::exit(girko::cli::run(std::env::args_os()));
}
