fn main() {
    std::process::exit(entmin::cli::run(std::env::args_os()));
}
