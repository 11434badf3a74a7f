fn main() {
    std::process::exit(unaryflow::cli::run(std::env::args_os()));
}
