fn main() {
    std::process::exit(ponds_cli::run(std::env::args_os()));
}
