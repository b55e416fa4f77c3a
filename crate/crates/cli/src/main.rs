fn main() {
    std::process::exit(bribery_cli::run(std::env::args_os()));
}
