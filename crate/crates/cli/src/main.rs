fn main() {
    std::process::exit(elastab_cli::run(std::env::args_os()));
}
