fn main() {
    std::process::exit(gcat::cli::run_command(std::env::args_os()));
}
