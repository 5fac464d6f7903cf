fn main() {
    std::process::exit(fibertool_cli::run(std::env::args_os()));
}
