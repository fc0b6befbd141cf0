fn main() {
    std::process::exit(logdisc::cli::run(std::env::args_os()));
}
