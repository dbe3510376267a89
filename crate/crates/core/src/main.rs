fn main() {
    std::process::exit(ringtype::cli::run(std::env::args_os()));
}
