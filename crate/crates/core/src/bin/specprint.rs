fn main() {
    std::process::exit(specprint::cli::run(std::env::args_os()));
}
