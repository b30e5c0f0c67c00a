fn main() {
    std::process::exit(landau_polariton::cli::run(std::env::args_os()));
}
