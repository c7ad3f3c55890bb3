fn main() {
    std::process::exit(factorseg::cli::run(std::env::args_os()));
}
