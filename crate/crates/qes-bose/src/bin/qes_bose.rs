fn main() {
    std::process::exit(qes_bose::cli::run(std::env::args().skip(1)));
}
