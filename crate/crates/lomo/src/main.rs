fn main() {
    std::process::exit(lomo::cli::main(std::env::args().collect()));
}
