fn main() {
    std::process::exit(discform::cli::main());
}
