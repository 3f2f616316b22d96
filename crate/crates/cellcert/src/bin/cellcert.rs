fn main() {
    std::process::exit(cellcert::harness::cli::main());
}
