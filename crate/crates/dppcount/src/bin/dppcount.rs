fn main() {
    std::process::exit(dppcount::cli::main());
}
