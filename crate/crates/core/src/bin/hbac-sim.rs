fn main() {
    std::process::exit(hbac::cli::main());
}
