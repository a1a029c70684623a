fn main() {
    std::process::exit(fre_aco::cli::main());
}
