fn main() {
    std::process::exit(clique_transversal::cli::main())
}
