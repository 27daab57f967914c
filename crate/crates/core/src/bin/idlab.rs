fn main() { std::process::exit(idlab::cli::main()) }
