fn main() { std::process::exit(moduli::cli::main_entry()); }
