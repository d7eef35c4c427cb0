//! Command-line interface for the skewtile library.

fn main() {
    eprintln!("skewtile: command-line interface not yet wired up");
    std::process::exit(2);
}
