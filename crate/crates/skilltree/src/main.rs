fn main() {
    std::process::exit(skilltree::cli::run());
}
