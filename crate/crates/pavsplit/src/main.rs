fn main() {
    std::process::exit(pavsplit::cli::run());
}
