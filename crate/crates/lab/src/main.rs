fn main() {
    std::process::exit(repeller_lab::cli::run());
}
