fn main() {
    std::process::exit(gaborscan_cli::run());
}
