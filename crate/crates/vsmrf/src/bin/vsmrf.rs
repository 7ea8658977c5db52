fn main() {
    std::process::exit(vsmrf::cli::run());
}
