fn main() {
    std::process::exit(wplap::cli::run_main());
}
