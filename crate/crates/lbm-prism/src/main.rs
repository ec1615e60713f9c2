fn main() {
    std::process::exit(lbm_prism::cli::run_cli(std::env::args().skip(1)));
}
