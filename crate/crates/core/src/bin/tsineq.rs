fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(tsineq::cli::run_cli(&args));
}
