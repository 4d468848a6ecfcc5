fn main() {
    std::process::exit(kdq_cli::run_from_env());
}
