fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FAIRKIT_LOG", "warn")).init();
    std::process::exit(fairkit::cli::main_from(std::env::args_os()));
}
