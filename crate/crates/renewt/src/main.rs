fn main() {
    std::process::exit(renewt::cli::run(std::env::args_os()));
}
