fn main() {
    std::process::exit(hyperstep_cli::app::run(std::env::args_os()));
}
