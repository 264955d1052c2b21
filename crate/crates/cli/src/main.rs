fn main() {
    std::process::exit(firmsim_cli::run_cli(std::env::args_os()));
}
