fn main() {
    std::process::exit(qsdc_cli::run_cli(std::env::args_os()));
}
