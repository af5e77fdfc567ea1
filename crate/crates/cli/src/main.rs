fn main() {
    std::process::exit(fractafold_cli::run(std::env::args_os()));
}
