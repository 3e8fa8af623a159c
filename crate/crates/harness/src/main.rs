fn main() {
    std::process::exit(radon_harness::cli::main_with(std::env::args_os()));
}
