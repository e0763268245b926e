fn main() {
    std::process::exit(optapprox_cli::main_with(std::env::args_os()));
}
