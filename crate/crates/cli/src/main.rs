fn main() {
    std::process::exit(intrinsic_holder_cli::main_with(std::env::args_os()));
}
