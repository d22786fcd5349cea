fn main() {
    std::process::exit(rabi_cat::cli::main_with_args(std::env::args_os()));
}
