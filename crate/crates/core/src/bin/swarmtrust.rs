fn main() {
    std::process::exit(swarmtrust_core::cli::main_with_args(std::env::args_os()));
}
