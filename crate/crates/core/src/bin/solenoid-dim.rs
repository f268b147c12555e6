fn main() {
    std::process::exit(solenoid_dim::cli::main_with_args(std::env::args_os()));
}
