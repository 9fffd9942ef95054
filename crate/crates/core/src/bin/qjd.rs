fn main() {
    std::process::exit(qjacobi::cli::main_with_args(std::env::args_os()));
}
