fn main() {
    std::process::exit(sqc_cli::main_with(std::env::args_os().skip(1)));
}
