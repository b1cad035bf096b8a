fn main() {
    std::process::exit(es_riemann_cli::main_with_args(std::env::args_os()));
}
