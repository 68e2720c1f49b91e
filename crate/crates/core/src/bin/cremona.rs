fn main() {
    std::process::exit(cremona_core::cli::main_with_args(std::env::args_os()));
}
