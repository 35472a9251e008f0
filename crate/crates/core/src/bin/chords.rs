fn main() {
    std::process::exit(random_chords::cli::main_with_args(std::env::args_os()));
}
