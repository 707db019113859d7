fn main() {
    std::process::exit(bubblelab::cli::main_with_args(std::env::args_os()));
}
