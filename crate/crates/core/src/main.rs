fn main() {
    std::process::exit(htjack::cli::dispatch(std::env::args_os()));
}
