fn main() {
    std::process::exit(mixmean::cli::parse_and_dispatch(std::env::args_os()));
}
