fn main() {
    std::process::exit(fbcap::cli::cli_main(std::env::args_os()));
}
