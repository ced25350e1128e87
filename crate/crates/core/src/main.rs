fn main() {
    std::process::exit(waring_lab::cli::run(std::env::args_os()));
}
