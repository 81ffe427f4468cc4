fn main() {
    std::process::exit(vidtriage::cli::run(std::env::args_os()));
}
