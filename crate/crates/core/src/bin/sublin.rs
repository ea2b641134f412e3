fn main() {
    std::process::exit(sublinear_bodies::cli::run(std::env::args_os()));
}
