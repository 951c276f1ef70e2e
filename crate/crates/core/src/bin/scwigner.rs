fn main() {
    std::process::exit(scwigner::cli::run(std::env::args_os()));
}
