fn main() {
    std::process::exit(qcert::cli::run(std::env::args_os()));
}
