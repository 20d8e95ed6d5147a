fn main() {
    std::process::exit(linfcert::run(std::env::args_os()));
}
