fn main() {
    std::process::exit(pcrc::run(std::env::args_os()));
}
