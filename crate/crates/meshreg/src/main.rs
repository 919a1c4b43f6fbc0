fn main() {
    std::process::exit(i32::from(meshreg::cli::run(std::env::args_os())));
}
