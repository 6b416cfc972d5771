fn main() {
    std::process::exit(toricmmp::run());
}
