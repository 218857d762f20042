fn main() {
    std::process::exit(zonesel::cli::main_with(std::env::args_os()));
}
