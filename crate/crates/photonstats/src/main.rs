fn main() {
    std::process::exit(photonstats::cli::main_entry());
}
