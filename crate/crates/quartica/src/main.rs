fn main() {
    std::process::exit(quartica::cli::main_entry());
}
