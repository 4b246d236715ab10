fn main() {
    gaussian_purify::cli::main_exit()
}
