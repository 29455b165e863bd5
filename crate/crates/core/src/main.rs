fn main() {
    coilchain::cli::main()
}
