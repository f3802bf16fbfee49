fn main() -> std::process::ExitCode {
    biphoton::cli::main()
}
