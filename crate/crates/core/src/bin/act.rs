fn main() -> std::process::ExitCode {
    act::cli::main()
}
