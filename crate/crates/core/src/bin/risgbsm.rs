fn main() -> std::process::ExitCode {
    ris_gbsm::cli::main()
}
