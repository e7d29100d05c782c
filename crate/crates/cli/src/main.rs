fn main() -> std::process::ExitCode {
    bottkit_cli::run()
}
