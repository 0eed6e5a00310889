fn main() -> std::process::ExitCode {
    entaudit::cli::main_entry()
}
