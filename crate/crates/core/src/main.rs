fn main() -> std::process::ExitCode {
    weilcomp::cli::main()
}
