fn main() -> std::process::ExitCode {
    cubesat_preflight::cli::main_exit()
}
