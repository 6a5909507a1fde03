use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(occpx::cli::main())
}
