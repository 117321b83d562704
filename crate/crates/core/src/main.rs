use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(lumesh::cli::run())
}
