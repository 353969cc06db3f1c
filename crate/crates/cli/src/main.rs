use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(hardy::run(std::env::args_os()) as u8)
}
