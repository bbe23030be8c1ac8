use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(lineshape_cli::app::main_with_args(std::env::args_os()) as u8)
}
