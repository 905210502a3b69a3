use std::process::ExitCode;

fn main() -> ExitCode {
    pathcover::cli::run(std::env::args_os())
}
