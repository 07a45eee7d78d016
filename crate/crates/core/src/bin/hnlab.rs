use std::process::ExitCode;

fn main() -> ExitCode {
    hnlab::cli::run()
}
