use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = torocob_cli::run_args(std::env::args_os());
    std::io::stdout().write_all(&outcome.stdout).expect("stdout is writable");
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.code as u8)
}
