use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (outcome, format) = affconj_cli::run(std::env::args_os());
    let text = affconj_cli::render(&outcome.report, format);
    if outcome.report.is_string() && outcome.code != 0 {
        let _ = std::io::stderr().write_all(text.as_bytes());
    } else {
        let _ = std::io::stdout().write_all(text.as_bytes());
    }
    ExitCode::from(outcome.code as u8)
}
