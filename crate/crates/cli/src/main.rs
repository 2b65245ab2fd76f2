use std::io::Write;
use std::process::ExitCode;

use adlv_cli::{run, GUARD_ENV};

fn main() -> ExitCode {
    let guard = std::env::var(GUARD_ENV).is_ok_and(|v| v == "1");
    let out = run(std::env::args_os(), guard);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
