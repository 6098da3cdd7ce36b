use std::io::Write;
use std::process::ExitCode;

use obsclone_cli::{run, EXIT_USAGE};

fn main() -> ExitCode {
    let outcome = run(std::env::args_os());
    for line in &outcome.diagnostics {
        eprintln!("{line}");
    }
    let written = match &outcome.out {
        Some(path) => std::fs::write(path, &outcome.payload)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(outcome.payload.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    };
    match written {
        Ok(()) => ExitCode::from(outcome.exit_code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
