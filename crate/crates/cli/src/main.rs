use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let mut err = std::io::stderr();
    let code = schurlab_cli::run(std::env::args_os(), &mut out, &mut err);
    let flushed = out.flush();
    drop(out);
    match flushed {
        Ok(()) => ExitCode::from(code as u8),
        // A closed pipe downstream is not an error of ours.
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::from(code as u8),
        Err(e) => {
            let _ = writeln!(err, "error: write failed: {e}");
            ExitCode::from(schurlab_cli::EXIT_INPUT as u8)
        }
    }
}
