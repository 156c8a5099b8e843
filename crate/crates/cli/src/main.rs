use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use waterslide_cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stderr = io::stderr();
    let mut diag = stderr.lock();
    let status = match &config.output {
        Some(path) => match File::create(path) {
            Ok(f) => {
                let mut out = BufWriter::new(f);
                let s = run(&config, &mut out, &mut diag);
                finish(out, s, &mut diag)
            }
            Err(e) => {
                let _ = writeln!(diag, "error: cannot create {}: {e}", path.display());
                1
            }
        },
        None => {
            let stdout = io::stdout();
            let out = BufWriter::new(stdout.lock());
            let mut out = out;
            let s = run(&config, &mut out, &mut diag);
            finish(out, s, &mut diag)
        }
    };
    ExitCode::from(status)
}

fn finish<W: Write>(mut out: W, status: u8, diag: &mut impl Write) -> u8 {
    match out.flush() {
        Ok(()) => status,
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            1
        }
    }
}
