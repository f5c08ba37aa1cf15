use std::io::{self, BufWriter, Write};

fn main() {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut err = io::stderr();
    let mut code = miura_core::cli::run(std::env::args_os(), &mut out, &mut err);
    if let Err(e) = out.flush() {
        if e.kind() != io::ErrorKind::BrokenPipe {
            let _ = writeln!(err, "error: {e}");
            code = miura_core::cli::EXIT_MALFORMED;
        }
    }
    std::process::exit(code);
}
