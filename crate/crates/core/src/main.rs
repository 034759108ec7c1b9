use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, text) = obcert::cli::run(std::env::args_os());
    let mut stream: Box<dyn Write> = if code == obcert::cli::EXIT_INPUT {
        Box::new(std::io::stderr())
    } else {
        Box::new(std::io::stdout())
    };
    let _ = stream.write_all(text.as_bytes());
    ExitCode::from(code as u8)
}
