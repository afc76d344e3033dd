use extrsa_cli::{dispatch, format_report, Dispatch, Format, Status};
use std::io::Write;

fn main() {
    let code = match dispatch(std::env::args_os()) {
        Dispatch::Info(text) => {
            print!("{text}");
            0
        }
        Dispatch::Run(format, result) => {
            let bytes = format_report(&result, format);
            // Text-mode errors go to stderr; JSON always goes to stdout.
            let failed = matches!(result.status, Status::UsageError | Status::InternalError);
            let written = if failed && format == Format::Text {
                std::io::stderr().write_all(&bytes)
            } else {
                std::io::stdout().write_all(&bytes)
            };
            if written.is_err() {
                3
            } else {
                result.status.exit_code()
            }
        }
    };
    std::process::exit(code);
}
