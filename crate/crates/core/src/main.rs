use std::process::ExitCode;

fn main() -> ExitCode {
    let status = modalkit::cli::run(
        std::env::args_os(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    );
    ExitCode::from(status.0 as u8)
}
