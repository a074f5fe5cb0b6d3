use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, stdout, stderr) =
        fml_cli::run(std::env::args_os(), std::env::var_os(fml_cli::CONFIG_ENV));
    let mut out = std::io::stdout().lock();
    if out
        .write_all(stdout.as_bytes())
        .and_then(|_| out.flush())
        .is_err()
    {
        return ExitCode::from(1);
    }
    eprint!("{stderr}");
    ExitCode::from(code as u8)
}
