use std::io::Write;

fn main() {
    let (code, out) = ovoid_cli::run(std::env::args_os());
    let stream: &mut dyn Write = if code == 2 {
        &mut std::io::stderr()
    } else {
        &mut std::io::stdout()
    };
    let _ = stream.write_all(out.as_bytes());
    std::process::exit(code);
}
