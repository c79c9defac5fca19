use std::io::Write;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let out = jumploci_cli::run(&argv, std::env::var("JUMPLOCI_CACHE").ok());
    std::io::stderr().write_all(out.stderr.as_bytes()).ok();
    std::io::stdout().write_all(out.stdout.as_bytes()).ok();
    std::process::exit(out.code);
}
