use std::io::Write;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let out = ratdyn_cli::run_command(&argv);
    std::io::stdout().write_all(out.stdout.as_bytes()).ok();
    std::io::stderr().write_all(out.stderr.as_bytes()).ok();
    std::process::exit(out.code);
}
