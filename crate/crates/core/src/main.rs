use std::io::Write;

fn main() {
    let out = hotring::cli::run(std::env::args_os());
    if !out.stdout.is_empty() {
        println!("{}", out.stdout);
    }
    if !out.stderr.is_empty() {
        let _ = writeln!(std::io::stderr(), "{}", out.stderr);
    }
    std::process::exit(out.code);
}
