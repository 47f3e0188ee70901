use std::io::Write;

fn main() {
    let out = qwalk3::cli::run(std::env::args_os(), &mut std::io::stdin().lock());
    // Nothing useful can be done if the terminal is gone.
    let _ = std::io::stdout().write_all(&out.stdout);
    let _ = std::io::stderr().write_all(&out.stderr);
    std::process::exit(out.code);
}
