use std::io::{Read, Write};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    // stdin is consumed only when a file argument is `-`
    let needs_stdin = args.iter().any(|a| a == "-");
    let mut stdin = String::new();
    if needs_stdin {
        if let Err(e) = std::io::stdin().read_to_string(&mut stdin) {
            eprintln!("error: cannot read standard input: {e}");
            std::process::exit(hermlie_cli::EXIT_INPUT_ERROR);
        }
    }
    let mut out = String::new();
    let mut err = String::new();
    let code = hermlie_cli::run(&args, &stdin, &mut out, &mut err);
    let _ = std::io::stdout().write_all(out.as_bytes());
    let _ = std::io::stderr().write_all(err.as_bytes());
    std::process::exit(code);
}
