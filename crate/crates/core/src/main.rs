use std::io::IsTerminal;

fn main() {
    let stdout = std::io::stdout();
    let terminal = stdout.is_terminal();
    let code = openfol::cli::run(std::env::args_os(), &mut stdout.lock(), &mut std::io::stderr(), terminal);
    std::process::exit(code);
}
