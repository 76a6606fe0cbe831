use std::io::ErrorKind;

use clap::Parser;

fn main() {
    let cli = rba6::cli::Cli::parse();
    let stdout = std::io::stdout();
    let code = match rba6::cli::run(&cli, &mut stdout.lock()) {
        Ok(c) => c,
        Err(e) if e.kind() == ErrorKind::BrokenPipe => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    };
    std::process::exit(code);
}
