use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use edlab_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("edlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
