use clap::Parser;
use peirce_coord_cli::{run, Cli};
use std::io::Write;

fn main() {
    let out = run(Cli::parse());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
