use clap::Parser;
use hermsig_cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let out = run(&cli);
    if !out.stdout.is_empty() {
        println!("{}", out.stdout);
    }
    if !out.stderr.is_empty() {
        eprintln!("{}", out.stderr);
    }
    std::process::exit(out.code);
}
