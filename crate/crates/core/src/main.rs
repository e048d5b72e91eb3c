use clap::Parser;
use eqcohom::cli::{execute, Args, Outcome};

fn main() {
    let code = match execute(&Args::parse()) {
        Outcome::Report(out, code) => {
            print!("{out}");
            code
        }
        Outcome::Error(msg, code) => {
            eprint!("{msg}");
            code
        }
    };
    std::process::exit(code);
}
