mod args;
mod commands;
mod config;
mod error;

use clap::Parser;

use args::{Cli, Command};

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(a) => commands::train(a),
        Command::Detect(a) => commands::detect(a),
        Command::Eval(a) => commands::eval(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Sweep(a) => commands::sweep_cmd(a),
    };
    if let Err(e) = result {
        eprintln!("odhd: {e}");
        std::process::exit(e.exit_code());
    }
}
