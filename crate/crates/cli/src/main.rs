mod args;
mod commands;
mod config;
mod dataio;

use args::{Cli, Command};
use clap::Parser;

fn main() {
    let raw: Vec<String> = std::env::args().collect();
    let expanded = match config::expand_config_args(raw) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    };
    let cli = Cli::parse_from(expanded);

    let result = match &cli.command {
        Command::Project(a) => commands::cmd_project(a),
        Command::Train(a) => commands::cmd_train(a),
        Command::Infer(a) => commands::cmd_infer(a),
        Command::Finetune(a) => commands::cmd_finetune(a),
        Command::Eval(a) => commands::cmd_eval(a),
        Command::Bench(a) => commands::cmd_bench(a),
        Command::Plot(a) => commands::cmd_plot(a),
        Command::MakeBlobs(a) => commands::cmd_make_blobs(a),
    };

    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
