use clap::Parser;
use pantograph_cli::commands::{run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            if !out.ok {
                std::process::exit(1);
            }
        }
        Err(e) => {
            eprintln!("{}", e.to_json(cli.command.name()));
            std::process::exit(e.exit_code());
        }
    }
}
