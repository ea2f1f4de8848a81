use clap::Parser;
use sgsweep_cli::{run_config, Args, RunConfig};

fn main() {
    let args = Args::parse();
    let result = RunConfig::resolve(args).and_then(|cfg| run_config(&cfg));
    match result {
        Ok(report) => match report.table() {
            Ok(table) => print!("{table}"),
            Err(e) => {
                eprintln!("sgsweep: {e}");
                std::process::exit(e.exit_code());
            }
        },
        Err(e) => {
            eprintln!("sgsweep: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
