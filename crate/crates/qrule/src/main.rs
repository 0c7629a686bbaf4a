use qrule::cli::{self, JobKind};
use std::process::ExitCode;

const USAGE: &str = "usage: qrule <config-path> [--job spectrum|verify|scan|films] [--csv path] [--quiet]";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut config_path: Option<String> = None;
    let mut job_override: Option<String> = None;
    let mut csv_override: Option<String> = None;
    let mut quiet = false;

    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--job" => job_override = it.next().cloned(),
            "--csv" => csv_override = it.next().cloned(),
            "--quiet" => quiet = true,
            "--help" | "-h" => {
                println!("{USAGE}");
                return ExitCode::SUCCESS;
            }
            other if config_path.is_none() && !other.starts_with('-') => {
                config_path = Some(other.to_string());
            }
            other => {
                eprintln!("unexpected argument `{other}`\n{USAGE}");
                return ExitCode::from(2);
            }
        }
    }

    let Some(path) = config_path else {
        eprintln!("{USAGE}");
        return ExitCode::from(2);
    };
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {path}: {e}");
            return ExitCode::from(2);
        }
    };
    let mut cfg = match cli::parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(j) = job_override {
        match JobKind::parse_str(&j) {
            Some(k) => cfg.job = k,
            None => {
                eprintln!("unknown job `{j}`\n{USAGE}");
                return ExitCode::from(2);
            }
        }
    }
    if let Some(c) = csv_override {
        cfg.csv = Some(c);
    }

    match cli::run(&cfg) {
        Ok(artifacts) => {
            if !quiet {
                print!("{}", artifacts.table);
            }
            match &cfg.csv {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &artifacts.csv) {
                        eprintln!("cannot write {path}: {e}");
                        return ExitCode::from(2);
                    }
                    if !quiet {
                        println!("csv written to {path}");
                    }
                }
                None => {
                    if quiet {
                        print!("{}", artifacts.csv);
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
