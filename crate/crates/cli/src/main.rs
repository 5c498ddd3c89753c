mod config;
mod run;
mod selftest;

use std::process::ExitCode;

use clap::Parser;
use pgl2a::exec::{set_strategy, Strategy};

use config::{Args, RunConfig};

#[derive(Debug)]
pub enum Failure {
    Input(String),
    TooLarge(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) | Failure::Internal(_) => 1,
            Failure::TooLarge(_) => 3,
        }
    }
}

fn main() -> ExitCode {
    let result = RunConfig::resolve(Args::parse()).and_then(|cfg| {
        if cfg.sequential {
            set_strategy(Strategy::Sequential);
        }
        let outcome = run::run(&cfg)?;
        match &cfg.out {
            Some(path) => std::fs::write(path, &outcome.body)
                .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?,
            None => print!("{}", outcome.body),
        }
        Ok(outcome.mismatch)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(f) => {
            let (Failure::Input(m) | Failure::TooLarge(m) | Failure::Internal(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.code())
        }
    }
}
