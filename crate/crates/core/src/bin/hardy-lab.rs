use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hardy_lab::lab::{self, ParamRanges, ReportFormat, Scenario, TheoremId};

#[derive(Parser)]
#[command(name = "hardy-lab", about = "Generate, run and summarize shift-invariance scenarios")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write one seeded scenario as JSON.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        theorem: TheoremId,
        #[command(flatten)]
        ranges: RangeArgs,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a scenario file and print (or append) its ledger record.
    Run {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        ledger: Option<PathBuf>,
    },
    /// Generate and run `trials` scenarios with consecutive seeds.
    Suite {
        #[arg(long)]
        theorem: TheoremId,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        ranges: RangeArgs,
        #[arg(long)]
        ledger: PathBuf,
    },
    /// Summarize a ledger. Exit code 1 on failures, 2 on invalid instances only.
    Report {
        #[arg(long)]
        ledger: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    lp: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    blocks: Option<usize>,
    #[arg(long)]
    taylor_degree: Option<usize>,
    #[arg(long)]
    guard: Option<usize>,
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    tol: Option<f64>,
}

impl RangeArgs {
    fn ranges(&self) -> ParamRanges {
        let d = ParamRanges::default();
        ParamRanges {
            l: self.l.unwrap_or(d.l),
            lp: self.lp.unwrap_or(d.lp),
            m: self.m.unwrap_or(d.m),
            k: self.k.unwrap_or(d.k),
            blocks: self.blocks.unwrap_or(d.blocks),
            taylor_degree: self.taylor_degree.unwrap_or(d.taylor_degree),
            guard: self.guard.unwrap_or(d.guard),
            exact: self.exact,
            tol: self.tol.unwrap_or(d.tol),
            ..d
        }
    }
}

fn code(outcome: lab::Outcome) -> u8 {
    match outcome {
        lab::Outcome::Pass => 0,
        lab::Outcome::Fail => 1,
        lab::Outcome::InvalidInstance => 2,
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> hardy_lab::error::Result<u8> {
    match Cli::parse().cmd {
        Cmd::Gen { seed, theorem, ranges, out } => {
            let s = lab::generate(seed, theorem, &ranges.ranges())?;
            match out {
                Some(p) => s.save(&p)?,
                None => println!("{}", s.to_json()?),
            }
            Ok(0)
        }
        Cmd::Run { input, tol, ledger } => {
            let s = Scenario::load(&input)?;
            let rec = lab::run(&s, tol);
            match ledger {
                Some(p) => lab::write_ledger(&p, std::slice::from_ref(&rec), true)?,
                None => println!("{}", serde_json::to_string(&rec)?),
            }
            eprintln!("{} {:?}", rec.scenario_id, rec.outcome);
            Ok(code(rec.outcome))
        }
        Cmd::Suite {
            theorem,
            trials,
            seed,
            ranges,
            ledger,
        } => {
            let recs = lab::run_suite(theorem, trials, seed, &ranges.ranges(), None)?;
            lab::write_ledger(&ledger, &recs, true)?;
            let rep = lab::report(&recs);
            print!("{}", rep.render(ReportFormat::Text)?);
            Ok(rep.exit_code as u8)
        }
        Cmd::Report { ledger, json } => {
            let rep = lab::report(&lab::read_ledger(&ledger)?);
            let fmt = if json { ReportFormat::Json } else { ReportFormat::Text };
            print!("{}", rep.render(fmt)?);
            Ok(rep.exit_code as u8)
        }
    }
}
