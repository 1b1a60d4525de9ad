use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use gcoh::{parse, parse_task, run_tasks, Document, RunError, RunOptions, Status, Task};
use groupoid_cohomology::Budget;

/// Cohomology of finite groupoids from workspace documents.
#[derive(Parser)]
#[command(name = "gcoh", version)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Highest cohomological degree any task may touch.
    #[arg(long, global = true, default_value_t = 2)]
    max_degree: usize,
    /// Largest cochain group (generators) and σ-cover level (indices) to build.
    #[arg(long, global = true, default_value_t = 250_000)]
    budget: u128,
    /// Write the structured report here.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Overrides the seed of every homotopy check.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Verb {
    /// Check the groupoid axioms and the module.
    Validate { file: PathBuf },
    /// H^0 .. H^max-degree.
    Cohomology { file: PathBuf },
    /// All extension classes, with their tables.
    Ext { file: PathBuf },
    /// Compare G with the cover groupoid G[U].
    MoritaCheck {
        file: PathBuf,
        /// `trivial`, `partition` or sets such as `{0} {0}`.
        #[arg(long, default_value = "partition")]
        cover: String,
    },
    /// Čech cohomology of the nerve against groupoid cohomology.
    CechCheck {
        file: PathBuf,
        /// `maximal`, `single` or `product {..} {..}`.
        #[arg(long, default_value = "maximal")]
        cover: String,
    },
    /// The homotopy identity on random refinement pairs.
    HomotopyCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Run the document's task list.
    Run { file: PathBuf },
}

fn load(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse(&text).with_context(|| format!("{}", path.display()))
}

fn execute(cli: &Cli) -> Result<Status> {
    let opts = RunOptions {
        max_degree: cli.max_degree,
        budget: Budget {
            max_cells: cli.budget,
            max_lambda: cli.budget,
            ..Budget::default()
        },
        ..RunOptions::default()
    };
    let task = |doc: &Document, text: String| -> Result<Vec<Task>> {
        Ok(vec![parse_task(&text, &doc.groupoid).with_context(|| format!("in '{text}'"))?])
    };
    let (doc, tasks) = match &cli.verb {
        Verb::Validate { file } => (load(file)?, vec![Task::Validate]),
        Verb::Cohomology { file } => (load(file)?, vec![Task::Cohomology { from: 0, to: cli.max_degree }]),
        Verb::Ext { file } => (load(file)?, vec![Task::Ext]),
        Verb::MoritaCheck { file, cover } => {
            let d = load(file)?;
            let t = task(&d, format!("morita {cover}"))?;
            (d, t)
        }
        Verb::CechCheck { file, cover } => {
            let d = load(file)?;
            let t = task(&d, format!("cech {cover} {}", cli.max_degree))?;
            (d, t)
        }
        Verb::HomotopyCheck { file, count } => {
            let d = load(file)?;
            (d, vec![Task::HomotopyCheck { seed: 0, count: *count }])
        }
        Verb::Run { file } => {
            let d = load(file)?;
            let t = d.tasks.iter().map(|t| t.value.clone()).collect();
            (d, t)
        }
    };
    let tasks: Vec<Task> = tasks
        .into_iter()
        .map(|t| match (t, cli.seed) {
            (Task::HomotopyCheck { count, .. }, Some(seed)) => Task::HomotopyCheck { seed, count },
            (t, _) => t,
        })
        .collect();
    let report = run_tasks(&doc, &tasks, &opts)?;
    print!("{}", report.text());
    if let Some(path) = &cli.json {
        let body = serde_json::to_string_pretty(&report.json())?;
        std::fs::write(path, body + "\n").with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(report.status())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::AssertionFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<RunError>() {
                Some(RunError::Budget(_)) => 3,
                Some(RunError::Internal(_)) => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
