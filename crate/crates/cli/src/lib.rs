//! Workspace documents for `gcoh` and the task runner behind its verbs.

pub mod document;
pub mod report;
pub mod run;

pub use document::{parse, parse_task, CechCoverSpec, CoverSpec, Document, ParseError, Task};
pub use run::{run, run_tasks, Outcome, Report, RunError, RunOptions, Status};
