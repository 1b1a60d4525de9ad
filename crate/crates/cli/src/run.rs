//! Executes document tasks and collects text and JSON output.

use std::fmt;

use groupoid_cohomology::cech::{
    product_cover, random_homotopy_setup, CechComplex, CechError, Cover, FineCover, FiniteSimplicialSpace, PointSet,
};
use groupoid_cohomology::classify::{
    baer_sum, cocycle_from_extension, ext_classes, is_strictly_trivial, ClassifyError, ExtClasses,
};
use groupoid_cohomology::cohomology::{is_coboundary, CohomologyError};
use groupoid_cohomology::groupoid::nerve_size;
use groupoid_cohomology::morita::{morita_compare, MoritaError};
use groupoid_cohomology::par::Strategy;
use groupoid_cohomology::{validate_module, Budget, GModule, GroupoidComplex};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::document::{CechCoverSpec, Document, Task};
use crate::report::{extension_json, factors_json};

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub max_degree: usize,
    pub budget: Budget,
    pub strategy: Strategy,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_degree: 4,
            budget: Budget::default(),
            strategy: Strategy::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunError {
    Usage(String),
    Budget(String),
    Internal(String),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Usage(m) => write!(f, "usage error: {m}"),
            RunError::Budget(m) => write!(f, "budget exceeded: {m}"),
            RunError::Internal(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<CohomologyError> for RunError {
    fn from(e: CohomologyError) -> Self {
        match e {
            e if e.is_budget() => RunError::Budget(e.to_string()),
            e => RunError::Internal(e.to_string()),
        }
    }
}

impl From<ClassifyError> for RunError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Cohomology(c) => c.into(),
            ClassifyError::InfiniteFiber(_) => RunError::Usage(e.to_string()),
            e => RunError::Internal(e.to_string()),
        }
    }
}

impl From<CechError> for RunError {
    fn from(e: CechError) -> Self {
        match e {
            e if e.is_budget() => RunError::Budget(e.to_string()),
            CechError::InvalidCover(_) | CechError::MissingStructure(_) => RunError::Usage(e.to_string()),
            e => RunError::Internal(e.to_string()),
        }
    }
}

impl From<MoritaError> for RunError {
    fn from(e: MoritaError) -> Self {
        if e.is_budget() {
            RunError::Budget(e.to_string())
        } else if matches!(e, MoritaError::Groupoid(_)) {
            RunError::Usage(e.to_string())
        } else {
            RunError::Internal(e.to_string())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    AssertionFailed,
}

/// Result of one task.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub task: String,
    pub passed: bool,
    pub lines: Vec<String>,
    pub json: Value,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn status(&self) -> Status {
        if self.outcomes.iter().all(|o| o.passed) {
            Status::Success
        } else {
            Status::AssertionFailed
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for o in &self.outcomes {
            for l in &o.lines {
                s.push_str(l);
                s.push('\n');
            }
        }
        s
    }

    pub fn json(&self) -> Value {
        json!({
            "status": if self.status() == Status::Success { "ok" } else { "failed" },
            "tasks": self.outcomes.iter().map(|o| json!({
                "task": o.task,
                "passed": o.passed,
                "result": o.json,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Runs the document's own task list.
pub fn run(doc: &Document, opts: &RunOptions) -> Result<Report, RunError> {
    let tasks: Vec<Task> = doc.tasks.iter().map(|t| t.value.clone()).collect();
    run_tasks(doc, &tasks, opts)
}

pub fn run_tasks(doc: &Document, tasks: &[Task], opts: &RunOptions) -> Result<Report, RunError> {
    let mut outcomes = Vec::with_capacity(tasks.len());
    for t in tasks {
        outcomes.push(run_task(doc, t, opts)?);
    }
    Ok(Report { outcomes })
}

fn check_degree(n: usize, opts: &RunOptions) -> Result<(), RunError> {
    if n > opts.max_degree {
        return Err(RunError::Usage(format!("degree {n} is above --max-degree {}", opts.max_degree)));
    }
    Ok(())
}

fn coords_json(c: &[BigInt]) -> Value {
    Value::Array(c.iter().map(|x| json!(x.to_string())).collect())
}

fn coords_text(c: &[BigInt]) -> String {
    let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

fn run_task(doc: &Document, task: &Task, opts: &RunOptions) -> Result<Outcome, RunError> {
    let a = &doc.module;
    match task {
        Task::Validate => {
            let g = doc.groupoid.validate();
            let m = validate_module(a);
            let gf: Vec<String> = g.failures.iter().map(|f| f.to_string()).collect();
            let mf: Vec<String> = m.failures.iter().map(|f| f.to_string()).collect();
            let mut lines = vec![format!(
                "validate: groupoid {} ({} objects, {} arrows), module {}",
                if gf.is_empty() { "ok" } else { "FAILED" },
                doc.groupoid.n_objects(),
                doc.groupoid.n_arrows(),
                if mf.is_empty() { "ok" } else { "FAILED" },
            )];
            lines.extend(gf.iter().chain(&mf).map(|f| format!("  {f}")));
            Ok(Outcome {
                task: "validate".into(),
                passed: gf.is_empty() && mf.is_empty(),
                lines,
                json: json!({
                    "objects": doc.groupoid.n_objects(),
                    "arrows": doc.groupoid.n_arrows(),
                    "groupoid_failures": gf,
                    "module_failures": mf,
                }),
            })
        }
        Task::Cohomology { from, to } => {
            check_degree(*to, opts)?;
            let cx = GroupoidComplex::with_options(a, *to, &opts.budget, opts.strategy)?;
            let mut parts = Vec::new();
            let mut js = Vec::new();
            for n in *from..=*to {
                let h = cx.cohomology(n)?;
                parts.push(format!("H^{n}={h}"));
                js.push(json!({ "degree": n, "group": factors_json(&h) }));
            }
            Ok(Outcome {
                task: format!("cohomology {from}..{to}"),
                passed: true,
                lines: vec![parts.join(" ")],
                json: Value::Array(js),
            })
        }
        Task::Ext => ext_task(a),
        Task::Baer => baer_task(a),
        Task::StrictTrivial => strict_task(a),
        Task::Morita(spec) => {
            let top = opts.max_degree.min(2);
            let degrees: Vec<usize> = (0..=top).collect();
            let u = spec.object_cover(&doc.groupoid);
            let r = morita_compare(a, &u, &degrees, &opts.budget, opts.strategy)?;
            let mut lines = vec![format!(
                "morita: G[U] has {} objects, {} arrows: {}",
                r.cover_objects,
                r.cover_arrows,
                if r.holds() { "invariant" } else { "MISMATCH" }
            )];
            for d in &r.degrees {
                lines.push(format!(
                    "  H^{}: G {} | G[U] {} | induced map {}",
                    d.degree,
                    d.base,
                    d.cover,
                    if d.induced_iso { "iso" } else { "not iso" }
                ));
            }
            if let Some(e) = &r.ext {
                lines.push(format!("  ext: G {} classes | G[U] {} classes", e.base_classes, e.cover_classes));
            }
            Ok(Outcome {
                task: "morita".into(),
                passed: r.holds(),
                lines,
                json: serde_json::to_value(&r).map_err(|e| RunError::Internal(e.to_string()))?,
            })
        }
        Task::Cech { cover, top } => cech_task(a, cover, *top, opts),
        Task::HomotopyCheck { seed, count } => homotopy_task(a, *seed, *count, opts),
    }
}

fn classes(a: &GModule) -> Result<ExtClasses, RunError> {
    Ok(ext_classes(a)?)
}

fn ext_task(a: &GModule) -> Result<Outcome, RunError> {
    let ext = classes(a)?;
    let mut lines = vec![format!("ext: H^2={}, {} classes", ext.h2, ext.classes.len())];
    let mut js = Vec::new();
    let mut passed = true;
    for c in &ext.classes {
        let split = is_strictly_trivial(&c.extension)?.is_some();
        let back = ext.class_of(&c.extension)?;
        passed &= back == c.coords;
        lines.push(format!(
            "  class {}: total has {} arrows, {}",
            coords_text(&c.coords),
            c.extension.total().n_arrows(),
            if split { "split" } else { "non-split" }
        ));
        js.push(json!({
            "class": coords_json(&c.coords),
            "split": split,
            "extension": extension_json(&c.extension),
        }));
    }
    Ok(Outcome {
        task: "ext".into(),
        passed,
        lines,
        json: json!({ "h2": factors_json(&ext.h2), "classes": js }),
    })
}

fn baer_task(a: &GModule) -> Result<Outcome, RunError> {
    let ext = classes(a)?;
    let mut checked = 0;
    let mut failures = Vec::new();
    for (i, x) in ext.classes.iter().enumerate() {
        for y in &ext.classes[i..] {
            let sum = baer_sum(&x.extension, &y.extension)?;
            let expected = ext.add(&x.coords, &y.coords);
            let got = ext.class_of(&sum)?;
            checked += 1;
            if got != expected {
                failures.push(format!(
                    "{} + {}: Baer sum has class {}, expected {}",
                    coords_text(&x.coords),
                    coords_text(&y.coords),
                    coords_text(&got),
                    coords_text(&expected)
                ));
            }
        }
    }
    let mut lines = vec![format!(
        "baer: {checked} sums checked, {}",
        if failures.is_empty() { "all match cocycle addition".to_string() } else { format!("{} FAILED", failures.len()) }
    )];
    lines.extend(failures.iter().map(|f| format!("  {f}")));
    Ok(Outcome {
        task: "baer".into(),
        passed: failures.is_empty(),
        lines,
        json: json!({ "checked": checked, "failures": failures }),
    })
}

fn strict_task(a: &GModule) -> Result<Outcome, RunError> {
    let ext = classes(a)?;
    let mut lines = Vec::new();
    let mut js = Vec::new();
    let mut passed = true;
    for c in &ext.classes {
        let strict = is_strictly_trivial(&c.extension)?.is_some();
        let phi = cocycle_from_extension(&c.extension, &c.extension.canonical_section())?;
        let coboundary = is_coboundary(a, &phi)?.is_some();
        let zero = c.coords.iter().all(|x| *x == BigInt::from(0));
        let agree = strict == coboundary && coboundary == zero;
        passed &= agree;
        lines.push(format!(
            "  class {}: strictly trivial {strict}, coboundary {coboundary}{}",
            coords_text(&c.coords),
            if agree { "" } else { " MISMATCH" }
        ));
        js.push(json!({ "class": coords_json(&c.coords), "strictly_trivial": strict, "coboundary": coboundary }));
    }
    lines.insert(0, format!("strict-trivial: {}", if passed { "agrees with coboundary test" } else { "FAILED" }));
    Ok(Outcome {
        task: "strict-trivial".into(),
        passed,
        lines,
        json: Value::Array(js),
    })
}

/// Rejects nerves that would not fit the cell budget before building them.
fn nerve_space(a: &GModule, top: usize, budget: &Budget) -> Result<FiniteSimplicialSpace, RunError> {
    for n in 0..=top {
        let size = nerve_size(a.base(), n);
        if size > budget.max_cells {
            return Err(RunError::Budget(format!(
                "nerve level {n} has {size} simplices, budget is {}",
                budget.max_cells
            )));
        }
    }
    Ok(FiniteSimplicialSpace::nerve(a, top))
}

fn cech_task(a: &GModule, spec: &CechCoverSpec, top: usize, opts: &RunOptions) -> Result<Outcome, RunError> {
    check_degree(top, opts)?;
    let m = nerve_space(a, top + 1, &opts.budget)?;
    let (name, cover) = match spec {
        CechCoverSpec::Maximal => ("maximal".to_string(), Cover::maximal(&m, top + 1)),
        CechCoverSpec::Single => ("single".to_string(), Cover::single(&m, top + 1)),
        CechCoverSpec::Product(sets) => {
            let size = m.level_size(0);
            let base: Vec<PointSet> = sets.iter().map(|s| PointSet::from_points(size, s.iter().copied())).collect();
            ("product".to_string(), product_cover(&m, &base, top + 1)?)
        }
    };
    let cx = CechComplex::new(&m, &cover, top, &opts.budget, opts.strategy)?;
    let gc = GroupoidComplex::with_options(a, top, &opts.budget, opts.strategy)?;
    let mut lines = Vec::new();
    let mut js = Vec::new();
    let mut passed = true;
    for n in 0..=top {
        let c = cx.cohomology(n)?;
        let h = gc.cohomology(n)?;
        passed &= c == h;
        lines.push(format!("  H^{n}: Cech {c} | groupoid {h}"));
        js.push(json!({ "degree": n, "cech": factors_json(&c), "groupoid": factors_json(&h) }));
    }
    lines.insert(0, format!("cech {name}: {}", if passed { "matches groupoid cohomology" } else { "MISMATCH" }));
    Ok(Outcome {
        task: format!("cech {name} {top}"),
        passed,
        lines,
        json: json!({ "cover": name, "degrees": js }),
    })
}

fn homotopy_task(a: &GModule, seed: u64, count: usize, opts: &RunOptions) -> Result<Outcome, RunError> {
    let max = opts.max_degree.clamp(1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut pairs = 0;
    for i in 0..count {
        let degree = 1 + i % max;
        let kind = if i % 2 == 0 { FineCover::Product } else { FineCover::Maximal };
        let m = nerve_space(a, degree + 1, &opts.budget)?;
        let setup = random_homotopy_setup(&mut rng, m, kind, degree, 3, &opts.budget)?;
        for n in 0..=degree {
            let phi = setup.random_cochain(&mut rng, n);
            let c = setup.check(&phi)?;
            pairs += c.checked;
            if !c.holds() {
                failures.push(format!("instance {i}, cochain degree {n}: {} mismatches", c.mismatches.len()));
            }
        }
    }
    let mut lines = vec![format!(
        "homotopy-check: {count} instances, {pairs} values compared, {}",
        if failures.is_empty() { "dH + Hd = θ1* - θ0* holds".to_string() } else { format!("{} FAILED", failures.len()) }
    )];
    lines.extend(failures.iter().map(|f| format!("  {f}")));
    Ok(Outcome {
        task: format!("homotopy-check {seed} {count}"),
        passed: failures.is_empty(),
        lines,
        json: json!({ "seed": seed, "instances": count, "compared": pairs, "failures": failures }),
    })
}
