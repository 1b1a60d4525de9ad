//! JSON forms of results. Extensions are written as explicit tables that
//! [`extension_from_json`] reads back.

use anyhow::{anyhow, bail, Context, Result};
use groupoid_cohomology::classify::Extension;
use groupoid_cohomology::groupoid::{FiniteGroupoid, GroupoidMorphism, GroupoidTables};
use groupoid_cohomology::{GModule, InvariantFactors};
use serde_json::{json, Value};

pub fn factors_json(f: &InvariantFactors) -> Value {
    json!({ "factors": f.as_list(), "display": f.to_string() })
}

pub fn extension_json(e: &Extension) -> Value {
    let t = e.total();
    let g = e.module().base();
    let arrows: Vec<Value> = t
        .arrows()
        .map(|k| {
            json!({
                "name": t.arrow_name(k),
                "source": t.source(k),
                "range": t.range(k),
                "over": g.arrow_name(e.project(k)),
            })
        })
        .collect();
    let mut composition = Vec::new();
    for a in t.arrows() {
        for b in t.arrows() {
            if let Some(ab) = t.try_compose(a, b) {
                composition.push(json!([a, b, ab]));
            }
        }
    }
    json!({
        "objects": t.object_names(),
        "arrows": arrows,
        "composition": composition,
        "injection": e.injection_table(),
    })
}

fn index(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| anyhow!("{what} must be a non-negative integer"))
}

/// Rebuilds an extension of `module` from [`extension_json`] output.
pub fn extension_from_json(v: &Value, module: &GModule) -> Result<Extension> {
    let g = module.base();
    let objects = v["objects"].as_array().context("missing objects")?;
    if objects.len() != g.n_objects() {
        bail!("extension has {} objects, the base has {}", objects.len(), g.n_objects());
    }
    let arrows = v["arrows"].as_array().context("missing arrows")?;
    let n = arrows.len();
    let mut src = Vec::with_capacity(n);
    let mut tgt = Vec::with_capacity(n);
    let mut names = Vec::with_capacity(n);
    let mut over = Vec::with_capacity(n);
    for a in arrows {
        src.push(index(&a["source"], "source")?);
        tgt.push(index(&a["range"], "range")?);
        names.push(a["name"].as_str().context("arrow name")?.to_string());
        let base_name = a["over"].as_str().context("arrow projection")?;
        over.push(
            g.arrows()
                .find(|&h| g.arrow_name(h) == base_name)
                .ok_or_else(|| anyhow!("unknown base arrow '{base_name}'"))?,
        );
    }
    let mut comp = vec![None; n * n];
    for c in v["composition"].as_array().context("missing composition")? {
        let c = c.as_array().context("composition entries are triples")?;
        if c.len() != 3 {
            bail!("composition entries are triples");
        }
        let (a, b, ab) = (index(&c[0], "arrow")?, index(&c[1], "arrow")?, index(&c[2], "arrow")?);
        if a >= n || b >= n || ab >= n {
            bail!("composition mentions a missing arrow");
        }
        comp[a * n + b] = Some(ab);
    }
    let unit = g
        .objects()
        .map(|x| {
            (0..n)
                .find(|&k| src[k] == x && tgt[k] == x && comp[k * n + k] == Some(k))
                .ok_or_else(|| anyhow!("no unit at object {x}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let total = FiniteGroupoid::from_tables(GroupoidTables {
        n_objects: objects.len(),
        src,
        tgt,
        unit,
        comp,
        inv: None,
        object_names: Some(objects.iter().map(|o| o.as_str().unwrap_or("").to_string()).collect()),
        arrow_names: Some(names),
    })?;
    let inj = v["injection"]
        .as_array()
        .context("missing injection")?
        .iter()
        .map(|row| {
            row.as_array()
                .context("injection rows are lists")?
                .iter()
                .map(|k| index(k, "injection entry"))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let proj = GroupoidMorphism {
        object_map: g.objects().collect(),
        arrow_map: over,
    };
    Ok(Extension::new(module.clone(), total, inj, proj)?)
}
