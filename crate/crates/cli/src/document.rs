//! The line-oriented workspace format.
//!
//! ```text
//! # comments run to the end of the line
//! format 1
//! groupoid: cyclic(2)
//! module: constant Z/2
//! task: cohomology 0..2
//! ```
//!
//! Statements end at a newline or a `;` outside brackets. The colon after
//! the keyword is optional. Explicit groupoids use `groupoid: explicit`
//! followed by `object x`, `arrow a : x -> y` and `compose a b = c` (the
//! composite `ab`, defined when `s(a) = r(b)`); units are the idempotent
//! loops. Explicit modules use `module: explicit`, `fiber x Z/2 x Z` and
//! `action a [[1 0] [0 1]]` (rows index target coordinates); a missing
//! action is the identity.

use std::collections::HashMap;
use std::fmt;

use groupoid_cohomology::abelian::{AbHom, FinAbGroup, IntegerMatrix};
use groupoid_cohomology::groupoid::{
    action_groupoid, cover_groupoid, cyclic_group, disjoint_union, pair_groupoid, product, unit_groupoid,
    FiniteGroupoid, GSet, GroupoidTables, ObjectCover,
};
use groupoid_cohomology::{constant_module, GModule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A cover of the objects, resolved against the groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverSpec {
    Trivial,
    Partition,
    Sets(Vec<Vec<usize>>),
}

impl CoverSpec {
    pub fn object_cover(&self, g: &FiniteGroupoid) -> ObjectCover {
        match self {
            CoverSpec::Trivial => ObjectCover::trivial(g),
            CoverSpec::Partition => ObjectCover::partition(g),
            CoverSpec::Sets(s) => ObjectCover::new(s.clone()),
        }
    }
}

/// Covers of the nerve for `cech`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CechCoverSpec {
    Maximal,
    Single,
    /// Pullback of a cover of the objects along the vertex maps.
    Product(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Task {
    Validate,
    Cohomology { from: usize, to: usize },
    Ext,
    Baer,
    StrictTrivial,
    Morita(CoverSpec),
    Cech { cover: CechCoverSpec, top: usize },
    HomotopyCheck { seed: u64, count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located<T> {
    pub line: usize,
    pub col: usize,
    pub value: T,
}

#[derive(Clone, Debug)]
pub struct Document {
    pub format: u32,
    pub groupoid: FiniteGroupoid,
    pub module: GModule,
    pub tasks: Vec<Located<Task>>,
}

/// Cursor over one statement, tracking source columns.
struct Cursor {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(text: &str, line: usize, col: usize) -> Self {
        let chars = text.chars().enumerate().map(|(i, c)| (col + i, c)).collect();
        Cursor { chars, pos: 0, line }
    }

    fn col(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|c| c.0)
            .unwrap_or_else(|| self.chars.last().map_or(1, |c| c.0 + 1))
    }

    /// Column of the next token.
    fn here(&mut self) -> usize {
        self.skip_ws();
        self.col()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: self.line,
            col: self.col(),
            message: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.1.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(d) => self.err(format!("expected '{c}', found '{d}'")),
                None => self.err(format!("expected '{c}' before end of statement")),
            }
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        let rest: String = self.chars[self.pos..].iter().map(|c| c.1).take(s.chars().count()).collect();
        if rest == s {
            self.pos += s.chars().count();
            true
        } else {
            false
        }
    }

    /// A bare token: anything up to whitespace or punctuation.
    fn word(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        // generated names such as `(g,z0)` start with a bracketed group
        if self.chars.get(self.pos).map(|c| c.1) == Some('(') {
            let mut depth = 0;
            while let Some(&(_, c)) = self.chars.get(self.pos) {
                self.pos += 1;
                match c {
                    '(' => depth += 1,
                    ')' => {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                    _ => {}
                }
            }
            if depth != 0 {
                return self.err("unclosed '(' in a name");
            }
        }
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if c.is_whitespace() || "()[]{},;:=".contains(c) || (c == '-' && self.chars.get(self.pos + 1).map(|d| d.1) == Some('>')) {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return match self.peek() {
                Some(c) => self.err(format!("expected a name, found '{c}'")),
                None => self.err("expected a name before end of statement"),
            };
        }
        Ok(self.chars[start..self.pos].iter().map(|c| c.1).collect())
    }

    fn integer<T: std::str::FromStr>(&mut self) -> Result<T, ParseError> {
        self.skip_ws();
        let col = self.col();
        let w = self.word()?;
        w.parse().map_err(|_| ParseError {
            line: self.line,
            col,
            message: format!("expected an integer, found '{w}'"),
        })
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => {
                let rest: String = self.chars[self.pos..].iter().map(|c| c.1).collect();
                self.err(format!("unexpected trailing input '{}'", rest.trim()))
            }
        }
    }
}

/// Splits the source into statements `(line, col, text)`, comments removed.
fn statements(src: &str) -> Vec<(usize, usize, String)> {
    let mut out = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut depth = 0i32;
        let mut start = 0;
        let chars: Vec<char> = line.chars().collect();
        for (i, &c) in chars.iter().enumerate() {
            match c {
                '(' | '[' | '{' => depth += 1,
                ')' | ']' | '}' => depth -= 1,
                ';' if depth == 0 => {
                    out.push((ln + 1, start + 1, chars[start..i].iter().collect()));
                    start = i + 1;
                }
                _ => {}
            }
        }
        out.push((ln + 1, start + 1, chars[start..].iter().collect()));
    }
    out.into_iter()
        .filter_map(|(l, c, s): (usize, usize, String)| {
            let lead = s.chars().take_while(|c| c.is_whitespace()).count();
            let t = s.trim();
            (!t.is_empty()).then(|| (l, c + lead, t.to_string()))
        })
        .collect()
}

#[derive(Default)]
struct Explicit {
    objects: Vec<String>,
    arrows: Vec<(String, usize, usize)>,
    compose: Vec<(usize, usize, usize, usize, usize)>,
}

#[derive(Default)]
struct ExplicitModule {
    fibers: Vec<(String, FinAbGroup, usize, usize)>,
    actions: Vec<(String, Vec<Vec<i64>>, usize, usize)>,
}

enum ModuleSpec {
    Constant(FinAbGroup),
    Explicit,
}

pub fn parse(src: &str) -> Result<Document, ParseError> {
    let mut format = None;
    let mut groupoid_expr: Option<(usize, usize, String)> = None;
    let mut explicit = Explicit::default();
    let mut module_spec: Option<(usize, usize, ModuleSpec)> = None;
    let mut explicit_module = ExplicitModule::default();
    let mut raw_tasks = Vec::new();
    let mut last_line = 1;
    for (line, col, stmt) in statements(src) {
        last_line = line;
        let mut c = Cursor::new(&stmt, line, col);
        let key_col = c.here();
        let key = c.word()?;
        c.eat(':');
        match key.as_str() {
            "format" => {
                let v: u32 = c.integer()?;
                if v != 1 {
                    return Err(ParseError { line, col: key_col, message: format!("unsupported format version {v}") });
                }
                c.finish()?;
                format = Some(v);
            }
            "groupoid" => {
                if groupoid_expr.is_some() {
                    return Err(ParseError { line, col: key_col, message: "groupoid given twice".into() });
                }
                c.skip_ws();
                let body_col = c.here();
                let body: String = c.chars[c.pos..].iter().map(|x| x.1).collect();
                groupoid_expr = Some((line, body_col, body));
            }
            "object" => {
                let name = c.word()?;
                c.finish()?;
                if explicit.objects.contains(&name) {
                    return Err(ParseError { line, col: key_col, message: format!("duplicate object '{name}'") });
                }
                explicit.objects.push(name);
            }
            "arrow" => {
                let name = c.word()?;
                c.expect(':')?;
                let r_col = c.here();
                let src_name = c.word()?;
                if !c.eat_str("->") {
                    return c.err("expected '->'");
                }
                let t_col = c.here();
                let tgt_name = c.word()?;
                c.finish()?;
                let s = lookup_object(&explicit.objects, &src_name, line, r_col)?;
                let t = lookup_object(&explicit.objects, &tgt_name, line, t_col)?;
                if explicit.arrows.iter().any(|a| a.0 == name) {
                    return Err(ParseError { line, col: key_col, message: format!("duplicate arrow '{name}'") });
                }
                explicit.arrows.push((name, s, t));
            }
            "compose" => {
                let mut ids = Vec::new();
                for k in 0..3 {
                    if k == 2 {
                        c.expect('=')?;
                    }
                    let col = c.here();
                    let name = c.word()?;
                    ids.push(lookup_arrow(&explicit.arrows, &name, line, col)?);
                }
                c.finish()?;
                explicit.compose.push((ids[0], ids[1], ids[2], line, key_col));
            }
            "module" => {
                if module_spec.is_some() {
                    return Err(ParseError { line, col: key_col, message: "module given twice".into() });
                }
                let kind = c.word()?;
                let spec = match kind.as_str() {
                    "constant" => ModuleSpec::Constant(parse_group(&mut c)?),
                    "explicit" => ModuleSpec::Explicit,
                    other => return Err(ParseError { line, col: key_col, message: format!("unknown module kind '{other}'") }),
                };
                c.finish()?;
                module_spec = Some((line, key_col, spec));
            }
            "fiber" => {
                let col = c.here();
                let name = c.word()?;
                let g = parse_group(&mut c)?;
                c.finish()?;
                explicit_module.fibers.push((name, g, line, col));
            }
            "action" => {
                let col = c.here();
                let name = c.word()?;
                let m = parse_matrix(&mut c)?;
                c.finish()?;
                explicit_module.actions.push((name, m, line, col));
            }
            "task" => {
                let name_col = c.here();
                let name = c.word()?;
                raw_tasks.push((line, col, name_col, name, stmt.clone(), c.pos));
            }
            other => return Err(ParseError { line, col: key_col, message: format!("unknown field '{other}'") }),
        }
    }
    let Some((gl, gc, gexpr)) = groupoid_expr else {
        return Err(ParseError { line: last_line, col: 1, message: "missing groupoid section".into() });
    };
    let groupoid = {
        let mut c = Cursor::new(&gexpr, gl, gc);
        let g = parse_groupoid(&mut c, &explicit)?;
        c.finish()?;
        g
    };
    if !explicit.objects.is_empty() && !gexpr.trim().starts_with("explicit") {
        return Err(ParseError { line: gl, col: gc, message: "object/arrow lines need 'groupoid: explicit'".into() });
    }
    let Some((ml, mc, spec)) = module_spec else {
        return Err(ParseError { line: last_line, col: 1, message: "missing module section".into() });
    };
    let module = match spec {
        ModuleSpec::Constant(b) => {
            if !explicit_module.fibers.is_empty() || !explicit_module.actions.is_empty() {
                return Err(ParseError { line: ml, col: mc, message: "fiber/action lines need 'module: explicit'".into() });
            }
            constant_module(&groupoid, &b)
        }
        ModuleSpec::Explicit => build_module(&groupoid, explicit_module, ml, mc)?,
    };
    let mut tasks = Vec::new();
    for (line, col, name_col, name, stmt, pos) in raw_tasks {
        let mut c = Cursor::new(&stmt, line, col);
        c.pos = pos;
        let task = parse_task_body(&mut c, &name, name_col, &groupoid)?;
        c.finish()?;
        tasks.push(Located { line, col: name_col, value: task });
    }
    Ok(Document {
        format: format.unwrap_or(1),
        groupoid,
        module,
        tasks,
    })
}

fn lookup_object(objects: &[String], name: &str, line: usize, col: usize) -> Result<usize, ParseError> {
    objects.iter().position(|o| o == name).ok_or_else(|| ParseError {
        line,
        col,
        message: format!("unknown object '{name}'"),
    })
}

fn lookup_arrow(arrows: &[(String, usize, usize)], name: &str, line: usize, col: usize) -> Result<usize, ParseError> {
    arrows.iter().position(|a| a.0 == name).ok_or_else(|| ParseError {
        line,
        col,
        message: format!("unknown arrow '{name}'"),
    })
}

/// `0`, `Z`, `Z/n`, joined by `x`.
fn parse_group(c: &mut Cursor) -> Result<FinAbGroup, ParseError> {
    let mut orders = Vec::new();
    loop {
        let col = c.here();
        let w = c.word()?;
        match w.as_str() {
            "0" => {}
            "Z" => orders.push(0),
            _ => match w.strip_prefix("Z/").and_then(|n| n.parse::<u64>().ok()) {
                Some(n) if n >= 1 => {
                    if n > 1 {
                        orders.push(n)
                    }
                }
                _ => {
                    return Err(ParseError {
                        line: c.line,
                        col,
                        message: format!("expected a group like Z, Z/n or 0, found '{w}'"),
                    })
                }
            },
        }
        if !c.eat_str("x ") {
            break;
        }
    }
    Ok(FinAbGroup::new(orders))
}

fn parse_int_list(c: &mut Cursor) -> Result<Vec<i64>, ParseError> {
    c.expect('[')?;
    let mut out = Vec::new();
    while !c.eat(']') {
        if c.at_end() {
            return c.err("unclosed '['");
        }
        out.push(c.integer()?);
        c.eat(',');
    }
    Ok(out)
}

fn parse_matrix(c: &mut Cursor) -> Result<Vec<Vec<i64>>, ParseError> {
    c.expect('[')?;
    let mut rows = Vec::new();
    while !c.eat(']') {
        if c.at_end() {
            return c.err("unclosed '['");
        }
        rows.push(parse_int_list(c)?);
        c.eat(',');
    }
    Ok(rows)
}

fn parse_usize<T: std::str::FromStr>(c: &mut Cursor) -> Result<T, ParseError> {
    c.integer()
}

/// `{a b c}` with object names or indices.
fn parse_set(c: &mut Cursor, g: &FiniteGroupoid) -> Result<Vec<usize>, ParseError> {
    c.expect('{')?;
    let mut out = Vec::new();
    while !c.eat('}') {
        if c.at_end() {
            return c.err("unclosed '{'");
        }
        let col = c.here();
        let w = c.word()?;
        let x = resolve_object(g, &w).ok_or_else(|| ParseError {
            line: c.line,
            col,
            message: format!("unknown object '{w}'"),
        })?;
        out.push(x);
        c.eat(',');
    }
    Ok(out)
}

fn resolve_object(g: &FiniteGroupoid, w: &str) -> Option<usize> {
    g.object_names()
        .iter()
        .position(|n| n == w)
        .or_else(|| w.parse::<usize>().ok().filter(|&x| x < g.n_objects()))
}

fn parse_sets(c: &mut Cursor, g: &FiniteGroupoid) -> Result<Vec<Vec<usize>>, ParseError> {
    let mut sets = Vec::new();
    while c.peek() == Some('{') {
        sets.push(parse_set(c, g)?);
        c.eat(',');
    }
    Ok(sets)
}

fn parse_groupoid(c: &mut Cursor, explicit: &Explicit) -> Result<FiniteGroupoid, ParseError> {
    let col = c.here();
    let name = c.word()?;
    let positive = |c: &mut Cursor| -> Result<usize, ParseError> {
        let col = c.here();
        let n: usize = parse_usize(c)?;
        if n == 0 {
            return Err(ParseError { line: c.line, col, message: "size must be at least 1".into() });
        }
        Ok(n)
    };
    let g = match name.as_str() {
        "explicit" => return build_explicit(explicit, c.line, col),
        "cyclic" | "pair" | "unit" => {
            c.expect('(')?;
            let n = positive(c)?;
            c.expect(')')?;
            match name.as_str() {
                "cyclic" => cyclic_group(n),
                "pair" => pair_groupoid(n),
                _ => unit_groupoid(n),
            }
        }
        "product" | "union" => {
            c.expect('(')?;
            let a = parse_groupoid(c, explicit)?;
            c.expect(',')?;
            let b = parse_groupoid(c, explicit)?;
            c.expect(')')?;
            if name == "product" {
                product(&a, &b)
            } else {
                disjoint_union(&a, &b)
            }
        }
        "action" => {
            // action(n, [p0 p1 ...]): C_n acting through the permutation p
            c.expect('(')?;
            let n = positive(c)?;
            c.expect(',')?;
            let pcol = c.here();
            let perm = parse_int_list(c)?;
            c.expect(')')?;
            let bad = |m: &str| ParseError { line: c.line, col: pcol, message: m.to_string() };
            let m = perm.len();
            let perm: Vec<usize> = perm
                .iter()
                .map(|&p| usize::try_from(p).ok().filter(|&p| p < m))
                .collect::<Option<_>>()
                .ok_or_else(|| bad("permutation entries must be point indices"))?;
            let mut act = vec![(0..m).map(Some).collect::<Vec<_>>()];
            for k in 1..n {
                act.push(act[k - 1].iter().map(|p| p.map(|p| perm[p])).collect());
            }
            if act[n - 1].iter().enumerate().any(|(z, &p)| p.map(|p| perm[p]) != Some(z)) {
                return Err(bad("the permutation's order must divide n"));
            }
            let cn = cyclic_group(n);
            let z = GSet::new(&cn, vec![0; m], act).map_err(|e| bad(&e.to_string()))?;
            action_groupoid(&cn, &z).map_err(|e| bad(&e.to_string()))?
        }
        "cover" => {
            c.expect('(')?;
            let a = parse_groupoid(c, explicit)?;
            c.expect(',')?;
            let scol = c.here();
            let sets = parse_sets(c, &a)?;
            c.expect(')')?;
            cover_groupoid(&a, &ObjectCover::new(sets))
                .map_err(|e| ParseError { line: c.line, col: scol, message: e.to_string() })?
                .groupoid
        }
        other => {
            return Err(ParseError {
                line: c.line,
                col,
                message: format!("unknown groupoid builder '{other}'"),
            })
        }
    };
    Ok(g)
}

fn build_explicit(e: &Explicit, line: usize, col: usize) -> Result<FiniteGroupoid, ParseError> {
    let err = |l: usize, c: usize, m: String| ParseError { line: l, col: c, message: m };
    if e.objects.is_empty() {
        return Err(err(line, col, "explicit groupoid has no objects".into()));
    }
    let n = e.arrows.len();
    let mut comp = vec![None; n * n];
    for &(a, b, ab, l, c) in &e.compose {
        if e.arrows[a].1 != e.arrows[b].2 {
            return Err(err(l, c, format!("'{}' and '{}' are not composable", e.arrows[a].0, e.arrows[b].0)));
        }
        if comp[a * n + b].replace(ab).is_some_and(|old| old != ab) {
            return Err(err(l, c, format!("conflicting composite for '{}' '{}'", e.arrows[a].0, e.arrows[b].0)));
        }
    }
    let mut unit = Vec::new();
    for (x, name) in e.objects.iter().enumerate() {
        let u = (0..n).find(|&a| e.arrows[a].1 == x && e.arrows[a].2 == x && comp[a * n + a] == Some(a));
        match u {
            Some(u) => unit.push(u),
            None => return Err(err(line, col, format!("object '{name}' has no unit (an arrow with u u = u)"))),
        }
    }
    FiniteGroupoid::from_tables(GroupoidTables {
        n_objects: e.objects.len(),
        src: e.arrows.iter().map(|a| a.1).collect(),
        tgt: e.arrows.iter().map(|a| a.2).collect(),
        unit,
        comp,
        inv: None,
        object_names: Some(e.objects.clone()),
        arrow_names: Some(e.arrows.iter().map(|a| a.0.clone()).collect()),
    })
    .map_err(|x| err(line, col, x.to_string()))
}

fn build_module(g: &FiniteGroupoid, m: ExplicitModule, line: usize, col: usize) -> Result<GModule, ParseError> {
    let mut fibers: Vec<Option<FinAbGroup>> = vec![None; g.n_objects()];
    for (name, b, l, c) in m.fibers {
        let x = resolve_object(g, &name).ok_or_else(|| ParseError { line: l, col: c, message: format!("unknown object '{name}'") })?;
        fibers[x] = Some(b);
    }
    let fibers: Vec<FinAbGroup> = fibers
        .into_iter()
        .enumerate()
        .map(|(x, f)| {
            f.ok_or_else(|| ParseError { line, col, message: format!("no fiber for object '{}'", g.object_name(x)) })
        })
        .collect::<Result<_, _>>()?;
    let mut actions: Vec<Option<AbHom>> = vec![None; g.n_arrows()];
    let names: HashMap<&str, usize> = g.arrows().map(|a| (g.arrow_name(a), a)).collect();
    for (name, rows, l, c) in m.actions {
        let err = |msg: String| ParseError { line: l, col: c, message: msg };
        let a = names
            .get(name.as_str())
            .copied()
            .or_else(|| name.parse::<usize>().ok().filter(|&a| a < g.n_arrows()))
            .ok_or_else(|| err(format!("unknown arrow '{name}'")))?;
        let (s, t) = (&fibers[g.source(a)], &fibers[g.range(a)]);
        if rows.len() != t.rank() || rows.iter().any(|r| r.len() != s.rank()) {
            return Err(err(format!("action of '{name}' must be a {}x{} matrix", t.rank(), s.rank())));
        }
        let matrix = if rows.is_empty() { IntegerMatrix::zeros(0, s.rank()) } else { IntegerMatrix::from_rows(&rows) };
        actions[a] = Some(AbHom::new(s.clone(), t.clone(), matrix).map_err(|e| err(e.to_string()))?);
    }
    let actions: Vec<AbHom> = actions
        .into_iter()
        .enumerate()
        .map(|(a, h)| match h {
            Some(h) => Ok(h),
            None if fibers[g.source(a)] == fibers[g.range(a)] => Ok(AbHom::identity(fibers[g.source(a)].clone())),
            None => Err(ParseError { line, col, message: format!("no action for arrow '{}'", g.arrow_name(a)) }),
        })
        .collect::<Result<_, _>>()?;
    GModule::new(g.clone(), fibers, actions).map_err(|e| ParseError { line, col, message: e.to_string() })
}

fn parse_task_body(c: &mut Cursor, name: &str, name_col: usize, g: &FiniteGroupoid) -> Result<Task, ParseError> {
    Ok(match name {
        "validate" => Task::Validate,
        "ext" => Task::Ext,
        "baer" => Task::Baer,
        "strict-trivial" => Task::StrictTrivial,
        "cohomology" => {
            let from: usize = c.integer_range_start()?;
            let to = if c.eat_str("..") { c.integer()? } else { from };
            if to < from {
                return c.err("empty degree range");
            }
            Task::Cohomology { from, to }
        }
        "morita" => {
            let spec = match c.peek() {
                Some('{') => CoverSpec::Sets(parse_sets(c, g)?),
                _ => {
                    let col = c.here();
                    match c.word()?.as_str() {
                        "trivial" => CoverSpec::Trivial,
                        "partition" => CoverSpec::Partition,
                        w => return Err(ParseError { line: c.line, col, message: format!("unknown cover '{w}'") }),
                    }
                }
            };
            Task::Morita(spec)
        }
        "cech" => {
            let col = c.here();
            let cover = match c.word()?.as_str() {
                "maximal" => CechCoverSpec::Maximal,
                "single" => CechCoverSpec::Single,
                "product" => CechCoverSpec::Product(parse_sets(c, g)?),
                w => return Err(ParseError { line: c.line, col, message: format!("unknown cover '{w}'") }),
            };
            Task::Cech { cover, top: c.integer()? }
        }
        "homotopy-check" => {
            let seed = c.integer()?;
            let count = c.integer()?;
            Task::HomotopyCheck { seed, count }
        }
        other => {
            return Err(ParseError {
                line: c.line,
                col: name_col,
                message: format!("unknown task '{other}'"),
            })
        }
    })
}

/// One task statement such as `morita {0} {0}`, resolved against `g`.
pub fn parse_task(text: &str, g: &FiniteGroupoid) -> Result<Task, ParseError> {
    let mut c = Cursor::new(text, 1, 1);
    let col = c.here();
    let name = c.word()?;
    let t = parse_task_body(&mut c, &name, col, g)?;
    c.finish()?;
    Ok(t)
}

impl Cursor {
    /// An integer directly followed by an optional `..`.
    fn integer_range_start(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let col = self.col();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.1.is_ascii_digit()) {
            self.pos += 1;
        }
        let w: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        w.parse().map_err(|_| ParseError {
            line: self.line,
            col,
            message: "expected a degree".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use groupoid_cohomology::groupoid::find_isomorphism;

    #[test]
    fn builder_document() {
        let d = parse("groupoid: cyclic(2); module: constant Z/2; task: cohomology 0..2").unwrap();
        assert_eq!(d.groupoid.n_arrows(), 2);
        assert_eq!(d.tasks[0].value, Task::Cohomology { from: 0, to: 2 });
    }

    #[test]
    fn explicit_pair_groupoid() {
        let src = "\
groupoid: explicit
object a
object b
arrow 1a : a -> a
arrow 1b : b -> b
arrow f : a -> b
arrow f' : b -> a
compose 1a 1a = 1a
compose 1b 1b = 1b
compose 1b f = f
compose f 1a = f
compose 1a f' = f'
compose f' 1b = f'
compose f f' = 1b
compose f' f = 1a
module: constant Z
";
        let d = parse(src).unwrap();
        assert!(d.groupoid.validate().passed());
        assert!(find_isomorphism(&d.groupoid, &pair_groupoid(2)).is_some());
    }

    #[test]
    fn dangling_object_is_located() {
        let src = "groupoid: explicit\nobject a\narrow g : a -> zz\nmodule: constant Z\n";
        let e = parse(src).unwrap_err();
        assert_eq!((e.line, e.col), (3, 16));
        assert!(e.message.contains("zz"));
    }

    #[test]
    fn unknown_field_and_task() {
        let e = parse("groupoid: cyclic(2)\nmodule: constant Z\ncolour: red\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 1));
        let e = parse("groupoid: cyclic(2)\nmodule: constant Z\ntask: frobnicate\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("frobnicate"));
        let e = parse("groupoid: cyclic(2)\nmodule: constant Z/2\ntask: morita {0} {q}\n").unwrap_err();
        assert_eq!((e.line, e.col), (3, 19));
    }

    #[test]
    fn builders_and_tasks() {
        let src = "\
format 1
groupoid: cover(action(4, [1 0 3 2]), {z0 z1} {z1 z2 z3})
module: constant Z/2 x Z
task: validate; task: morita partition
task: cech product {0} {1 2} 2
task: homotopy-check 7 3
";
        let d = parse(src).unwrap();
        assert!(d.groupoid.validate().passed());
        assert_eq!(d.module.fiber(0).orders(), &[2, 0]);
        assert_eq!(d.tasks.len(), 4);
        assert_eq!(d.tasks[3].value, Task::HomotopyCheck { seed: 7, count: 3 });
    }

    #[test]
    fn explicit_module() {
        let src = "groupoid: cyclic(2)\nmodule: explicit\nfiber * Z/3\naction g [[2]]\n";
        let d = parse(src).unwrap();
        assert_eq!(d.module.act(1, &[1]), vec![2]);
        let e = parse("groupoid: cyclic(2)\nmodule: explicit\nfiber * Z/3\naction g [[2 1]]\n").unwrap_err();
        assert_eq!(e.line, 4);
    }
}
