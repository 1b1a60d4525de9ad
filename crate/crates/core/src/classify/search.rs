//! Backtracking search for arrow maps that preserve composition.

use crate::groupoid::FiniteGroupoid;

/// Composable triples `(g, h, gh)` of `from`.
pub(crate) fn triples(from: &FiniteGroupoid) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for g in from.arrows() {
        for h in from.arrows() {
            if let Some(gh) = from.try_compose(g, h) {
                out.push((g, h, gh));
            }
        }
    }
    out
}

/// Forces `F(gh) = F(g)F(h)` until nothing changes; false on a conflict.
fn close(
    to: &FiniteGroupoid,
    triples: &[(usize, usize, usize)],
    map: &mut [Option<usize>],
    allowed: &dyn Fn(usize, usize) -> bool,
) -> bool {
    loop {
        let mut changed = false;
        for &(g, h, gh) in triples {
            let (Some(fg), Some(fh)) = (map[g], map[h]) else { continue };
            let Some(p) = to.try_compose(fg, fh) else { return false };
            match map[gh] {
                None => {
                    if !allowed(gh, p) {
                        return false;
                    }
                    map[gh] = Some(p);
                    changed = true;
                }
                Some(v) if v != p => return false,
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

/// Extends a partial arrow map to one preserving all composites, choosing
/// values for unassigned arrows from `candidates` in order. The first
/// solution in that order is returned.
pub(crate) fn extend_morphism(
    from: &FiniteGroupoid,
    to: &FiniteGroupoid,
    init: Vec<Option<usize>>,
    candidates: &dyn Fn(usize) -> Vec<usize>,
) -> Option<Vec<usize>> {
    let ts = triples(from);
    let allowed = |g: usize, v: usize| candidates(g).contains(&v);
    let mut map = init;
    if !close(to, &ts, &mut map, &allowed) {
        return None;
    }
    rec(to, &ts, map, candidates, &allowed)
}

fn rec(
    to: &FiniteGroupoid,
    ts: &[(usize, usize, usize)],
    map: Vec<Option<usize>>,
    candidates: &dyn Fn(usize) -> Vec<usize>,
    allowed: &dyn Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    let Some(g) = map.iter().position(Option::is_none) else {
        return Some(map.into_iter().map(|v| v.expect("all assigned")).collect());
    };
    for v in candidates(g) {
        let mut next = map.clone();
        next[g] = Some(v);
        if close(to, ts, &mut next, allowed) {
            if let Some(found) = rec(to, ts, next, candidates, allowed) {
                return Some(found);
            }
        }
    }
    None
}
