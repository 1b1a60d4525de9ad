use std::collections::HashMap;

use super::space::{FiniteSimplicialSpace, PointSet};
use super::CechError;
use crate::budget::Budget;
use crate::par::{self, Strategy};

/// Nonempty subsets of `[n]` as bit masks, ordered by cardinality and then
/// lexicographically by their sorted elements.
pub fn subsets(n: usize) -> Vec<u32> {
    let mut out: Vec<u32> = (1u32..1 << (n + 1)).collect();
    out.sort_by_key(|&m| {
        let elems: Vec<u32> = (0..=n as u32).filter(|&v| m & (1 << v) != 0).collect();
        (elems.len(), elems)
    });
    out
}

/// Image of a subset of `[n-1]` under the coface `ε_k: [n-1] -> [n]`.
pub(crate) fn face_mask(mask: u32, k: usize) -> u32 {
    let low = mask & ((1 << k) - 1);
    let high = (mask >> k) << (k + 1);
    low | high
}

/// Image of a subset of `[n+1]` under the codegeneracy `η_k: [n+1] -> [n]`.
pub(crate) fn degeneracy_mask(mask: u32, k: usize) -> u32 {
    let low = mask & ((1 << (k + 1)) - 1);
    let high = (mask >> (k + 1)) << k;
    low | high
}

/// Position tables for subsets of `[n]`, shared by all σ-levels.
#[derive(Clone, Debug)]
pub(crate) struct SubsetTables {
    pub order: Vec<Vec<u32>>,
    pub position: Vec<Vec<usize>>,
}

impl SubsetTables {
    pub fn new(top: usize) -> Self {
        let order: Vec<Vec<u32>> = (0..=top).map(subsets).collect();
        let position = order
            .iter()
            .map(|o| {
                let mut p = vec![usize::MAX; o.len() + 1];
                for (i, &m) in o.iter().enumerate() {
                    p[m as usize] = i;
                }
                p
            })
            .collect();
        SubsetTables { order, position }
    }

    pub fn pos(&self, n: usize, mask: u32) -> usize {
        self.position[n][mask as usize]
    }
}

/// Per level `n`, an indexed family `(U^n_i)` of subsets covering level `n`.
///
/// A cover may also carry index degeneracies `η̃_k: I_r -> I_(r+1)` with
/// `η̃_k(U^r_i) ⊆ U^(r+1)_(η̃_k i)`; the homotopy operator needs them on
/// the finer cover.
#[derive(Clone, Debug)]
pub struct Cover {
    levels: Vec<Vec<PointSet>>,
    degeneracies: Option<Vec<Vec<Vec<usize>>>>,
}

impl Cover {
    pub fn new(space: &FiniteSimplicialSpace, levels: Vec<Vec<PointSet>>) -> Result<Self, CechError> {
        if levels.is_empty() || levels.len() > space.top() + 1 {
            return Err(CechError::InvalidCover(format!(
                "{} levels given for a space truncated at level {}",
                levels.len(),
                space.top()
            )));
        }
        for (n, sets) in levels.iter().enumerate() {
            let size = space.level_size(n);
            let mut union = PointSet::empty(size);
            for s in sets {
                if s.universe() != size {
                    return Err(CechError::InvalidCover(format!("a set at level {n} has the wrong universe")));
                }
                union.union_with(s);
            }
            if union.len() != size {
                let missing = (0..size).find(|&x| !union.contains(x)).expect("some point is missing");
                return Err(CechError::InvalidCover(format!("point {missing} of level {n} is not covered")));
            }
        }
        Ok(Cover {
            levels,
            degeneracies: None,
        })
    }

    /// One set per level, the whole level.
    pub fn single(space: &FiniteSimplicialSpace, top: usize) -> Self {
        let levels = (0..=top).map(|n| vec![PointSet::full(space.level_size(n))]).collect();
        Cover {
            levels,
            degeneracies: Some((0..top).map(|n| vec![vec![0]; n + 1]).collect()),
        }
    }

    /// Singletons at every level, indexed by the points themselves.
    pub fn maximal(space: &FiniteSimplicialSpace, top: usize) -> Self {
        let levels = (0..=top)
            .map(|n| {
                let size = space.level_size(n);
                (0..size).map(|x| PointSet::from_points(size, [x])).collect()
            })
            .collect();
        let degeneracies = (0..top)
            .map(|n| {
                (0..=n)
                    .map(|k| (0..space.level_size(n)).map(|x| space.apply_degeneracy(n, k, x)).collect())
                    .collect()
            })
            .collect();
        Cover {
            levels,
            degeneracies: Some(degeneracies),
        }
    }

    /// Attaches index degeneracies after checking `η̃_k(U_i) ⊆ U_(η̃_k i)`.
    pub fn with_degeneracies(
        mut self,
        space: &FiniteSimplicialSpace,
        degeneracies: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, CechError> {
        if degeneracies.len() + 1 < self.levels.len() {
            return Err(CechError::MissingStructure(format!(
                "index degeneracies given for {} levels, cover has {}",
                degeneracies.len(),
                self.levels.len()
            )));
        }
        for (r, per_k) in degeneracies.iter().enumerate().take(self.levels.len() - 1) {
            if per_k.len() != r + 1 {
                return Err(CechError::MissingStructure(format!("level {r} needs {} degeneracies", r + 1)));
            }
            for (k, map) in per_k.iter().enumerate() {
                if map.len() != self.levels[r].len() {
                    return Err(CechError::MissingStructure(format!("degeneracy {k} at level {r} has the wrong length")));
                }
                for (i, &j) in map.iter().enumerate() {
                    let target = self.levels[r + 1].get(j).ok_or_else(|| {
                        CechError::MissingStructure(format!("degeneracy {k} at level {r} sends {i} to missing index {j}"))
                    })?;
                    if let Some(x) = self.levels[r][i].iter().find(|&x| !target.contains(space.apply_degeneracy(r, k, x))) {
                        return Err(CechError::MissingStructure(format!(
                            "η̃_{k} moves point {x} of U^{r}_{i} outside U^{}_{j}",
                            r + 1
                        )));
                    }
                }
            }
        }
        self.degeneracies = Some(degeneracies);
        Ok(self)
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &[PointSet] {
        &self.levels[n]
    }

    pub fn index_count(&self, n: usize) -> usize {
        self.levels[n].len()
    }

    pub fn degeneracy(&self, r: usize, k: usize, i: usize) -> Option<usize> {
        self.degeneracies.as_ref().map(|d| d[r][k][i])
    }

    pub fn has_degeneracies(&self) -> bool {
        self.degeneracies.is_some()
    }

    /// Keeps levels `0..=top`.
    pub fn truncate(&self, top: usize) -> Cover {
        Cover {
            levels: self.levels[..=top].to_vec(),
            degeneracies: self.degeneracies.as_ref().map(|d| d[..top.min(d.len())].to_vec()),
        }
    }
}

/// One level of σU: the indices `λ ∈ Λ_n` with nonempty `U_λ`.
#[derive(Clone, Debug)]
pub struct SigmaLevel {
    pub lambdas: Vec<Vec<usize>>,
    pub sets: Vec<PointSet>,
    index: HashMap<Vec<usize>, usize>,
}

impl SigmaLevel {
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn position(&self, lambda: &[usize]) -> Option<usize> {
        self.index.get(lambda).copied()
    }
}

/// The semi-simplicial cover σU up to a level. Each `λ` is listed as the
/// tuple of its values on the subsets of `[n]` in [`subsets`] order.
#[derive(Clone, Debug)]
pub struct SigmaCover {
    levels: Vec<SigmaLevel>,
    tables: SubsetTables,
    /// Unpruned size `|Λ_n|` per level.
    candidates: Vec<u128>,
}

impl SigmaCover {
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &SigmaLevel {
        &self.levels[n]
    }

    pub fn candidates(&self, n: usize) -> u128 {
        self.candidates[n]
    }

    pub(crate) fn tables(&self) -> &SubsetTables {
        &self.tables
    }

    /// `(ε̃_k λ)(f) = λ(ε_k ∘ f)` for `λ ∈ Λ_n`, `n ≥ 1`.
    pub fn face(&self, n: usize, k: usize, lambda: &[usize]) -> Vec<usize> {
        face_lambda(&self.tables, n, k, lambda)
    }

    /// `U_λ` for any typed `λ ∈ Λ_n`, enumerated or not.
    pub fn set_of(space: &FiniteSimplicialSpace, cover: &Cover, n: usize, lambda: &[usize]) -> PointSet {
        let order = subsets(n);
        let mut s = PointSet::full(space.level_size(n));
        for (p, &m) in order.iter().enumerate() {
            let k = m.count_ones() as usize - 1;
            let target = &cover.level(k)[lambda[p]];
            let pre = PointSet::from_points(
                space.level_size(n),
                (0..space.level_size(n)).filter(|&x| target.contains(space.apply_injective(n, m, x))),
            );
            s.intersect_with(&pre);
        }
        s
    }
}

pub(crate) fn face_lambda(tables: &SubsetTables, n: usize, k: usize, lambda: &[usize]) -> Vec<usize> {
    tables.order[n - 1]
        .iter()
        .map(|&m| lambda[tables.pos(n, face_mask(m, k))])
        .collect()
}

/// Enumerates `Λ_n` for `n ≤ top` with `U_λ ≠ ∅`, pruning partial
/// assignments whose intersection is already empty.
pub fn sigma_cover(
    space: &FiniteSimplicialSpace,
    cover: &Cover,
    top: usize,
    budget: &Budget,
    strategy: Strategy,
) -> Result<SigmaCover, CechError> {
    if top > cover.top() {
        return Err(CechError::InvalidCover(format!(
            "σ-cover up to level {top} needs cover levels up to {top}, have {}",
            cover.top()
        )));
    }
    let tables = SubsetTables::new(top);
    let mut levels = Vec::with_capacity(top + 1);
    let mut candidates = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let order = &tables.order[n];
        let estimate = order
            .iter()
            .map(|&m| cover.index_count(m.count_ones() as usize - 1) as u128)
            .fold(1u128, |a, b| a.saturating_mul(b));
        candidates.push(estimate);
        // preimages f̃⁻¹(U^k_i) for each subset position and index
        let size = space.level_size(n);
        let pre: Vec<Vec<PointSet>> = order
            .iter()
            .map(|&m| {
                let k = m.count_ones() as usize - 1;
                cover
                    .level(k)
                    .iter()
                    .map(|u| PointSet::from_points(size, (0..size).filter(|&x| u.contains(space.apply_injective(n, m, x)))))
                    .collect()
            })
            .collect();
        let first = cover.index_count(0);
        let shards: Vec<Result<Vec<(Vec<usize>, PointSet)>, CechError>> =
            par::map_range(strategy, first, |i0| {
                let mut out = Vec::new();
                let mut lambda = vec![i0];
                let start = pre[0][i0].clone();
                if !start.is_empty() {
                    extend(&pre, &mut lambda, start, &mut out, budget.max_lambda, n, estimate)?;
                }
                Ok(out)
            });
        let mut lambdas = Vec::new();
        let mut sets = Vec::new();
        for shard in shards {
            for (l, s) in shard? {
                lambdas.push(l);
                sets.push(s);
            }
        }
        if lambdas.len() as u128 > budget.max_lambda {
            return Err(CechError::Budget {
                level: n,
                estimate,
                limit: budget.max_lambda,
            });
        }
        let index = lambdas.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        levels.push(SigmaLevel { lambdas, sets, index });
    }
    Ok(SigmaCover {
        levels,
        tables,
        candidates,
    })
}

fn extend(
    pre: &[Vec<PointSet>],
    lambda: &mut Vec<usize>,
    current: PointSet,
    out: &mut Vec<(Vec<usize>, PointSet)>,
    limit: u128,
    n: usize,
    estimate: u128,
) -> Result<(), CechError> {
    let p = lambda.len();
    if p == pre.len() {
        if out.len() as u128 >= limit {
            return Err(CechError::Budget { level: n, estimate, limit });
        }
        out.push((lambda.clone(), current));
        return Ok(());
    }
    for (i, set) in pre[p].iter().enumerate() {
        let mut next = current.clone();
        next.intersect_with(set);
        if next.is_empty() {
            continue;
        }
        lambda.push(i);
        extend(pre, lambda, next, out, limit, n, estimate)?;
        lambda.pop();
    }
    Ok(())
}

/// Index maps `θ_n: J_n -> I_n` from a finer cover `V` to a coarser `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refinement {
    maps: Vec<Vec<usize>>,
}

impl Refinement {
    /// Checks `V^n_j ⊆ U^n_(θ(j))` at every level.
    pub fn new(maps: Vec<Vec<usize>>, finer: &Cover, coarser: &Cover) -> Result<Self, CechError> {
        if maps.len() < finer.top() + 1 || finer.top() > coarser.top() {
            return Err(CechError::InvalidRefinement(format!(
                "maps for {} levels, finer cover has {}",
                maps.len(),
                finer.top() + 1
            )));
        }
        for n in 0..=finer.top() {
            if maps[n].len() != finer.index_count(n) {
                return Err(CechError::InvalidRefinement(format!("level {n} map has the wrong length")));
            }
            for (j, &i) in maps[n].iter().enumerate() {
                let Some(u) = coarser.level(n).get(i) else {
                    return Err(CechError::InvalidRefinement(format!("level {n} sends {j} to missing index {i}")));
                };
                if !finer.level(n)[j].is_subset(u) {
                    return Err(CechError::InvalidRefinement(format!(
                        "V^{n}_{j} is not contained in U^{n}_{i}"
                    )));
                }
            }
        }
        Ok(Refinement { maps })
    }

    pub fn identity(cover: &Cover) -> Self {
        Refinement {
            maps: (0..=cover.top()).map(|n| (0..cover.index_count(n)).collect()).collect(),
        }
    }

    pub fn map(&self, n: usize, j: usize) -> usize {
        self.maps[n][j]
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    /// `θ ∘ λ`, applied levelwise.
    pub fn apply(&self, tables_order: &[u32], lambda: &[usize]) -> Vec<usize> {
        tables_order
            .iter()
            .zip(lambda)
            .map(|(&m, &j)| self.maps[m.count_ones() as usize - 1][j])
            .collect()
    }

    /// `self` after `first`, for covers `W -> V -> U`.
    pub fn after(&self, first: &Refinement) -> Refinement {
        Refinement {
            maps: first
                .maps
                .iter()
                .enumerate()
                .map(|(n, m)| m.iter().map(|&j| self.maps[n][j]).collect())
                .collect(),
        }
    }
}
