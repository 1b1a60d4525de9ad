use num_bigint::BigInt;

use super::cover::{face_mask, sigma_cover, Cover, Refinement, SigmaCover};
use super::space::FiniteSimplicialSpace;
use super::CechError;
use crate::abelian::{AbComplex, AbHom, Element, FinAbGroup, IntegerMatrix, InvariantFactors};
use crate::budget::Budget;
use crate::par::{self, Strategy};

/// A Čech cochain on σU: for each enumerated `λ ∈ Λ_n`, one coefficient
/// per point of `U_λ`, listed in increasing point order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSCochain {
    pub degree: usize,
    pub values: Vec<Vec<Element>>,
}

impl SSCochain {
    pub fn from_fn(
        space: &FiniteSimplicialSpace,
        sigma: &SigmaCover,
        n: usize,
        mut f: impl FnMut(usize, usize) -> Element,
    ) -> Self {
        let level = sigma.level(n);
        let values = level
            .sets
            .iter()
            .enumerate()
            .map(|(l, s)| s.iter().map(|x| space.fiber(n, x).reduce(f(l, x))).collect())
            .collect();
        SSCochain { degree: n, values }
    }

    pub fn zero(space: &FiniteSimplicialSpace, sigma: &SigmaCover, n: usize) -> Self {
        Self::from_fn(space, sigma, n, |_, x| space.fiber(n, x).zero())
    }

    /// Value of the `l`-th index at point `x`.
    pub fn get(&self, sigma: &SigmaCover, l: usize, x: usize) -> Option<&Element> {
        let r = sigma.level(self.degree).sets.get(l)?.rank(x)?;
        self.values[l].get(r)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(|v| v.iter().all(|&c| c == 0))
    }

    fn check(&self, space: &FiniteSimplicialSpace, sigma: &SigmaCover) -> Result<(), CechError> {
        if self.degree > sigma.top() {
            return Err(CechError::Shape(format!("σ-cover has no level {}", self.degree)));
        }
        let level = sigma.level(self.degree);
        if self.values.len() != level.len()
            || self.values.iter().zip(&level.sets).any(|(v, s)| v.len() != s.len())
        {
            return Err(CechError::Shape(format!(
                "degree {} cochain does not match the σ-cover level",
                self.degree
            )));
        }
        for (v, s) in self.values.iter().zip(&level.sets) {
            for (a, x) in v.iter().zip(s.iter()) {
                if !space.fiber(self.degree, x).contains(a) {
                    return Err(CechError::Shape(format!("value {a:?} at point {x} is not reduced")));
                }
            }
        }
        Ok(())
    }

    pub fn sub(&self, space: &FiniteSimplicialSpace, sigma: &SigmaCover, other: &SSCochain) -> SSCochain {
        let n = self.degree;
        let level = sigma.level(n);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .zip(&level.sets)
            .map(|((a, b), s)| {
                a.iter()
                    .zip(b)
                    .zip(s.iter())
                    .map(|((u, v), x)| space.fiber(n, x).sub(u, v))
                    .collect()
            })
            .collect();
        SSCochain { degree: n, values }
    }

    pub fn add(&self, space: &FiniteSimplicialSpace, sigma: &SigmaCover, other: &SSCochain) -> SSCochain {
        let neg = other.neg(space, sigma);
        self.sub(space, sigma, &neg)
    }

    pub fn neg(&self, space: &FiniteSimplicialSpace, sigma: &SigmaCover) -> SSCochain {
        let n = self.degree;
        let values = self
            .values
            .iter()
            .zip(&sigma.level(n).sets)
            .map(|(a, s)| a.iter().zip(s.iter()).map(|(u, x)| space.fiber(n, x).neg(u)).collect())
            .collect();
        SSCochain { degree: n, values }
    }

    /// Concatenated coordinates, matching [`CechComplex::cochain_group`].
    pub fn flatten(&self) -> Element {
        self.values.iter().flatten().flat_map(|v| v.iter().copied()).collect()
    }
}

/// Value of `c` at `(λ, x)` looked up by the index tuple `λ`.
pub(crate) fn lookup<'a>(
    sigma: &SigmaCover,
    c: &'a SSCochain,
    lambda: &[usize],
    x: usize,
) -> Result<&'a Element, CechError> {
    let l = sigma
        .level(c.degree)
        .position(lambda)
        .ok_or_else(|| CechError::Shape(format!("index {lambda:?} is not in the σ-cover")))?;
    c.get(sigma, l, x)
        .ok_or_else(|| CechError::Shape(format!("point {x} is not in U_λ for λ = {lambda:?}")))
}

/// `(dc)_λ = Σ_k (-1)^k ε̃_k^* c_(ε̃_k λ)`, pulling coefficients back along
/// the face maps of the space.
pub fn ss_differential(
    space: &FiniteSimplicialSpace,
    sigma: &SigmaCover,
    c: &SSCochain,
) -> Result<SSCochain, CechError> {
    c.check(space, sigma)?;
    let n = c.degree;
    if n + 1 > sigma.top() {
        return Err(CechError::Shape(format!("σ-cover has no level {}", n + 1)));
    }
    let full = (1u32 << (n + 1)) - 1;
    let upper = sigma.level(n + 1);
    let mut values = Vec::with_capacity(upper.len());
    for (lambda, set) in upper.lambdas.iter().zip(&upper.sets) {
        let faces: Vec<Vec<usize>> = (0..=n + 1).map(|k| sigma.face(n + 1, k, lambda)).collect();
        let mut row = Vec::with_capacity(set.len());
        for x in set.iter() {
            let fiber = space.fiber(n + 1, x);
            let mut acc = fiber.zero();
            for (k, face) in faces.iter().enumerate() {
                let mask = face_mask(full, k);
                let y = space.apply_injective(n + 1, mask, x);
                let v = space.transport(n + 1, mask, x, lookup(sigma, c, face, y)?);
                acc = if k % 2 == 0 { fiber.add(&acc, &v) } else { fiber.sub(&acc, &v) };
            }
            row.push(acc);
        }
        values.push(row);
    }
    Ok(SSCochain { degree: n + 1, values })
}

/// `(θ*φ)_λ = φ_(θ∘λ)` restricted to `V_λ`.
pub fn refinement_map(
    theta: &Refinement,
    space: &FiniteSimplicialSpace,
    sigma_u: &SigmaCover,
    sigma_v: &SigmaCover,
    phi: &SSCochain,
) -> Result<SSCochain, CechError> {
    phi.check(space, sigma_u)?;
    let n = phi.degree;
    if n > sigma_v.top() {
        return Err(CechError::Shape(format!("finer σ-cover has no level {n}")));
    }
    let order = &sigma_u.tables().order[n];
    let level = sigma_v.level(n);
    let mut values = Vec::with_capacity(level.len());
    for (lambda, set) in level.lambdas.iter().zip(&level.sets) {
        let image = theta.apply(order, lambda);
        let mut row = Vec::with_capacity(set.len());
        for x in set.iter() {
            let v = lookup(sigma_u, phi, &image, x).map_err(|_| {
                CechError::InvalidRefinement(format!("V_λ for λ = {lambda:?} is not inside U_θλ"))
            })?;
            row.push(v.clone());
        }
        values.push(row);
    }
    Ok(SSCochain { degree: n, values })
}

/// The σU cochain complex `C^0 -> ... -> C^(top+1)` as an [`AbComplex`].
#[derive(Clone, Debug)]
pub struct CechComplex {
    sigma: SigmaCover,
    groups: Vec<FinAbGroup>,
    offsets: Vec<Vec<usize>>,
    complex: AbComplex,
}

impl CechComplex {
    pub fn new(
        space: &FiniteSimplicialSpace,
        cover: &Cover,
        top: usize,
        budget: &Budget,
        strategy: Strategy,
    ) -> Result<Self, CechError> {
        let sigma = sigma_cover(space, cover, top + 1, budget, strategy)?;
        let mut groups: Vec<FinAbGroup> = Vec::new();
        let mut offsets = Vec::new();
        for n in 0..=top + 1 {
            let level = sigma.level(n);
            let mut orders = Vec::new();
            let mut offs = Vec::with_capacity(level.len());
            for s in &level.sets {
                offs.push(orders.len());
                for x in s.iter() {
                    orders.extend_from_slice(space.fiber(n, x).orders());
                }
            }
            if orders.len() as u128 > budget.max_cells {
                return Err(CechError::CellBudget {
                    degree: n,
                    needed: orders.len() as u128,
                    limit: budget.max_cells,
                });
            }
            if let Some(prev) = groups.last() {
                let entries = (prev.rank() as u128).saturating_mul(orders.len() as u128);
                if entries > budget.max_entries {
                    return Err(CechError::MatrixBudget {
                        degree: n - 1,
                        needed: entries,
                        limit: budget.max_entries,
                    });
                }
            }
            groups.push(FinAbGroup::new(orders));
            offsets.push(offs);
        }
        let maps: Vec<AbHom> = (0..=top)
            .map(|n| assemble(space, &sigma, &groups, &offsets, n, strategy))
            .collect::<Result<_, _>>()?;
        let complex = AbComplex::new(groups.clone(), maps).map_err(CechError::Abelian)?;
        Ok(CechComplex {
            sigma,
            groups,
            offsets,
            complex,
        })
    }

    pub fn sigma(&self) -> &SigmaCover {
        &self.sigma
    }

    pub fn complex(&self) -> &AbComplex {
        &self.complex
    }

    pub fn cochain_group(&self, n: usize) -> &FinAbGroup {
        &self.groups[n]
    }

    pub fn top(&self) -> usize {
        self.groups.len() - 2
    }

    pub fn cohomology(&self, n: usize) -> Result<InvariantFactors, CechError> {
        if n > self.top() {
            return Err(CechError::Shape(format!("degree {n} not assembled")));
        }
        self.complex.homology_at(n).map_err(CechError::Abelian)
    }

    pub fn unflatten(&self, space: &FiniteSimplicialSpace, n: usize, x: &[i64]) -> SSCochain {
        let level = self.sigma.level(n);
        let mut pos = 0;
        let values = level
            .sets
            .iter()
            .map(|s| {
                s.iter()
                    .map(|p| {
                        let r = space.fiber(n, p).rank();
                        let v = x[pos..pos + r].to_vec();
                        pos += r;
                        v
                    })
                    .collect()
            })
            .collect();
        SSCochain { degree: n, values }
    }

    /// Start of each `λ`'s block at degree `n`.
    pub fn offsets(&self, n: usize) -> &[usize] {
        &self.offsets[n]
    }
}

fn assemble(
    space: &FiniteSimplicialSpace,
    sigma: &SigmaCover,
    groups: &[FinAbGroup],
    offsets: &[Vec<usize>],
    n: usize,
    strategy: Strategy,
) -> Result<AbHom, CechError> {
    let upper = sigma.level(n + 1);
    let full = (1u32 << (n + 1)) - 1;
    let blocks: Vec<Result<Vec<(usize, usize, i64)>, CechError>> = par::map_range(strategy, upper.len(), |l| {
        let lambda = &upper.lambdas[l];
        let set = &upper.sets[l];
        let mut entries = Vec::new();
        let mut row0 = offsets[n + 1][l];
        for x in set.iter() {
            let rank = space.fiber(n + 1, x).rank();
            for k in 0..=n + 1 {
                let face = sigma.face(n + 1, k, lambda);
                let col_l = sigma
                    .level(n)
                    .position(&face)
                    .ok_or_else(|| CechError::Shape(format!("face {face:?} missing from the σ-cover")))?;
                let mask = face_mask(full, k);
                let y = space.apply_injective(n + 1, mask, x);
                let col_rank = sigma.level(n).sets[col_l].rank(y).expect("faces of U_λ land in U_(ε̃λ)");
                let mut col0 = offsets[n][col_l];
                for p in sigma.level(n).sets[col_l].iter().take(col_rank) {
                    col0 += space.fiber(n, p).rank();
                }
                let sign = if k % 2 == 0 { 1 } else { -1 };
                match space.transport_hom(n + 1, mask, x) {
                    Some(h) => {
                        let m = h.matrix();
                        for r in 0..m.rows() {
                            for c in 0..m.cols() {
                                let v = i64::try_from(m.get(r, c)).expect("action entries fit in i64");
                                if v != 0 {
                                    entries.push((row0 + r, col0 + c, sign * v));
                                }
                            }
                        }
                    }
                    None => {
                        for r in 0..rank {
                            entries.push((row0 + r, col0 + r, sign));
                        }
                    }
                }
            }
            row0 += rank;
        }
        Ok(entries)
    });
    let mut m = IntegerMatrix::zeros(groups[n + 1].rank(), groups[n].rank());
    for block in blocks {
        for (r, c, v) in block? {
            m.add_to(r, c, &BigInt::from(v));
        }
    }
    AbHom::new(groups[n].clone(), groups[n + 1].clone(), m).map_err(CechError::Abelian)
}

/// `H^n` of the σU complex of `cover`.
pub fn cech_cohomology_on_cover(
    space: &FiniteSimplicialSpace,
    cover: &Cover,
    n: usize,
    budget: &Budget,
) -> Result<InvariantFactors, CechError> {
    CechComplex::new(space, cover, n, budget, Strategy::default())?.cohomology(n)
}
