use rand::Rng;

use super::complex::{lookup, refinement_map, ss_differential, SSCochain};
use super::cover::{degeneracy_mask, face_lambda, face_mask, sigma_cover, Cover, Refinement, SigmaCover, SubsetTables};
use super::space::{FiniteSimplicialSpace, PointSet};
use super::CechError;
use crate::abelian::Element;
use crate::budget::Budget;
use crate::par::Strategy;
use crate::random::random_element;

/// Cover with `V^n_(j0,...,jn) = {x : vertex i of x lies in base[j_i]}`,
/// indices encoded lexicographically. Index degeneracies repeat an entry.
///
/// On a nerve with `base` a partition of the objects this is the cover
/// pulled back along the induced morphism to a pair groupoid; on a
/// constant space it is the product cover `U_(i0) ∩ ... ∩ U_(in)`.
pub fn product_cover(space: &FiniteSimplicialSpace, base: &[PointSet], top: usize) -> Result<Cover, CechError> {
    let b = base.len();
    if b == 0 {
        return Err(CechError::InvalidCover("empty base family".into()));
    }
    let mut levels = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let size = space.level_size(n);
        let count = b.pow(n as u32 + 1);
        let mut sets = vec![PointSet::empty(size); count];
        for x in 0..size {
            let vertices: Vec<usize> = (0..=n).map(|i| space.apply_injective(n, 1 << i, x)).collect();
            let choices: Vec<Vec<usize>> = vertices
                .iter()
                .map(|&v| (0..b).filter(|&j| base[j].contains(v)).collect())
                .collect();
            for_each_tuple(&choices, &mut |t| sets[encode(t, b)].insert(x));
        }
        levels.push(sets);
    }
    let degeneracies = (0..top)
        .map(|r| {
            (0..=r)
                .map(|k| {
                    (0..b.pow(r as u32 + 1))
                        .map(|j| {
                            let mut t = decode(j, b, r + 1);
                            t.insert(k, t[k]);
                            encode(&t, b)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Cover::new(space, levels)?.with_degeneracies(space, degeneracies)
}

pub(crate) fn encode(t: &[usize], b: usize) -> usize {
    t.iter().fold(0, |acc, &v| acc * b + v)
}

pub(crate) fn decode(mut j: usize, b: usize, len: usize) -> Vec<usize> {
    let mut t = vec![0; len];
    for slot in t.iter_mut().rev() {
        *slot = j % b;
        j /= b;
    }
    t
}

fn for_each_tuple(choices: &[Vec<usize>], f: &mut dyn FnMut(&[usize])) {
    fn rec(choices: &[Vec<usize>], cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == choices.len() {
            f(cur);
            return;
        }
        for &c in &choices[cur.len()] {
            cur.push(c);
            rec(choices, cur, f);
            cur.pop();
        }
    }
    rec(choices, &mut Vec::new(), f);
}

/// Two refinements `θ0, θ1: V -> U` with the σ-covers both sides need, for
/// applying the homotopy operator in degrees up to `degree`.
#[derive(Clone, Debug)]
pub struct HomotopySetup {
    pub space: FiniteSimplicialSpace,
    pub coarse: Cover,
    pub fine: Cover,
    pub theta0: Refinement,
    pub theta1: Refinement,
    pub sigma_u: SigmaCover,
    pub sigma_v: SigmaCover,
    tables: SubsetTables,
    degree: usize,
}

/// Outcome of checking `dH + Hd = θ1* - θ0*` on one cochain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyCheck {
    pub degree: usize,
    /// Pairs `(λ, x)` compared.
    pub checked: usize,
    /// `(λ, x)` where the two sides differ.
    pub mismatches: Vec<(Vec<usize>, usize)>,
}

impl HomotopyCheck {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl HomotopySetup {
    /// Needs both covers and the space up to level `degree + 1`, and index
    /// degeneracies on the finer cover.
    pub fn new(
        space: FiniteSimplicialSpace,
        coarse: Cover,
        fine: Cover,
        theta0: Refinement,
        theta1: Refinement,
        degree: usize,
        budget: &Budget,
    ) -> Result<Self, CechError> {
        if !fine.has_degeneracies() {
            return Err(CechError::MissingStructure(
                "the finer cover carries no index degeneracies".into(),
            ));
        }
        let needed = degree + 1;
        if space.top() < needed || coarse.top() < needed || fine.top() < needed {
            return Err(CechError::MissingStructure(format!(
                "degree {degree} needs space and covers up to level {needed}"
            )));
        }
        for theta in [&theta0, &theta1] {
            Refinement::new(theta.maps().to_vec(), &fine, &coarse)?;
        }
        let sigma_u = sigma_cover(&space, &coarse, degree, budget, Strategy::default())?;
        let sigma_v = sigma_cover(&space, &fine, degree, budget, Strategy::default())?;
        Ok(HomotopySetup {
            space,
            coarse,
            fine,
            theta0,
            theta1,
            sigma_u,
            sigma_v,
            tables: SubsetTables::new(needed),
            degree,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `α_k(λ) ∈ Λ_n(I)` for `λ ∈ Λ_(n-1)(J)`.
    pub fn alpha(&self, n: usize, k: usize, lambda: &[usize]) -> Vec<usize> {
        self.tables.order[n]
            .iter()
            .map(|&m| {
                let r = m.count_ones() as usize - 1;
                let g = degeneracy_mask(m, k);
                let both = (m >> k) & 0b11 == 0b11;
                if both {
                    // f(k') = k; f' is f with k and k+1 merged
                    let k_prime = (m & ((1 << k) - 1)).count_ones() as usize;
                    let j = lambda[self.tables.pos(n - 1, g)];
                    let lifted = self.fine.degeneracy(r - 1, k_prime, j).expect("checked in new");
                    self.theta0.map(r, lifted)
                } else {
                    let j = lambda[self.tables.pos(n - 1, g)];
                    let first = m.trailing_zeros() as usize;
                    if first <= k {
                        self.theta0.map(r, j)
                    } else {
                        self.theta1.map(r, j)
                    }
                }
            })
            .collect()
    }

    /// `(Hφ)_λ = Σ_(k<n) (-1)^k η̃_k^* φ_(α_k λ)` where `eval(α, y)` gives
    /// `φ_α(y)`. Returns the degree `n - 1` cochain on σV.
    fn apply(
        &self,
        n: usize,
        eval: &dyn Fn(&[usize], usize) -> Result<Element, CechError>,
    ) -> Result<SSCochain, CechError> {
        let level = self.sigma_v.level(n - 1);
        let mut values = Vec::with_capacity(level.len());
        for (lambda, set) in level.lambdas.iter().zip(&level.sets) {
            let alphas: Vec<Vec<usize>> = (0..n).map(|k| self.alpha(n, k, lambda)).collect();
            let mut row = Vec::with_capacity(set.len());
            for x in set.iter() {
                let fiber = self.space.fiber(n - 1, x);
                let mut acc = fiber.zero();
                for (k, alpha) in alphas.iter().enumerate() {
                    let y = self.space.apply_degeneracy(n - 1, k, x);
                    let v = eval(alpha, y).map_err(|_| {
                        CechError::Homotopy(format!(
                            "η̃_{k} maps point {x} of V_λ outside U_α for λ = {lambda:?}, α = {alpha:?}"
                        ))
                    })?;
                    acc = if k % 2 == 0 { fiber.add(&acc, &v) } else { fiber.sub(&acc, &v) };
                }
                row.push(acc);
            }
            values.push(row);
        }
        Ok(SSCochain { degree: n - 1, values })
    }

    /// `Hφ` for `φ` of degree `n ≥ 1` on σU; `None` in degree 0.
    pub fn homotopy(&self, phi: &SSCochain) -> Result<Option<SSCochain>, CechError> {
        if phi.degree == 0 {
            return Ok(None);
        }
        self.apply(phi.degree, &|alpha, y| Ok(lookup(&self.sigma_u, phi, alpha, y)?.clone()))
            .map(Some)
    }

    /// `(dφ)_α(y)` for `α ∈ Λ_(n+1)(I)` without enumerating level `n + 1`.
    fn lazy_differential(&self, phi: &SSCochain, alpha: &[usize], y: usize) -> Result<Element, CechError> {
        let n = phi.degree;
        let fiber = self.space.fiber(n + 1, y);
        let full = (1u32 << (n + 1)) - 1;
        let mut acc = fiber.zero();
        for k in 0..=n + 1 {
            let face = face_lambda(&self.tables, n + 1, k, alpha);
            let mask = face_mask(full, k);
            let z = self.space.apply_injective(n + 1, mask, y);
            let v = self.space.transport(n + 1, mask, y, lookup(&self.sigma_u, phi, &face, z)?);
            acc = if k % 2 == 0 { fiber.add(&acc, &v) } else { fiber.sub(&acc, &v) };
        }
        Ok(acc)
    }

    /// Compares `(dH + Hd)φ` with `θ1*φ - θ0*φ` at every `(λ, x)`.
    pub fn check(&self, phi: &SSCochain) -> Result<HomotopyCheck, CechError> {
        let n = phi.degree;
        if n > self.degree {
            return Err(CechError::Shape(format!("setup prepared for degrees up to {}", self.degree)));
        }
        let t1 = refinement_map(&self.theta1, &self.space, &self.sigma_u, &self.sigma_v, phi)?;
        let t0 = refinement_map(&self.theta0, &self.space, &self.sigma_u, &self.sigma_v, phi)?;
        let rhs = t1.sub(&self.space, &self.sigma_v, &t0);
        let hd = self.apply(n + 1, &|alpha, y| self.lazy_differential(phi, alpha, y))?;
        let lhs = match self.homotopy(phi)? {
            Some(h) => ss_differential(&self.space, &self.sigma_v, &h)?.add(&self.space, &self.sigma_v, &hd),
            None => hd,
        };
        let level = self.sigma_v.level(n);
        let mut mismatches = Vec::new();
        let mut checked = 0;
        for (l, (lambda, set)) in level.lambdas.iter().zip(&level.sets).enumerate() {
            for (r, x) in set.iter().enumerate() {
                checked += 1;
                if lhs.values[l][r] != rhs.values[l][r] {
                    mismatches.push((lambda.clone(), x));
                }
            }
        }
        Ok(HomotopyCheck {
            degree: n,
            checked,
            mismatches,
        })
    }

    /// Uniformly random cochain of degree `n` on σU.
    pub fn random_cochain<R: Rng>(&self, rng: &mut R, n: usize) -> SSCochain {
        SSCochain::from_fn(&self.space, &self.sigma_u, n, |_, x| random_element(rng, self.space.fiber(n, x)))
    }
}

/// Builds a coarser cover `U` from `fine` together with two refinements
/// `θ0, θ1: V -> U`. Each level gets between one and `max_indices`
/// indices; `U_i` is the union of the `V_j` sent to `i` by either map,
/// plus a few random extra points.
pub fn random_coarsening<R: Rng>(
    rng: &mut R,
    space: &FiniteSimplicialSpace,
    fine: &Cover,
    max_indices: usize,
) -> Result<(Cover, Refinement, Refinement), CechError> {
    let mut levels = Vec::new();
    let mut maps0 = Vec::new();
    let mut maps1 = Vec::new();
    for n in 0..=fine.top() {
        let size = space.level_size(n);
        let count = rng.gen_range(1..=max_indices.max(1));
        let m0: Vec<usize> = (0..fine.index_count(n)).map(|_| rng.gen_range(0..count)).collect();
        let m1: Vec<usize> = (0..fine.index_count(n)).map(|_| rng.gen_range(0..count)).collect();
        let mut sets = vec![PointSet::empty(size); count];
        for (j, v) in fine.level(n).iter().enumerate() {
            sets[m0[j]].union_with(v);
            sets[m1[j]].union_with(v);
        }
        for s in sets.iter_mut() {
            for x in 0..size {
                if rng.gen_bool(0.1) {
                    s.insert(x);
                }
            }
        }
        levels.push(sets);
        maps0.push(m0);
        maps1.push(m1);
    }
    let coarse = Cover::new(space, levels)?;
    let t0 = Refinement::new(maps0, fine, &coarse)?;
    let t1 = Refinement::new(maps1, fine, &coarse)?;
    Ok((coarse, t0, t1))
}

/// Which finer cover a random instance uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FineCover {
    /// Singletons at every level.
    Maximal,
    /// [`product_cover`] over a random covering family of level 0.
    Product,
}

/// A random homotopy instance on `space` in degree `degree`.
pub fn random_homotopy_setup<R: Rng>(
    rng: &mut R,
    space: FiniteSimplicialSpace,
    fine_kind: FineCover,
    degree: usize,
    max_indices: usize,
    budget: &Budget,
) -> Result<HomotopySetup, CechError> {
    let top = degree + 1;
    let fine = match fine_kind {
        FineCover::Maximal => Cover::maximal(&space, top),
        FineCover::Product => {
            let size = space.level_size(0);
            // a partition into at most `max_indices` blocks; with two or
            // fewer blocks some points may lie in both
            let k = rng.gen_range(1..=max_indices.clamp(1, size.max(1)));
            let mut base = vec![PointSet::empty(size); k];
            for x in 0..size {
                base[rng.gen_range(0..k)].insert(x);
                if k <= 2 && rng.gen_bool(0.25) {
                    base[rng.gen_range(0..k)].insert(x);
                }
            }
            product_cover(&space, &base, top)?
        }
    };
    let (coarse, t0, t1) = random_coarsening(rng, &space, &fine, max_indices)?;
    HomotopySetup::new(space, coarse, fine, t0, t1, degree, budget)
}
