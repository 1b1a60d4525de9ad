use super::complex::{lookup, ss_differential, CechComplex, SSCochain};
use super::cover::{degeneracy_mask, face_lambda, face_mask, SubsetTables};
use super::homotopy::{decode, encode, product_cover};
use super::space::{FiniteSimplicialSpace, PointSet};
use super::CechError;
use crate::abelian::{AbComplex, AbHom, Element, FinAbGroup, IntegerMatrix, InvariantFactors};
use crate::budget::Budget;
use crate::par::Strategy;

use num_bigint::BigInt;
use std::collections::HashMap;

/// The ordinary Čech complex of a cover `(U_i)` of a finite set with
/// constant coefficients: cochains on tuples `(i0, ..., in)` with nonempty
/// `U_(i0) ∩ ... ∩ U_(in)`.
#[derive(Clone, Debug)]
pub struct OrdinaryCech {
    base: usize,
    /// Per degree, the nonempty tuples (encoded) and their sets.
    tuples: Vec<Vec<(usize, PointSet)>>,
    index: Vec<HashMap<usize, usize>>,
    coefficients: FinAbGroup,
    complex: AbComplex,
}

impl OrdinaryCech {
    pub fn new(points: usize, cover: &[PointSet], coefficients: FinAbGroup, top: usize) -> Result<Self, CechError> {
        let base = cover.len();
        let mut tuples = Vec::new();
        let mut index: Vec<HashMap<usize, usize>> = Vec::new();
        for n in 0..=top + 1 {
            let mut level = Vec::new();
            for j in 0..base.pow(n as u32 + 1) {
                let t = decode(j, base, n + 1);
                let mut s = PointSet::full(points);
                for &i in &t {
                    s.intersect_with(&cover[i]);
                }
                if !s.is_empty() {
                    level.push((j, s));
                }
            }
            index.push(level.iter().enumerate().map(|(p, (j, _))| (*j, p)).collect());
            tuples.push(level);
        }
        let r = coefficients.rank();
        let groups: Vec<FinAbGroup> = tuples
            .iter()
            .map(|level| {
                let cells: usize = level.iter().map(|(_, s)| s.len()).sum();
                coefficients.power(cells)
            })
            .collect();
        let mut maps = Vec::new();
        for n in 0..=top {
            let mut m = IntegerMatrix::zeros(groups[n + 1].rank(), groups[n].rank());
            let col_offsets = offsets(&tuples[n], r);
            let mut row0 = 0;
            for (j, s) in &tuples[n + 1] {
                let t = decode(*j, base, n + 2);
                for x in s.iter() {
                    for k in 0..=n + 1 {
                        let mut face = t.clone();
                        face.remove(k);
                        let p = index[n][&encode(&face, base)];
                        let col0 = col_offsets[p] + tuples[n][p].1.rank(x).expect("faces grow the set") * r;
                        let sign = if k % 2 == 0 { 1 } else { -1 };
                        for c in 0..r {
                            m.add_to(row0 + c, col0 + c, &BigInt::from(sign));
                        }
                    }
                    row0 += r;
                }
            }
            maps.push(AbHom::new(groups[n].clone(), groups[n + 1].clone(), m).map_err(CechError::Abelian)?);
        }
        let complex = AbComplex::new(groups, maps).map_err(CechError::Abelian)?;
        Ok(OrdinaryCech {
            base,
            tuples,
            index,
            coefficients,
            complex,
        })
    }

    pub fn cohomology(&self, n: usize) -> Result<InvariantFactors, CechError> {
        self.complex.homology_at(n).map_err(CechError::Abelian)
    }

    pub fn complex(&self) -> &AbComplex {
        &self.complex
    }

    /// Value of a flattened cochain of degree `n` at tuple `t` and point `x`.
    fn value<'a>(&self, n: usize, c: &'a [i64], t: &[usize], x: usize) -> Option<&'a [i64]> {
        let r = self.coefficients.rank();
        let p = *self.index[n].get(&encode(t, self.base))?;
        let offs = offsets(&self.tuples[n], r);
        let start = offs[p] + self.tuples[n][p].1.rank(x)? * r;
        Some(&c[start..start + r])
    }
}

fn offsets(level: &[(usize, PointSet)], r: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(level.len());
    let mut acc = 0;
    for (_, s) in level {
        out.push(acc);
        acc += s.len() * r;
    }
    out
}

/// Result of comparing the σ-complex of a product cover on a constant
/// space with the ordinary Čech complex of its level-0 cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantComparison {
    pub degrees: usize,
    /// Cochains on which `q∘ι = id` was checked, and failures.
    pub q_iota_checked: usize,
    pub q_iota_failures: usize,
    /// Cochains on which `dH + Hd = ι∘q - id` was checked, and failures.
    pub homotopy_checked: usize,
    pub homotopy_failures: usize,
    pub sigma_cohomology: Vec<InvariantFactors>,
    pub ordinary_cohomology: Vec<InvariantFactors>,
}

impl ConstantComparison {
    pub fn holds(&self) -> bool {
        self.q_iota_failures == 0
            && self.homotopy_failures == 0
            && self.sigma_cohomology == self.ordinary_cohomology
    }
}

/// The maps `q`, `ι` and the homotopy `H` between the σ-complex of the
/// product cover `U_(i0...in) = U_(i0) ∩ ... ∩ U_(in)` on the constant
/// simplicial set over `points` and the ordinary Čech complex of `cover`.
#[derive(Clone, Debug)]
pub struct ConstantSpaceMaps {
    pub space: FiniteSimplicialSpace,
    pub complex: CechComplex,
    pub ordinary: OrdinaryCech,
    tables: SubsetTables,
    base: usize,
}

impl ConstantSpaceMaps {
    pub fn new(
        points: usize,
        cover: &[PointSet],
        coefficients: FinAbGroup,
        top: usize,
        budget: &Budget,
    ) -> Result<Self, CechError> {
        let space = FiniteSimplicialSpace::constant(points, coefficients.clone(), top + 2);
        let u = product_cover(&space, cover, top + 1)?;
        let complex = CechComplex::new(&space, &u, top, budget, Strategy::default())?;
        let ordinary = OrdinaryCech::new(points, cover, coefficients, top)?;
        Ok(ConstantSpaceMaps {
            space,
            complex,
            ordinary,
            tables: SubsetTables::new(top + 2),
            base: cover.len(),
        })
    }

    /// `λ^(i)(f) = (i_f(0), ..., i_f(r))`.
    fn lambda_of_tuple(&self, n: usize, t: &[usize]) -> Vec<usize> {
        self.tables.order[n]
            .iter()
            .map(|&m| {
                let picked: Vec<usize> = (0..=n).filter(|&v| m & (1 << v) != 0).map(|v| t[v]).collect();
                encode(&picked, self.base)
            })
            .collect()
    }

    /// Singleton values `(λ_0, ..., λ_n)`.
    fn vertices(&self, n: usize, lambda: &[usize]) -> Vec<usize> {
        (0..=n).map(|k| lambda[self.tables.pos(n, 1 << k)]).collect()
    }

    /// `λ'(f) = (λ_f(0), ..., λ_f(r))`.
    pub fn prime(&self, n: usize, lambda: &[usize]) -> Vec<usize> {
        self.lambda_of_tuple(n, &self.vertices(n, lambda))
    }

    /// `(qφ)_i = φ_(λ^(i))`, flattened in the ordinary complex's layout.
    pub fn q(&self, phi: &SSCochain) -> Result<Element, CechError> {
        let n = phi.degree;
        let mut out = Vec::new();
        for (j, s) in &self.ordinary.tuples[n] {
            let lambda = self.lambda_of_tuple(n, &decode(*j, self.base, n + 1));
            for x in s.iter() {
                out.extend_from_slice(lookup(self.complex.sigma(), phi, &lambda, x)?);
            }
        }
        Ok(out)
    }

    /// `(ιc)_λ = c_(λ_0, ..., λ_n)` restricted to `U_λ`.
    pub fn iota(&self, n: usize, c: &[i64]) -> Result<SSCochain, CechError> {
        let sigma = self.complex.sigma();
        let level = sigma.level(n);
        let mut values = Vec::with_capacity(level.len());
        for (lambda, set) in level.lambdas.iter().zip(&level.sets) {
            let t = self.vertices(n, lambda);
            let row = set
                .iter()
                .map(|x| {
                    self.ordinary
                        .value(n, c, &t, x)
                        .map(<[i64]>::to_vec)
                        .ok_or_else(|| CechError::Shape(format!("tuple {t:?} has no value at {x}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            values.push(row);
        }
        Ok(SSCochain { degree: n, values })
    }

    /// `α_k(λ) ∈ Λ_n` for `λ ∈ Λ_(n-1)`: the face-compatible cases take
    /// `λ(η_k f)` when `f(0) ≤ k` and `λ'(η_k f)` otherwise; when `f`
    /// contains `k` and `k+1` the value is `η̃_k'(λ'(f'))`.
    pub fn alpha(&self, n: usize, k: usize, lambda: &[usize]) -> Vec<usize> {
        let primed = self.prime(n - 1, lambda);
        self.tables.order[n]
            .iter()
            .map(|&m| {
                let g = degeneracy_mask(m, k);
                let p = self.tables.pos(n - 1, g);
                if (m >> k) & 0b11 == 0b11 {
                    let r = m.count_ones() as usize - 1;
                    let k_prime = (m & ((1 << k) - 1)).count_ones() as usize;
                    let mut t = decode(primed[p], self.base, r);
                    t.insert(k_prime, t[k_prime]);
                    encode(&t, self.base)
                } else if (m.trailing_zeros() as usize) <= k {
                    lambda[p]
                } else {
                    primed[p]
                }
            })
            .collect()
    }

    fn apply_h(
        &self,
        n: usize,
        eval: &dyn Fn(&[usize], usize) -> Result<Element, CechError>,
    ) -> Result<SSCochain, CechError> {
        let level = self.complex.sigma().level(n - 1);
        let mut values = Vec::with_capacity(level.len());
        for (lambda, set) in level.lambdas.iter().zip(&level.sets) {
            let alphas: Vec<Vec<usize>> = (0..n).map(|k| self.alpha(n, k, lambda)).collect();
            let mut row = Vec::with_capacity(set.len());
            for x in set.iter() {
                let fiber = self.space.fiber(n - 1, x);
                let mut acc = fiber.zero();
                for (k, alpha) in alphas.iter().enumerate() {
                    let v = eval(alpha, x)?;
                    acc = if k % 2 == 0 { fiber.add(&acc, &v) } else { fiber.sub(&acc, &v) };
                }
                row.push(acc);
            }
            values.push(row);
        }
        Ok(SSCochain { degree: n - 1, values })
    }

    /// `Hφ`, or `None` in degree 0.
    pub fn homotopy(&self, phi: &SSCochain) -> Result<Option<SSCochain>, CechError> {
        if phi.degree == 0 {
            return Ok(None);
        }
        let sigma = self.complex.sigma();
        self.apply_h(phi.degree, &|a, x| Ok(lookup(sigma, phi, a, x)?.clone())).map(Some)
    }

    fn lazy_differential(&self, phi: &SSCochain, alpha: &[usize], x: usize) -> Result<Element, CechError> {
        let n = phi.degree;
        let sigma = self.complex.sigma();
        let fiber = self.space.fiber(n + 1, x);
        let full = (1u32 << (n + 1)) - 1;
        let mut acc = fiber.zero();
        for k in 0..=n + 1 {
            let face = face_lambda(&self.tables, n + 1, k, alpha);
            let v = lookup(sigma, phi, &face, x)?;
            debug_assert_eq!(self.space.apply_injective(n + 1, face_mask(full, k), x), x);
            acc = if k % 2 == 0 { fiber.add(&acc, v) } else { fiber.sub(&acc, v) };
        }
        Ok(acc)
    }

    /// Whether `(dH + Hd)φ = (ι∘q)φ - φ` holds pointwise.
    pub fn check_homotopy(&self, phi: &SSCochain) -> Result<bool, CechError> {
        let n = phi.degree;
        let sigma = self.complex.sigma();
        let iq = self.iota(n, &self.q(phi)?)?;
        let rhs = iq.sub(&self.space, sigma, phi);
        let hd = self.apply_h(n + 1, &|a, x| self.lazy_differential(phi, a, x))?;
        let lhs = match self.homotopy(phi)? {
            Some(h) => ss_differential(&self.space, sigma, &h)?.add(&self.space, sigma, &hd),
            None => hd,
        };
        Ok(lhs == rhs)
    }

    /// Whether `q(ι(c)) = c`.
    pub fn check_q_iota(&self, n: usize, c: &[i64]) -> Result<bool, CechError> {
        let back = self.q(&self.iota(n, c)?)?;
        let g = self.ordinary.complex.groups()[n].clone();
        Ok(g.reduce(back) == g.reduce(c.to_vec()))
    }
}

/// Checks `q∘ι = id` and `dH + Hd = ι∘q - id` on every basis cochain and
/// on the given extra cochains, for degrees `0..=top`, and compares the
/// cohomology of both complexes.
pub fn constant_space_comparison(
    points: usize,
    cover: &[PointSet],
    coefficients: FinAbGroup,
    top: usize,
    budget: &Budget,
) -> Result<ConstantComparison, CechError> {
    let maps = ConstantSpaceMaps::new(points, cover, coefficients, top, budget)?;
    let mut out = ConstantComparison {
        degrees: top,
        q_iota_checked: 0,
        q_iota_failures: 0,
        homotopy_checked: 0,
        homotopy_failures: 0,
        sigma_cohomology: Vec::new(),
        ordinary_cohomology: Vec::new(),
    };
    for n in 0..=top {
        let og = maps.ordinary.complex().groups()[n].clone();
        for e in 0..og.rank() {
            let mut c = og.zero();
            c[e] = 1;
            out.q_iota_checked += 1;
            if !maps.check_q_iota(n, &c)? {
                out.q_iota_failures += 1;
            }
        }
        let sg = maps.complex.cochain_group(n).clone();
        for e in 0..sg.rank() {
            let mut c = sg.zero();
            c[e] = 1;
            let phi = maps.complex.unflatten(&maps.space, n, &c);
            out.homotopy_checked += 1;
            if !maps.check_homotopy(&phi)? {
                out.homotopy_failures += 1;
            }
        }
        out.sigma_cohomology.push(maps.complex.cohomology(n)?);
        out.ordinary_cohomology.push(maps.ordinary.cohomology(n)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partition(points: usize) -> Vec<PointSet> {
        (0..points).map(|x| PointSet::from_points(points, [x])).collect()
    }

    #[test]
    fn one_set_cover_maps_are_identities() {
        let cover = vec![PointSet::full(2)];
        let maps = ConstantSpaceMaps::new(2, &cover, FinAbGroup::cyclic(2), 2, &Budget::default()).unwrap();
        for n in 0..=2 {
            assert_eq!(maps.complex.sigma().level(n).len(), 1);
            let g = maps.complex.cochain_group(n).clone();
            let c: Vec<i64> = (0..g.rank()).map(|i| (i % 2) as i64).collect();
            let phi = maps.complex.unflatten(&maps.space, n, &c);
            assert_eq!(maps.q(&phi).unwrap(), c);
            assert_eq!(maps.iota(n, &c).unwrap(), phi);
        }
    }

    #[test]
    fn two_point_partition_z2() {
        let r = constant_space_comparison(2, &partition(2), FinAbGroup::cyclic(2), 2, &Budget::default()).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.sigma_cohomology[0], InvariantFactors::from_torsion(&[2, 2], 0));
        assert!(r.sigma_cohomology[1].is_trivial() && r.sigma_cohomology[2].is_trivial());
    }

    #[test]
    fn three_point_partition_z() {
        let r = constant_space_comparison(3, &partition(3), FinAbGroup::integers(), 2, &Budget::default()).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.sigma_cohomology[0], InvariantFactors::from_torsion(&[], 3));
    }

    #[test]
    fn low_degree_formulas() {
        let cover = partition(2);
        let maps = ConstantSpaceMaps::new(2, &cover, FinAbGroup::cyclic(2), 1, &Budget::default()).unwrap();
        // n = 1: α_0(λ0) = (λ0, λ0, λ'00)
        for l0 in 0..2 {
            assert_eq!(maps.alpha(1, 0, &[l0]), vec![l0, l0, encode(&[l0, l0], 2)]);
        }
        // n = 2, λ = (λ0, λ1, λ01)
        let (l0, l1, l01) = (0, 1, encode(&[1, 0], 2));
        let p = |t: &[usize]| encode(t, 2);
        assert_eq!(
            maps.alpha(2, 0, &[l0, l1, l01]),
            vec![l0, l0, l1, p(&[l0, l0]), l01, p(&[l0, l1]), p(&[l0, l0, l1])]
        );
        assert_eq!(
            maps.alpha(2, 1, &[l0, l1, l01]),
            vec![l0, l1, l1, l01, l01, p(&[l1, l1]), p(&[l0, l1, l1])]
        );
    }
}
