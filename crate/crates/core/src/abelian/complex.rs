use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::snf::{modular_kernel, smith_decomposition, solve_integer, SmithDecomposition};
use super::{AbHom, AbelianError, Element, FinAbGroup, IntegerMatrix, InvariantFactors};

/// Cochain complex `groups[0] -> groups[1] -> ...` of presented abelian groups.
#[derive(Clone, Debug)]
pub struct AbComplex {
    groups: Vec<FinAbGroup>,
    maps: Vec<AbHom>,
}

impl AbComplex {
    /// `maps[n]` must go from `groups[n]` to `groups[n + 1]`. Composability
    /// (`d∘d = 0`) is checked separately by [`AbComplex::check_composable`].
    pub fn new(groups: Vec<FinAbGroup>, maps: Vec<AbHom>) -> Result<Self, AbelianError> {
        if maps.len() + 1 != groups.len() && !(groups.is_empty() && maps.is_empty()) {
            return Err(AbelianError::Shape(format!(
                "{} groups need {} maps, got {}",
                groups.len(),
                groups.len().saturating_sub(1),
                maps.len()
            )));
        }
        for (n, m) in maps.iter().enumerate() {
            if m.source() != &groups[n] || m.target() != &groups[n + 1] {
                return Err(AbelianError::Shape(format!(
                    "map {n} does not go from group {n} to group {}",
                    n + 1
                )));
            }
        }
        Ok(AbComplex { groups, maps })
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn groups(&self) -> &[FinAbGroup] {
        &self.groups
    }

    pub fn maps(&self) -> &[AbHom] {
        &self.maps
    }

    pub fn check_composable(&self) -> Result<(), AbelianError> {
        for n in 0..self.maps.len().saturating_sub(1) {
            let dd = self.maps[n + 1].compose(&self.maps[n])?;
            if !dd.is_zero_map() {
                return Err(AbelianError::NotAComplex(n));
            }
        }
        Ok(())
    }

    fn outgoing(&self, n: usize) -> AbHom {
        self.maps
            .get(n)
            .cloned()
            .unwrap_or_else(|| AbHom::zero(self.groups[n].clone(), FinAbGroup::trivial()))
    }

    fn incoming(&self, n: usize) -> AbHom {
        if n == 0 {
            AbHom::zero(FinAbGroup::trivial(), self.groups[0].clone())
        } else {
            self.maps[n - 1].clone()
        }
    }

    pub fn homology_at(&self, n: usize) -> Result<InvariantFactors, AbelianError> {
        Ok(self.presentation(n)?.factors)
    }

    /// Homology at degree `n` together with generators and a class map.
    pub fn presentation(&self, n: usize) -> Result<HomologyPresentation, AbelianError> {
        if n >= self.groups.len() {
            return Err(AbelianError::DegreeOutOfRange {
                degree: n,
                len: self.groups.len(),
            });
        }
        HomologyPresentation::compute(&self.incoming(n), &self.outgoing(n))
    }

    /// Some `b` in degree `n - 1` with `d b = c`, or `None` when `c` is not a
    /// boundary. In degree 0 only zero is a boundary.
    pub fn boundary_witness(&self, n: usize, c: &[i64]) -> Result<Option<Element>, AbelianError> {
        if n >= self.groups.len() {
            return Err(AbelianError::DegreeOutOfRange {
                degree: n,
                len: self.groups.len(),
            });
        }
        let incoming = self.incoming(n);
        Ok(preimage(&incoming, c))
    }
}

/// Some `x` with `h(x) = y` in the target group, if any.
pub fn preimage(h: &AbHom, y: &[i64]) -> Option<Element> {
    let target = h.target();
    let a = h.matrix().hstack(&target.relation_matrix()).ok()?;
    let b: Vec<BigInt> = y.iter().map(|&v| BigInt::from(v)).collect();
    let x = solve_integer(&a, &b)?;
    Some(h.source().reduce_big(&x[..h.source().rank()]))
}

/// `Ker(out) / Im(inc)` in canonical form with explicit generators.
#[derive(Clone, Debug)]
pub struct HomologyPresentation {
    pub factors: InvariantFactors,
    group: FinAbGroup,
    /// One representative cycle per factor: torsion factors first, then free.
    generators: Vec<Element>,
    /// Order of each generator (0 for free).
    orders: Vec<BigInt>,
    cycles_snf: SmithDecomposition,
    quotient_snf: SmithDecomposition,
    kept: Vec<usize>,
    outgoing: AbHom,
}

impl HomologyPresentation {
    fn compute(incoming: &AbHom, outgoing: &AbHom) -> Result<Self, AbelianError> {
        let group = outgoing.source().clone();
        // Cycles: x with out(x) in the target relations, plus middle relations.
        let kernel = modular_kernel(outgoing.matrix(), outgoing.target().orders());
        let cycles_snf = smith_decomposition(&kernel);
        let m = cycles_snf.rank;

        // Boundary generators in cycle coordinates.
        let mut boundary_cols: Vec<Vec<BigInt>> = Vec::new();
        let rel = group.relation_matrix();
        for src in [incoming.matrix(), &rel] {
            for j in 0..src.cols() {
                let v = src.column(j);
                let z = cycle_coordinates(&cycles_snf, &v).ok_or(AbelianError::NotAComplex(0))?;
                boundary_cols.push(z);
            }
        }
        let zmat = IntegerMatrix::from_columns(m, &boundary_cols);
        let quotient_snf = smith_decomposition(&zmat);

        let mut factors_torsion = Vec::new();
        let mut kept = Vec::new();
        let mut orders = Vec::new();
        for i in 0..m {
            if i < quotient_snf.rank {
                let t = quotient_snf.s.get(i, i).clone();
                if !t.is_one() {
                    factors_torsion.push(t.to_biguint().expect("positive diagonal"));
                    kept.push(i);
                    orders.push(t);
                }
            } else {
                kept.push(i);
                orders.push(BigInt::zero());
            }
        }
        let factors = InvariantFactors {
            torsion: factors_torsion,
            free_rank: m - quotient_snf.rank,
        };

        // generator i = K * P^{-1} e_i, with K = U_k^{-1} diag(s) (first m cols)
        let generators = kept
            .iter()
            .map(|&i| {
                let z = quotient_snf.u_inv.column(i);
                let x = cycle_vector(&cycles_snf, &z);
                group.reduce_big(&x)
            })
            .collect();

        Ok(HomologyPresentation {
            factors,
            group,
            generators,
            orders,
            cycles_snf,
            quotient_snf,
            kept,
            outgoing: outgoing.clone(),
        })
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// Order of each generator; 0 marks a free generator.
    pub fn generator_orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn is_cycle(&self, x: &[i64]) -> bool {
        self.outgoing.target().is_zero(&self.outgoing.apply(x))
    }

    /// Coordinates of the class of `x` with respect to [`Self::generators`],
    /// reduced modulo the generator orders. `None` if `x` is not a cycle.
    pub fn class_of(&self, x: &[i64]) -> Option<Vec<BigInt>> {
        if !self.is_cycle(x) {
            return None;
        }
        let v: Vec<BigInt> = x.iter().map(|&t| BigInt::from(t)).collect();
        let z = cycle_coordinates(&self.cycles_snf, &v)?;
        let y = self.quotient_snf.u.mul_vec(&z).ok()?;
        Some(
            self.kept
                .iter()
                .zip(&self.orders)
                .map(|(&i, t)| if t.is_zero() { y[i].clone() } else { y[i].mod_floor(t) })
                .collect(),
        )
    }

    /// Cycle representing the given class coordinates.
    pub fn representative(&self, coords: &[BigInt]) -> Element {
        let mut acc = vec![BigInt::zero(); self.group.rank()];
        for (c, g) in coords.iter().zip(&self.generators) {
            for (a, &gi) in acc.iter_mut().zip(g) {
                *a += c * BigInt::from(gi);
            }
        }
        self.group.reduce_big(&acc)
    }
}

/// Solve `K z = v` where `K` is the cycle lattice basis encoded by `snf`.
fn cycle_coordinates(snf: &SmithDecomposition, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let w = snf.u.mul_vec(v).ok()?;
    let mut z = Vec::with_capacity(snf.rank);
    for (i, wi) in w.iter().enumerate() {
        if i < snf.rank {
            let (q, r) = wi.div_rem(snf.s.get(i, i));
            if !r.is_zero() {
                return None;
            }
            z.push(q);
        } else if !wi.is_zero() {
            return None;
        }
    }
    Some(z)
}

fn cycle_vector(snf: &SmithDecomposition, z: &[BigInt]) -> Vec<BigInt> {
    let scaled: Vec<BigInt> = (0..snf.u.rows())
        .map(|i| {
            if i < snf.rank {
                &z[i] * snf.s.get(i, i)
            } else {
                BigInt::zero()
            }
        })
        .collect();
    snf.u_inv.mul_vec(&scaled).expect("square")
}
