use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::snf::smith_decomposition;
use super::{AbelianError, IntegerMatrix};

/// Element of a [`FinAbGroup`]: one integer per generator.
pub type Element = Vec<i64>;

/// Finitely generated abelian group `Z/d1 x ... x Z/dk`, where an order of 0
/// stands for an infinite cyclic factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FinAbGroup {
    orders: Vec<u64>,
}

impl FinAbGroup {
    pub fn new(orders: Vec<u64>) -> Self {
        FinAbGroup { orders }
    }

    pub fn trivial() -> Self {
        FinAbGroup { orders: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        FinAbGroup { orders: vec![n] }
    }

    pub fn integers() -> Self {
        FinAbGroup { orders: vec![0] }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn is_finite(&self) -> bool {
        self.orders.iter().all(|&d| d > 0)
    }

    /// Number of elements, `None` when infinite or beyond `u64`.
    pub fn cardinality(&self) -> Option<u64> {
        self.orders
            .iter()
            .try_fold(1u64, |acc, &d| if d == 0 { None } else { acc.checked_mul(d) })
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        FinAbGroup { orders }
    }

    pub fn power(&self, n: usize) -> FinAbGroup {
        FinAbGroup {
            orders: (0..n).flat_map(|_| self.orders.iter().copied()).collect(),
        }
    }

    pub fn zero(&self) -> Element {
        vec![0; self.orders.len()]
    }

    pub fn reduce_in_place(&self, x: &mut [i64]) {
        for (v, &d) in x.iter_mut().zip(&self.orders) {
            if d > 0 {
                *v = v.rem_euclid(d as i64);
            }
        }
    }

    pub fn reduce(&self, mut x: Element) -> Element {
        self.reduce_in_place(&mut x);
        x
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.orders.len()
            && x
                .iter()
                .zip(&self.orders)
                .all(|(&v, &d)| d == 0 || (0 <= v && (v as u64) < d))
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Element {
        self.reduce(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &[i64], b: &[i64]) -> Element {
        self.reduce(a.iter().zip(b).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &[i64]) -> Element {
        self.reduce(a.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, k: i64, a: &[i64]) -> Element {
        self.reduce(a.iter().map(|x| k * x).collect())
    }

    pub fn is_zero(&self, a: &[i64]) -> bool {
        self.reduce(a.to_vec()).iter().all(|&v| v == 0)
    }

    /// All elements in mixed-radix order (first generator varies slowest).
    /// Panics on infinite groups.
    pub fn elements(&self) -> Vec<Element> {
        assert!(self.is_finite(), "cannot enumerate an infinite group");
        let mut out = vec![vec![]];
        for &d in &self.orders {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for prefix in &out {
                for v in 0..d as i64 {
                    let mut e = prefix.clone();
                    e.push(v);
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }

    /// Position of a reduced element in [`Self::elements`].
    pub fn index_of(&self, x: &[i64]) -> usize {
        let x = self.reduce(x.to_vec());
        x.iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&v, &d)| acc * d as usize + v as usize)
    }

    pub fn invariant_factors(&self) -> InvariantFactors {
        let diag: Vec<BigInt> = self.orders.iter().map(|&d| BigInt::from(d)).collect();
        let n = diag.len();
        InvariantFactors::from_relations(&IntegerMatrix::diagonal(n, n, &diag), n)
    }

    /// Relation columns `d_i e_i` for the finite factors.
    pub(crate) fn relation_matrix(&self) -> IntegerMatrix {
        let cols: Vec<Vec<BigInt>> = self
            .orders
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(i, &d)| {
                let mut c = vec![BigInt::zero(); self.orders.len()];
                c[i] = BigInt::from(d);
                c
            })
            .collect();
        IntegerMatrix::from_columns(self.orders.len(), &cols)
    }

    pub(crate) fn is_zero_big(&self, x: &[BigInt]) -> bool {
        x.iter().zip(&self.orders).all(|(v, &d)| {
            if d == 0 {
                v.is_zero()
            } else {
                v.is_multiple_of(&BigInt::from(d))
            }
        })
    }

    pub(crate) fn reduce_big(&self, x: &[BigInt]) -> Element {
        x.iter()
            .zip(&self.orders)
            .map(|(v, &d)| {
                let r = if d == 0 { v.clone() } else { v.mod_floor(&BigInt::from(d)) };
                r.to_i64().expect("element coordinate exceeds i64")
            })
            .collect()
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .orders
            .iter()
            .map(|&d| match d {
                0 => "Z".to_string(),
                1 => "0".to_string(),
                d => format!("Z/{d}"),
            })
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Canonical form `Z/d1 x ... x Z/dk x Z^r` with `d1 | d2 | ...`, each `di >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvariantFactors {
    pub torsion: Vec<BigUint>,
    pub free_rank: usize,
}

impl InvariantFactors {
    pub fn trivial() -> Self {
        InvariantFactors {
            torsion: vec![],
            free_rank: 0,
        }
    }

    pub fn from_torsion(torsion: &[u64], free_rank: usize) -> Self {
        let g = FinAbGroup::new(
            torsion
                .iter()
                .copied()
                .chain(std::iter::repeat_n(0, free_rank))
                .collect(),
        );
        g.invariant_factors()
    }

    /// Cokernel of `relations` viewed as a map into `Z^generators`.
    pub fn from_relations(relations: &IntegerMatrix, generators: usize) -> Self {
        debug_assert_eq!(relations.rows(), generators);
        let d = smith_decomposition(relations);
        let torsion = d
            .diagonal()
            .into_iter()
            .filter(|x| !x.is_one())
            .map(|x| x.to_biguint().expect("diagonal is positive"))
            .collect();
        InvariantFactors {
            torsion,
            free_rank: generators - d.rank,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigUint> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Re-canonicalizes; idempotent on canonical input.
    pub fn canonical(&self) -> Self {
        let torsion: Option<Vec<u64>> = self.torsion.iter().map(|t| t.to_u64()).collect();
        match torsion {
            Some(t) => InvariantFactors::from_torsion(&t, self.free_rank),
            None => {
                let diag: Vec<BigInt> = self
                    .torsion
                    .iter()
                    .map(|t| BigInt::from(t.clone()))
                    .collect();
                let n = diag.len() + self.free_rank;
                InvariantFactors::from_relations(&IntegerMatrix::diagonal(n, diag.len(), &diag), n)
            }
        }
    }

    /// The group as a [`FinAbGroup`] (torsion factors then free factors).
    pub fn to_group(&self) -> Option<FinAbGroup> {
        let mut orders = Vec::new();
        for t in &self.torsion {
            orders.push(t.to_u64()?);
        }
        orders.extend(std::iter::repeat_n(0, self.free_rank));
        Some(FinAbGroup::new(orders))
    }

    /// Canonical list form, e.g. `[2, 4, 0]` for `Z/2 x Z/4 x Z`.
    pub fn as_list(&self) -> Vec<String> {
        self.torsion
            .iter()
            .map(|t| t.to_string())
            .chain(std::iter::repeat_n("0".to_string(), self.free_rank))
            .collect()
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" x "))
    }
}

/// Homomorphism of finitely generated abelian groups given by an integer
/// matrix of shape `target.rank() x source.rank()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbHom {
    source: FinAbGroup,
    target: FinAbGroup,
    matrix: IntegerMatrix,
    small: Option<Vec<i64>>,
}

impl AbHom {
    /// Checks shapes only; see [`AbHom::is_well_defined`] for the relation check.
    pub fn new(
        source: FinAbGroup,
        target: FinAbGroup,
        matrix: IntegerMatrix,
    ) -> Result<Self, AbelianError> {
        if matrix.rows() != target.rank() || matrix.cols() != source.rank() {
            return Err(AbelianError::Shape(format!(
                "matrix is {}x{} but target has {} generators and source {}",
                matrix.rows(),
                matrix.cols(),
                target.rank(),
                source.rank()
            )));
        }
        let small = matrix.entries().iter().map(|x| x.to_i64()).collect();
        Ok(AbHom {
            source,
            target,
            matrix,
            small,
        })
    }

    pub fn zero(source: FinAbGroup, target: FinAbGroup) -> Self {
        let m = IntegerMatrix::zeros(target.rank(), source.rank());
        AbHom::new(source, target, m).expect("zero matrix has matching shape")
    }

    pub fn identity(g: FinAbGroup) -> Self {
        let m = IntegerMatrix::identity(g.rank());
        AbHom::new(g.clone(), g, m).expect("identity has matching shape")
    }

    /// Multiplication by an integer on a group.
    pub fn scalar(g: FinAbGroup, k: i64) -> Self {
        let n = g.rank();
        let m = IntegerMatrix::diagonal(n, n, &vec![BigInt::from(k); n]);
        AbHom::new(g.clone(), g, m).expect("scalar has matching shape")
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.matrix
    }

    /// For each source generator of order `d > 0`, `d` times its image
    /// column must vanish in the target.
    pub fn is_well_defined(&self) -> bool {
        self.source.orders().iter().enumerate().all(|(j, &d)| {
            if d == 0 {
                return true;
            }
            let col: Vec<BigInt> = self
                .matrix
                .column(j)
                .into_iter()
                .map(|x| x * BigInt::from(d))
                .collect();
            self.target.is_zero_big(&col)
        })
    }

    pub fn apply(&self, x: &[i64]) -> Element {
        debug_assert_eq!(x.len(), self.source.rank());
        let rows = self.target.rank();
        let cols = self.source.rank();
        match &self.small {
            Some(m) => {
                let out: Vec<i64> = (0..rows)
                    .map(|i| {
                        let mut acc: i128 = 0;
                        for j in 0..cols {
                            acc += m[i * cols + j] as i128 * x[j] as i128;
                        }
                        let d = self.target.orders()[i];
                        if d > 0 {
                            acc = acc.rem_euclid(d as i128);
                        }
                        i64::try_from(acc).expect("image coordinate exceeds i64")
                    })
                    .collect();
                out
            }
            None => {
                let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
                let y = self.matrix.mul_vec(&xb).expect("shape checked at construction");
                self.target.reduce_big(&y)
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AbHom) -> Result<AbHom, AbelianError> {
        if other.target != self.source {
            return Err(AbelianError::Shape(format!(
                "cannot compose: {} is not {}",
                other.target, self.source
            )));
        }
        AbHom::new(
            other.source.clone(),
            self.target.clone(),
            self.matrix.mul(&other.matrix)?,
        )
    }

    /// Equality as homomorphisms: entries agree modulo the target relations.
    pub fn same_map(&self, other: &AbHom) -> bool {
        if self.source != other.source || self.target != other.target {
            return false;
        }
        (0..self.source.rank()).all(|j| {
            let diff: Vec<BigInt> = self
                .matrix
                .column(j)
                .into_iter()
                .zip(other.matrix.column(j))
                .map(|(a, b)| a - b)
                .collect();
            self.target.is_zero_big(&diff)
        })
    }

    pub fn is_zero_map(&self) -> bool {
        (0..self.source.rank()).all(|j| self.target.is_zero_big(&self.matrix.column(j)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_to_z4_well_definedness() {
        let z2 = FinAbGroup::cyclic(2);
        let z4 = FinAbGroup::cyclic(4);
        let bad = AbHom::new(z2.clone(), z4.clone(), IntegerMatrix::from_rows(&[[1]])).unwrap();
        assert!(!bad.is_well_defined());
        let good = AbHom::new(z2.clone(), z4.clone(), IntegerMatrix::from_rows(&[[2]])).unwrap();
        assert!(good.is_well_defined());
        assert!(AbHom::zero(z2, z4).is_well_defined());
    }

    #[test]
    fn shape_error() {
        let z2 = FinAbGroup::cyclic(2);
        let err = AbHom::new(z2.clone(), z2, IntegerMatrix::zeros(2, 1));
        assert!(matches!(err, Err(AbelianError::Shape(_))));
    }

    #[test]
    fn invariant_factor_canonicalization() {
        let g = FinAbGroup::new(vec![6, 4, 0]);
        let f = g.invariant_factors();
        assert_eq!(f.torsion, vec![BigUint::from(2u32), BigUint::from(12u32)]);
        assert_eq!(f.free_rank, 1);
        assert_eq!(f.canonical(), f);
        assert_eq!(FinAbGroup::trivial().invariant_factors(), InvariantFactors::trivial());
        assert_eq!(FinAbGroup::new(vec![1, 1]).invariant_factors(), InvariantFactors::trivial());
        assert_eq!(f.to_string(), "Z/2 x Z/12 x Z");
    }

    #[test]
    fn element_enumeration_round_trips() {
        let g = FinAbGroup::new(vec![2, 3]);
        let els = g.elements();
        assert_eq!(els.len(), 6);
        for (i, e) in els.iter().enumerate() {
            assert_eq!(g.index_of(e), i);
        }
    }

    #[test]
    fn negation_action_on_z3() {
        let z3 = FinAbGroup::cyclic(3);
        let neg = AbHom::scalar(z3.clone(), -1);
        assert!(neg.is_well_defined());
        assert_eq!(neg.apply(&[1]), vec![2]);
        assert!(neg.compose(&neg).unwrap().same_map(&AbHom::identity(z3)));
    }
}
