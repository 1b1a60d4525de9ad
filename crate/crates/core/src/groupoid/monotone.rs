use std::fmt;

use super::GroupoidError;

/// Nondecreasing map `[k] -> [n]`, where `[m] = {0, ..., m}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotoneMap {
    values: Vec<usize>,
    codomain: usize,
}

impl MonotoneMap {
    pub fn new(values: Vec<usize>, codomain: usize) -> Result<Self, GroupoidError> {
        if values.is_empty() {
            return Err(GroupoidError::Structure("monotone map needs a nonempty domain".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) || values.iter().any(|&v| v > codomain) {
            return Err(GroupoidError::Structure(format!(
                "{values:?} is not a monotone map into [{codomain}]"
            )));
        }
        Ok(MonotoneMap { values, codomain })
    }

    pub fn identity(n: usize) -> Self {
        MonotoneMap {
            values: (0..=n).collect(),
            codomain: n,
        }
    }

    /// Coface `ε_i: [n-1] -> [n]` skipping `i`.
    pub fn face(n: usize, i: usize) -> Self {
        assert!(n >= 1 && i <= n, "face index {i} out of range for [{n}]");
        MonotoneMap {
            values: (0..=n).filter(|&v| v != i).collect(),
            codomain: n,
        }
    }

    /// Codegeneracy `η_i: [n+1] -> [n]` hitting `i` twice.
    pub fn degeneracy(n: usize, i: usize) -> Self {
        assert!(i <= n, "degeneracy index {i} out of range for [{n}]");
        MonotoneMap {
            values: (0..=n + 1).map(|v| if v <= i { v } else { v - 1 }).collect(),
            codomain: n,
        }
    }

    /// Constant map `[k] -> [n]` with value `v`.
    pub fn constant(k: usize, n: usize, v: usize) -> Self {
        assert!(v <= n);
        MonotoneMap {
            values: vec![v; k + 1],
            codomain: n,
        }
    }

    pub fn domain(&self) -> usize {
        self.values.len() - 1
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.values[0] == 0
            && *self.values.last().unwrap() == self.codomain
            && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &MonotoneMap) -> MonotoneMap {
        assert_eq!(first.codomain, self.domain(), "maps are not composable");
        MonotoneMap {
            values: first.values.iter().map(|&v| self.values[v]).collect(),
            codomain: self.codomain,
        }
    }

    /// `self = mono ∘ epi` with `epi` surjective and `mono` injective.
    pub fn epi_mono(&self) -> (MonotoneMap, MonotoneMap) {
        let mut image: Vec<usize> = self.values.clone();
        image.dedup();
        let epi_values = self
            .values
            .iter()
            .map(|v| image.iter().position(|w| w == v).unwrap())
            .collect();
        let j = image.len() - 1;
        (
            MonotoneMap {
                values: epi_values,
                codomain: j,
            },
            MonotoneMap {
                values: image,
                codomain: self.codomain,
            },
        )
    }

    /// All monotone maps `[k] -> [n]` in lexicographic order.
    pub fn all(k: usize, n: usize) -> Vec<MonotoneMap> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k + 1);
        fn rec(k: usize, n: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<MonotoneMap>) {
            if cur.len() == k + 1 {
                out.push(MonotoneMap {
                    values: cur.clone(),
                    codomain: n,
                });
                return;
            }
            for v in lo..=n {
                cur.push(v);
                rec(k, n, v, cur, out);
                cur.pop();
            }
        }
        rec(k, n, 0, &mut cur, &mut out);
        out
    }

    /// Injective monotone maps `[k] -> [n]` in lexicographic order.
    pub fn injective(k: usize, n: usize) -> Vec<MonotoneMap> {
        Self::all(k, n).into_iter().filter(|f| f.is_injective()).collect()
    }

    /// Image as a bit set (meaningful for injective maps, which it determines).
    pub fn image_mask(&self) -> u32 {
        self.values.iter().fold(0, |m, &v| m | (1 << v))
    }

    /// The injective map whose image is `mask`, into `[n]`.
    pub fn from_mask(mask: u32, n: usize) -> MonotoneMap {
        let values: Vec<usize> = (0..=n).filter(|&v| mask & (1 << v) != 0).collect();
        assert!(!values.is_empty(), "empty subset");
        MonotoneMap { values, codomain: n }
    }
}

impl fmt::Debug for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}->[{}]", self.values, self.codomain)
    }
}
