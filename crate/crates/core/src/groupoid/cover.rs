use std::collections::HashMap;

use super::{FiniteGroupoid, GroupoidError, GroupoidMorphism, GroupoidTables};

/// Indexed family of object subsets `(U_i)` of a groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectCover {
    sets: Vec<Vec<usize>>,
}

impl ObjectCover {
    pub fn new(mut sets: Vec<Vec<usize>>) -> Self {
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
        }
        ObjectCover { sets }
    }

    /// The single set of all objects.
    pub fn trivial(g: &FiniteGroupoid) -> Self {
        ObjectCover::new(vec![g.objects().collect()])
    }

    /// One singleton per object.
    pub fn partition(g: &FiniteGroupoid) -> Self {
        ObjectCover::new(g.objects().map(|x| vec![x]).collect())
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, i: usize, x: usize) -> bool {
        self.sets[i].binary_search(&x).is_ok()
    }

    pub fn check_covers(&self, g: &FiniteGroupoid) -> Result<(), GroupoidError> {
        for s in &self.sets {
            if let Some(&x) = s.iter().find(|&&x| x >= g.n_objects()) {
                return Err(GroupoidError::Structure(format!("cover mentions missing object {x}")));
            }
        }
        match g.objects().find(|&x| !self.sets.iter().any(|s| s.contains(&x))) {
            Some(x) => Err(GroupoidError::NotACover(x)),
            None => Ok(()),
        }
    }
}

/// `G[U]` with its canonical morphism to `G`.
#[derive(Clone, Debug)]
pub struct CoverGroupoid {
    pub groupoid: FiniteGroupoid,
    pub canon: GroupoidMorphism,
    /// `(i, x)` for each object.
    pub objects: Vec<(usize, usize)>,
    /// `(i, g, j)` for each arrow.
    pub arrows: Vec<(usize, usize, usize)>,
}

/// Objects `(i, x)` with `x ∈ U_i`; arrows `(i, g, j)` with `r(g) ∈ U_i`,
/// `s(g) ∈ U_j`; product `(i, g, j)(j, h, k) = (i, gh, k)`.
pub fn cover_groupoid(g: &FiniteGroupoid, u: &ObjectCover) -> Result<CoverGroupoid, GroupoidError> {
    u.check_covers(g)?;
    let objects: Vec<(usize, usize)> = (0..u.len())
        .flat_map(|i| u.sets()[i].iter().map(move |&x| (i, x)))
        .collect();
    let obj_index: HashMap<(usize, usize), usize> =
        objects.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let mut arrows = Vec::new();
    for i in 0..u.len() {
        for a in g.arrows() {
            if !u.contains(i, g.range(a)) {
                continue;
            }
            for j in 0..u.len() {
                if u.contains(j, g.source(a)) {
                    arrows.push((i, a, j));
                }
            }
        }
    }
    let arr_index: HashMap<(usize, usize, usize), usize> =
        arrows.iter().enumerate().map(|(k, &t)| (t, k)).collect();
    let n = arrows.len();
    let mut comp = vec![None; n * n];
    for (p, &(i, a, j)) in arrows.iter().enumerate() {
        for (q, &(j2, b, k)) in arrows.iter().enumerate() {
            if j == j2 && g.source(a) == g.range(b) {
                comp[p * n + q] = Some(arr_index[&(i, g.compose(a, b), k)]);
            }
        }
    }
    let tables = GroupoidTables {
        n_objects: objects.len(),
        src: arrows.iter().map(|&(_, a, j)| obj_index[&(j, g.source(a))]).collect(),
        tgt: arrows.iter().map(|&(i, a, _)| obj_index[&(i, g.range(a))]).collect(),
        unit: objects.iter().map(|&(i, x)| arr_index[&(i, g.unit(x), i)]).collect(),
        comp,
        inv: Some(arrows.iter().map(|&(i, a, j)| arr_index[&(j, g.inverse(a), i)]).collect()),
        object_names: Some(
            objects
                .iter()
                .map(|&(i, x)| format!("({i},{})", g.object_name(x)))
                .collect(),
        ),
        arrow_names: Some(
            arrows
                .iter()
                .map(|&(i, a, j)| format!("({i},{},{j})", g.arrow_name(a)))
                .collect(),
        ),
    };
    let groupoid = FiniteGroupoid::from_tables(tables)?;
    let canon = GroupoidMorphism {
        object_map: objects.iter().map(|&(_, x)| x).collect(),
        arrow_map: arrows.iter().map(|&(_, a, _)| a).collect(),
    };
    Ok(CoverGroupoid {
        groupoid,
        canon,
        objects,
        arrows,
    })
}
