use super::{FiniteGroupoid, GroupoidError, GroupoidTables};

fn finish(t: GroupoidTables) -> FiniteGroupoid {
    FiniteGroupoid::from_tables(t).expect("builder tables are structurally sound")
}

/// Cyclic group `Z/n` as a one-object groupoid; arrow `k` is `g^k`.
pub fn cyclic_group(n: usize) -> FiniteGroupoid {
    assert!(n >= 1, "cyclic group needs n >= 1");
    let comp = (0..n)
        .flat_map(|a| (0..n).map(move |b| Some((a + b) % n)))
        .collect();
    let names = (0..n)
        .map(|k| match k {
            0 => "e".to_string(),
            1 => "g".to_string(),
            k => format!("g^{k}"),
        })
        .collect();
    finish(GroupoidTables {
        n_objects: 1,
        src: vec![0; n],
        tgt: vec![0; n],
        unit: vec![0],
        comp,
        inv: Some((0..n).map(|a| (n - a) % n).collect()),
        object_names: Some(vec!["*".into()]),
        arrow_names: Some(names),
    })
}

/// The space with `m` points: only identity arrows.
pub fn unit_groupoid(m: usize) -> FiniteGroupoid {
    assert!(m >= 1, "unit groupoid needs m >= 1");
    let comp = (0..m)
        .flat_map(|a| (0..m).map(move |b| (a == b).then_some(a)))
        .collect();
    finish(GroupoidTables {
        n_objects: m,
        src: (0..m).collect(),
        tgt: (0..m).collect(),
        unit: (0..m).collect(),
        comp,
        inv: Some((0..m).collect()),
        object_names: Some((0..m).map(|x| format!("x{x}")).collect()),
        arrow_names: Some((0..m).map(|x| format!("1_x{x}")).collect()),
    })
}

/// Pair groupoid on `m` objects: one arrow `(r, s)` for every ordered pair,
/// stored at index `r * m + s`.
pub fn pair_groupoid(m: usize) -> FiniteGroupoid {
    assert!(m >= 1, "pair groupoid needs m >= 1");
    let n = m * m;
    let mut comp = vec![None; n * n];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                comp[(a * m + b) * n + (b * m + c)] = Some(a * m + c);
            }
        }
    }
    finish(GroupoidTables {
        n_objects: m,
        src: (0..n).map(|i| i % m).collect(),
        tgt: (0..n).map(|i| i / m).collect(),
        unit: (0..m).map(|x| x * m + x).collect(),
        comp,
        inv: Some((0..n).map(|i| (i % m) * m + i / m).collect()),
        object_names: Some((0..m).map(|x| format!("x{x}")).collect()),
        arrow_names: Some((0..n).map(|i| format!("({},{})", i / m, i % m)).collect()),
    })
}

/// Product groupoid; arrow `(g, h)` sits at `g * |H| + h`.
pub fn product(a: &FiniteGroupoid, b: &FiniteGroupoid) -> FiniteGroupoid {
    let (na, nb) = (a.n_arrows(), b.n_arrows());
    let n = na * nb;
    let ob = b.n_objects();
    let mut comp = vec![None; n * n];
    for g1 in a.arrows() {
        for h1 in b.arrows() {
            for g2 in a.arrows() {
                for h2 in b.arrows() {
                    if let (Some(g), Some(h)) = (a.try_compose(g1, g2), b.try_compose(h1, h2)) {
                        comp[(g1 * nb + h1) * n + g2 * nb + h2] = Some(g * nb + h);
                    }
                }
            }
        }
    }
    finish(GroupoidTables {
        n_objects: a.n_objects() * ob,
        src: (0..n).map(|i| a.source(i / nb) * ob + b.source(i % nb)).collect(),
        tgt: (0..n).map(|i| a.range(i / nb) * ob + b.range(i % nb)).collect(),
        unit: (0..a.n_objects() * ob)
            .map(|x| a.unit(x / ob) * nb + b.unit(x % ob))
            .collect(),
        comp,
        inv: Some((0..n).map(|i| a.inverse(i / nb) * nb + b.inverse(i % nb)).collect()),
        object_names: Some(
            (0..a.n_objects() * ob)
                .map(|x| format!("({},{})", a.object_name(x / ob), b.object_name(x % ob)))
                .collect(),
        ),
        arrow_names: Some(
            (0..n)
                .map(|i| format!("({},{})", a.arrow_name(i / nb), b.arrow_name(i % nb)))
                .collect(),
        ),
    })
}

/// Disjoint union; objects and arrows of `b` follow those of `a`.
pub fn disjoint_union(a: &FiniteGroupoid, b: &FiniteGroupoid) -> FiniteGroupoid {
    let (na, oa) = (a.n_arrows(), a.n_objects());
    let n = na + b.n_arrows();
    let mut comp = vec![None; n * n];
    for g in a.arrows() {
        for h in a.arrows() {
            comp[g * n + h] = a.try_compose(g, h);
        }
    }
    for g in b.arrows() {
        for h in b.arrows() {
            comp[(na + g) * n + na + h] = b.try_compose(g, h).map(|k| na + k);
        }
    }
    let names = |x: &str, side: &str| format!("{side}{x}");
    finish(GroupoidTables {
        n_objects: oa + b.n_objects(),
        src: a.arrows().map(|g| a.source(g)).chain(b.arrows().map(|g| oa + b.source(g))).collect(),
        tgt: a.arrows().map(|g| a.range(g)).chain(b.arrows().map(|g| oa + b.range(g))).collect(),
        unit: a.objects().map(|x| a.unit(x)).chain(b.objects().map(|x| na + b.unit(x))).collect(),
        comp,
        inv: Some(a.arrows().map(|g| a.inverse(g)).chain(b.arrows().map(|g| na + b.inverse(g))).collect()),
        object_names: Some(
            a.object_names().iter().map(|x| names(x, "L."))
                .chain(b.object_names().iter().map(|x| names(x, "R.")))
                .collect(),
        ),
        arrow_names: Some(
            a.arrow_names().iter().map(|x| names(x, "L."))
                .chain(b.arrow_names().iter().map(|x| names(x, "R.")))
                .collect(),
        ),
    })
}

/// A finite set with an anchor map to the objects of `G` and a left action
/// `g·z`, defined when `s(g) = p(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    anchor: Vec<usize>,
    /// `act[g][z]`.
    act: Vec<Vec<Option<usize>>>,
}

impl GSet {
    /// Validates `p(gz) = r(g)`, `(gh)z = g(hz)` and `p(z)z = z`.
    pub fn new(g: &FiniteGroupoid, anchor: Vec<usize>, act: Vec<Vec<Option<usize>>>) -> Result<Self, GroupoidError> {
        let bad = |m: String| Err(GroupoidError::InvalidAction(m));
        let points = anchor.len();
        if anchor.iter().any(|&x| x >= g.n_objects()) {
            return bad("anchor references a missing object".into());
        }
        if act.len() != g.n_arrows() || act.iter().any(|row| row.len() != points) {
            return bad("action table has wrong shape".into());
        }
        for h in g.arrows() {
            for z in 0..points {
                match act[h][z] {
                    Some(w) if w >= points => return bad(format!("g{h}·{z} is a missing point")),
                    Some(_) if g.source(h) != anchor[z] => {
                        return bad(format!("g{h}·{z} defined although s(g) != p(z)"))
                    }
                    None if g.source(h) == anchor[z] => {
                        return bad(format!("g{h}·{z} missing although s(g) = p(z)"))
                    }
                    Some(w) if anchor[w] != g.range(h) => {
                        return bad(format!("p(gz) = r(g) fails for g={h}, z={z}"))
                    }
                    _ => {}
                }
            }
        }
        for z in 0..points {
            if act[g.unit(anchor[z])][z] != Some(z) {
                return bad(format!("p(z)z = z fails for z={z}"));
            }
        }
        for a in g.arrows() {
            for b in g.arrows() {
                let Some(ab) = g.try_compose(a, b) else { continue };
                for z in 0..points {
                    let Some(bz) = act[b][z] else { continue };
                    if act[ab][z] != act[a][bz] {
                        return bad(format!("(gh)z = g(hz) fails for g={a}, h={b}, z={z}"));
                    }
                }
            }
        }
        Ok(GSet { anchor, act })
    }

    pub fn len(&self) -> usize {
        self.anchor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchor.is_empty()
    }

    pub fn anchor(&self, z: usize) -> usize {
        self.anchor[z]
    }

    pub fn act(&self, g: usize, z: usize) -> Option<usize> {
        self.act[g][z]
    }
}

/// Crossed product `G ⋉ Z`: arrows `(g, z)` with `s(g) = p(z)`,
/// `s(g, z) = z`, `r(g, z) = gz`, and `(g, hz)(h, z) = (gh, z)`.
pub fn action_groupoid(g: &FiniteGroupoid, z: &GSet) -> Result<FiniteGroupoid, GroupoidError> {
    let pairs: Vec<(usize, usize)> = g
        .arrows()
        .flat_map(|a| (0..z.len()).filter(move |&p| g.source(a) == z.anchor(p)).map(move |p| (a, p)))
        .collect();
    let index = |a: usize, p: usize| pairs.iter().position(|&q| q == (a, p));
    let n = pairs.len();
    let act = |a: usize, p: usize| z.act(a, p).expect("defined on composable pairs");
    let mut comp = vec![None; n * n];
    for (i, &(a, w)) in pairs.iter().enumerate() {
        for (j, &(b, p)) in pairs.iter().enumerate() {
            if act(b, p) == w {
                comp[i * n + j] = index(g.compose(a, b), p);
            }
        }
    }
    let tables = GroupoidTables {
        n_objects: z.len(),
        src: pairs.iter().map(|&(_, p)| p).collect(),
        tgt: pairs.iter().map(|&(a, p)| act(a, p)).collect(),
        unit: (0..z.len())
            .map(|p| index(g.unit(z.anchor(p)), p).expect("unit pair exists"))
            .collect(),
        comp,
        inv: Some(
            pairs
                .iter()
                .map(|&(a, p)| index(g.inverse(a), act(a, p)).expect("inverse pair exists"))
                .collect(),
        ),
        object_names: Some((0..z.len()).map(|p| format!("z{p}")).collect()),
        arrow_names: Some(
            pairs
                .iter()
                .map(|&(a, p)| format!("({},z{p})", g.arrow_name(a)))
                .collect(),
        ),
    };
    FiniteGroupoid::from_tables(tables)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let c3 = cyclic_group(3);
        assert_eq!((c3.n_objects(), c3.n_arrows()), (1, 3));
        let p2 = pair_groupoid(2);
        assert_eq!((p2.n_objects(), p2.n_arrows()), (2, 4));
        assert!(product(&c3, &p2).validate().passed());
    }

    #[test]
    fn swap_action() {
        let c2 = cyclic_group(2);
        let z = GSet::new(&c2, vec![0, 0], vec![vec![Some(0), Some(1)], vec![Some(1), Some(0)]]).unwrap();
        let a = action_groupoid(&c2, &z).unwrap();
        assert_eq!((a.n_objects(), a.n_arrows()), (2, 4));
        assert!(a.validate().passed());
    }

    #[test]
    fn invalid_actions_are_rejected() {
        let c2 = cyclic_group(2);
        // unit moves a point
        let err = GSet::new(&c2, vec![0, 0], vec![vec![Some(1), Some(0)], vec![Some(1), Some(0)]]);
        assert!(matches!(err, Err(GroupoidError::InvalidAction(m)) if m.contains("p(z)z")));
        // g acts but g·g is not the identity
        let c3 = cyclic_group(3);
        let err = GSet::new(
            &c3,
            vec![0, 0],
            vec![vec![Some(0), Some(1)], vec![Some(1), Some(0)], vec![Some(1), Some(0)]],
        );
        assert!(matches!(err, Err(GroupoidError::InvalidAction(m)) if m.contains("(gh)z")));
    }
}
