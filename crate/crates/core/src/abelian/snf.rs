//! Smith normal form over the integers.
//!
//! Pivoting always picks the nonzero entry of least absolute value in the
//! remaining block. Divisibility of the diagonal is enforced as the pivot is
//! fixed, so the output satisfies `d1 | d2 | ...` without a post-pass.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntegerMatrix;

/// `u * m * v = s` with `u`, `v` unimodular and `s` diagonal.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub s: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
    /// Inverse of `u`, tracked alongside the row operations.
    pub u_inv: IntegerMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, in order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> (IntegerMatrix, IntegerMatrix, IntegerMatrix) {
    let d = smith_decomposition(m);
    (d.s, d.u, d.v)
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
    }

    /// row[i] -= q * row[j]
    fn sub_row(&mut self, i: usize, j: usize, q: &BigInt) {
        let (ri, rj) = pair_mut(&mut self.a, i, j);
        for (x, y) in ri.iter_mut().zip(rj.iter()) {
            if !y.is_zero() {
                *x -= q * y;
            }
        }
        let (ri, rj) = pair_mut(&mut self.u, i, j);
        for (x, y) in ri.iter_mut().zip(rj.iter()) {
            if !y.is_zero() {
                *x -= q * y;
            }
        }
        // inverse op on columns: col[j] += q * col[i]
        for row in self.u_inv.iter_mut() {
            if !row[i].is_zero() {
                let add = q * &row[i];
                row[j] += add;
            }
        }
    }

    /// col[i] -= q * col[j]
    fn sub_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            if !row[j].is_zero() {
                let sub = q * &row[j];
                row[i] -= sub;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -std::mem::take(x);
        }
        for row in self.u_inv.iter_mut() {
            row[i] = -std::mem::take(&mut row[i]);
        }
    }
}

fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, &T) {
    assert_ne!(i, j);
    if i < j {
        let (lo, hi) = v.split_at_mut(j);
        (&mut lo[i], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(i);
        (&mut hi[0], &lo[j])
    }
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn to_matrix(rows: Vec<Vec<BigInt>>, nrows: usize, ncols: usize) -> IntegerMatrix {
    let data = rows.into_iter().flatten().collect();
    IntegerMatrix::from_vec(nrows, ncols, data).expect("shape preserved by construction")
}

pub fn smith_decomposition(m: &IntegerMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: (0..rows).map(|r| m.row(r).to_vec()).collect(),
        u: identity_rows(rows),
        u_inv: identity_rows(rows),
        v: identity_rows(cols),
    };

    let mut t = 0;
    while t < rows.min(cols) {
        // least |entry| in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &w.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&w.a[t][t]);
                w.sub_row(i, t, &q);
                if !w.a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&w.a[t][t]);
                w.sub_col(j, t, &q);
                if !w.a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest leftover in row/column t onto the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !w.a[i][t].is_zero() && w.a[i][t].abs() < w.a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !w.a[t][j].is_zero() && w.a[t][j].abs() < w.a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            // row and column are clear; enforce divisibility of the rest
            let pivot = w.a[t][t].clone();
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !w.a[i][j].is_zero() && !w.a[i][j].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    // row[t] += row[i]
                    w.sub_row(t, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }

    SmithDecomposition {
        s: to_matrix(w.a, rows, cols),
        u: to_matrix(w.u, rows, rows),
        u_inv: to_matrix(w.u_inv, rows, rows),
        v: to_matrix(w.v, cols, cols),
        rank: t,
    }
}

/// Integer solution of `a x = b`, if one exists.
pub fn solve_integer(a: &IntegerMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len());
    let d = smith_decomposition(a);
    let c = d.u.mul_vec(b).expect("u is square of size rows");
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        if i < d.rank {
            let (q, r) = ci.div_rem(d.s.get(i, i));
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(d.v.mul_vec(&y).expect("v is square of size cols"))
}

/// Z-basis of the integer kernel `{x : a x = 0}`, as columns.
pub fn integer_kernel(a: &IntegerMatrix) -> IntegerMatrix {
    let d = smith_decomposition(a);
    let cols: Vec<Vec<BigInt>> = (d.rank..a.cols()).map(|j| d.v.column(j)).collect();
    IntegerMatrix::from_columns(a.cols(), &cols)
}

/// Z-basis, as columns, of `{x : (m x)_i ≡ 0 mod moduli[i]}`, where a zero
/// modulus asks for equality. Works row by row on a basis with `m.cols()`
/// rows, so the row count of `m` never enters a dense transform.
pub fn modular_kernel(m: &IntegerMatrix, moduli: &[u64]) -> IntegerMatrix {
    assert_eq!(m.rows(), moduli.len());
    let b = m.cols();
    // columns of the current basis
    let mut basis: Vec<Vec<BigInt>> = identity_rows(b);
    for (i, &d) in moduli.iter().enumerate() {
        if d == 1 || basis.is_empty() {
            continue;
        }
        let d = BigInt::from(d);
        let row: Vec<(usize, &BigInt)> = m.row(i).iter().enumerate().filter(|(_, r)| !r.is_zero()).collect();
        let reduce = |x: BigInt| if d.is_zero() { x } else { x.mod_floor(&d) };
        let mut w: Vec<BigInt> = basis
            .iter()
            .map(|col| reduce(row.iter().fold(BigInt::zero(), |acc, &(c, r)| acc + r * &col[c])))
            .collect();
        let mut grew = false;
        // gcd-combine the form onto a single column
        loop {
            let Some(p) = (0..w.len()).filter(|&j| !w[j].is_zero()).min_by_key(|&j| w[j].abs()) else {
                break;
            };
            let mut done = true;
            for j in 0..w.len() {
                if j == p || w[j].is_zero() {
                    continue;
                }
                let q = w[j].div_floor(&w[p]);
                let (cj, cp) = pair_mut(&mut basis, j, p);
                for (x, y) in cj.iter_mut().zip(cp.iter()) {
                    if !y.is_zero() {
                        *x -= &q * y;
                        grew |= x.bits() > 128;
                    }
                }
                w[j] = reduce(&w[j] - &q * &w[p]);
                if !w[j].is_zero() {
                    done = false;
                }
            }
            if done {
                let g = w[p].clone();
                if d.is_zero() {
                    basis.remove(p);
                } else {
                    let f = &d / g.gcd(&d);
                    for x in basis[p].iter_mut() {
                        *x *= &f;
                    }
                }
                break;
            }
        }
        if grew {
            hermite_reduce(&mut basis, b);
        }
    }
    hermite_reduce(&mut basis, b);
    IntegerMatrix::from_columns(b, &basis)
}

/// Column echelon form with reduced entries beside each pivot; spans the
/// same lattice and keeps coefficients small.
fn hermite_reduce(cols: &mut Vec<Vec<BigInt>>, rows: usize) {
    let mut t = 0;
    for r in 0..rows {
        if t == cols.len() {
            break;
        }
        loop {
            let Some(p) = (t..cols.len()).filter(|&j| !cols[j][r].is_zero()).min_by_key(|&j| cols[j][r].abs()) else {
                break;
            };
            cols.swap(t, p);
            let mut clear = true;
            for j in t + 1..cols.len() {
                if cols[j][r].is_zero() {
                    continue;
                }
                let q = cols[j][r].div_floor(&cols[t][r]);
                let (cj, ct) = pair_mut(cols, j, t);
                for (x, y) in cj.iter_mut().zip(ct.iter()) {
                    if !y.is_zero() {
                        *x -= &q * y;
                    }
                }
                if !cols[j][r].is_zero() {
                    clear = false;
                }
            }
            if clear {
                break;
            }
        }
        if t < cols.len() && !cols[t][r].is_zero() {
            if cols[t][r].is_negative() {
                for x in cols[t].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
            for j in 0..t {
                let q = cols[j][r].div_floor(&cols[t][r]);
                if !q.is_zero() {
                    let (cj, ct) = pair_mut(cols, j, t);
                    for (x, y) in cj.iter_mut().zip(ct.iter()) {
                        *x -= &q * y;
                    }
                }
            }
            t += 1;
        }
    }
    // dependent columns have been cleared to zero
    cols.truncate(t);
}
