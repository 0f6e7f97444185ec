//! Dense row-vector linear algebra over a [`Field`].

use crate::gf::Field;

/// Brings `rows` into reduced row echelon form in place, dropping zero rows.
/// Returns the pivot column of each surviving row.
pub fn rref<F: Field>(f: &F, rows: &mut Vec<Vec<F::Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !f.is_zero(rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i == r {
                continue;
            }
            let factor = rows[i][c];
            if f.is_zero(factor) {
                continue;
            }
            for j in c..ncols {
                let t = f.mul(factor, rows[r][j]);
                rows[i][j] = f.sub(rows[i][j], t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank<F: Field>(f: &F, rows: &[Vec<F::Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Basis of `{x : rows · x = 0}` for vectors of length `ncols`.
pub fn null_space<F: Field>(f: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); ncols];
        v[free] = f.one();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = f.neg(row[free]);
        }
        basis.push(v);
    }
    basis
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter()
        .zip(b)
        .fold(f.zero(), |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn mat_vec<F: Field>(f: &F, m: &[Vec<F::Elem>], v: &[F::Elem]) -> Vec<F::Elem> {
    m.iter().map(|row| dot(f, row, v)).collect()
}

pub fn mat_mul<F: Field>(f: &F, a: &[Vec<F::Elem>], b: &[Vec<F::Elem>]) -> Vec<Vec<F::Elem>> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(f.zero(), |acc, (&x, brow)| f.add(acc, f.mul(x, brow[j])))
                })
                .collect()
        })
        .collect()
}

pub fn identity<F: Field>(f: &F, n: usize) -> Vec<Vec<F::Elem>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect()
}

/// Inverse of a square matrix, `None` if singular.
pub fn mat_inv<F: Field>(f: &F, m: &[Vec<F::Elem>]) -> Option<Vec<Vec<F::Elem>>> {
    let n = m.len();
    let id = identity(f, n);
    let mut aug: Vec<Vec<F::Elem>> = m
        .iter()
        .zip(&id)
        .map(|(r, i)| r.iter().chain(i).copied().collect())
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn scale<F: Field>(f: &F, s: F::Elem, v: &[F::Elem]) -> Vec<F::Elem> {
    v.iter().map(|&x| f.mul(s, x)).collect()
}

pub fn add_vec<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn sub_vec<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

/// Scales `v` so its leftmost nonzero entry is 1; `None` for the zero vector.
pub fn normalize<F: Field>(f: &F, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let lead = v.iter().copied().find(|&x| !f.is_zero(x))?;
    let inv = f.inv(lead)?;
    Some(scale(f, inv, v))
}

/// Solves `x · rows = target` (target as a combination of the rows);
/// `None` if `target` is not in the row span.
pub fn combination<F: Field>(
    f: &F,
    rows: &[Vec<F::Elem>],
    target: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let k = rows.len();
    let n = target.len();
    // Columns: one per row, plus the target; equations: one per coordinate.
    let mut sys: Vec<Vec<F::Elem>> = (0..n)
        .map(|c| {
            let mut eq: Vec<F::Elem> = rows.iter().map(|r| r[c]).collect();
            eq.push(target[c]);
            eq
        })
        .collect();
    let pivots = rref(f, &mut sys);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![f.zero(); k];
    for (row, &pc) in sys.iter().zip(&pivots) {
        x[pc] = row[k];
    }
    Some(x)
}
