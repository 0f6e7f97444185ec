//! Projective spaces PG(n, F) over the fields of the tower.
//!
//! Vectors are row vectors of length n+1. A subspace is stored by its reduced
//! row echelon basis, so equality and hashing of subspaces are structural.

pub mod linalg;
mod regulus;
mod spread;

pub use regulus::{extend_regulus, Regulus};
pub use spread::{is_regular_spread, regularity_triples, Regularity, REGULARITY_RANDOM_TRIPLES, REGULARITY_SEED};

use crate::error::{Error, Result};
use crate::gf::{Field, Scalar};

/// A parameter value in F ∪ {∞}.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Param<E> {
    At(E),
    Infinity,
}

impl<E: Copy> Param<E> {
    pub fn finite(self) -> Option<E> {
        match self {
            Param::At(e) => Some(e),
            Param::Infinity => None,
        }
    }
}

/// All of F ∪ {∞}, finite values in canonical order first.
pub fn projective_line<F: Field>(f: &F) -> Vec<Param<F::Elem>> {
    f.elements()
        .map(Param::At)
        .chain(std::iter::once(Param::Infinity))
        .collect()
}

/// A point of PG(n, F) with leftmost nonzero coordinate 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PgPoint<E>(Vec<E>);

impl<E: Copy> PgPoint<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, coords: &[E]) -> Result<Self> {
        linalg::normalize(f, coords)
            .map(PgPoint)
            .ok_or(Error::ZeroVector)
    }

    pub fn coords(&self) -> &[E] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<E> {
        self.0
    }
}

/// Number of points of PG(d, F) for |F| = `order`.
pub fn point_count(order: usize, dim: isize) -> usize {
    if dim < 0 {
        return 0;
    }
    (0..=dim as u32).map(|i| order.pow(i)).sum()
}

/// A projective subspace in canonical (reduced row echelon) form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Subspace<E> {
    len: usize,
    rows: Vec<Vec<E>>,
}

impl<E: Scalar> Subspace<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, len: usize, mut rows: Vec<Vec<E>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == len));
        linalg::rref(f, &mut rows);
        Subspace { len, rows }
    }

    pub fn empty(len: usize) -> Self {
        Subspace { len, rows: Vec::new() }
    }

    pub fn whole<F: Field<Elem = E>>(f: &F, len: usize) -> Self {
        Subspace {
            len,
            rows: linalg::identity(f, len),
        }
    }

    pub fn point<F: Field<Elem = E>>(f: &F, p: &PgPoint<E>) -> Self {
        Subspace::new(f, p.0.len(), vec![p.0.clone()])
    }

    /// Vector length n+1.
    pub fn len(&self) -> usize {
        self.len
    }

    /// Projective dimension of the ambient space.
    pub fn ambient(&self) -> usize {
        self.len - 1
    }

    /// Projective dimension; −1 for the empty subspace.
    pub fn dim(&self) -> isize {
        self.rows.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<E>] {
        &self.rows
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> bool {
        let mut w = v.to_vec();
        for row in &self.rows {
            let pc = row.iter().position(|&x| !f.is_zero(x)).unwrap();
            let c = w[pc];
            if !f.is_zero(c) {
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        w.iter().all(|&x| f.is_zero(x))
    }

    pub fn contains_subspace<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> bool {
        other.rows.iter().all(|r| self.contains(f, r))
    }

    pub fn span<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Subspace::new(f, self.len, rows)
    }

    pub fn span_vec<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Self {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        Subspace::new(f, self.len, rows)
    }

    /// Rows of a matrix H with `self = {x : H x = 0}`.
    pub fn parity<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        linalg::null_space(f, &self.rows, self.len)
    }

    pub fn meet<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        let mut h = self.parity(f);
        h.extend(other.parity(f));
        let m = Subspace::new(f, self.len, linalg::null_space(f, &h, self.len));
        debug_assert_eq!(
            self.dim() + other.dim(),
            self.span(f, other).dim() + m.dim(),
            "dimension formula"
        );
        m
    }

    /// True iff the two subspaces share a point.
    pub fn meets<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> bool {
        let r = self.rows.len() + other.rows.len();
        self.span(f, other).rows.len() < r
    }

    /// All points, sorted lexicographically by normalized coordinates.
    pub fn points<F: Field<Elem = E>>(&self, f: &F) -> Vec<PgPoint<E>> {
        let k = self.rows.len();
        let mut out = Vec::with_capacity(point_count(f.order(), self.dim()));
        for lead in 0..k {
            // coefficient vectors (0,..,0,1,λ_{lead+1},..,λ_{k-1})
            let free = k - lead - 1;
            let total = f.order().pow(free as u32);
            for code in 0..total {
                let mut v = self.rows[lead].clone();
                let mut c = code;
                for row in &self.rows[lead + 1..] {
                    let lam = f.elem(c % f.order());
                    c /= f.order();
                    if !f.is_zero(lam) {
                        for (x, &y) in v.iter_mut().zip(row) {
                            *x = f.add(*x, f.mul(lam, y));
                        }
                    }
                }
                // leading entry of row `lead` is its pivot 1 and all earlier
                // pivots are 0, so v is already normalized
                out.push(PgPoint(v));
            }
        }
        out.sort();
        out
    }

    /// Applies `g` entrywise, e.g. a field embedding or the Frobenius map.
    pub fn map_entries<G: Field>(&self, g: &G, h: impl Fn(E) -> G::Elem) -> Subspace<G::Elem> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| h(x)).collect())
            .collect();
        Subspace::new(g, self.len, rows)
    }

    /// The same subspace inside a space with one more (trailing, zero) coordinate.
    pub fn append_zero<F: Field<Elem = E>>(&self, f: &F) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(f.zero());
                r
            })
            .collect();
        Subspace {
            len: self.len + 1,
            rows,
        }
    }

    /// Drops the last coordinate; requires the subspace to lie in the
    /// hyperplane where it vanishes.
    pub fn drop_last<F: Field<Elem = E>>(&self, f: &F) -> Result<Self> {
        if self.rows.iter().any(|r| !f.is_zero(r[self.len - 1])) {
            return Err(Error::Dimension(
                "subspace does not lie in the hyperplane x_n = 0".into(),
            ));
        }
        let rows = self.rows.iter().map(|r| r[..self.len - 1].to_vec()).collect();
        Ok(Subspace::new(f, self.len - 1, rows))
    }
}

/// Span of a list of points and subspaces sharing one ambient space.
pub fn span_all<F: Field>(f: &F, len: usize, items: &[&Subspace<F::Elem>]) -> Result<Subspace<F::Elem>> {
    if let Some(bad) = items.iter().find(|s| s.len != len) {
        return Err(Error::Dimension(format!(
            "vector length {} in a space of length {len}",
            bad.len
        )));
    }
    let rows = items.iter().flat_map(|s| s.rows.iter().cloned()).collect();
    Ok(Subspace::new(f, len, rows))
}

/// An element of PGL(n+1, F), scaled so the first nonzero entry is 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Homography<E> {
    mat: Vec<Vec<E>>,
}

impl<E: Scalar> Homography<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, mat: Vec<Vec<E>>) -> Result<Self> {
        let n = mat.len();
        if mat.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("homography matrix is not square".into()));
        }
        if linalg::rank(f, &mat) < n {
            return Err(Error::Degenerate("singular homography matrix".into()));
        }
        let flat: Vec<E> = mat.iter().flatten().copied().collect();
        let lead = flat.iter().copied().find(|&x| !f.is_zero(x)).unwrap();
        let s = f.inv(lead).unwrap();
        let mat = mat.iter().map(|r| linalg::scale(f, s, r)).collect();
        Ok(Homography { mat })
    }

    pub fn matrix(&self) -> &[Vec<E>] {
        &self.mat
    }

    pub fn apply<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        linalg::mat_vec(f, &self.mat, v)
    }

    pub fn apply_point<F: Field<Elem = E>>(&self, f: &F, p: &PgPoint<E>) -> PgPoint<E> {
        PgPoint::new(f, &self.apply(f, p.coords())).expect("homography is invertible")
    }

    pub fn apply_subspace<F: Field<Elem = E>>(&self, f: &F, s: &Subspace<E>) -> Subspace<E> {
        let rows = s.rows().iter().map(|r| self.apply(f, r)).collect();
        Subspace::new(f, s.len(), rows)
    }

    pub fn compose<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Self {
        Homography::new(f, linalg::mat_mul(f, &self.mat, &other.mat)).unwrap()
    }

    pub fn is_identity<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.mat == linalg::identity(f, self.mat.len())
    }
}
