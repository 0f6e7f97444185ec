//! Independent oracles shared by the integration tests. They work on point
//! sets and direct field arithmetic rather than the library's subspace and
//! matrix machinery.
#![allow(dead_code)]

use std::collections::BTreeSet;

use exsplash::gf::{CubicExt, Field, FieldTower, Fq, Fq3};
use exsplash::pg::{Param, PgPoint, Subspace};
use exsplash::subplane::matrix_k;
use exsplash::Label;

pub fn tower(q: u32) -> FieldTower {
    FieldTower::for_q(q).unwrap()
}

/// x^{q^s} by repeated powering.
pub fn frob(t: &FieldTower, x: Fq3, s: u32) -> Fq3 {
    let mut y = x;
    for _ in 0..s {
        let mut acc = t.ext().one();
        for _ in 0..t.q() {
            acc = t.ext().mul(acc, y);
        }
        y = acc;
    }
    y
}

pub fn power(e: &CubicExt, x: Fq3, n: u64) -> Fq3 {
    (0..n).fold(e.one(), |acc, _| e.mul(acc, x))
}

pub fn coords6(e: &CubicExt, a: Fq3, b: Fq3) -> Vec<Fq> {
    let mut v = e.components(a).to_vec();
    v.extend(e.components(b));
    v
}

/// The point set {([kx],[x^{q^s}]) : x ≠ 0}, or {([x],[0])} for k = ∞.
pub fn family_points(t: &FieldTower, k: Label, s: u32) -> BTreeSet<PgPoint<Fq>> {
    let e = t.ext();
    e.elements()
        .filter(|&x| x != Fq3(0))
        .map(|x| {
            let v = match k {
                Param::Infinity => coords6(e, x, Fq3(0)),
                Param::At(k) => coords6(e, e.mul(k, x), frob(t, x, s)),
            };
            PgPoint::new(t.base(), &v).unwrap()
        })
        .collect()
}

pub fn point_set(f: &impl Field<Elem = Fq>, s: &Subspace<Fq>) -> BTreeSet<PgPoint<Fq>> {
    s.points(f).into_iter().collect()
}

/// {k : k^{q²+q+1} = 1}.
pub fn kernel(t: &FieldTower) -> BTreeSet<Label> {
    let e = t.ext();
    let q = t.q() as u64;
    e.elements()
        .filter(|&k| k != Fq3(0) && power(e, k, q * q + q + 1) == e.one())
        .map(Param::At)
        .collect()
}

/// The points of PG(2,q) with leftmost nonzero coordinate 1.
pub fn pg2(t: &FieldTower) -> Vec<[Fq; 3]> {
    let f = t.base();
    let mut out = Vec::new();
    for a in f.elements() {
        for b in f.elements() {
            for c in f.elements() {
                let v = [a, b, c];
                let lead = v.iter().find(|x| x.0 != 0);
                if lead == Some(&f.one()) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// K·x for every x in PG(2,q), scaled to z = 1.
pub fn subplane_points(t: &FieldTower) -> Vec<[Fq3; 3]> {
    let e = t.ext();
    let k = matrix_k(e);
    pg2(t)
        .into_iter()
        .map(|x| {
            let y: Vec<Fq3> = (0..3)
                .map(|r| (0..3).fold(Fq3(0), |acc, c| e.add(acc, e.mul(k[r][c], e.embed(x[c])))))
                .collect();
            let zi = e.inv(y[2]).expect("subplane point on ℓ∞");
            [e.mul(y[0], zi), e.mul(y[1], zi), e.one()]
        })
        .collect()
}

fn cross(e: &CubicExt, a: &[Fq3; 3], b: &[Fq3; 3]) -> [Fq3; 3] {
    let m = |x: Fq3, y: Fq3| e.mul(x, y);
    [
        e.sub(m(a[1], b[2]), m(a[2], b[1])),
        e.sub(m(a[2], b[0]), m(a[0], b[2])),
        e.sub(m(a[0], b[1]), m(a[1], b[0])),
    ]
}

/// Labels of the points where lines joining two subplane points meet ℓ∞.
pub fn splash_by_joins(t: &FieldTower) -> BTreeSet<Label> {
    let e = t.ext();
    let pts = subplane_points(t);
    let mut out = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let l = cross(e, &pts[i], &pts[j]);
            // l0 x + l1 y = 0 on z = 0
            let (x, y) = (l[1], e.neg(l[0]));
            out.insert(if y == Fq3(0) {
                Param::Infinity
            } else {
                Param::At(e.mul(x, e.inv(y).unwrap()))
            });
        }
    }
    out
}

/// Whether an affine point of PG(6,q) lies in the ε-image of the subplane.
pub fn in_subplane_image(t: &FieldTower, v: &[Fq]) -> bool {
    let e = t.ext();
    let zi = e.inv(e.embed(v[6])).unwrap();
    let a = e.mul(e.from_components([v[0], v[1], v[2]]), zi);
    let b = e.mul(e.from_components([v[3], v[4], v[5]]), zi);
    subplane_points(t).contains(&[a, b, e.one()])
}

/// C(n, 3) index triples.
pub fn triples(n: usize) -> Vec<[usize; 3]> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                v.push([i, j, k]);
            }
        }
    }
    v
}
