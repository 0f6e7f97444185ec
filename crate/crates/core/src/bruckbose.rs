//! The Bruck-Bose model of PG(2,q³) in PG(6,q).
//!
//! Objects inside the hyperplane Σ∞ (z = 0) use the six coordinates
//! ([x],[y]) of PG(5,q); affine objects use all seven ([x],[y],z).

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{CubicExt, Field, FieldTower, Fq, Fq3, TransversalFrame};
use crate::pg::{linalg, projective_line, Param, PgPoint, Regulus, Subspace};

/// A point of ℓ∞: k stands for (k,1,0) and ∞ for (1,0,0).
pub type Label = Param<Fq3>;

/// Homogeneous coordinates (x, y) of the point of ℓ∞ with label `k`.
pub fn label_vec(k: Label) -> [Fq3; 2] {
    match k {
        Param::At(k) => [k, Fq3(1)],
        Param::Infinity => [Fq3(1), Fq3(0)],
    }
}

/// Label of the point (x, y) of PG(1,q³).
pub fn label_of_vec(e: &CubicExt, v: [Fq3; 2]) -> Result<Label> {
    match (v[0], v[1]) {
        (Fq3(0), Fq3(0)) => Err(Error::ZeroVector),
        (_, Fq3(0)) => Ok(Param::Infinity),
        (x, y) => Ok(Param::At(e.mul(x, e.inv(y).unwrap()))),
    }
}

/// Six coordinates ([a],[b]).
pub fn bracket2(e: &CubicExt, a: Fq3, b: Fq3) -> Vec<Fq> {
    let mut v = e.components(a).to_vec();
    v.extend(e.components(b));
    v
}

/// The plane {([kx],[x^{q^s}]) : x ∈ GF(q³)*} of Σ∞; ∞ gives {([x],[0])}.
///
/// Shift 0 is the spread plane [S_k], shift 1 the tangent-cover plane [T_k]
/// and shift 2 the conic-cover plane [C_k].
pub fn family_plane(tower: &FieldTower, k: Label, shift: u32) -> Subspace<Fq> {
    let e = tower.ext();
    let f = tower.base();
    let rows = (0..3)
        .map(|i| {
            let x = e.tau_pow(i);
            match k {
                Param::Infinity => bracket2(e, x, Fq3(0)),
                Param::At(k) => bracket2(e, e.mul(k, x), e.frobenius_pow(x, shift)),
            }
        })
        .collect();
    Subspace::new(f, 6, rows)
}

/// Label k of the plane {([kx],[x^{q^s}])} containing a point ([a],[b]) of Σ∞.
pub fn family_label_of_point(tower: &FieldTower, v: &[Fq], shift: u32) -> Result<Label> {
    if v.len() != 6 {
        return Err(Error::Dimension(format!("expected 6 coordinates, got {}", v.len())));
    }
    let e = tower.ext();
    let a = e.from_components([v[0], v[1], v[2]]);
    let b = e.from_components([v[3], v[4], v[5]]);
    let x = e.frobenius_pow(b, (3 - shift % 3) % 3);
    label_of_vec(e, [a, x])
}

/// The extension of a GF(q) subspace to GF(q³).
pub fn extend(tower: &FieldTower, s: &Subspace<Fq>) -> Subspace<Fq3> {
    let e = tower.ext();
    s.map_entries(e, |a| e.embed(a))
}

/// Entrywise Frobenius^i of a subspace over GF(q³).
pub fn conjugate(tower: &FieldTower, s: &Subspace<Fq3>, i: u32) -> Subspace<Fq3> {
    let e = tower.ext();
    s.map_entries(e, |a| e.frobenius_pow(a, i))
}

/// Entrywise Frobenius^i of a vector over GF(q³).
pub fn conjugate_vec(tower: &FieldTower, v: &[Fq3], i: u32) -> Vec<Fq3> {
    v.iter().map(|&a| tower.ext().frobenius_pow(a, i)).collect()
}

/// ε(α, β, z). Inputs with z ∉ GF(q) are first scaled by z^{q+q²}.
pub fn epsilon(tower: &FieldTower, p: [Fq3; 3]) -> Result<PgPoint<Fq>> {
    let e = tower.ext();
    if p.iter().all(|&a| a == Fq3(0)) {
        return Err(Error::ZeroVector);
    }
    let [a, b, z] = match e.to_base(p[2]) {
        Some(_) => p,
        None => {
            let s = e.mul(e.frobenius(p[2]), e.frobenius_pow(p[2], 2));
            p.map(|x| e.mul(x, s))
        }
    };
    let mut v = bracket2(e, a, b);
    v.push(e.to_base(z).unwrap());
    PgPoint::new(tower.base(), &v)
}

/// Inverse of ε on affine points: ([a],[b],z) ↦ (a/z, b/z, 1).
pub fn affine_preimage(tower: &FieldTower, v: &[Fq]) -> Result<[Fq3; 3]> {
    let e = tower.ext();
    if v.len() != 7 {
        return Err(Error::Dimension(format!("expected 7 coordinates, got {}", v.len())));
    }
    let z = e.embed(v[6]);
    let zi = e.inv(z).ok_or(Error::MeetsInfinity)?;
    let a = e.from_components([v[0], v[1], v[2]]);
    let b = e.from_components([v[3], v[4], v[5]]);
    Ok([e.mul(a, zi), e.mul(b, zi), Fq3(1)])
}

/// The q+1 points λX + t μY (t ∈ GF(q) ∪ {∞}) of the order-q-subline through
/// three distinct collinear points, where W = λX + μY. Ordered by t, so
/// t = 0, 1, ∞ give X, W, Y.
pub fn subline_points(tower: &FieldTower, x: &[Fq3], y: &[Fq3], w: &[Fq3]) -> Result<Vec<PgPoint<Fq3>>> {
    let e = tower.ext();
    let c = linalg::combination(e, &[x.to_vec(), y.to_vec()], w)
        .ok_or_else(|| Error::NotSubline("points are not collinear".into()))?;
    if c.contains(&Fq3(0)) || linalg::rank(e, &[x.to_vec(), y.to_vec()]) < 2 {
        return Err(Error::NotSubline("points are not distinct".into()));
    }
    let u = linalg::scale(e, c[0], x);
    let v = linalg::scale(e, c[1], y);
    projective_line(tower.base())
        .into_iter()
        .map(|t| match t {
            Param::Infinity => PgPoint::new(e, &v),
            Param::At(t) => PgPoint::new(e, &linalg::add_vec(e, &u, &linalg::scale(e, e.embed(t), &v))),
        })
        .collect()
}

/// The order-q-subline of ℓ∞ through three distinct labels, ordered as in
/// [`subline_points`].
pub fn subline_labels(tower: &FieldTower, a: Label, b: Label, c: Label) -> Result<Vec<Label>> {
    let pts = subline_points(tower, &label_vec(a), &label_vec(b), &label_vec(c))?;
    pts.iter()
        .map(|p| label_of_vec(tower.ext(), [p.coords()[0], p.coords()[1]]))
        .collect()
}

/// True iff `labels` is an order-q-subline of ℓ∞.
pub fn is_subline(tower: &FieldTower, labels: &[Label]) -> bool {
    let q = tower.q() as usize;
    if labels.len() != q + 1 {
        return false;
    }
    let mut want = labels.to_vec();
    want.sort();
    want.dedup();
    if want.len() != q + 1 {
        return false;
    }
    match subline_labels(tower, labels[0], labels[1], labels[2]) {
        Ok(mut got) => {
            got.sort();
            got == want
        }
        Err(_) => false,
    }
}

/// The spread Σ∞ model with its labelled planes and transversal frame.
#[derive(Clone, Debug)]
pub struct BbContext {
    tower: FieldTower,
    frame: TransversalFrame,
    labels: Vec<Label>,
    planes: Vec<Subspace<Fq>>,
    index: HashMap<Label, usize>,
}

impl BbContext {
    pub fn new(tower: FieldTower) -> Self {
        let frame = TransversalFrame::new(&tower);
        let labels = projective_line(tower.ext());
        let planes: Vec<Subspace<Fq>> = labels.iter().map(|&k| family_plane(&tower, k, 0)).collect();
        let index = labels.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        BbContext {
            tower,
            frame,
            labels,
            planes,
            index,
        }
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn q(&self) -> u32 {
        self.tower.q()
    }

    pub fn frame(&self) -> &TransversalFrame {
        &self.frame
    }

    /// All q³+1 labels: finite ones in canonical order, then ∞.
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// Spread planes, in the order of [`BbContext::labels`].
    pub fn spread(&self) -> &[Subspace<Fq>] {
        &self.planes
    }

    pub fn plane(&self, k: Label) -> &Subspace<Fq> {
        &self.planes[self.index[&k]]
    }

    /// Label of the spread plane containing a point ([a],[b]) of Σ∞.
    pub fn label_of_point(&self, v: &[Fq]) -> Result<Label> {
        if v.len() != 6 {
            return Err(Error::Dimension(format!("expected 6 coordinates, got {}", v.len())));
        }
        let e = self.tower.ext();
        let a = e.from_components([v[0], v[1], v[2]]);
        let b = e.from_components([v[3], v[4], v[5]]);
        label_of_vec(e, [a, b])
    }

    /// Label of a plane of Σ∞ if it is a spread plane.
    pub fn label_of_plane(&self, s: &Subspace<Fq>) -> Option<Label> {
        let k = self.label_of_point(s.rows().first()?).ok()?;
        (self.plane(k) == s).then_some(k)
    }

    /// A_1 = (A, 0) and A_2 = (0, A) over GF(q³).
    pub fn a1_a2(&self) -> (Vec<Fq3>, Vec<Fq3>) {
        let a = self.frame.p;
        let z = Fq3(0);
        (
            vec![a[0], a[1], a[2], z, z, z],
            vec![z, z, z, a[0], a[1], a[2]],
        )
    }

    /// g_S = ⟨A_1, A_2⟩ and its two conjugates.
    pub fn spread_transversals(&self) -> [Subspace<Fq3>; 3] {
        let (a1, a2) = self.a1_a2();
        let g = Subspace::new(self.tower.ext(), 6, vec![a1, a2]);
        [0, 1, 2].map(|i| conjugate(&self.tower, &g, i))
    }

    /// The closed form g_S ∩ [S_k]* = kA_1 + A_2 (A_1 for k = ∞).
    pub fn spread_marked_point(&self, k: Label) -> Vec<Fq3> {
        let e = self.tower.ext();
        let (a1, a2) = self.a1_a2();
        match k {
            Param::Infinity => a1,
            Param::At(k) => linalg::add_vec(e, &linalg::scale(e, k, &a1), &a2),
        }
    }

    /// The regulus of the spread planes labelled by an order-q-subline.
    pub fn subline_to_regulus(&self, labels: &[Label]) -> Result<Regulus<Fq>> {
        if !is_subline(&self.tower, labels) {
            return Err(Error::NotSubline(format!("{} labels", labels.len())));
        }
        let f = self.tower.base();
        let r = Regulus::from_three_planes(
            f,
            self.plane(labels[0]),
            self.plane(labels[1]),
            self.plane(labels[2]),
        )?;
        for &k in &labels[3..] {
            if !r.contains_plane(self.plane(k)) {
                return Err(Error::NotSubline("spread planes do not form a regulus".into()));
            }
        }
        Ok(r)
    }

    /// Labels of a regulus all of whose planes are spread planes, sorted.
    pub fn regulus_labels(&self, r: &Regulus<Fq>) -> Result<Vec<Label>> {
        let mut out = r
            .planes()
            .iter()
            .map(|p| {
                self.label_of_plane(p)
                    .ok_or_else(|| Error::Inconsistent("regulus plane is not a spread plane".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        Ok(out)
    }
}

/// Every line of PG(5,q³) meeting all the given pairwise disjoint planes.
///
/// Candidates are the lines PQ with P in the first plane and Q in the second.
/// The line PQ meets a plane with parity matrix H iff HP and HQ are parallel.
pub fn transversal_search(tower: &FieldTower, planes: &[Subspace<Fq3>]) -> Result<Vec<Subspace<Fq3>>> {
    let e = tower.ext();
    if planes.len() < 2 {
        return Err(Error::Dimension("transversal search needs at least two planes".into()));
    }
    for (i, a) in planes.iter().enumerate() {
        for b in &planes[i + 1..] {
            if a.meets(e, b) {
                return Err(Error::NotDisjoint);
            }
        }
    }
    let rest = &planes[2..];
    let pts0 = planes[0].points(e);
    let pts1 = planes[1].points(e);
    let parity: Vec<Vec<Vec<Fq3>>> = rest.iter().map(|p| p.parity(e)).collect();
    let images = |pts: &[PgPoint<Fq3>]| -> Vec<Vec<Vec<Fq3>>> {
        pts.par_iter()
            .map(|p| parity.iter().map(|h| linalg::mat_vec(e, h, p.coords())).collect())
            .collect()
    };
    let img0 = images(&pts0);
    let img1 = images(&pts1);
    let parallel = |u: &[Fq3], v: &[Fq3]| -> bool {
        (0..u.len()).all(|i| {
            (i + 1..u.len()).all(|j| e.mul(u[i], v[j]) == e.mul(u[j], v[i]))
        })
    };
    let mut lines: Vec<Subspace<Fq3>> = (0..pts0.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let pts0 = &pts0;
            let pts1 = &pts1;
            let img0 = &img0;
            let img1 = &img1;
            (0..pts1.len()).filter_map(move |j| {
                let ok = (0..rest.len()).all(|r| parallel(&img0[i][r], &img1[j][r]));
                ok.then(|| {
                    Subspace::new(e, 6, vec![pts0[i].coords().to_vec(), pts1[j].coords().to_vec()])
                })
            })
        })
        .collect();
    lines.sort();
    lines.dedup();
    Ok(lines)
}

/// A twisted cubic of PG(6,q) given by seven coordinate polynomials of degree
/// at most 3, together with the label of the spread plane at infinity of its
/// 3-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedCubic {
    /// coords[i][j] is the coefficient of t^j in coordinate i.
    pub coords: [[Fq; 4]; 7],
    pub label: Label,
}

fn poly_mul(e: &CubicExt, a: &[Fq3], b: &[Fq3]) -> Vec<Fq3> {
    let mut out = vec![Fq3(0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = e.add(out[i + j], e.mul(x, y));
        }
    }
    out
}

impl TwistedCubic {
    /// The Bruck-Bose image of the order-q-subline {A + tB : t ∈ GF(q) ∪ {∞}}
    /// of PG(2,q³), which must be disjoint from ℓ∞.
    ///
    /// With P(t) = (α(t), β(t), γ(t)) the coordinates are the components of
    /// α γ^σ γ^{σ²}, β γ^σ γ^{σ²} and γ γ^σ γ^{σ²}, with σ acting on the
    /// coefficients only.
    pub fn from_subline(tower: &FieldTower, a: [Fq3; 3], b: [Fq3; 3]) -> Result<Self> {
        let e = tower.ext();
        let f = tower.base();
        if linalg::rank(e, &[a.to_vec(), b.to_vec()]) < 2 {
            return Err(Error::Degenerate("subline points coincide".into()));
        }
        // γ(t) = γ_a + t γ_b vanishes for some t ∈ GF(q) ∪ {∞}
        let meets = b[2] == Fq3(0)
            || f.elements().any(|t| e.add(a[2], e.mul(e.embed(t), b[2])) == Fq3(0));
        if meets {
            return Err(Error::MeetsInfinity);
        }
        let g = [a[2], b[2]];
        let g1 = g.map(|x| e.frobenius(x));
        let g2 = g.map(|x| e.frobenius_pow(x, 2));
        let ng = poly_mul(e, &g1, &g2);
        let mut coords = [[Fq(0); 4]; 7];
        for (slot, lin) in [[a[0], b[0]], [a[1], b[1]], [a[2], b[2]]].iter().enumerate() {
            let p = poly_mul(e, lin, &ng);
            for (j, &c) in p.iter().enumerate() {
                let comp = e.components(c);
                if slot < 2 {
                    for i in 0..3 {
                        coords[3 * slot + i][j] = comp[i];
                    }
                } else {
                    coords[6][j] = e.to_base(c).ok_or_else(|| {
                        Error::Inconsistent("norm polynomial has a coefficient outside GF(q)".into())
                    })?;
                }
            }
        }
        // direction of the line AB at infinity
        let dir = linalg::sub_vec(e, &linalg::scale(e, b[2], &a), &linalg::scale(e, a[2], &b));
        let label = label_of_vec(e, [dir[0], dir[1]])?;
        Ok(TwistedCubic { coords, label })
    }

    /// c(t) over GF(q); t = ∞ gives the leading coefficients.
    pub fn eval(&self, f: &impl Field<Elem = Fq>, t: Param<Fq>) -> Vec<Fq> {
        self.coords
            .iter()
            .map(|c| match t {
                Param::Infinity => c[3],
                Param::At(t) => c.iter().rev().fold(f.zero(), |acc, &x| f.add(f.mul(acc, t), x)),
            })
            .collect()
    }

    /// c(t) over GF(q³).
    pub fn eval_ext(&self, e: &CubicExt, t: Param<Fq3>) -> Vec<Fq3> {
        self.coords
            .iter()
            .map(|c| match t {
                Param::Infinity => e.embed(c[3]),
                Param::At(t) => c
                    .iter()
                    .rev()
                    .fold(Fq3(0), |acc, &x| e.add(e.mul(acc, t), e.embed(x))),
            })
            .collect()
    }

    /// The q+1 points over GF(q), in parameter order.
    pub fn points(&self, tower: &FieldTower) -> Result<Vec<PgPoint<Fq>>> {
        let f = tower.base();
        projective_line(f)
            .into_iter()
            .map(|t| PgPoint::new(f, &self.eval(f, t)))
            .collect()
    }

    /// Span of the coefficient vectors; a 3-space for a genuine twisted cubic.
    pub fn span(&self, f: &impl Field<Elem = Fq>) -> Subspace<Fq> {
        let rows = (0..4).map(|j| self.coords.iter().map(|c| c[j]).collect()).collect();
        Subspace::new(f, 7, rows)
    }

    /// The coordinate polynomials re-expanded about t0, so that coefficient
    /// j is the j-th divided difference at t0. For t0 = ∞ the reversed
    /// polynomials are used.
    fn taylor(&self, f: &impl Field<Elem = Fq>, t0: Param<Fq>) -> [[Fq; 4]; 7] {
        let mut out = self.coords;
        for c in out.iter_mut() {
            match t0 {
                Param::Infinity => c.reverse(),
                Param::At(t0) => {
                    // repeated synthetic division by (t - t0)
                    for start in 0..4 {
                        for j in (start..3).rev() {
                            c[j] = f.add(c[j], f.mul(t0, c[j + 1]));
                        }
                    }
                }
            }
        }
        out
    }

    /// The tangent line at c(t0): span(c(t0), r(t0)) where
    /// c(t) − c(t0) = (t − t0) r(t), dividing once more if r(t0) is zero or
    /// proportional to c(t0).
    pub fn tangent_line(&self, f: &impl Field<Elem = Fq>, t0: Param<Fq>) -> Result<Subspace<Fq>> {
        let tay = self.taylor(f, t0);
        let col = |j: usize| -> Vec<Fq> { tay.iter().map(|c| c[j]).collect() };
        let p = col(0);
        for j in 1..=2 {
            let l = Subspace::new(f, 7, vec![p.clone(), col(j)]);
            if l.dim() == 1 {
                return Ok(l);
            }
        }
        Err(Error::Degenerate("no tangent direction at this parameter".into()))
    }
}

/// Result of testing a cubic against a transversal triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialCheck {
    pub special: bool,
    /// Indices of the lines the extended cubic misses.
    pub missed: Vec<usize>,
}

/// True iff the extension {c(t) : t ∈ GF(q³) ∪ {∞}} meets each given line.
/// Lines of Σ∞ with six coordinates are lifted to PG(6,q³).
pub fn is_special_cubic(tower: &FieldTower, cubic: &TwistedCubic, lines: &[Subspace<Fq3>]) -> SpecialCheck {
    let e = tower.ext();
    let lines: Vec<Subspace<Fq3>> = lines
        .iter()
        .map(|l| if l.len() == 6 { l.append_zero(e) } else { l.clone() })
        .collect();
    let pts: Vec<Vec<Fq3>> = projective_line(e).into_iter().map(|t| cubic.eval_ext(e, t)).collect();
    let missed: Vec<usize> = lines
        .iter()
        .enumerate()
        .filter(|(_, l)| !pts.iter().any(|p| l.contains(e, p)))
        .map(|(i, _)| i)
        .collect();
    SpecialCheck {
        special: missed.is_empty(),
        missed,
    }
}
