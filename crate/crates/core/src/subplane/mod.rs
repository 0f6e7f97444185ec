//! The exterior order-q-subplane 𝓑 = K·PG(2,q) of PG(2,q³), its splash, its
//! nine quadrics and its tangent planes.

mod quadric;

pub use quadric::{monomial_index, QuadricForm, MONOMIALS};

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::bruckbose::{
    epsilon, family_label_of_point, family_plane, BbContext, Label, TwistedCubic,
};
use crate::error::{Error, Result};
use crate::gf::{CubicExt, Field, FieldTower, Fq, Fq3};
use crate::pg::{linalg, Param, PgPoint, Regulus, Subspace};

pub type Mat3 = [[Fq3; 3]; 3];

/// K, whose columns send PG(2,q) onto 𝓑.
pub fn matrix_k(e: &CubicExt) -> Mat3 {
    let t = e.tau();
    let tq = e.frobenius(t);
    [
        [e.neg(t), Fq3(1), Fq3(0)],
        [e.neg(tq), Fq3(1), Fq3(0)],
        [e.mul(t, tq), e.neg(e.add(t, tq)), Fq3(1)],
    ]
}

/// K', a matrix of the inverse homography.
pub fn matrix_k_inv(e: &CubicExt) -> Mat3 {
    let t = e.tau();
    let tq = e.frobenius(t);
    [
        [e.neg(Fq3(1)), Fq3(1), Fq3(0)],
        [e.neg(tq), t, Fq3(0)],
        [e.neg(e.mul(tq, tq)), e.mul(t, t), e.sub(t, tq)],
    ]
}

fn mat_rows(m: &Mat3) -> Vec<Vec<Fq3>> {
    m.iter().map(|r| r.to_vec()).collect()
}

fn embed3(e: &CubicExt, v: [Fq; 3]) -> Vec<Fq3> {
    v.iter().map(|&x| e.embed(x)).collect()
}

/// A point of 𝓑.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubplanePoint {
    /// Its preimage in PG(2,q).
    pub base: [Fq; 3],
    /// Coordinates in PG(2,q³), scaled so z = 1.
    pub coords: [Fq3; 3],
    /// ε of the point.
    pub bb: PgPoint<Fq>,
}

/// A line of 𝓑.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubplaneLine {
    /// Its preimage [l, m, n] in PG(2,q).
    pub base: [Fq; 3],
    /// Normalized line coordinates ℓ·K'.
    pub coords: [Fq3; 3],
    /// Label of the point where the extended line meets ℓ∞.
    pub at_infinity: Label,
}

/// 𝓑 with its points, lines and incidences.
#[derive(Clone, Debug)]
pub struct SubplaneConfig {
    pub k: Mat3,
    pub k_inv: Mat3,
    pub points: Vec<SubplanePoint>,
    pub lines: Vec<SubplaneLine>,
    /// Indices of the lines through each point.
    pub lines_through: Vec<Vec<usize>>,
    /// Indices of the points on each line.
    pub points_on: Vec<Vec<usize>>,
}

/// Builds 𝓑 and checks that it is an order-q-subplane exterior to ℓ∞.
pub fn build_subplane(ctx: &BbContext) -> Result<SubplaneConfig> {
    let t = ctx.tower();
    let e = t.ext();
    let f = t.base();
    let k = matrix_k(e);
    let k_inv = matrix_k_inv(e);
    let prod = linalg::mat_mul(e, &mat_rows(&k), &mat_rows(&k_inv));
    let c = prod[0][0];
    if c == Fq3(0) || !is_scalar(&prod, c) {
        return Err(Error::Inconsistent("K K' is not a scalar matrix".into()));
    }
    let base_points = Subspace::whole(f, 3).points(f);
    let mut points = Vec::with_capacity(base_points.len());
    for p in &base_points {
        let b = [p.coords()[0], p.coords()[1], p.coords()[2]];
        let v = linalg::mat_vec(e, &mat_rows(&k), &embed3(e, b));
        let zi = e.inv(v[2]).ok_or_else(|| {
            Error::Inconsistent("a point of the subplane lies on the line at infinity".into())
        })?;
        let coords = [e.mul(v[0], zi), e.mul(v[1], zi), Fq3(1)];
        let bb = epsilon(t, coords)?;
        points.push(SubplanePoint { base: b, coords, bb });
    }
    let mut lines = Vec::with_capacity(base_points.len());
    for l in &base_points {
        let b = [l.coords()[0], l.coords()[1], l.coords()[2]];
        let row = embed3(e, b);
        let img: Vec<Fq3> = (0..3)
            .map(|j| (0..3).fold(Fq3(0), |acc, i| e.add(acc, e.mul(row[i], k_inv[i][j]))))
            .collect();
        let n = linalg::normalize(e, &img).ok_or(Error::ZeroVector)?;
        let coords = [n[0], n[1], n[2]];
        // [a,b,c] meets z = 0 in (b, −a, 0)
        let at_infinity = crate::bruckbose::label_of_vec(e, [coords[1], e.neg(coords[0])])?;
        lines.push(SubplaneLine {
            base: b,
            coords,
            at_infinity,
        });
    }
    let mut lines_through = vec![Vec::new(); points.len()];
    let mut points_on = vec![Vec::new(); lines.len()];
    for (li, l) in lines.iter().enumerate() {
        for (pi, p) in points.iter().enumerate() {
            let base_inc = linalg::dot(f, &l.base, &p.base) == Fq(0);
            let ext_inc = linalg::dot(e, &l.coords, &p.coords) == Fq3(0);
            if base_inc != ext_inc {
                return Err(Error::Inconsistent("incidence is not preserved by K".into()));
            }
            if ext_inc {
                lines_through[pi].push(li);
                points_on[li].push(pi);
            }
        }
    }
    let q = t.q() as usize;
    if lines_through.iter().chain(&points_on).any(|v| v.len() != q + 1) {
        return Err(Error::Inconsistent("subplane incidence counts are wrong".into()));
    }
    let distinct: BTreeSet<Label> = lines.iter().map(|l| l.at_infinity).collect();
    if distinct.len() != lines.len() {
        return Err(Error::Inconsistent("two subplane lines meet on the line at infinity".into()));
    }
    Ok(SubplaneConfig {
        k,
        k_inv,
        points,
        lines,
        lines_through,
        points_on,
    })
}

fn is_scalar(m: &[Vec<Fq3>], c: Fq3) -> bool {
    (0..3).all(|i| (0..3).all(|j| m[i][j] == if i == j { c } else { Fq3(0) }))
}

/// The coset τ^j·𝒦 with 𝒦 = {τ^{(q−1)i} : 0 ≤ i < q²+q+1}, in order of i.
pub fn kernel_labels(tower: &FieldTower, j: u32) -> Vec<Label> {
    let q = tower.q() as i64;
    (0..q * q + q + 1)
        .map(|i| Param::At(tower.ext().tau_pow(j as i64 + (q - 1) * i)))
        .collect()
}

/// An exterior splash as a labelled family of spread planes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splash {
    /// j for the coset τ^j·𝒦.
    pub coset: u32,
    pub labels: Vec<Label>,
    pub planes: Vec<Subspace<Fq>>,
    /// (S_∞, S_0).
    pub carriers: [Label; 2],
}

impl Splash {
    /// The splash with labels τ^j·𝒦.
    pub fn coset(ctx: &BbContext, j: u32) -> Splash {
        let labels = kernel_labels(ctx.tower(), j);
        let planes = labels.iter().map(|&k| ctx.plane(k).clone()).collect();
        Splash {
            coset: j,
            labels,
            planes,
            carriers: [Param::Infinity, Param::At(Fq3(0))],
        }
    }

    pub fn contains(&self, k: Label) -> bool {
        self.labels.contains(&k)
    }

    pub fn carrier_planes(&self, ctx: &BbContext) -> [Subspace<Fq>; 2] {
        self.carriers.map(|k| ctx.plane(k).clone())
    }
}

/// The exterior splash of 𝓑, checked against the closed form 𝒦.
pub fn splash_of(ctx: &BbContext, b: &SubplaneConfig) -> Result<Splash> {
    let computed: BTreeSet<Label> = b.lines.iter().map(|l| l.at_infinity).collect();
    let s = Splash::coset(ctx, 0);
    let closed: BTreeSet<Label> = s.labels.iter().copied().collect();
    if computed != closed || closed.len() != s.labels.len() {
        return Err(Error::Inconsistent(
            "computed splash differs from the closed form".into(),
        ));
    }
    Ok(s)
}

/// Identifies which cross-multiplied condition a quadric comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadricTag {
    /// (U, V) for U^q V = U V^q, indices into (𝒳, 𝒴, 𝒵).
    pub pair: (usize, usize),
    /// The τ-power whose coefficient is taken.
    pub component: usize,
}

/// The nine quadrics cutting [𝓑] out of the affine part of PG(6,q).
#[derive(Clone, Debug)]
pub struct NineQuadrics {
    pub forms: Vec<QuadricForm>,
    pub tags: Vec<QuadricTag>,
}

/// Expands the conditions on (𝒳, 𝒴, 𝒵) = K'·(x, y, z) into nine quadratic
/// forms, checking that the (𝒳, 𝒴) triple duplicates the (𝒴, 𝒳) triple.
pub fn nine_quadrics(tower: &FieldTower, b: &SubplaneConfig) -> Result<NineQuadrics> {
    let e = tower.ext();
    let f = tower.base();
    let lf = b.k_inv.map(|r| quadric::linear_form(e, r));
    let cond = |u: usize, v: usize| quadric::frobenius_condition(e, &lf[u], &lf[v]);
    let dup = cond(0, 1)?;
    let yx = cond(1, 0)?;
    if !dup.iter().zip(&yx).all(|(a, b)| a.proportional(f, b)) {
        return Err(Error::Inconsistent(
            "the (X/Y) and (Y/X) quadric triples differ".into(),
        ));
    }
    let mut forms = Vec::with_capacity(9);
    let mut tags = Vec::with_capacity(9);
    for (pair, triple) in [((1, 0), yx), ((2, 0), cond(2, 0)?), ((2, 1), cond(2, 1)?)] {
        for (component, form) in triple.into_iter().enumerate() {
            forms.push(form);
            tags.push(QuadricTag { pair, component });
        }
    }
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            if forms[i].proportional(f, &forms[j]) {
                return Err(Error::Inconsistent(format!("quadrics {i} and {j} coincide")));
            }
        }
    }
    Ok(NineQuadrics { forms, tags })
}

impl NineQuadrics {
    pub fn all_vanish(&self, f: &impl Field<Elem = Fq>, x: &[Fq]) -> bool {
        self.forms.iter().all(|q| f.is_zero(q.eval(f, x)))
    }
}

/// Common zeros of the nine quadrics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricScan {
    pub affine_scanned: usize,
    /// Affine common zeros, sorted.
    pub affine_zeros: Vec<PgPoint<Fq>>,
    /// Number of common zeros in Σ∞.
    pub infinity_zeros: usize,
}

/// Evaluates the nine forms at all q⁶ affine points and all points of Σ∞.
pub fn quadric_scan(tower: &FieldTower, nine: &NineQuadrics) -> QuadricScan {
    let f = tower.base();
    let q = f.order();
    let total = q.pow(6);
    let mut affine_zeros: Vec<PgPoint<Fq>> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let mut v = vec![f.one(); 7];
            let mut c = code;
            for slot in v.iter_mut().take(6) {
                *slot = f.elem(c % q);
                c /= q;
            }
            nine.all_vanish(f, &v).then(|| PgPoint::new(f, &v).unwrap())
        })
        .collect();
    affine_zeros.sort();
    let infinity_zeros = Subspace::whole(f, 6)
        .points(f)
        .par_iter()
        .filter(|p| {
            let mut v = p.coords().to_vec();
            v.push(f.zero());
            nine.all_vanish(f, &v)
        })
        .count();
    QuadricScan {
        affine_scanned: total,
        affine_zeros,
        infinity_zeros,
    }
}

/// A tangent plane together with the forms whose polar vanished at the point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentPlane {
    pub plane: Subspace<Fq>,
    pub omitted: Vec<usize>,
}

/// The hyperplane Σ∞ (z = 0) of PG(6,q).
pub fn sigma_infinity(f: &impl Field<Elem = Fq>) -> Subspace<Fq> {
    let rows = (0..6)
        .map(|i| (0..7).map(|j| if i == j { f.one() } else { f.zero() }).collect())
        .collect();
    Subspace::new(f, 7, rows)
}

/// The trace 𝒯 ∩ Σ∞ of a subspace, in the six coordinates of Σ∞.
pub fn trace(f: &impl Field<Elem = Fq>, s: &Subspace<Fq>) -> Subspace<Fq> {
    s.meet(f, &sigma_infinity(f))
        .drop_last(f)
        .expect("meet with Σ∞ lies in Σ∞")
}

/// Intersection of the polar hyperplanes of the nine quadrics at `p`.
pub fn tangent_plane(f: &impl Field<Elem = Fq>, nine: &NineQuadrics, p: &PgPoint<Fq>) -> Result<TangentPlane> {
    let mut rows = Vec::new();
    let mut omitted = Vec::new();
    for (i, q) in nine.forms.iter().enumerate() {
        let row = q.polar_row(f, p.coords());
        if row.iter().all(|&c| f.is_zero(c)) {
            omitted.push(i);
        } else {
            rows.push(row);
        }
    }
    let plane = Subspace::new(f, 7, linalg::null_space(f, &rows, 7));
    if plane.dim() != 2 || !plane.contains(f, p.coords()) {
        return Err(Error::Inconsistent(format!(
            "polar hyperplanes meet in a subspace of dimension {}",
            plane.dim()
        )));
    }
    if trace(f, &plane).dim() != 1 {
        return Err(Error::Inconsistent("tangent plane does not meet Σ∞ in a line".into()));
    }
    Ok(TangentPlane { plane, omitted })
}

/// The tangent plane at a point of 𝓑 as the span of the tangent lines of
/// the q+1 twisted cubics through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicTangents {
    pub plane: Subspace<Fq>,
    /// One tangent line per subplane line through the point.
    pub lines: Vec<Subspace<Fq>>,
    pub cubics: Vec<TwistedCubic>,
}

/// The twisted cubic of a line of 𝓑, parametrized so that t = 0 is the
/// point with index `start`.
pub fn line_cubic(tower: &FieldTower, b: &SubplaneConfig, line: usize, start: usize) -> Result<TwistedCubic> {
    let e = tower.ext();
    let other = *b.points_on[line]
        .iter()
        .find(|&&i| i != start)
        .ok_or_else(|| Error::Inconsistent("line has a single point".into()))?;
    if !b.points_on[line].contains(&start) {
        return Err(Error::Inconsistent("point is not on the line".into()));
    }
    let k = mat_rows(&b.k);
    let a = linalg::mat_vec(e, &k, &embed3(e, b.points[start].base));
    let v = linalg::mat_vec(e, &k, &embed3(e, b.points[other].base));
    TwistedCubic::from_subline(tower, [a[0], a[1], a[2]], [v[0], v[1], v[2]])
}

pub fn tangent_plane_via_cubics(tower: &FieldTower, b: &SubplaneConfig, point: usize) -> Result<CubicTangents> {
    let f = tower.base();
    let mut lines = Vec::new();
    let mut cubics = Vec::new();
    for &li in &b.lines_through[point] {
        let c = line_cubic(tower, b, li, point)?;
        let tl = c.tangent_line(f, Param::At(f.zero()))?;
        if !tl.contains(f, b.points[point].bb.coords()) {
            return Err(Error::Inconsistent("tangent line misses its point".into()));
        }
        lines.push(tl);
        cubics.push(c);
    }
    let plane = lines
        .iter()
        .fold(Subspace::empty(7), |acc, l| acc.span(f, l));
    if plane.dim() != 2 {
        return Err(Error::Inconsistent(format!(
            "tangent lines span a subspace of dimension {}",
            plane.dim()
        )));
    }
    Ok(CubicTangents {
        plane,
        lines,
        cubics,
    })
}

/// Label k of the tangent-cover plane [T_k] containing a line of Σ∞.
pub fn tangent_cover_label(tower: &FieldTower, line: &Subspace<Fq>) -> Result<Label> {
    let f = tower.base();
    let mut labels = BTreeSet::new();
    for p in line.points(f) {
        labels.insert(family_label_of_point(tower, p.coords(), 1)?);
    }
    let [k] = labels.into_iter().collect::<Vec<_>>()[..] else {
        return Err(Error::Inconsistent("trace line is not inside one tangent-cover plane".into()));
    };
    debug_assert!(family_plane(tower, k, 1).contains_subspace(f, line));
    Ok(k)
}

/// The π-pencil-subline at a point of 𝓑: the ℓ∞ labels of the lines through
/// it, and the regulus of their spread planes.
pub fn pencil_regulus(ctx: &BbContext, b: &SubplaneConfig, point: usize) -> Result<(Vec<Label>, Regulus<Fq>)> {
    let labels: Vec<Label> = b.lines_through[point]
        .iter()
        .map(|&l| b.lines[l].at_infinity)
        .collect();
    let r = ctx.subline_to_regulus(&labels).map_err(|err| {
        Error::Inconsistent(format!("pencil at point {point} is not a subline: {err}"))
    })?;
    Ok((labels, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(q: u32) -> (BbContext, SubplaneConfig) {
        let ctx = BbContext::new(FieldTower::for_q(q).unwrap());
        let b = build_subplane(&ctx).unwrap();
        (ctx, b)
    }

    #[test]
    fn origin_is_in_subplane() {
        let (_, b) = setup(3);
        assert_eq!(b.points[0].coords, [Fq3(0), Fq3(0), Fq3(1)]);
        assert_eq!(b.points.len(), 13);
    }

    #[test]
    fn line_coordinates_match_closed_form() {
        let (ctx, b) = setup(3);
        let e = ctx.tower().ext();
        let t = e.tau();
        let tq = e.frobenius(t);
        let t2q = e.mul(tq, tq);
        for line in &b.lines {
            let [l, m, n] = line.base.map(|x| e.embed(x));
            let want = [
                e.neg(e.add(l, e.add(e.mul(tq, m), e.mul(t2q, n)))),
                e.add(l, e.add(e.mul(t, m), e.mul(e.mul(t, t), n))),
                e.mul(n, e.sub(t, tq)),
            ];
            assert_eq!(linalg::normalize(e, &want).unwrap(), line.coords.to_vec());
        }
    }

    #[test]
    fn splash_q2_is_all_nonzero_labels() {
        let (ctx, b) = setup(2);
        let s = splash_of(&ctx, &b).unwrap();
        let mut got = s.labels.clone();
        got.sort();
        let want: Vec<Label> = (1..8).map(|c| Param::At(Fq3(c))).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn origin_on_all_quadrics() {
        let (ctx, b) = setup(3);
        let nine = nine_quadrics(ctx.tower(), &b).unwrap();
        assert_eq!(nine.forms.len(), 9);
        let f = ctx.tower().base();
        let mut o = vec![Fq(0); 7];
        o[6] = Fq(1);
        assert!(nine.all_vanish(f, &o));
    }

    #[test]
    fn origin_tangent_trace() {
        for q in [2, 3, 4] {
            let (ctx, b) = setup(q);
            let t = ctx.tower();
            let e = t.ext();
            let f = t.base();
            let nine = nine_quadrics(t, &b).unwrap();
            let tp = tangent_plane(f, &nine, &b.points[0].bb).unwrap();
            let want = Subspace::new(
                f,
                6,
                vec![
                    crate::bruckbose::bracket2(e, Fq3(1), Fq3(1)),
                    crate::bruckbose::bracket2(e, e.tau(), e.frobenius(e.tau())),
                ],
            );
            assert_eq!(trace(f, &tp.plane), want);
            assert_eq!(tangent_cover_label(t, &want).unwrap(), Param::At(Fq3(1)));
        }
    }
}
