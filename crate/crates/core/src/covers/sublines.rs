use std::collections::BTreeSet;

use super::{beta, Cover, Family};
use crate::bruckbose::{extend, subline_labels, BbContext, Label};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldTower, Fq, Fq3};
use crate::pg::{extend_regulus, linalg, PgPoint, Regulus, Subspace};
use crate::subplane::{tangent_plane, trace, NineQuadrics, SubplaneConfig};

/// The intersection of a cover plane with the planes of a regulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Section {
    /// The q+1 points are collinear.
    Line(Subspace<Fq>),
    /// q+1 points spanning the plane, no three collinear.
    ConicPoints(Vec<PgPoint<Fq>>),
}

impl Section {
    pub fn is_line(&self) -> bool {
        matches!(self, Section::Line(_))
    }
}

/// Intersects `pi` with every plane of `r`. Each must meet `pi` in one point.
pub fn cover_plane_section(f: &impl Field<Elem = Fq>, r: &Regulus<Fq>, pi: &Subspace<Fq>) -> Result<Section> {
    let mut pts = Vec::with_capacity(r.planes().len());
    for p in r.planes() {
        let m = pi.meet(f, p);
        if m.dim() != 0 {
            return Err(Error::Inconsistent(format!(
                "cover plane meets a regulus plane in dimension {}",
                m.dim()
            )));
        }
        pts.push(PgPoint::new(f, &m.rows()[0])?);
    }
    let rows: Vec<Vec<Fq>> = pts.iter().map(|p| p.coords().to_vec()).collect();
    let span = Subspace::new(f, pi.len(), rows.clone());
    match span.dim() {
        1 => Ok(Section::Line(span)),
        2 => {
            let n = rows.len();
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let tri = [rows[i].clone(), rows[j].clone(), rows[k].clone()];
                        if linalg::rank(f, &tri) < 3 {
                            return Err(Error::Degenerate(
                                "section spans the plane but has three collinear points".into(),
                            ));
                        }
                    }
                }
            }
            Ok(Section::ConicPoints(pts))
        }
        d => Err(Error::Degenerate(format!("section spans dimension {d}"))),
    }
}

/// Sections of a regulus by every plane of the tangent and conic covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionProfile {
    pub tangent: Vec<Section>,
    pub conic: Vec<Section>,
}

pub fn section_profile(
    f: &impl Field<Elem = Fq>,
    r: &Regulus<Fq>,
    tc: &Cover,
    cc: &Cover,
) -> Result<SectionProfile> {
    let sec = |c: &Cover| -> Result<Vec<Section>> {
        c.planes.iter().map(|p| cover_plane_section(f, r, p)).collect()
    };
    Ok(SectionProfile {
        tangent: sec(tc)?,
        conic: sec(cc)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SublineClass {
    /// Meets every tangent-cover plane in a line.
    Pencil,
    /// Meets every conic-cover plane in a line.
    DualConic,
}

impl SublineClass {
    pub fn name(self) -> &'static str {
        match self {
            SublineClass::Pencil => "pencil",
            SublineClass::DualConic => "dual-conic",
        }
    }
}

/// Classifies a regulus of splash planes by how the cover planes cut it.
///
/// The decision is taken on the first tangent-cover plane and then required
/// to hold uniformly: one cover meets it in lines, the other in conics, and
/// the line sections are exactly the ruling lines of the regulus. Returns
/// the class and the label of a cover plane met in a line.
pub fn classify_subline_regulus(
    f: &impl Field<Elem = Fq>,
    r: &Regulus<Fq>,
    tc: &Cover,
    cc: &Cover,
) -> Result<(SublineClass, Label)> {
    let prof = section_profile(f, r, tc, cc)?;
    let class = if prof.tangent[0].is_line() {
        SublineClass::Pencil
    } else {
        SublineClass::DualConic
    };
    let (lines, conics, cover) = match class {
        SublineClass::Pencil => (&prof.tangent, &prof.conic, tc),
        SublineClass::DualConic => (&prof.conic, &prof.tangent, cc),
    };
    if !lines.iter().all(Section::is_line) || conics.iter().any(Section::is_line) {
        return Err(Error::Inconsistent(format!(
            "non-uniform sections: {} of {} tangent and {} of {} conic planes meet in a line",
            prof.tangent.iter().filter(|s| s.is_line()).count(),
            prof.tangent.len(),
            prof.conic.iter().filter(|s| s.is_line()).count(),
            prof.conic.len()
        )));
    }
    let found: BTreeSet<Subspace<Fq>> = lines
        .iter()
        .map(|s| match s {
            Section::Line(l) => l.clone(),
            Section::ConicPoints(_) => unreachable!(),
        })
        .collect();
    let ruling: BTreeSet<Subspace<Fq>> = r.ruling_lines(f).into_iter().collect();
    if found.len() != lines.len() || found != ruling {
        return Err(Error::Inconsistent(
            "line sections are not the ruling lines of the regulus".into(),
        ));
    }
    Ok((class, cover.labels[0]))
}

/// The regulus of the spread planes met by a line of a cover plane, with
/// their labels in point order.
pub fn cover_line_regulus(ctx: &BbContext, u: &Subspace<Fq>, cover: &Cover) -> Result<(Vec<Label>, Regulus<Fq>)> {
    let f = ctx.tower().base();
    if u.dim() != 1 {
        return Err(Error::Dimension(format!("expected a line, got dim {}", u.dim())));
    }
    if !cover.planes.iter().any(|p| p.contains_subspace(f, u)) {
        return Err(Error::Inconsistent("line lies in no plane of the cover".into()));
    }
    let mut labels = Vec::new();
    for p in u.points(f) {
        let k = ctx.label_of_point(p.coords())?;
        if labels.contains(&k) || !cover.labels.contains(&k) {
            return Err(Error::Degenerate(format!(
                "line meets spread plane {k:?} twice or outside the splash"
            )));
        }
        labels.push(k);
    }
    let r = ctx.subline_to_regulus(&labels)?;
    Ok((labels, r))
}

/// The dual-conic regulus determined by a line of a conic-cover plane.
pub fn dual_conic_regulus(ctx: &BbContext, u: &Subspace<Fq>, cc: &Cover) -> Result<(Vec<Label>, Regulus<Fq>)> {
    if cc.kind != Family::Conic {
        return Err(Error::Inconsistent("expected the conic cover".into()));
    }
    cover_line_regulus(ctx, u, cc)
}

/// β applied to the tangent trace at a point of 𝓑: a line of a
/// conic-cover plane.
pub fn dual_conic_seed(ctx: &BbContext, b: &SubplaneConfig, nine: &NineQuadrics, point: usize) -> Result<Subspace<Fq>> {
    let t = ctx.tower();
    let f = t.base();
    let tp = tangent_plane(f, nine, &b.points[point].bb)?;
    Ok(beta(t).apply_subspace(f, &trace(f, &tp.plane)))
}

/// Outcome of the cover-special test of a section conic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialConic {
    pub special: bool,
    /// Points of π* ∩ R*.
    pub section_size: usize,
    /// Transversals whose point on π* lies off the extended section.
    pub missed: Vec<usize>,
}

/// Extends the regulus and the plane to GF(q³) and tests whether the points
/// π* ∩ g, π* ∩ g^q, π* ∩ g^{q²} all lie on π* ∩ R*.
pub fn is_cover_special_conic(
    tower: &FieldTower,
    r: &Regulus<Fq>,
    pi: &Subspace<Fq>,
    transversals: &[Subspace<Fq3>; 3],
) -> Result<SpecialConic> {
    let e = tower.ext();
    let rx = extend_regulus(tower, r);
    let px = extend(tower, pi);
    let mut section = BTreeSet::new();
    for p in rx.planes() {
        let m = px.meet(e, p);
        if m.dim() != 0 {
            return Err(Error::Inconsistent(format!(
                "extended plane meets an extended regulus plane in dimension {}",
                m.dim()
            )));
        }
        section.insert(PgPoint::new(e, &m.rows()[0])?);
    }
    let mut missed = Vec::new();
    for (i, g) in transversals.iter().enumerate() {
        let m = px.meet(e, g);
        let on = m.dim() == 0 && section.contains(&PgPoint::new(e, &m.rows()[0])?);
        if !on {
            missed.push(i);
        }
    }
    Ok(SpecialConic {
        special: missed.is_empty(),
        section_size: section.len(),
        missed,
    })
}

/// Every order-q-subline of ℓ∞ contained in the splash labels, each sorted.
pub fn enumerate_splash_reguli(ctx: &BbContext, labels: &[Label]) -> Result<Vec<Vec<Label>>> {
    let t = ctx.tower();
    let inside: BTreeSet<Label> = labels.iter().copied().collect();
    let mut found: BTreeSet<Vec<Label>> = BTreeSet::new();
    let mut covered: BTreeSet<[Label; 3]> = BTreeSet::new();
    let n = labels.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut key = [labels[i], labels[j], labels[k]];
                key.sort();
                if covered.contains(&key) {
                    continue;
                }
                let mut sub = subline_labels(t, labels[i], labels[j], labels[k])?;
                if !sub.iter().all(|l| inside.contains(l)) {
                    continue;
                }
                sub.sort();
                for a in 0..sub.len() {
                    for b in a + 1..sub.len() {
                        for c in b + 1..sub.len() {
                            covered.insert([sub[a], sub[b], sub[c]]);
                        }
                    }
                }
                found.insert(sub);
            }
        }
    }
    Ok(found.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::covers_of_splash;
    use crate::subplane::{build_subplane, nine_quadrics, pencil_regulus, splash_of};

    #[test]
    fn q3_reguli_split_evenly() {
        let ctx = BbContext::new(FieldTower::for_q(3).unwrap());
        let f = ctx.tower().base();
        let b = build_subplane(&ctx).unwrap();
        let s = splash_of(&ctx, &b).unwrap();
        let (tc, cc) = covers_of_splash(&ctx, &s).unwrap();
        let all = enumerate_splash_reguli(&ctx, &s.labels).unwrap();
        assert_eq!(all.len(), 26);
        let mut counts = [0usize; 2];
        for labels in &all {
            let r = ctx.subline_to_regulus(labels).unwrap();
            match classify_subline_regulus(f, &r, &tc, &cc).unwrap().0 {
                SublineClass::Pencil => counts[0] += 1,
                SublineClass::DualConic => counts[1] += 1,
            }
        }
        assert_eq!(counts, [13, 13]);
    }

    #[test]
    fn pencil_and_seed_classify() {
        let ctx = BbContext::new(FieldTower::for_q(3).unwrap());
        let f = ctx.tower().base();
        let b = build_subplane(&ctx).unwrap();
        let s = splash_of(&ctx, &b).unwrap();
        let nine = nine_quadrics(ctx.tower(), &b).unwrap();
        let (tc, cc) = covers_of_splash(&ctx, &s).unwrap();
        let (_, pr) = pencil_regulus(&ctx, &b, 0).unwrap();
        assert_eq!(classify_subline_regulus(f, &pr, &tc, &cc).unwrap().0, SublineClass::Pencil);
        let u = dual_conic_seed(&ctx, &b, &nine, 0).unwrap();
        let (_, dr) = dual_conic_regulus(&ctx, &u, &cc).unwrap();
        assert_eq!(classify_subline_regulus(f, &dr, &tc, &cc).unwrap().0, SublineClass::DualConic);
    }
}
