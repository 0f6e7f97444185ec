//! The tangent and conic covers of a splash, their transversals, and the
//! constructions built on them.

mod replacement;
mod sublines;

pub use replacement::{disjoint_splashes, replace_hyperreguli, ReplacementSpread, Selector};
pub use sublines::{
    classify_subline_regulus, cover_plane_section, dual_conic_regulus, enumerate_splash_reguli,
    cover_line_regulus, dual_conic_seed, is_cover_special_conic, section_profile, Section,
    SectionProfile, SpecialConic, SublineClass,
};

use std::collections::HashSet;

use crate::bruckbose::{conjugate, extend, family_plane, BbContext, Label};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldTower, Fq, Fq3};
use crate::pg::{linalg, Homography, Param, PgPoint, Subspace};
use crate::subplane::Splash;

/// The three plane families {([kx],[x^{q^s}])}: the splash (s = 0), the
/// tangent cover (s = 1) and the conic cover (s = 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Splash,
    Tangent,
    Conic,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Splash, Family::Tangent, Family::Conic];

    pub fn shift(self) -> u32 {
        match self {
            Family::Splash => 0,
            Family::Tangent => 1,
            Family::Conic => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Splash => "S",
            Family::Tangent => "T",
            Family::Conic => "C",
        }
    }
}

/// A labelled family of planes with its transversal triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    pub kind: Family,
    pub coset: u32,
    pub labels: Vec<Label>,
    pub planes: Vec<Subspace<Fq>>,
    /// g, g^q, g^{q²}.
    pub transversals: [Subspace<Fq3>; 3],
    /// Closed-form point g ∩ [plane_k]*, per label.
    pub marked: Vec<Vec<Fq3>>,
}

impl Cover {
    pub fn plane(&self, k: Label) -> Option<&Subspace<Fq>> {
        self.labels.iter().position(|&l| l == k).map(|i| &self.planes[i])
    }
}

/// β : ([x],[y]) ↦ ([x],[y^q]) on Σ∞.
pub fn beta(tower: &FieldTower) -> Homography<Fq> {
    let f = tower.base();
    let n = tower.ext().frobenius_matrix();
    let mut m = linalg::identity(f, 6);
    for i in 0..3 {
        for j in 0..3 {
            m[3 + i][3 + j] = n[i][j];
        }
    }
    Homography::new(f, m).expect("N is invertible")
}

/// Θ = diag(M_τ, M_τ, 1) on PG(6,q).
pub fn theta(tower: &FieldTower) -> Homography<Fq> {
    let f = tower.base();
    let e = tower.ext();
    let mt = e.mult_matrix(e.tau());
    let mut m = vec![vec![f.zero(); 7]; 7];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = mt[i][j];
            m[3 + i][3 + j] = mt[i][j];
        }
    }
    m[6][6] = f.one();
    Homography::new(f, m).expect("M_τ is invertible")
}

/// The 6×6 block of Θ acting on Σ∞.
pub fn theta_sigma(tower: &FieldTower) -> Homography<Fq> {
    let t = theta(tower);
    let m = t.matrix()[..6].iter().map(|r| r[..6].to_vec()).collect();
    Homography::new(tower.base(), m).unwrap()
}

/// The transversal triple of a family, and the closed-form marked point
/// g ∩ [plane_k]*.
pub fn family_transversals(ctx: &BbContext, kind: Family) -> [Subspace<Fq3>; 3] {
    let t = ctx.tower();
    let e = t.ext();
    let (a1, a2) = ctx.a1_a2();
    let second = match kind {
        Family::Splash => a2,
        Family::Tangent => crate::bruckbose::conjugate_vec(t, &a2, 2),
        Family::Conic => crate::bruckbose::conjugate_vec(t, &a2, 1),
    };
    let g = Subspace::new(e, 6, vec![a1, second]);
    [0, 1, 2].map(|i| conjugate(t, &g, i))
}

pub fn marked_point(ctx: &BbContext, kind: Family, k: Label) -> Vec<Fq3> {
    let t = ctx.tower();
    let e = t.ext();
    let q = t.q() as i64;
    let eta = ctx.frame().eta;
    let (a1, a2) = ctx.a1_a2();
    let (scale, second) = match kind {
        Family::Splash => (Fq3(1), a2),
        Family::Tangent => (
            e.pow(eta, 1 - q * q).unwrap(),
            crate::bruckbose::conjugate_vec(t, &a2, 2),
        ),
        Family::Conic => (
            e.pow(eta, 1 - q).unwrap(),
            crate::bruckbose::conjugate_vec(t, &a2, 1),
        ),
    };
    match k {
        Param::Infinity => a1,
        Param::At(k) => linalg::add_vec(e, &linalg::scale(e, k, &a1), &linalg::scale(e, scale, &second)),
    }
}

/// Builds one family over the labels of a splash.
pub fn family_of(ctx: &BbContext, s: &Splash, kind: Family) -> Cover {
    let t = ctx.tower();
    Cover {
        kind,
        coset: s.coset,
        labels: s.labels.clone(),
        planes: s.labels.iter().map(|&k| family_plane(t, k, kind.shift())).collect(),
        transversals: family_transversals(ctx, kind),
        marked: s.labels.iter().map(|&k| marked_point(ctx, kind, k)).collect(),
    }
}

/// Outcome of checking the hyper-regulus axioms for 𝕊, 𝕋 and ℂ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverAxioms {
    /// Sizes of the point unions of 𝕊, 𝕋, ℂ.
    pub union_sizes: [usize; 3],
    pub same_union: bool,
    pub intra_disjoint: bool,
    /// Every pair of planes from different families meets in one point.
    pub inter_single: bool,
    /// First failing pair, as (family, label) twice.
    pub witness: Option<((Family, Label), (Family, Label))>,
}

impl CoverAxioms {
    pub fn holds(&self) -> bool {
        self.same_union && self.intra_disjoint && self.inter_single
    }
}

pub fn cover_axioms(tower: &FieldTower, fams: &[&Cover; 3]) -> CoverAxioms {
    let f = tower.base();
    let mut unions: Vec<HashSet<PgPoint<Fq>>> = Vec::new();
    let mut intra_disjoint = true;
    let mut witness = None;
    for fam in fams {
        let mut u = HashSet::new();
        for (i, p) in fam.planes.iter().enumerate() {
            for pt in p.points(f) {
                if !u.insert(pt) && intra_disjoint {
                    intra_disjoint = false;
                    witness = Some(((fam.kind, fam.labels[i]), (fam.kind, fam.labels[i])));
                }
            }
        }
        unions.push(u);
    }
    let mut inter_single = true;
    for a in 0..3 {
        for b in a + 1..3 {
            for (i, p) in fams[a].planes.iter().enumerate() {
                for (j, r) in fams[b].planes.iter().enumerate() {
                    if p.meet(f, r).dim() != 0 && inter_single {
                        inter_single = false;
                        witness = witness.or(Some((
                            (fams[a].kind, fams[a].labels[i]),
                            (fams[b].kind, fams[b].labels[j]),
                        )));
                    }
                }
            }
        }
    }
    CoverAxioms {
        union_sizes: [unions[0].len(), unions[1].len(), unions[2].len()],
        same_union: unions[0] == unions[1] && unions[1] == unions[2],
        intra_disjoint,
        inter_single,
        witness,
    }
}

/// The tangent and conic covers of a splash, built through β and checked
/// against the closed forms and the cover axioms.
pub fn covers_of_splash(ctx: &BbContext, s: &Splash) -> Result<(Cover, Cover)> {
    let t = ctx.tower();
    let f = t.base();
    let b = beta(t);
    let splash = family_of(ctx, s, Family::Splash);
    let tc = family_of(ctx, s, Family::Tangent);
    let cc = family_of(ctx, s, Family::Conic);
    for i in 0..s.labels.len() {
        let bt = b.apply_subspace(f, &splash.planes[i]);
        let bc = b.apply_subspace(f, &bt);
        if bt != tc.planes[i] || bc != cc.planes[i] {
            return Err(Error::Inconsistent(format!(
                "β image of the splash plane with label {:?} disagrees with the closed form",
                s.labels[i]
            )));
        }
    }
    let ax = cover_axioms(t, &[&splash, &tc, &cc]);
    if !ax.holds() {
        return Err(Error::Inconsistent(format!("cover axioms fail: {:?}", ax.witness)));
    }
    Ok((tc, cc))
}

/// For each plane, whether the extended plane meets the closed-form point
/// and each transversal in exactly one point.
pub fn check_marked_points(ctx: &BbContext, cover: &Cover) -> Vec<(Label, bool)> {
    let t = ctx.tower();
    let e = t.ext();
    cover
        .labels
        .iter()
        .zip(&cover.planes)
        .zip(&cover.marked)
        .map(|((&k, p), m)| {
            let ext = extend(t, p);
            let on_g = cover.transversals[0].contains(e, m) && ext.contains(e, m);
            let single = cover.transversals.iter().all(|g| g.meet(e, &ext).dim() == 0);
            (k, on_g && single)
        })
        .collect()
}

/// The spread planes whose extensions meet every given line.
pub fn carrier_characterisation(ctx: &BbContext, lines: &[Subspace<Fq3>]) -> Vec<Label> {
    let t = ctx.tower();
    let e = t.ext();
    ctx.labels()
        .iter()
        .zip(ctx.spread())
        .filter(|(_, p)| {
            let ext = extend(t, p);
            lines.iter().all(|l| l.meets(e, &ext))
        })
        .map(|(&k, _)| k)
        .collect()
}
