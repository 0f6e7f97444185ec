use std::collections::BTreeSet;

use super::Family;
use crate::bruckbose::{family_plane, BbContext, Label};
use crate::error::{Error, Result};
use crate::gf::Fq;
use crate::pg::{is_regular_spread, Regularity, Subspace};
use crate::subplane::Splash;

/// The q−1 splashes τ^j·𝒦, checked to partition the non-carrier labels.
pub fn disjoint_splashes(ctx: &BbContext) -> Result<Vec<Splash>> {
    let q = ctx.q();
    let splashes: Vec<Splash> = (0..q - 1).map(|j| Splash::coset(ctx, j)).collect();
    let mut seen: BTreeSet<Label> = BTreeSet::new();
    for s in &splashes {
        for &k in &s.labels {
            if !seen.insert(k) {
                return Err(Error::Inconsistent(format!(
                    "label {k:?} lies in two coset splashes"
                )));
            }
        }
        for c in s.carriers {
            if s.contains(c) {
                return Err(Error::Inconsistent("a splash contains a carrier".into()));
            }
        }
    }
    seen.extend(splashes[0].carriers);
    if seen.len() != ctx.labels().len() {
        return Err(Error::Inconsistent(format!(
            "cosets and carriers cover {} of {} spread planes",
            seen.len(),
            ctx.labels().len()
        )));
    }
    Ok(splashes)
}

/// What replaces one splash hyper-regulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Selector {
    Keep,
    Tangent,
    Conic,
}

impl Selector {
    pub const ALL: [Selector; 3] = [Selector::Keep, Selector::Tangent, Selector::Conic];

    pub fn family(self) -> Family {
        match self {
            Selector::Keep => Family::Splash,
            Selector::Tangent => Family::Tangent,
            Selector::Conic => Family::Conic,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Selector::Keep => "keep",
            Selector::Tangent => "tangent",
            Selector::Conic => "conic",
        }
    }
}

/// A spread obtained from the Desarguesian spread by hyper-regulus replacement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplacementSpread {
    pub choice: Vec<Selector>,
    pub planes: Vec<Subspace<Fq>>,
    pub regularity: Regularity,
}

/// Replaces the j-th coset splash by the family `choice[j]` and tests the
/// result for being a regular spread.
pub fn replace_hyperreguli(ctx: &BbContext, choice: &[Selector]) -> Result<ReplacementSpread> {
    let q = ctx.q();
    if choice.len() != (q - 1) as usize {
        return Err(Error::Dimension(format!(
            "{} selectors given, {} coset splashes exist",
            choice.len(),
            q - 1
        )));
    }
    let t = ctx.tower();
    let splashes = disjoint_splashes(ctx)?;
    let mut planes: Vec<Subspace<Fq>> = splashes[0].carrier_planes(ctx).to_vec();
    for (s, sel) in splashes.iter().zip(choice) {
        let shift = sel.family().shift();
        planes.extend(s.labels.iter().map(|&k| family_plane(t, k, shift)));
    }
    let regularity = is_regular_spread(t.base(), &planes)?;
    Ok(ReplacementSpread {
        choice: choice.to_vec(),
        planes,
        regularity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldTower;

    #[test]
    fn cosets_partition_the_labels() {
        for q in [2, 3, 4] {
            let ctx = BbContext::new(FieldTower::for_q(q).unwrap());
            let s = disjoint_splashes(&ctx).unwrap();
            assert_eq!(s.len(), (q - 1) as usize);
        }
    }

    #[test]
    fn keeping_everything_is_regular() {
        let ctx = BbContext::new(FieldTower::for_q(2).unwrap());
        let r = replace_hyperreguli(&ctx, &[Selector::Keep]).unwrap();
        assert!(r.regularity.regular);
        for sel in [Selector::Tangent, Selector::Conic] {
            let r = replace_hyperreguli(&ctx, &[sel]).unwrap();
            assert!(r.regularity.regular, "{sel:?}");
        }
    }
}
