use std::sync::OnceLock;

use rayon::prelude::*;

use crate::bruckbose::{BbContext, Label};
use crate::covers::{
    classify_subline_regulus, covers_of_splash, enumerate_splash_reguli, Cover, SublineClass,
};
use crate::error::Result;
use crate::gf::{FieldTower, Fq};
use crate::pg::Regulus;
use crate::subplane::{build_subplane, nine_quadrics, splash_of, NineQuadrics, Splash, SubplaneConfig};

/// A regulus of splash planes with its classification outcome.
#[derive(Clone, Debug)]
pub struct ClassifiedRegulus {
    pub labels: Vec<Label>,
    pub regulus: Regulus<Fq>,
    /// The class and the witnessing cover-plane label, or why it failed.
    pub class: std::result::Result<(SublineClass, Label), String>,
}

/// Everything constructed for one tower. Later stages hold the error of the
/// first failing construction.
pub struct World {
    pub ctx: BbContext,
    pub subplane: Result<SubplaneConfig>,
    pub splash: Result<Splash>,
    pub nine: Result<NineQuadrics>,
    pub covers: Result<(Cover, Cover)>,
    reguli: OnceLock<Result<Vec<ClassifiedRegulus>>>,
}

impl World {
    pub fn build(tower: FieldTower) -> World {
        let ctx = BbContext::new(tower);
        let subplane = build_subplane(&ctx);
        let splash = subplane.as_ref().map_err(Clone::clone).and_then(|b| splash_of(&ctx, b));
        let nine = subplane
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|b| nine_quadrics(ctx.tower(), b));
        let covers = splash
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|s| covers_of_splash(&ctx, s));
        World {
            ctx,
            subplane,
            splash,
            nine,
            covers,
            reguli: OnceLock::new(),
        }
    }

    pub fn q(&self) -> u32 {
        self.ctx.q()
    }

    /// Every regulus of splash planes, classified; computed once.
    pub fn classified_reguli(&self) -> &Result<Vec<ClassifiedRegulus>> {
        self.reguli.get_or_init(|| {
            let s = self.splash.as_ref().map_err(Clone::clone)?;
            let (tc, cc) = self.covers.as_ref().map_err(Clone::clone)?;
            let f = self.ctx.tower().base();
            let sets = enumerate_splash_reguli(&self.ctx, &s.labels)?;
            sets.into_par_iter()
                .map(|labels| {
                    let regulus = self.ctx.subline_to_regulus(&labels)?;
                    let class = classify_subline_regulus(f, &regulus, tc, cc).map_err(|e| e.to_string());
                    Ok(ClassifiedRegulus {
                        labels,
                        regulus,
                        class,
                    })
                })
                .collect()
        })
    }
}
