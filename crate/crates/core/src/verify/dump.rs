//! CSV dumps of the constructed objects.
//!
//! Every file starts with `# exsplash q=<q> tower=<token> artifact=<name>`
//! followed by a column header. A GF(q) element is written as its integer
//! code c0 + c1·p + … (coefficients least significant first); a GF(q³)
//! element as `a0:a1:a2`, the GF(q) codes of its coordinates in the basis
//! {1, τ, τ²}; the label ∞ as `inf`. Vectors are space-separated entries.

use std::fmt;
use std::str::FromStr;

use super::World;
use crate::bruckbose::Label;
use crate::covers::{family_transversals, Family};
use crate::error::{Error, Result};
use crate::gf::{CubicExt, Fq, Fq3};
use crate::pg::{Param, Subspace};
use crate::subplane::{tangent_cover_label, tangent_plane, trace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Artifact {
    Spread,
    Subplane,
    Covers,
    Transversals,
    Quadrics,
    Tangents,
    Classification,
}

impl Artifact {
    pub const ALL: [Artifact; 7] = [
        Artifact::Spread,
        Artifact::Subplane,
        Artifact::Covers,
        Artifact::Transversals,
        Artifact::Quadrics,
        Artifact::Tangents,
        Artifact::Classification,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Artifact::Spread => "spread",
            Artifact::Subplane => "subplane",
            Artifact::Covers => "covers",
            Artifact::Transversals => "transversals",
            Artifact::Quadrics => "quadrics",
            Artifact::Tangents => "tangents",
            Artifact::Classification => "classification",
        }
    }

    pub fn file_name(self) -> String {
        format!("{}.csv", self.name())
    }
}

impl fmt::Display for Artifact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Artifact {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Artifact::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidToken {
                token: s.to_string(),
                reason: "unknown artifact".into(),
            })
    }
}

fn fq(a: Fq) -> String {
    a.0.to_string()
}

pub(crate) fn fq3(e: &CubicExt, a: Fq3) -> String {
    let c = e.components(a);
    format!("{}:{}:{}", c[0].0, c[1].0, c[2].0)
}

pub(crate) fn label_code(e: &CubicExt, k: Label) -> String {
    match k {
        Param::Infinity => "inf".into(),
        Param::At(a) => fq3(e, a),
    }
}

fn vec_fq(v: &[Fq]) -> String {
    v.iter().map(|&a| fq(a)).collect::<Vec<_>>().join(" ")
}

fn vec_fq3(e: &CubicExt, v: &[Fq3]) -> String {
    v.iter().map(|&a| fq3(e, a)).collect::<Vec<_>>().join(" ")
}

fn rows(s: &Subspace<Fq>) -> String {
    s.rows().iter().map(|r| vec_fq(r)).collect::<Vec<_>>().join(",")
}

fn built<T>(r: &Result<T>) -> Result<&T> {
    r.as_ref().map_err(Clone::clone)
}

/// The CSV text of one artifact.
pub fn dump(w: &World, artifact: Artifact) -> Result<String> {
    let ctx = &w.ctx;
    let t = ctx.tower();
    let e = t.ext();
    let f = t.base();
    let mut out = format!(
        "# exsplash q={} tower={} artifact={}\n",
        t.q(),
        t.token(),
        artifact.name()
    );
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    match artifact {
        Artifact::Spread => {
            line("label,row0,row1,row2".into());
            for (&k, p) in ctx.labels().iter().zip(ctx.spread()) {
                line(format!("{},{}", label_code(e, k), rows(p)));
            }
        }
        Artifact::Subplane => {
            let b = built(&w.subplane)?;
            line("index,base,pg2,pg6".into());
            for (i, p) in b.points.iter().enumerate() {
                line(format!(
                    "{i},{},{},{}",
                    vec_fq(&p.base),
                    vec_fq3(e, &p.coords),
                    vec_fq(p.bb.coords())
                ));
            }
        }
        Artifact::Covers => {
            let (tc, cc) = built(&w.covers)?;
            line("family,label,row0,row1,row2".into());
            for cov in [tc, cc] {
                for (&k, p) in cov.labels.iter().zip(&cov.planes) {
                    line(format!("{},{},{}", cov.kind.name(), label_code(e, k), rows(p)));
                }
            }
        }
        Artifact::Transversals => {
            line("family,conjugate,point0,point1".into());
            for kind in Family::ALL {
                for (i, g) in family_transversals(ctx, kind).iter().enumerate() {
                    line(format!(
                        "{},{i},{},{}",
                        kind.name(),
                        vec_fq3(e, &g.rows()[0]),
                        vec_fq3(e, &g.rows()[1])
                    ));
                }
            }
        }
        Artifact::Quadrics => {
            let nine = built(&w.nine)?;
            line("index,pair,component,coeffs".into());
            for (i, (q, tag)) in nine.forms.iter().zip(&nine.tags).enumerate() {
                line(format!(
                    "{i},{}{},{},{}",
                    tag.pair.0,
                    tag.pair.1,
                    tag.component,
                    vec_fq(&q.coeffs)
                ));
            }
        }
        Artifact::Tangents => {
            let b = built(&w.subplane)?;
            let nine = built(&w.nine)?;
            line("point,row0,row1,row2,tangent_label".into());
            for (i, p) in b.points.iter().enumerate() {
                let tp = tangent_plane(f, nine, &p.bb)?;
                let k = tangent_cover_label(t, &trace(f, &tp.plane))?;
                line(format!("{i},{},{}", rows(&tp.plane), label_code(e, k)));
            }
        }
        Artifact::Classification => {
            let all = built(w.classified_reguli())?;
            line("labels,class,witness".into());
            for r in all {
                let labels = r.labels.iter().map(|&k| label_code(e, k)).collect::<Vec<_>>().join(" ");
                match &r.class {
                    Ok((c, wit)) => line(format!("{labels},{},{}", c.name(), label_code(e, *wit))),
                    Err(_) => line(format!("{labels},unclassified,")),
                }
            }
        }
    }
    Ok(out)
}
