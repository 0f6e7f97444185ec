use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::dump::label_code;
use super::{Counts, Recorder, Suite, World};
use crate::bruckbose::{
    conjugate, epsilon, extend, family_plane, is_special_cubic, label_of_vec, transversal_search, Label,
    TwistedCubic,
};
use crate::covers::{
    beta, carrier_characterisation, check_marked_points, covers_of_splash, cover_axioms, cover_line_regulus,
    disjoint_splashes, dual_conic_seed, family_of, family_transversals, is_cover_special_conic,
    replace_hyperreguli, theta_sigma, Family, Selector, SublineClass,
};
use crate::gf::{is_primitive_cubic, Field, Fq, Fq3};
use crate::pg::{is_regular_spread, linalg, point_count, Param, Subspace};
use crate::subplane::{
    kernel_labels, pencil_regulus, quadric_scan, tangent_cover_label, tangent_plane, tangent_plane_via_cubics, trace,
};

/// Seed of the sampled sublines in the spread suite.
const SAMPLE_SEED: u64 = 0x5eed_0002;
/// Sampled affine sublines per sampled property.
const SAMPLE_SIZE: usize = 100;
/// Largest q for which the transversal search runs.
const SEARCH_MAX_Q: u32 = 5;

fn need<T>(r: &crate::Result<T>) -> std::result::Result<&T, String> {
    r.as_ref().map_err(|e| format!("construction failed: {e}"))
}

fn first_failure<T: Sync>(items: &[T], ok: impl Fn(&T) -> bool + Sync) -> Option<usize> {
    items.par_iter().position_first(|x| !ok(x))
}

pub(super) fn run_suite(w: &World, s: Suite, rec: &mut Recorder) {
    match s {
        Suite::Fields => fields(w, rec),
        Suite::Spread => spread(w, rec),
        Suite::Subplane => subplane(w, rec),
        Suite::Quadrics => quadrics(w, rec),
        Suite::Tangents => tangents(w, rec),
        Suite::Covers => covers(w, rec),
        Suite::Transversals => transversals(w, rec),
        Suite::Carriers => carriers(w, rec),
        Suite::Disjoint => disjoint(w, rec),
        Suite::Sublines => sublines(w, rec),
        Suite::SpecialConics => special_conics(w, rec),
        Suite::Replacement => replacement(w, rec),
    }
}

fn fields(w: &World, rec: &mut Recorder) {
    let t = w.ctx.tower();
    let e = t.ext();
    let f = t.base();
    let all: Vec<Fq3> = e.elements().collect();
    let nonzero: Vec<Fq3> = all.iter().copied().filter(|&a| a != Fq3(0)).collect();

    rec.check("fields.primitive", "τ generates GF(q³)*", |c| {
        let powers: HashSet<Fq3> = (0..nonzero.len() as i64).map(|i| e.tau_pow(i)).collect();
        let ok = c.pair("tau_order", nonzero.len(), powers.len());
        if !is_primitive_cubic(f, &e.coeffs()) || !ok {
            return Err(format!("{} is not primitive", t.token()));
        }
        Ok(())
    });

    rec.check("fields.mult-matrix", "M_α[β] = [αβ] and [α+β] = [α]+[β]", |c| {
        c.set("pairs", all.len() * all.len());
        let bad = first_failure(&all, |&a| {
            let m: Vec<Vec<Fq>> = e.mult_matrix(a).iter().map(|r| r.to_vec()).collect();
            all.iter().all(|&b| {
                linalg::mat_vec(f, &m, &e.components(b)) == e.components(e.mul(a, b)).to_vec()
                    && e.components(e.add(a, b))
                        == [0, 1, 2].map(|i| f.add(e.components(a)[i], e.components(b)[i]))
            })
        });
        bad.map_or(Ok(()), |i| Err(format!("fails for α = {}", label_code(e, Param::At(all[i])))))
    });

    rec.check("fields.direct-vs-table", "table and direct multiplication agree", |c| {
        c.set("pairs", all.len() * all.len());
        let bad = first_failure(&all, |&a| all.iter().all(|&b| e.mul(a, b) == e.mul_direct(a, b)));
        bad.map_or(Ok(()), |i| Err(format!("fails for α = {}", label_code(e, Param::At(all[i])))))
    });

    rec.check("fields.frobenius", "x ↦ x^q is an automorphism of order 3 computed by N", |c| {
        c.set("pairs", all.len() * all.len());
        let q = t.q() as i64;
        let n: Vec<Vec<Fq>> = e.frobenius_matrix().iter().map(|r| r.to_vec()).collect();
        let bad = first_failure(&all, |&a| {
            let fa = e.frobenius(a);
            let by_pow = if a == Fq3(0) { Fq3(0) } else { e.pow(a, q).unwrap() };
            fa == by_pow
                && linalg::mat_vec(f, &n, &e.components(a)) == e.components(fa).to_vec()
                && e.frobenius_pow(a, 3) == a
                && all.iter().all(|&b| {
                    e.frobenius(e.add(a, b)) == e.add(fa, e.frobenius(b))
                        && e.frobenius(e.mul(a, b)) == e.mul(fa, e.frobenius(b))
                })
        });
        bad.map_or(Ok(()), |i| Err(format!("fails for α = {}", label_code(e, Param::At(all[i])))))
    });

    rec.check("fields.norm", "the norm is multiplicative and onto GF(q)*", |c| {
        let image: BTreeSet<Fq> = nonzero.iter().map(|&a| e.norm(a)).collect();
        let onto = c.pair("image", f.order() - 1, image.len()) && !image.contains(&f.zero());
        let bad = first_failure(&nonzero, |&a| {
            nonzero.iter().all(|&b| e.norm(e.mul(a, b)) == f.mul(e.norm(a), e.norm(b)))
        });
        if !onto {
            return Err("norm is not onto GF(q)*".into());
        }
        bad.map_or(Ok(()), |i| Err(format!("fails for α = {}", label_code(e, Param::At(nonzero[i])))))
    });

    rec.check("fields.frame", "A = (p0,p1,p2) satisfies U_i[α] = α^{q^i} A^{q^i}", |c| {
        let fr = w.ctx.frame();
        let tq = e.frobenius(e.tau());
        let tq2 = e.frobenius(tq);
        if fr.p[0] != e.neg(e.mul(tq, tq2)) || fr.p[1] != e.add(tq, tq2) {
            return Err("p0 or p1 differs from its conjugate form".into());
        }
        c.set("elements", all.len());
        for i in 0..3 {
            let u: Vec<Vec<Fq3>> = fr.u_matrix(t, i).iter().map(|r| r.to_vec()).collect();
            let a = fr.a_conj(t, i);
            for &x in &all {
                let v: Vec<Fq3> = e.components(x).iter().map(|&y| e.embed(y)).collect();
                let s = e.frobenius_pow(x, i);
                if linalg::mat_vec(e, &u, &v) != a.map(|ai| e.mul(s, ai)).to_vec() {
                    return Err(format!("U_{i} fails at α = {}", label_code(e, Param::At(x))));
                }
            }
        }
        Ok(())
    });
}

fn spread(w: &World, rec: &mut Recorder) {
    let ctx = &w.ctx;
    let t = ctx.tower();
    let e = t.ext();
    let f = t.base();
    let q = t.q() as usize;

    rec.check("spread.partition", "the planes [S_k] partition Σ∞", |c| {
        let mut seen = HashSet::new();
        let mut total = 0;
        for (k, p) in ctx.labels().iter().zip(ctx.spread()) {
            for pt in p.points(f) {
                total += 1;
                if !seen.insert(pt) {
                    return Err(format!("plane {} overlaps an earlier plane", label_code(e, *k)));
                }
            }
        }
        let planes = c.pair("planes", q * q * q + 1, ctx.spread().len());
        let points = c.pair("points", point_count(q, 5), seen.len());
        c.set("points_listed", total);
        (planes && points).then_some(()).ok_or_else(|| "point count mismatch".into())
    });

    rec.check("spread.labels", "every point of [S_k] recovers the label k", |c| {
        c.set("planes", ctx.labels().len());
        let idx: Vec<usize> = (0..ctx.labels().len()).collect();
        let bad = first_failure(&idx, |&i| {
            let k = ctx.labels()[i];
            ctx.spread()[i]
                .points(f)
                .iter()
                .all(|p| ctx.label_of_point(p.coords()) == Ok(k))
        });
        bad.map_or(Ok(()), |i| Err(format!("plane {}", label_code(e, ctx.labels()[i]))))
    });

    rec.check("spread.regular", "the spread is regular", |c| {
        let r = is_regular_spread(f, ctx.spread()).map_err(|e| e.to_string())?;
        c.set("triples_tested", r.triples_tested);
        r.regular
            .then_some(())
            .ok_or_else(|| format!("regulus of triple {:?} leaves the spread", r.witness))
    });

    rec.check("spread.marked-points", "g_S ∩ [S_k]* = kA1 + A2", |c| {
        let g = ctx.spread_transversals();
        c.set("planes", ctx.labels().len());
        for (&k, p) in ctx.labels().iter().zip(ctx.spread()) {
            let m = ctx.spread_marked_point(k);
            let ext = extend(t, p);
            if !g[0].contains(e, &m) || !ext.contains(e, &m) || g.iter().any(|l| l.meet(e, &ext).dim() != 0) {
                return Err(format!("plane {}", label_code(e, k)));
            }
        }
        Ok(())
    });

    rec.check("spread.transversals-skew", "the three spread transversals are skew and not over GF(q)", |_| {
        let g = ctx.spread_transversals();
        for i in 0..3 {
            for j in i + 1..3 {
                if g[i].meets(e, &g[j]) {
                    return Err(format!("g^{i} meets g^{j}"));
                }
            }
        }
        (conjugate(t, &g[2], 1) == g[0])
            .then_some(())
            .ok_or_else(|| "conjugation does not close the orbit".into())
    });

    rec.check("spread.reguli", "sublines of ℓ∞ give reguli of the spread and back", |c| {
        let (zero, inf) = (Param::At(Fq3(0)), Param::Infinity);
        let mut n = 0;
        for &k in ctx.labels() {
            if k == zero || k == inf {
                continue;
            }
            let labels = crate::bruckbose::subline_labels(t, zero, inf, k).map_err(|e| e.to_string())?;
            let r = ctx.subline_to_regulus(&labels).map_err(|e| e.to_string())?;
            let mut want = labels.clone();
            want.sort();
            if ctx.regulus_labels(&r).map_err(|e| e.to_string())? != want {
                return Err(format!("subline through {}", label_code(e, k)));
            }
            n += 1;
        }
        c.set("sublines", n);
        Ok(())
    });

    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let rand_elem = |rng: &mut ChaCha8Rng| e.elem(rng.gen_range(0..e.order()));

    rec.check("spread.affine-lines", "affine sublines through a point of ℓ∞ are lines of PG(6,q)", |c| {
        let cases: Vec<([Fq3; 3], [Fq3; 3])> = if q == 2 {
            let mut v = Vec::new();
            for a0 in e.elements() {
                for a1 in e.elements() {
                    for d0 in e.elements() {
                        for d1 in e.elements().filter(|&d1| d0 != Fq3(0) || d1 != Fq3(0)) {
                            v.push(([a0, a1, Fq3(1)], [d0, d1, Fq3(0)]));
                        }
                    }
                }
            }
            v
        } else {
            (0..SAMPLE_SIZE)
                .map(|_| loop {
                    let a = [rand_elem(&mut rng), rand_elem(&mut rng), Fq3(1)];
                    let d = [rand_elem(&mut rng), rand_elem(&mut rng), Fq3(0)];
                    if d[0] != Fq3(0) || d[1] != Fq3(0) {
                        break (a, d);
                    }
                })
                .collect()
        };
        c.set("sublines", cases.len());
        let bad = first_failure(&cases, |(a, d)| {
            let pts: Vec<Vec<Fq>> = f
                .elements()
                .map(|s| {
                    let p = [0, 1, 2].map(|i| e.add(a[i], e.mul(e.embed(s), d[i])));
                    epsilon(t, p).unwrap().into_coords()
                })
                .collect();
            let line = Subspace::new(f, 7, pts);
            let Ok(k) = label_of_vec(e, [d[0], d[1]]) else { return false };
            let tr = trace(f, &line);
            line.dim() == 1 && tr.dim() == 0 && ctx.plane(k).contains_subspace(f, &tr)
        });
        bad.map_or(Ok(()), |i| Err(format!("subline {i} of the list")))
    });

    rec.check("spread.special-cubics", "affine sublines missing ℓ∞ give S-special twisted cubics", |c| {
        let g = ctx.spread_transversals();
        let mut tested = 0;
        let mut draws = 0;
        while tested < SAMPLE_SIZE && draws < 20 * SAMPLE_SIZE {
            draws += 1;
            let a = [rand_elem(&mut rng), rand_elem(&mut rng), Fq3(1)];
            let b = [rand_elem(&mut rng), rand_elem(&mut rng), rand_elem(&mut rng)];
            let cubic = match TwistedCubic::from_subline(t, a, b) {
                Ok(cu) => cu,
                Err(_) => continue,
            };
            tested += 1;
            let pts = cubic.points(t).map_err(|e| e.to_string())?;
            for (s, p) in crate::pg::projective_line(f).into_iter().zip(&pts) {
                let want = match s {
                    Param::Infinity => b,
                    Param::At(s) => [0, 1, 2].map(|i| e.add(a[i], e.mul(e.embed(s), b[i]))),
                };
                if epsilon(t, want).map_err(|e| e.to_string())? != *p {
                    return Err(format!("cubic disagrees with ε at draw {draws}"));
                }
            }
            let span = cubic.span(f);
            let about = span.dim() == 3 && span.contains_subspace(f, &ctx.plane(cubic.label).append_zero(f));
            let sc = is_special_cubic(t, &cubic, &g);
            if !about || !sc.special {
                return Err(format!("draw {draws}: 3-space {about}, missed {:?}", sc.missed));
            }
        }
        c.set("cubics", tested);
        Ok(())
    });
}

fn subplane(w: &World, rec: &mut Recorder) {
    let t = w.ctx.tower();
    let e = t.ext();
    let q = t.q() as usize;
    let n = q * q + q + 1;

    rec.check("subplane.incidence", "𝓑 is an order-q-subplane exterior to ℓ∞", |c| {
        let b = need(&w.subplane)?;
        let pts = c.pair("points", n, b.points.len());
        let lines = c.pair("lines", n, b.lines.len());
        let per = b.lines_through.iter().chain(&b.points_on).all(|v| v.len() == q + 1);
        let ext = b.points.iter().all(|p| p.coords[2] != Fq3(0));
        (pts && lines && per && ext).then_some(()).ok_or_else(|| "incidence counts".into())
    });

    rec.check("subplane.splash", "the splash is {(τ^{(q−1)i},1,0)} with carriers (1,0,0), (0,1,0)", |c| {
        let s = need(&w.splash)?;
        let closed: BTreeSet<Label> = (0..n as i64)
            .map(|i| Param::At(e.tau_pow((q as i64 - 1) * i)))
            .collect();
        let got: BTreeSet<Label> = s.labels.iter().copied().collect();
        c.pair("labels", n, got.len());
        if got != closed {
            return Err("splash differs from the closed form".into());
        }
        if s.carriers != [Param::Infinity, Param::At(Fq3(0))] {
            return Err("carriers are not ∞ and 0".into());
        }
        Ok(())
    });

    rec.check("subplane.kernel", "𝒦 = {k : k^{q²+q+1} = 1} = {x^{q−1}}", |c| {
        let k: BTreeSet<Label> = kernel_labels(t, 0).into_iter().collect();
        let by_norm: BTreeSet<Label> = e
            .elements()
            .filter(|&a| a != Fq3(0) && e.pow(a, n as i64).unwrap() == e.one())
            .map(Param::At)
            .collect();
        let by_image: BTreeSet<Label> = e
            .elements()
            .filter(|&a| a != Fq3(0))
            .map(|a| Param::At(e.pow(a, q as i64 - 1).unwrap()))
            .collect();
        c.pair("kernel", n, by_norm.len());
        (k == by_norm && k == by_image)
            .then_some(())
            .ok_or_else(|| "the three descriptions differ".into())
    });
}

fn quadrics(w: &World, rec: &mut Recorder) {
    let t = w.ctx.tower();
    let f = t.base();
    let q = t.q() as usize;

    rec.check("quadrics.forms", "nine distinct quadrics, the (X,Y) triple duplicating (Y,X)", |c| {
        let nine = need(&w.nine)?;
        c.pair("forms", 9, nine.forms.len())
            .then_some(())
            .ok_or_else(|| "wrong number of forms".into())
    });

    let scan = w.nine.as_ref().ok().map(|nine| quadric_scan(t, nine));

    rec.check("quadrics.zero-set", "the affine common zeros of the nine quadrics are [𝓑]", |c| {
        let b = need(&w.subplane)?;
        let scan = scan.as_ref().ok_or("quadrics unavailable")?;
        c.pair("affine_scanned", q.pow(6), scan.affine_scanned);
        c.pair("zeros", q * q + q + 1, scan.affine_zeros.len());
        let mut want: Vec<_> = b.points.iter().map(|p| p.bb.clone()).collect();
        want.sort();
        (scan.affine_zeros == want)
            .then_some(())
            .ok_or_else(|| "zero set differs from [𝓑]".into())
    });

    rec.check("quadrics.at-infinity", "common zeros on Σ∞ (reported only)", |c| {
        let scan = scan.as_ref().ok_or("quadrics unavailable")?;
        c.set("points_scanned", point_count(q, 5));
        c.set("zeros", scan.infinity_zeros);
        Ok(())
    });
    let _ = f;
}

fn tangents(w: &World, rec: &mut Recorder) {
    let t = w.ctx.tower();
    let f = t.base();
    let e = t.ext();
    let q = t.q() as usize;

    rec.check("tangents.routes-agree", "polar and twisted-cubic tangent planes coincide", |c| {
        let b = need(&w.subplane)?;
        let nine = need(&w.nine)?;
        let idx: Vec<usize> = (0..b.points.len()).collect();
        let res: Vec<Result<(bool, usize), String>> = idx
            .par_iter()
            .map(|&i| {
                let a = tangent_plane(f, nine, &b.points[i].bb).map_err(|e| format!("point {i}: {e}"))?;
                let bc = tangent_plane_via_cubics(t, b, i).map_err(|e| format!("point {i}: {e}"))?;
                Ok((a.plane == bc.plane, a.omitted.len()))
            })
            .collect();
        let mut omitted = 0;
        for (i, r) in res.into_iter().enumerate() {
            let (same, om) = r?;
            omitted += om;
            if !same {
                return Err(format!("point {i}"));
            }
        }
        c.set("points", idx.len());
        c.set("vanishing_polars", omitted);
        Ok(())
    });

    rec.check("tangents.cover-bijection", "traces lie in distinct tangent-cover planes", |c| {
        let b = need(&w.subplane)?;
        let nine = need(&w.nine)?;
        let s = need(&w.splash)?;
        let mut labels = BTreeSet::new();
        for (i, p) in b.points.iter().enumerate() {
            let tp = tangent_plane(f, nine, &p.bb).map_err(|e| format!("point {i}: {e}"))?;
            let k = tangent_cover_label(t, &trace(f, &tp.plane)).map_err(|e| format!("point {i}: {e}"))?;
            if !s.contains(k) {
                return Err(format!("point {i} gives label {} outside the splash", label_code(e, k)));
            }
            labels.insert(k);
        }
        c.pair("distinct_planes", q * q + q + 1, labels.len())
            .then_some(())
            .ok_or_else(|| "two points share a tangent-cover plane".into())
    });
}

fn covers(w: &World, rec: &mut Recorder) {
    let ctx = &w.ctx;
    let t = ctx.tower();
    let f = t.base();
    let e = t.ext();
    let q = t.q() as usize;
    let n = q * q + q + 1;

    rec.check("covers.beta", "β has order 3 and maps 𝕊 → 𝕋 → ℂ → 𝕊", |c| {
        let s = need(&w.splash)?;
        let b = beta(t);
        if b.is_identity(f) || !b.compose(f, &b).compose(f, &b).is_identity(f) {
            return Err("β does not have order 3".into());
        }
        let fams = Family::ALL.map(|k| family_of(ctx, s, k));
        for i in 0..3 {
            let next = &fams[(i + 1) % 3];
            for (p, r) in fams[i].planes.iter().zip(&next.planes) {
                if b.apply_subspace(f, p) != *r {
                    return Err(format!("β({}) is not the matching {} plane", fams[i].kind.name(), next.kind.name()));
                }
            }
        }
        c.set("planes", 3 * n);
        Ok(())
    });

    rec.check("covers.axioms", "𝕊, 𝕋, ℂ cover the same points; disjoint within, single points across", |c| {
        let s = need(&w.splash)?;
        let fams = Family::ALL.map(|k| family_of(ctx, s, k));
        let ax = cover_axioms(t, &[&fams[0], &fams[1], &fams[2]]);
        for (fam, &size) in Family::ALL.iter().zip(&ax.union_sizes) {
            c.pair(&format!("union_{}", fam.name()), n * n, size);
        }
        let sizes = ax.union_sizes.iter().all(|&x| x == n * n);
        if !ax.holds() || !sizes {
            let wit = ax.witness.map(|((a, k), (b, j))| {
                format!("{}_{} and {}_{}", a.name(), label_code(e, k), b.name(), label_code(e, j))
            });
            return Err(format!("axioms fail at {}", wit.unwrap_or_else(|| "union sizes".into())));
        }
        Ok(())
    });

    rec.check("covers.carriers-shared", "[S_0] = [T_0] = [C_0] and [S_∞] = [T_∞] = [C_∞]", |_| {
        for k in [Param::At(Fq3(0)), Param::Infinity] {
            let planes: Vec<_> = (0..3).map(|s| family_plane(t, k, s)).collect();
            if planes[0] != planes[1] || planes[0] != planes[2] {
                return Err(format!("carrier {}", label_code(e, k)));
            }
        }
        Ok(())
    });

    rec.check("covers.theta", "Θ fixes the spread and is transitive on each cover", |c| {
        let s = need(&w.splash)?;
        let h = theta_sigma(t);
        for (&k, p) in ctx.labels().iter().zip(ctx.spread()) {
            if h.apply_subspace(f, p) != *p {
                return Err(format!("Θ moves [S_{}]", label_code(e, k)));
            }
        }
        let qi = t.q() as i64;
        let shift = |fam: u32| match fam {
            1 => e.tau_pow(1 - qi * qi),
            _ => e.tau_pow(1 - qi),
        };
        for fam in [1u32, 2] {
            for &k in &s.labels {
                let Param::At(kv) = k else { continue };
                let img = h.apply_subspace(f, &family_plane(t, k, fam));
                if img != family_plane(t, Param::At(e.mul(shift(fam), kv)), fam) {
                    return Err(format!("label map fails on family {fam} at {}", label_code(e, k)));
                }
            }
            let start = family_plane(t, Param::At(Fq3(1)), fam);
            let mut cur = h.apply_subspace(f, &start);
            let mut len = 1;
            while cur != start && len <= n {
                cur = h.apply_subspace(f, &cur);
                len += 1;
            }
            let name = if fam == 1 { "orbit_T" } else { "orbit_C" };
            if !c.pair(name, n, len) {
                return Err(format!("{name} has length {len}"));
            }
        }
        c.set("spread_planes_fixed", ctx.spread().len());
        Ok(())
    });

    rec.check("covers.marked-points", "closed-form transversal points lie in every extended plane", |c| {
        let s = need(&w.splash)?;
        let mut checked = 0;
        for kind in Family::ALL {
            let cov = family_of(ctx, s, kind);
            for (k, ok) in check_marked_points(ctx, &cov) {
                checked += 1;
                if !ok {
                    return Err(format!("{}_{}", kind.name(), label_code(e, k)));
                }
            }
        }
        c.pair("planes", 3 * n, checked);
        Ok(())
    });

    rec.check("covers.q2-conic-point", "η = τ⁶ and η^{1−q} = τ for x³ + x + 1 over GF(2)", |c| {
        if q != 2 || e.coeffs() != [Fq(1), Fq(1), Fq(0)] {
            c.set("skipped", 1);
            return Ok(());
        }
        let eta = ctx.frame().eta;
        (eta == e.tau_pow(6) && e.pow(eta, -1).unwrap() == e.tau())
            .then_some(())
            .ok_or_else(|| "η ≠ τ⁶".into())
    });
}

fn nine_lines(w: &World) -> Vec<Subspace<Fq3>> {
    Family::ALL
        .iter()
        .flat_map(|&k| family_transversals(&w.ctx, k))
        .collect()
}

fn transversals(w: &World, rec: &mut Recorder) {
    let ctx = &w.ctx;
    let t = ctx.tower();
    let e = t.ext();

    rec.check("transversals.nine-distinct", "the nine transversals are distinct conjugate triples", |c| {
        let lines = nine_lines(w);
        let set: BTreeSet<_> = lines.iter().collect();
        c.pair("lines", 9, set.len());
        if set.len() != 9 {
            return Err("two transversals coincide".into());
        }
        for (fam, tri) in Family::ALL.iter().zip(lines.chunks(3)) {
            for i in 0..3 {
                if conjugate(t, &tri[i], 1) != tri[(i + 1) % 3] || tri[i].meets(e, &tri[(i + 1) % 3]) {
                    return Err(format!("family {} conjugate {i}", fam.name()));
                }
            }
        }
        Ok(())
    });

    for kind in Family::ALL {
        let id = format!("transversals.search-{}", kind.name());
        rec.check(&id, "exactly three lines meet every extended plane of the family", |c| {
            if t.q() > SEARCH_MAX_Q {
                c.set("skipped", 1);
                return Ok(());
            }
            let s = need(&w.splash)?;
            let planes: Vec<Subspace<Fq3>> = family_of(ctx, s, kind).planes.iter().map(|p| extend(t, p)).collect();
            let found = transversal_search(t, &planes).map_err(|e| e.to_string())?;
            let mut want = family_transversals(ctx, kind).to_vec();
            want.sort();
            c.pair("lines", 3, found.len());
            (found == want)
                .then_some(())
                .ok_or_else(|| "search result differs from the closed form".into())
        });
    }
}

fn carriers(w: &World, rec: &mut Recorder) {
    let ctx = &w.ctx;
    let t = ctx.tower();
    let e = t.ext();

    rec.check("carriers.nine", "only the carriers meet all nine transversals", |c| {
        let got = carrier_characterisation(ctx, &nine_lines(w));
        c.set("spread_planes", ctx.labels().len());
        c.pair("meeting_all", 2, got.len());
        let want = vec![Param::At(Fq3(0)), Param::Infinity];
        (got == want).then_some(()).ok_or_else(|| {
            let l: Vec<String> = got.iter().map(|&k| label_code(e, k)).collect();
            format!("planes meeting all nine: {}", l.join(" "))
        })
    });

    rec.check("carriers.spread-lines", "every spread plane meets g_S and its conjugates", |c| {
        let got = carrier_characterisation(ctx, &ctx.spread_transversals());
        c.pair("meeting", ctx.labels().len(), got.len())
            .then_some(())
            .ok_or_else(|| "a spread plane misses a spread transversal".into())
    });

    rec.check("carriers.splash-misses-gT", "no non-carrier splash plane meets g_𝕋", |c| {
        let s = need(&w.splash)?;
        let g = &family_transversals(ctx, Family::Tangent)[0];
        let hits: Vec<Label> = s
            .labels
            .iter()
            .zip(&s.planes)
            .filter(|(_, p)| g.meets(e, &extend(t, p)))
            .map(|(&k, _)| k)
            .collect();
        c.pair("meeting", 0, hits.len());
        hits.first()
            .map_or(Ok(()), |&k| Err(format!("[S_{}] meets g_T", label_code(e, k))))
    });
}

fn disjoint(w: &World, rec: &mut Recorder) {
    let ctx = &w.ctx;
    let t = ctx.tower();
    let e = t.ext();
    let q = t.q() as usize;
    let splashes = disjoint_splashes(ctx);

    rec.check("disjoint.partition", "the q−1 coset splashes and the carriers partition ℓ∞", |c| {
        let s = splashes.as_ref().map_err(|e| e.to_string())?;
        c.pair("splashes", q - 1, s.len());
        let labels: usize = s.iter().map(|x| x.labels.len()).sum::<usize>() + 2;
        c.pair("labels", q * q * q + 1, labels)
            .then_some(())
            .ok_or_else(|| "label count".into())
    });

    rec.check("disjoint.common-transversals", "every coset splash and its covers share the transversals", |c| {
        let s = splashes.as_ref().map_err(|e| e.to_string())?;
        let mut planes = 0;
        for sp in s {
            covers_of_splash(ctx, sp).map_err(|err| format!("coset {}: {err}", sp.coset))?;
            for kind in Family::ALL {
                let cov = family_of(ctx, sp, kind);
                for (k, ok) in check_marked_points(ctx, &cov) {
                    planes += 1;
                    if !ok {
                        return Err(format!("coset {} {}_{}", sp.coset, kind.name(), label_code(e, k)));
                    }
                }
            }
        }
        c.set("planes", planes);
        Ok(())
    });
}

fn class_counts(c: &mut Counts, all: &[super::ClassifiedRegulus]) -> (usize, usize, usize) {
    let pencil = all
        .iter()
        .filter(|r| matches!(r.class, Ok((SublineClass::Pencil, _))))
        .count();
    let dual = all
        .iter()
        .filter(|r| matches!(r.class, Ok((SublineClass::DualConic, _))))
        .count();
    let other = all.len() - pencil - dual;
    c.set("pencil", pencil);
    c.set("dual_conic", dual);
    c.set("unclassified", other);
    (pencil, dual, other)
}

fn sublines(w: &World, rec: &mut Recorder) {
    let ctx = &w.ctx;
    let t = ctx.tower();
    let f = t.base();
    let q = t.q() as usize;
    let n = q * q + q + 1;

    rec.check("sublines.count", "the splash contains 2(q²+q+1) sublines", |c| {
        let all = w.classified_reguli().as_ref().map_err(|e| e.to_string())?;
        c.pair("reguli", 2 * n, all.len())
            .then_some(())
            .ok_or_else(|| format!("{} sublines in the splash", all.len()))
    });

    rec.check("sublines.classification", "q²+q+1 pencil and q²+q+1 dual-conic reguli, uniformly", |c| {
        let all = w.classified_reguli().as_ref().map_err(|e| e.to_string())?;
        let (p, d, o) = class_counts(c, all);
        if o > 0 {
            let bad = all.iter().find(|r| r.class.is_err()).unwrap();
            let l: Vec<String> = bad.labels.iter().map(|&k| label_code(t.ext(), k)).collect();
            return Err(format!("{} ({})", bad.class.as_ref().unwrap_err(), l.join(" ")));
        }
        (p == n && d == n)
            .then_some(())
            .ok_or_else(|| format!("{p} pencil and {d} dual-conic"))
    });

    rec.check("sublines.pencils", "the pencil at every point of 𝓑 is a Pencil regulus", |c| {
        let b = need(&w.subplane)?;
        let (tc, cc) = need(&w.covers)?;
        let mut seen = BTreeSet::new();
        for i in 0..b.points.len() {
            let (_, r) = pencil_regulus(ctx, b, i).map_err(|e| e.to_string())?;
            match crate::covers::classify_subline_regulus(f, &r, tc, cc) {
                Ok((SublineClass::Pencil, _)) => {}
                other => return Err(format!("point {i}: {other:?}")),
            }
            seen.insert(r.plane_set());
        }
        c.pair("distinct_pencils", n, seen.len())
            .then_some(())
            .ok_or_else(|| "two points share a pencil regulus".into())
    });

    rec.check("sublines.dual-seed", "u = β(t_1) gives a DualConic regulus", |c| {
        let b = need(&w.subplane)?;
        let nine = need(&w.nine)?;
        let (tc, cc) = need(&w.covers)?;
        let u = dual_conic_seed(ctx, b, nine, 0).map_err(|e| e.to_string())?;
        let (labels, r) = crate::covers::dual_conic_regulus(ctx, &u, cc).map_err(|e| e.to_string())?;
        c.pair("planes", q + 1, labels.len());
        match crate::covers::classify_subline_regulus(f, &r, tc, cc) {
            Ok((SublineClass::DualConic, _)) => Ok(()),
            other => Err(format!("{other:?}")),
        }
    });

    rec.check("sublines.cover-lines", "each line of [T_1] lies on a pencil regulus, each line of [C_1] on a dual-conic one", |c| {
        let (tc, cc) = need(&w.covers)?;
        for (cov, want, name) in [(tc, SublineClass::Pencil, "T"), (cc, SublineClass::DualConic, "C")] {
            let pi = cov.plane(Param::At(Fq3(1))).ok_or("label 1 missing")?;
            let lines = dual_lines(f, pi);
            let mut reguli = BTreeSet::new();
            for (i, u) in lines.iter().enumerate() {
                let (_, r) = cover_line_regulus(ctx, u, cov).map_err(|e| format!("{name} line {i}: {e}"))?;
                match crate::covers::classify_subline_regulus(f, &r, tc, cc) {
                    Ok((cl, _)) if cl == want => {}
                    other => return Err(format!("{name} line {i}: {other:?}")),
                }
                reguli.insert(r.plane_set());
            }
            if !c.pair(&format!("reguli_{name}"), n, reguli.len()) {
                return Err(format!("{name} lines give {} reguli", reguli.len()));
            }
        }
        Ok(())
    });
}

/// The lines of a plane of PG(5,q).
fn dual_lines(f: &impl Field<Elem = Fq>, pi: &Subspace<Fq>) -> Vec<Subspace<Fq>> {
    let basis = pi.rows();
    Subspace::whole(f, 3)
        .points(f)
        .iter()
        .map(|h| {
            let ker = linalg::null_space(f, &[h.coords().to_vec()], 3);
            let rows = ker
                .iter()
                .map(|k| {
                    (0..3).fold(vec![f.zero(); pi.len()], |acc, i| {
                        linalg::add_vec(f, &acc, &linalg::scale(f, k[i], &basis[i]))
                    })
                })
                .collect();
            Subspace::new(f, pi.len(), rows)
        })
        .collect()
}

fn special_conics(w: &World, rec: &mut Recorder) {
    let t = w.ctx.tower();

    struct Tally {
        tested: usize,
        special: usize,
        first_bad: Option<String>,
    }
    let tally = |class: SublineClass, own: bool| -> Result<Tally, String> {
        let all = w.classified_reguli().as_ref().map_err(|e| e.to_string())?;
        let (tc, cc) = need(&w.covers)?;
        let (section_cover, lines_cover) = match class {
            SublineClass::Pencil => (cc, if own { cc } else { tc }),
            SublineClass::DualConic => (tc, if own { tc } else { cc }),
        };
        let jobs: Vec<(usize, usize)> = all
            .iter()
            .enumerate()
            .filter(|(_, r)| matches!(r.class, Ok((cl, _)) if cl == class))
            .flat_map(|(i, _)| (0..section_cover.planes.len()).map(move |j| (i, j)))
            .collect();
        let res: Vec<Result<bool, String>> = jobs
            .par_iter()
            .map(|&(i, j)| {
                is_cover_special_conic(t, &all[i].regulus, &section_cover.planes[j], &lines_cover.transversals)
                    .map(|s| s.special)
                    .map_err(|e| format!("regulus {i} plane {j}: {e}"))
            })
            .collect();
        let mut out = Tally {
            tested: jobs.len(),
            special: 0,
            first_bad: None,
        };
        for (r, &(i, j)) in res.into_iter().zip(&jobs) {
            if r? {
                out.special += 1;
            } else if out.first_bad.is_none() {
                out.first_bad = Some(format!("regulus {i}, {}-plane {j}", section_cover.kind.name()));
            }
        }
        Ok(out)
    };

    for (class, id, text) in [
        (SublineClass::Pencil, "special-conics.pencil", "pencil reguli meet ℂ-planes in ℂ-special conics"),
        (SublineClass::DualConic, "special-conics.dual-conic", "dual-conic reguli meet 𝕋-planes in 𝕋-special conics"),
    ] {
        rec.check(id, text, |c| {
            let r = tally(class, true)?;
            c.pair("special", r.tested, r.special);
            if r.tested == 0 {
                return Err("no classified reguli".into());
            }
            r.first_bad.map_or(Ok(()), Err)
        });
    }

    rec.check("special-conics.wrong-cover", "sections tested against the other cover (reported only)", |c| {
        let p = tally(SublineClass::Pencil, false)?;
        let d = tally(SublineClass::DualConic, false)?;
        c.set("pencil_tested", p.tested);
        c.set("pencil_special", p.special);
        c.set("dual_conic_tested", d.tested);
        c.set("dual_conic_special", d.special);
        Ok(())
    });
}

fn replacement(w: &World, rec: &mut Recorder) {
    let ctx = &w.ctx;
    let q = ctx.q() as usize;
    let mut combos: Vec<Vec<Selector>> = vec![Vec::new()];
    for _ in 0..q - 1 {
        combos = combos
            .into_iter()
            .flat_map(|v| {
                Selector::ALL.into_iter().map(move |s| {
                    let mut v = v.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    let results: Vec<_> = combos.par_iter().map(|ch| replace_hyperreguli(ctx, ch)).collect();
    let uniform = |ch: &[Selector]| ch.iter().all(|&s| s == ch[0]);
    let name = |ch: &[Selector]| ch.iter().map(|s| s.name()).collect::<Vec<_>>().join(",");

    rec.check("replacement.uniform", "uniform replacement keeps the spread regular", |c| {
        let mut n = 0;
        for (ch, r) in combos.iter().zip(&results) {
            if !uniform(ch) {
                continue;
            }
            n += 1;
            let r = r.as_ref().map_err(|e| format!("{}: {e}", name(ch)))?;
            if !r.regularity.regular {
                return Err(format!("{} is not regular ({:?})", name(ch), r.regularity.witness));
            }
        }
        c.set("combinations", n);
        Ok(())
    });

    rec.check("replacement.mixed", "mixed replacement gives a non-regular spread", |c| {
        let mut n = 0;
        for (ch, r) in combos.iter().zip(&results) {
            if uniform(ch) {
                continue;
            }
            n += 1;
            let r = r.as_ref().map_err(|e| format!("{}: {e}", name(ch)))?;
            if r.regularity.regular {
                return Err(format!("{} is regular on {} triples", name(ch), r.regularity.triples_tested));
            }
        }
        c.set("combinations", n);
        Ok(())
    });
}
