use std::collections::{HashMap, HashSet};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{PgPoint, Regulus, Subspace};
use crate::error::{Error, Result};
use crate::gf::{Field, Fq};

/// Seed of the pseudorandom triple sample used for q ≥ 4.
pub const REGULARITY_SEED: u64 = 0x5eed_0003;
/// Number of pseudorandom triples added to the structured sample for q ≥ 4.
pub const REGULARITY_RANDOM_TRIPLES: usize = 100;

/// Outcome of a regularity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularity {
    pub regular: bool,
    pub triples_tested: usize,
    /// First triple (in test order) whose regulus leaves the spread.
    pub witness: Option<[usize; 3]>,
}

/// Plane triples tested for a spread of `n` planes over GF(q).
///
/// q ≤ 3: every triple. Otherwise every triple containing planes 0 and 1,
/// plus [`REGULARITY_RANDOM_TRIPLES`] triples drawn with [`REGULARITY_SEED`].
pub fn regularity_triples(q: u32, n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    if q <= 3 {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    out.push([i, j, k]);
                }
            }
        }
        return out;
    }
    out.extend((2..n).map(|k| [0, 1, k]));
    let mut rng = ChaCha8Rng::seed_from_u64(REGULARITY_SEED);
    for _ in 0..REGULARITY_RANDOM_TRIPLES {
        let mut t: Vec<usize> = sample(&mut rng, n, 3).into_vec();
        t.sort_unstable();
        out.push([t[0], t[1], t[2]]);
    }
    out
}

/// Checks that `planes` partition PG(5,q) and tests regularity on the
/// triples of [`regularity_triples`].
pub fn is_regular_spread<F: Field<Elem = Fq>>(f: &F, planes: &[Subspace<Fq>]) -> Result<Regularity> {
    let q = f.order();
    if planes.len() != q * q * q + 1 {
        return Err(Error::NotSpread(format!(
            "{} planes, expected {}",
            planes.len(),
            q * q * q + 1
        )));
    }
    let mut owner: HashMap<PgPoint<Fq>, usize> = HashMap::new();
    for (i, p) in planes.iter().enumerate() {
        if p.len() != 6 || p.dim() != 2 {
            return Err(Error::NotSpread(format!("element {i} is not a plane of PG(5,q)")));
        }
        for pt in p.points(f) {
            if let Some(j) = owner.insert(pt, i) {
                return Err(Error::NotSpread(format!("planes {j} and {i} meet")));
            }
        }
    }
    let set: HashSet<&Subspace<Fq>> = planes.iter().collect();
    let triples = regularity_triples(q as u32, planes.len());
    let witness = triples.par_iter().find_first(|&&[i, j, k]| {
        let r = Regulus::from_three_planes(f, &planes[i], &planes[j], &planes[k])
            .expect("spread planes are disjoint");
        !r.planes().iter().all(|p| set.contains(p))
    });
    Ok(Regularity {
        regular: witness.is_none(),
        triples_tested: triples.len(),
        witness: witness.copied(),
    })
}
