use super::{linalg, projective_line, Param, PgPoint, Subspace};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldTower, Fq, Fq3, Scalar};

/// A 2-regulus parametrized as plane(t) = ⟨a_i + t b_i⟩, plane(∞) = ⟨b_i⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regulus<E> {
    a: [Vec<E>; 3],
    b: [Vec<E>; 3],
    planes: Vec<Subspace<E>>,
}

impl<E: Scalar> Regulus<E> {
    /// The unique regulus through three pairwise disjoint planes, with
    /// plane(0) = p1, plane(∞) = p2 and plane(1) = p3.
    pub fn from_three_planes<F: Field<Elem = E>>(
        f: &F,
        p1: &Subspace<E>,
        p2: &Subspace<E>,
        p3: &Subspace<E>,
    ) -> Result<Self> {
        Self::from_basis(f, p1.rows(), p2, p3)
    }

    /// As [`Regulus::from_three_planes`], with an explicit basis of the first plane.
    pub fn from_basis<F: Field<Elem = E>>(
        f: &F,
        basis1: &[Vec<E>],
        p2: &Subspace<E>,
        p3: &Subspace<E>,
    ) -> Result<Self> {
        let p1 = &Subspace::new(f, p2.len(), basis1.to_vec());
        if basis1.len() != 3 {
            return Err(Error::Dimension("plane basis needs three rows".into()));
        }
        for s in [p1, p2, p3] {
            if s.dim() != 2 {
                return Err(Error::Dimension(format!("expected a plane, got dim {}", s.dim())));
            }
        }
        if p1.len() != p2.len() || p1.len() != p3.len() {
            return Err(Error::Dimension("planes in different spaces".into()));
        }
        if p1.meets(f, p2) || p1.meets(f, p3) || p2.meets(f, p3) {
            return Err(Error::NotDisjoint);
        }
        // a_i = c_i - b_i with b_i in p2 and c_i in p3
        let basis: Vec<Vec<E>> = p2.rows().iter().chain(p3.rows()).cloned().collect();
        let mut a = Vec::with_capacity(3);
        let mut b = Vec::with_capacity(3);
        for ai in basis1 {
            let x = linalg::combination(f, &basis, ai).ok_or_else(|| {
                Error::Dimension("first plane is not in the span of the other two".into())
            })?;
            let mut bi = vec![f.zero(); ai.len()];
            for (lam, row) in x[..3].iter().zip(p2.rows()) {
                bi = linalg::sub_vec(f, &bi, &linalg::scale(f, *lam, row));
            }
            a.push(ai.clone());
            b.push(bi);
        }
        let a: [Vec<E>; 3] = a.try_into().unwrap();
        let b: [Vec<E>; 3] = b.try_into().unwrap();
        Ok(Self::from_param(f, a, b))
    }

    fn from_param<F: Field<Elem = E>>(f: &F, a: [Vec<E>; 3], b: [Vec<E>; 3]) -> Self {
        let mut r = Regulus { a, b, planes: Vec::new() };
        r.planes = projective_line(f).into_iter().map(|t| r.plane_at(f, t)).collect();
        r
    }

    pub fn plane_at<F: Field<Elem = E>>(&self, f: &F, t: Param<E>) -> Subspace<E> {
        let len = self.a[0].len();
        let rows = match t {
            Param::Infinity => self.b.to_vec(),
            Param::At(t) => (0..3)
                .map(|i| linalg::add_vec(f, &self.a[i], &linalg::scale(f, t, &self.b[i])))
                .collect(),
        };
        Subspace::new(f, len, rows)
    }

    /// Planes in parameter order: finite values in canonical order, then ∞.
    pub fn planes(&self) -> &[Subspace<E>] {
        &self.planes
    }

    /// The planes as a sorted list, for set comparison.
    pub fn plane_set(&self) -> Vec<Subspace<E>> {
        let mut v = self.planes.clone();
        v.sort();
        v
    }

    pub fn param(&self) -> (&[Vec<E>; 3], &[Vec<E>; 3]) {
        (&self.a, &self.b)
    }

    pub fn contains_plane(&self, p: &Subspace<E>) -> bool {
        self.planes.contains(p)
    }

    /// The ruling line through the point Σλ_i a_i of plane(0).
    pub fn ruling_line<F: Field<Elem = E>>(&self, f: &F, lam: &[E; 3]) -> Subspace<E> {
        let len = self.a[0].len();
        let mut u = vec![f.zero(); len];
        let mut v = vec![f.zero(); len];
        for i in 0..3 {
            u = linalg::add_vec(f, &u, &linalg::scale(f, lam[i], &self.a[i]));
            v = linalg::add_vec(f, &v, &linalg::scale(f, lam[i], &self.b[i]));
        }
        Subspace::new(f, len, vec![u, v])
    }

    /// All |F|²+|F|+1 ruling lines.
    pub fn ruling_lines<F: Field<Elem = E>>(&self, f: &F) -> Vec<Subspace<E>> {
        Subspace::whole(f, 3)
            .points(f)
            .iter()
            .map(|p: &PgPoint<E>| {
                let c = p.coords();
                self.ruling_line(f, &[c[0], c[1], c[2]])
            })
            .collect()
    }
}

/// Re-evaluates the parametrization of a GF(q) regulus over GF(q³) ∪ {∞}.
pub fn extend_regulus(tower: &FieldTower, r: &Regulus<Fq>) -> Regulus<Fq3> {
    let e = tower.ext();
    let lift = |v: &Vec<Fq>| -> Vec<Fq3> { v.iter().map(|&x| e.embed(x)).collect() };
    let a = [lift(&r.a[0]), lift(&r.a[1]), lift(&r.a[2])];
    let b = [lift(&r.b[0]), lift(&r.b[1]), lift(&r.b[2])];
    Regulus::from_param(e, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::BaseField;

    fn unit(f: &BaseField, i: usize) -> Vec<Fq> {
        (0..6).map(|j| if i == j { f.one() } else { f.zero() }).collect()
    }

    fn canonical(f: &BaseField) -> (Subspace<Fq>, Subspace<Fq>, Subspace<Fq>) {
        let p1 = Subspace::new(f, 6, (0..3).map(|i| unit(f, i)).collect());
        let p2 = Subspace::new(f, 6, (3..6).map(|i| unit(f, i)).collect());
        let p3 = Subspace::new(
            f,
            6,
            (0..3).map(|i| linalg::add_vec(f, &unit(f, i), &unit(f, i + 3))).collect(),
        );
        (p1, p2, p3)
    }

    #[test]
    fn canonical_regulus_q2() {
        let f = BaseField::builtin(2).unwrap();
        let (p1, p2, p3) = canonical(&f);
        let r = Regulus::from_three_planes(&f, &p1, &p2, &p3).unwrap();
        assert_eq!(r.planes().len(), 3);
        assert_eq!(r.plane_at(&f, Param::At(f.zero())), p1);
        assert_eq!(r.plane_at(&f, Param::Infinity), p2);
        assert_eq!(r.plane_at(&f, Param::At(f.one())), p3);
        let lines = r.ruling_lines(&f);
        assert_eq!(lines.len(), 7);
        for l in &lines {
            assert_eq!(l.dim(), 1);
            for p in r.planes() {
                assert_eq!(l.meet(&f, p).dim(), 0);
            }
        }
    }

    #[test]
    fn not_disjoint_is_rejected() {
        let f = BaseField::builtin(2).unwrap();
        let (p1, p2, _) = canonical(&f);
        assert_eq!(Regulus::from_three_planes(&f, &p1, &p2, &p1), Err(Error::NotDisjoint));
    }

    #[test]
    fn regulus_is_determined_by_any_three_planes() {
        for q in [2, 3] {
            let f = BaseField::builtin(q).unwrap();
            let (p1, p2, p3) = canonical(&f);
            let r = Regulus::from_three_planes(&f, &p1, &p2, &p3).unwrap();
            let ps = r.planes();
            for i in 0..ps.len() {
                for j in 0..ps.len() {
                    for k in 0..ps.len() {
                        if i == j || j == k || i == k {
                            continue;
                        }
                        let s = Regulus::from_three_planes(&f, &ps[i], &ps[j], &ps[k]).unwrap();
                        assert_eq!(s.plane_set(), r.plane_set());
                    }
                }
            }
        }
    }

    #[test]
    fn basis_choice_does_not_matter() {
        let f = BaseField::builtin(3).unwrap();
        let (p1, p2, p3) = canonical(&f);
        let r = Regulus::from_three_planes(&f, &p1, &p2, &p3).unwrap();
        let e: Vec<Vec<Fq>> = (0..3).map(|i| unit(&f, i)).collect();
        let bases = [
            vec![e[2].clone(), e[0].clone(), e[1].clone()],
            vec![
                linalg::add_vec(&f, &e[0], &e[1]),
                linalg::scale(&f, Fq(2), &e[1]),
                linalg::add_vec(&f, &e[2], &e[0]),
            ],
        ];
        for basis in &bases {
            let s = Regulus::from_basis(&f, basis, &p2, &p3).unwrap();
            assert_eq!(s.plane_set(), r.plane_set());
        }
    }

    #[test]
    fn lines_meeting_three_planes_meet_all() {
        for q in [2, 3] {
            let f = BaseField::builtin(q).unwrap();
            let (p1, p2, p3) = canonical(&f);
            let r = Regulus::from_three_planes(&f, &p1, &p2, &p3).unwrap();
            let ps = r.planes();
            let pts1 = ps[0].points(&f);
            let pts2 = ps[1].points(&f);
            let mut found = 0;
            for a in &pts1 {
                for b in &pts2 {
                    let l = Subspace::new(&f, 6, vec![a.coords().to_vec(), b.coords().to_vec()]);
                    if l.meets(&f, &ps[2]) {
                        found += 1;
                        assert!(ps.iter().all(|p| l.meets(&f, p)));
                    }
                }
            }
            assert_eq!(found, (q * q + q + 1) as usize);
        }
    }

    #[test]
    fn extension_restricts_to_original() {
        let t = FieldTower::for_q(2).unwrap();
        let f = t.base();
        let (p1, p2, p3) = canonical(f);
        let r = Regulus::from_three_planes(f, &p1, &p2, &p3).unwrap();
        let x = extend_regulus(&t, &r);
        assert_eq!(x.planes().len(), 9);
        let e = t.ext();
        for p in r.planes() {
            let lifted = p.map_entries(e, |a| e.embed(a));
            assert!(x.contains_plane(&lifted));
        }
    }
}
