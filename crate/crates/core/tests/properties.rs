mod common;

use common::*;
use exsplash::bruckbose::{family_plane, subline_labels, BbContext};
use exsplash::covers::{beta, theta_sigma};
use exsplash::gf::{Field, FieldTower, Fq, Fq3};
use exsplash::pg::{Param, PgPoint, Regulus, Subspace};
use proptest::prelude::*;

fn q_strategy() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(3), Just(4), Just(5)]
}

fn ext_elem(t: &FieldTower, i: usize) -> Fq3 {
    t.ext().elem(i % t.ext().order())
}

fn base_vec(t: &FieldTower, seed: &[usize]) -> Vec<Fq> {
    seed.iter().map(|&i| t.base().elem(i % t.base().order())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(q in q_strategy(), a in any::<usize>(), b in any::<usize>(), c in any::<usize>()) {
        let t = tower(q);
        let e = t.ext();
        let (a, b, c) = (ext_elem(&t, a), ext_elem(&t, b), ext_elem(&t, c));
        prop_assert_eq!(e.add(a, b), e.add(b, a));
        prop_assert_eq!(e.mul(a, b), e.mul(b, a));
        prop_assert_eq!(e.mul(a, e.mul(b, c)), e.mul(e.mul(a, b), c));
        prop_assert_eq!(e.mul(a, e.add(b, c)), e.add(e.mul(a, b), e.mul(a, c)));
        prop_assert_eq!(e.add(a, e.neg(a)), e.zero());
        prop_assert_eq!(e.mul(a, b), e.mul_direct(a, b));
        if a != e.zero() {
            prop_assert_eq!(e.mul(a, e.inv(a).unwrap()), e.one());
        }
    }

    #[test]
    fn frobenius_is_an_automorphism(q in q_strategy(), a in any::<usize>(), b in any::<usize>(), s in 0u32..3) {
        let t = tower(q);
        let e = t.ext();
        let (a, b) = (ext_elem(&t, a), ext_elem(&t, b));
        prop_assert_eq!(e.frobenius_pow(a, s), frob(&t, a, s));
        prop_assert_eq!(e.frobenius(e.mul(a, b)), e.mul(e.frobenius(a), e.frobenius(b)));
        prop_assert_eq!(e.frobenius(e.add(a, b)), e.add(e.frobenius(a), e.frobenius(b)));
        prop_assert_eq!(e.frobenius_pow(a, 3), a);
    }

    #[test]
    fn norm_is_multiplicative(q in q_strategy(), a in any::<usize>(), b in any::<usize>()) {
        let t = tower(q);
        let e = t.ext();
        let (a, b) = (ext_elem(&t, a), ext_elem(&t, b));
        prop_assert_eq!(e.norm(e.mul(a, b)), t.base().mul(e.norm(a), e.norm(b)));
        let direct = e.mul(a, e.mul(frob(&t, a, 1), frob(&t, a, 2)));
        prop_assert_eq!(e.embed(e.norm(a)), direct);
    }

    #[test]
    fn multiplication_matrix_is_linear(q in q_strategy(), k in any::<usize>(), x in any::<usize>()) {
        let t = tower(q);
        let e = t.ext();
        let f = t.base();
        let (k, x) = (ext_elem(&t, k), ext_elem(&t, x));
        let m = e.mult_matrix(k);
        let c = e.components(x);
        let img: [Fq; 3] = std::array::from_fn(|i| (0..3).fold(f.zero(), |acc, j| f.add(acc, f.mul(m[i][j], c[j]))));
        prop_assert_eq!(e.from_components(img), e.mul(k, x));
        let n = e.frobenius_matrix();
        let img: [Fq; 3] = std::array::from_fn(|i| (0..3).fold(f.zero(), |acc, j| f.add(acc, f.mul(n[i][j], c[j]))));
        prop_assert_eq!(e.from_components(img), e.frobenius(x));
    }

    #[test]
    fn dimension_formula(q in prop_oneof![Just(2u32), Just(3)], a in prop::collection::vec(any::<usize>(), 21), b in prop::collection::vec(any::<usize>(), 21)) {
        let t = tower(q);
        let f = t.base();
        let u = Subspace::new(f, 7, a.chunks(7).map(|r| base_vec(&t, r)).collect());
        let w = Subspace::new(f, 7, b.chunks(7).map(|r| base_vec(&t, r)).collect());
        let span = u.span(f, &w);
        let meet = u.meet(f, &w);
        prop_assert_eq!(span.dim() + meet.dim(), u.dim() + w.dim());
        prop_assert!(span.contains_subspace(f, &u) && span.contains_subspace(f, &w));
        prop_assert!(u.contains_subspace(f, &meet) && w.contains_subspace(f, &meet));
    }

    #[test]
    fn subspace_is_invariant_under_row_operations(q in q_strategy(), a in prop::collection::vec(any::<usize>(), 18), c in any::<usize>(), i in 0usize..3, j in 0usize..3) {
        let t = tower(q);
        let f = t.base();
        let rows: Vec<Vec<Fq>> = a.chunks(6).map(|r| base_vec(&t, r)).collect();
        let s = Subspace::new(f, 6, rows.clone());
        let mut moved = rows;
        if i != j {
            let c = f.elem(c % f.order());
            moved[i] = moved[i].iter().zip(&moved[j].clone()).map(|(&x, &y)| f.add(x, f.mul(c, y))).collect();
            moved.swap(0, j);
        }
        prop_assert_eq!(Subspace::new(f, 6, moved), s);
    }

    #[test]
    fn homographies_preserve_incidence(q in prop_oneof![Just(2u32), Just(3)], m in prop::collection::vec(any::<usize>(), 36), k in any::<usize>(), x in any::<usize>()) {
        let t = tower(q);
        let f = t.base();
        let e = t.ext();
        let mat: Vec<Vec<Fq>> = m.chunks(6).map(|r| base_vec(&t, r)).collect();
        let Ok(h) = exsplash::pg::Homography::new(f, mat) else { return Ok(()) };
        let plane = family_plane(&t, Param::At(ext_elem(&t, k)), 0);
        let x = ext_elem(&t, x);
        prop_assume!(x != e.zero());
        let p = PgPoint::new(f, &coords6(e, e.mul(ext_elem(&t, k), x), x)).unwrap();
        prop_assert!(plane.contains(f, p.coords()));
        let img = h.apply_subspace(f, &plane);
        prop_assert_eq!(img.dim(), 2);
        prop_assert!(img.contains(f, h.apply_point(f, &p).coords()));
    }

    #[test]
    fn beta_has_order_three_and_shifts_families(q in q_strategy(), k in any::<usize>()) {
        let t = tower(q);
        let f = t.base();
        let b = beta(&t);
        prop_assert!(b.compose(f, &b).compose(f, &b).is_identity(f));
        let k = Param::At(ext_elem(&t, k));
        prop_assert_eq!(b.apply_subspace(f, &family_plane(&t, k, 0)), family_plane(&t, k, 1));
        prop_assert_eq!(b.apply_subspace(f, &family_plane(&t, k, 1)), family_plane(&t, k, 2));
    }

    #[test]
    fn theta_rescales_labels(q in q_strategy(), k in any::<usize>(), s in 0u32..3) {
        let t = tower(q);
        let f = t.base();
        let e = t.ext();
        let k = ext_elem(&t, k);
        prop_assume!(k != e.zero());
        let qi = q as i64;
        let mult = [e.one(), e.tau_pow(1 - qi * qi), e.tau_pow(1 - qi)][s as usize];
        let img = theta_sigma(&t).apply_subspace(f, &family_plane(&t, Param::At(k), s));
        prop_assert_eq!(point_set(f, &img), family_points(&t, Param::At(e.mul(mult, k)), s));
    }

    #[test]
    fn regulus_does_not_depend_on_the_chosen_basis(q in prop_oneof![Just(2u32), Just(3)], i in any::<usize>(), m in prop::collection::vec(any::<usize>(), 9)) {
        let t = tower(q);
        let f = t.base();
        let ctx = BbContext::new(t.clone());
        let sp = ctx.spread();
        let n = sp.len();
        let (a, b, c) = (i % n, (i / n + 1 + i % n) % n, 0);
        prop_assume!(a != b && b != c && a != c);
        let r = Regulus::from_three_planes(f, &sp[a], &sp[b], &sp[c]).unwrap();
        let mix: Vec<Vec<Fq>> = m.chunks(3).map(|r| base_vec(&t, r)).collect();
        let basis: Vec<Vec<Fq>> = mix
            .iter()
            .map(|row| {
                (0..6).map(|col| (0..3).fold(f.zero(), |acc, j| f.add(acc, f.mul(row[j], sp[a].rows()[j][col])))).collect()
            })
            .collect();
        prop_assume!(Subspace::new(f, 6, basis.clone()).dim() == 2);
        let r2 = Regulus::from_basis(f, &basis, &sp[b], &sp[c]).unwrap();
        prop_assert_eq!(r.plane_set(), r2.plane_set());
    }

    #[test]
    fn sublines_are_determined_by_any_three_points(q in prop_oneof![Just(2u32), Just(3), Just(4)], seed in prop::collection::vec(any::<usize>(), 6)) {
        let t = tower(q);
        let ctx = BbContext::new(t.clone());
        let labels = ctx.labels();
        let n = labels.len();
        let (a, b, c) = (seed[0] % n, seed[1] % n, seed[2] % n);
        prop_assume!(a != b && b != c && a != c);
        let line = subline_labels(&t, labels[a], labels[b], labels[c]).unwrap();
        prop_assert_eq!(line.len(), q as usize + 1);
        let m = line.len();
        let (x, y, z) = (seed[3] % m, seed[4] % m, seed[5] % m);
        prop_assume!(x != y && y != z && x != z);
        let mut again = subline_labels(&t, line[x], line[y], line[z]).unwrap();
        let mut line = line;
        line.sort();
        again.sort();
        prop_assert_eq!(again, line);
    }
}
