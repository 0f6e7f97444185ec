use crate::error::{Error, Result};
use crate::gf::{CubicExt, Field, Fq, Fq3};

/// Number of monomials x_i x_j (i ≤ j) in seven variables.
pub const MONOMIALS: usize = 28;

/// Index of x_i x_j (i ≤ j) in the coefficient array, row-major over i ≤ j.
pub fn monomial_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * 7 - i * (i + 1) / 2 + j
}

/// Q(x) = Σ_{i≤j} q_ij x_i x_j on PG(6,q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadricForm {
    pub coeffs: [Fq; MONOMIALS],
}

impl QuadricForm {
    pub fn eval(&self, f: &impl Field<Elem = Fq>, x: &[Fq]) -> Fq {
        let mut acc = f.zero();
        for i in 0..7 {
            if f.is_zero(x[i]) {
                continue;
            }
            for j in i..7 {
                let c = self.coeffs[monomial_index(i, j)];
                if !f.is_zero(c) {
                    acc = f.add(acc, f.mul(c, f.mul(x[i], x[j])));
                }
            }
        }
        acc
    }

    /// b(x, y) = Q(x + y) − Q(x) − Q(y).
    pub fn polar(&self, f: &impl Field<Elem = Fq>, x: &[Fq], y: &[Fq]) -> Fq {
        let s: Vec<Fq> = x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect();
        f.sub(f.sub(self.eval(f, &s), self.eval(f, x)), self.eval(f, y))
    }

    /// Coefficients of the linear form y ↦ b(x, y).
    pub fn polar_row(&self, f: &impl Field<Elem = Fq>, x: &[Fq]) -> Vec<Fq> {
        (0..7)
            .map(|k| {
                let mut e = vec![f.zero(); 7];
                e[k] = f.one();
                self.polar(f, x, &e)
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.0 == 0)
    }

    /// True iff the two forms agree up to a nonzero scalar.
    pub fn proportional(&self, f: &impl Field<Elem = Fq>, other: &Self) -> bool {
        let Some(i) = self.coeffs.iter().position(|c| c.0 != 0) else {
            return other.is_zero();
        };
        if f.is_zero(other.coeffs[i]) {
            return false;
        }
        let s = f.mul(other.coeffs[i], f.inv(self.coeffs[i]).unwrap());
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(&a, &b)| f.mul(s, a) == b)
    }
}

/// A linear form over GF(q³) in the seven GF(q) coordinates.
pub(crate) type LinearForm = [Fq3; 7];

/// The linear form (x, y, z) ↦ r_0 x + r_1 y + r_2 z with x = Σ x_i τ^i and
/// y = Σ y_i τ^i.
pub(crate) fn linear_form(e: &CubicExt, r: [Fq3; 3]) -> LinearForm {
    let mut out = [Fq3(0); 7];
    for i in 0..3 {
        out[i] = e.mul(r[0], e.tau_pow(i as i64));
        out[3 + i] = e.mul(r[1], e.tau_pow(i as i64));
    }
    out[6] = r[2];
    out
}

fn frob_form(e: &CubicExt, l: &LinearForm) -> LinearForm {
    l.map(|c| e.frobenius(c))
}

fn product(e: &CubicExt, a: &LinearForm, b: &LinearForm) -> [Fq3; MONOMIALS] {
    let mut out = [Fq3(0); MONOMIALS];
    for i in 0..7 {
        for j in 0..7 {
            let m = monomial_index(i, j);
            out[m] = e.add(out[m], e.mul(a[i], b[j]));
        }
    }
    out
}

/// The three τ-components of U^q V − U V^q, each a quadratic form over GF(q).
/// They vanish exactly where U^q V = U V^q.
pub(crate) fn frobenius_condition(e: &CubicExt, u: &LinearForm, v: &LinearForm) -> Result<[QuadricForm; 3]> {
    let uq = frob_form(e, u);
    let vq = frob_form(e, v);
    let lhs = product(e, &uq, v);
    let rhs = product(e, u, &vq);
    let mut out = [QuadricForm {
        coeffs: [Fq(0); MONOMIALS],
    }; 3];
    for m in 0..MONOMIALS {
        let c = e.components(e.sub(lhs[m], rhs[m]));
        for (form, &ci) in out.iter_mut().zip(&c) {
            form.coeffs[m] = ci;
        }
    }
    if out.iter().any(|f| f.is_zero()) {
        return Err(Error::Degenerate("a quadric component vanishes identically".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::BaseField;

    #[test]
    fn monomial_indices_are_a_bijection() {
        let mut seen = [false; MONOMIALS];
        for i in 0..7 {
            for j in i..7 {
                let m = monomial_index(i, j);
                assert!(!seen[m]);
                seen[m] = true;
                assert_eq!(monomial_index(j, i), m);
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn polar_is_symmetric_and_bilinear_q2() {
        let f = BaseField::builtin(2).unwrap();
        let mut coeffs = [Fq(0); MONOMIALS];
        coeffs[monomial_index(0, 0)] = Fq(1);
        coeffs[monomial_index(0, 3)] = Fq(1);
        coeffs[monomial_index(2, 6)] = Fq(1);
        let qf = QuadricForm { coeffs };
        let x = [1, 0, 1, 1, 0, 0, 1].map(Fq);
        let y = [0, 1, 1, 0, 0, 1, 1].map(Fq);
        assert_eq!(qf.polar(&f, &x, &y), qf.polar(&f, &y, &x));
        // x0^2 contributes nothing to the polar in characteristic 2
        let row = qf.polar_row(&f, &x);
        assert_eq!(row[0], Fq(1));
        assert_eq!(row[3], Fq(1));
    }
}
