//! The field tower GF(p) ⊆ GF(q) ⊆ GF(q³).
//!
//! Elements of both fields are small integer codes. A GF(q) element with
//! coefficients `(c0, .., c_{d-1})` over GF(p) has code `c0 + c1 p + ..`;
//! a GF(q³) element `a0 + a1 τ + a2 τ²` has code `a0 + a1 q + a2 q²` where
//! `a_i` are GF(q) codes. Code order is the canonical element order used
//! everywhere (enumeration, sorting, "smallest" polynomial selection).

use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Bounds shared by all field element types.
pub trait Scalar: Copy + Eq + Ord + Hash + fmt::Debug + Send + Sync {}

impl<T: Copy + Eq + Ord + Hash + fmt::Debug + Send + Sync> Scalar for T {}

/// Arithmetic over a finite field whose elements are plain `Copy` codes.
pub trait Field: Send + Sync {
    type Elem: Scalar;

    fn order(&self) -> usize;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn inv(&self, a: Self::Elem) -> Option<Self::Elem>;
    /// The element with canonical index `i` (`0 <= i < order`).
    fn elem(&self, i: usize) -> Self::Elem;
    fn index(&self, a: Self::Elem) -> usize;

    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(a, self.neg(b))
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }

    fn elements(&self) -> impl Iterator<Item = Self::Elem> + '_ {
        (0..self.order()).map(move |i| self.elem(i))
    }
}

/// Element of GF(q).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Fq(pub u8);

/// Element of GF(q³), coded as `a0 + a1 q + a2 q²`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Fq3(pub u16);

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Prime powers with a built-in defining polynomial for GF(q) over GF(p).
pub const SUPPORTED_Q: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Multiplies two polynomials over GF(p) and reduces modulo the monic `modulus`.
fn polymulmod(p: u32, a: &[u32], b: &[u32], modulus: &[u32]) -> Vec<u32> {
    let d = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (d..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        for k in 0..=d {
            let shift = deg - d + k;
            prod[shift] = (prod[shift] + p * p - c * modulus[k] % p) % p;
        }
    }
    prod.truncate(d);
    prod.resize(d, 0);
    prod
}

/// GF(q) = GF(p)[x]/(f) with full addition and multiplication tables.
#[derive(Clone, Debug)]
pub struct BaseField {
    p: u32,
    d: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl BaseField {
    /// Builds GF(p^d) from a monic polynomial given little-endian
    /// (`modulus.len() == d + 1`, last coefficient 1).
    pub fn new(p: u32, modulus: &[u32]) -> Result<Self> {
        if !is_prime(p) || modulus.len() < 2 {
            return Err(Error::Reducible(format!("p={p}, modulus={modulus:?}")));
        }
        let d = (modulus.len() - 1) as u32;
        let q = p.pow(d);
        if !SUPPORTED_Q.contains(&q) {
            return Err(Error::UnsupportedOrder(q));
        }
        if *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::Reducible(format!("{modulus:?} is not monic over GF({p})")));
        }
        // Degree <= 3: irreducible iff no root in GF(p).
        if d > 1 {
            let has_root = (0..p).any(|x| {
                modulus
                    .iter()
                    .rev()
                    .fold(0u32, |acc, &c| (acc * x + c) % p)
                    == 0
            });
            if has_root {
                return Err(Error::Reducible(format!("{modulus:?} over GF({p})")));
            }
        }
        let digits = |code: u32| -> Vec<u32> {
            (0..d).map(|i| code / p.pow(i) % p).collect()
        };
        let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let n = q as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&s) as u8;
                let m = if d == 1 {
                    vec![(a * b) % p]
                } else {
                    polymulmod(p, &da, &db, modulus)
                };
                mul[(a * q + b) as usize] = encode(&m) as u8;
            }
        }
        let mut neg = vec![0u8; n];
        let mut inv = vec![0u8; n];
        for a in 0..n {
            neg[a] = (0..n).find(|&b| add[a * n + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..n).find(|&b| mul[a * n + b] == 1).unwrap() as u8;
            }
        }
        Ok(BaseField {
            p,
            d,
            q,
            modulus: modulus.to_vec(),
            add,
            mul,
            neg,
            inv,
        })
    }

    /// GF(q) with the built-in (Conway) defining polynomial.
    pub fn builtin(q: u32) -> Result<Self> {
        match q {
            2 | 3 | 5 | 7 => BaseField::new(q, &[0, 1]),
            4 => BaseField::new(2, &[1, 1, 1]),
            8 => BaseField::new(2, &[1, 1, 0, 1]),
            9 => BaseField::new(3, &[2, 2, 1]),
            _ => Err(Error::UnsupportedOrder(q)),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Little-endian coefficients of the defining polynomial over GF(p).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

impl Field for BaseField {
    type Elem = Fq;

    fn order(&self) -> usize {
        self.q as usize
    }
    fn zero(&self) -> Fq {
        Fq(0)
    }
    fn one(&self) -> Fq {
        Fq(1)
    }
    #[inline]
    fn add(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }
    #[inline]
    fn neg(&self, a: Fq) -> Fq {
        Fq(self.neg[a.0 as usize])
    }
    #[inline]
    fn mul(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }
    fn inv(&self, a: Fq) -> Option<Fq> {
        (a.0 != 0).then(|| Fq(self.inv[a.0 as usize]))
    }
    fn elem(&self, i: usize) -> Fq {
        Fq(i as u8)
    }
    fn index(&self, a: Fq) -> usize {
        a.0 as usize
    }
}

/// Coefficients `(t0, t1, t2)` of the cubic `x³ − t2 x² − t1 x − t0`.
pub type CubicCoeffs = [Fq; 3];

/// Multiplies `a0 + a1 τ + a2 τ²` by `b0 + b1 τ + b2 τ²` using τ³ = t0 + t1 τ + t2 τ².
pub fn cubic_mul_direct(base: &BaseField, t: &CubicCoeffs, a: [Fq; 3], b: [Fq; 3]) -> [Fq; 3] {
    let mut c = [Fq(0); 5];
    for i in 0..3 {
        for j in 0..3 {
            c[i + j] = base.add(c[i + j], base.mul(a[i], b[j]));
        }
    }
    for deg in (3..5).rev() {
        let top = c[deg];
        if top.0 == 0 {
            continue;
        }
        for (k, &tk) in t.iter().enumerate() {
            c[deg - 3 + k] = base.add(c[deg - 3 + k], base.mul(top, tk));
        }
    }
    [c[0], c[1], c[2]]
}

fn cubic_has_root(base: &BaseField, t: &CubicCoeffs) -> bool {
    base.elements().any(|x| {
        // x³ − t2 x² − t1 x − t0
        let x2 = base.mul(x, x);
        let x3 = base.mul(x2, x);
        let v = base.sub(
            base.sub(base.sub(x3, base.mul(t[2], x2)), base.mul(t[1], x)),
            t[0],
        );
        v.0 == 0
    })
}

/// Multiplicative order of τ, or `None` if τ is nilpotent/zero-divisor territory
/// (the cubic is reducible).
fn tau_order(base: &BaseField, t: &CubicCoeffs) -> Option<u64> {
    let tau = [Fq(0), Fq(1), Fq(0)];
    let one = [Fq(1), Fq(0), Fq(0)];
    let q3 = (base.q as u64).pow(3);
    let mut x = tau;
    for n in 1..q3 {
        if x == one {
            return Some(n);
        }
        x = cubic_mul_direct(base, t, x, tau);
    }
    None
}

/// True iff `x³ − t2 x² − t1 x − t0` is irreducible over GF(q) with a root of
/// order exactly q³ − 1 (checked by exhaustive powering).
pub fn is_primitive_cubic(base: &BaseField, t: &CubicCoeffs) -> bool {
    let q3 = (base.q as u64).pow(3);
    !cubic_has_root(base, t) && tau_order(base, t) == Some(q3 - 1)
}

fn coeffs_from_code(q: u32, code: u32) -> CubicCoeffs {
    [
        Fq((code % q) as u8),
        Fq((code / q % q) as u8),
        Fq((code / (q * q)) as u8),
    ]
}

/// All primitive cubics over the built-in GF(q), in canonical order
/// (numeric order of `t0 + t1 q + t2 q²`).
pub fn primitive_polys(q: u32) -> Result<Vec<CubicCoeffs>> {
    let base = BaseField::builtin(q)?;
    Ok((0..q.pow(3))
        .map(|c| coeffs_from_code(q, c))
        .filter(|t| is_primitive_cubic(&base, t))
        .collect())
}

/// The smallest primitive cubic over the built-in GF(q).
pub fn find_primitive_poly(q: u32) -> Result<CubicCoeffs> {
    let base = BaseField::builtin(q)?;
    (0..q.pow(3))
        .map(|c| coeffs_from_code(q, c))
        .find(|t| is_primitive_cubic(&base, t))
        .ok_or(Error::UnsupportedOrder(q))
}

/// GF(q³) = GF(q)(τ) with log/antilog tables; Frobenius goes through the matrix N.
#[derive(Clone, Debug)]
pub struct CubicExt {
    base: BaseField,
    t: CubicCoeffs,
    q: u32,
    n: usize,
    add: Vec<u16>,
    neg: Vec<u16>,
    log: Vec<u32>,
    exp: Vec<u16>,
    frob: Vec<u16>,
    frob_matrix: [[Fq; 3]; 3],
}

impl CubicExt {
    pub fn new(base: BaseField, t: CubicCoeffs) -> Result<Self> {
        if cubic_has_root(&base, &t) {
            return Err(Error::Reducible(format!(
                "x^3 - {}x^2 - {}x - {} over GF({})",
                t[2].0, t[1].0, t[0].0, base.q
            )));
        }
        if !is_primitive_cubic(&base, &t) {
            return Err(Error::NotPrimitive(format!("({},{},{})", t[0].0, t[1].0, t[2].0)));
        }
        let q = base.q;
        let n = (q * q * q) as usize;
        let decode = |c: usize| -> [Fq; 3] {
            let q = q as usize;
            [Fq((c % q) as u8), Fq((c / q % q) as u8), Fq((c / (q * q)) as u8)]
        };
        let encode = |a: [Fq; 3]| -> u16 {
            (a[0].0 as u32 + a[1].0 as u32 * q + a[2].0 as u32 * q * q) as u16
        };
        let mut add = vec![0u16; n * n];
        let mut neg = vec![0u16; n];
        for x in 0..n {
            let a = decode(x);
            neg[x] = encode([base.neg(a[0]), base.neg(a[1]), base.neg(a[2])]);
            for y in 0..n {
                let b = decode(y);
                add[x * n + y] = encode([
                    base.add(a[0], b[0]),
                    base.add(a[1], b[1]),
                    base.add(a[2], b[2]),
                ]);
            }
        }
        let mut exp = vec![0u16; n - 1];
        let mut log = vec![u32::MAX; n];
        let tau = [Fq(0), Fq(1), Fq(0)];
        let mut x = [Fq(1), Fq(0), Fq(0)];
        for (i, slot) in exp.iter_mut().enumerate() {
            let c = encode(x);
            *slot = c;
            log[c as usize] = i as u32;
            x = cubic_mul_direct(&base, &t, x, tau);
        }
        // N has columns [1^q], [τ^q], [τ^{2q}].
        let tq = exp[q as usize % (n - 1)];
        let t2q = exp[(2 * q as usize) % (n - 1)];
        let cols = [decode(1), decode(tq as usize), decode(t2q as usize)];
        let mut frob_matrix = [[Fq(0); 3]; 3];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..3 {
                frob_matrix[i][j] = col[i];
            }
        }
        let mut frob = vec![0u16; n];
        for (c, slot) in frob.iter_mut().enumerate() {
            let a = decode(c);
            let mut img = [Fq(0); 3];
            for i in 0..3 {
                for j in 0..3 {
                    img[i] = base.add(img[i], base.mul(frob_matrix[i][j], a[j]));
                }
            }
            *slot = encode(img);
        }
        Ok(CubicExt {
            base,
            t,
            q,
            n,
            add,
            neg,
            log,
            exp,
            frob,
            frob_matrix,
        })
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn coeffs(&self) -> CubicCoeffs {
        self.t
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn tau(&self) -> Fq3 {
        Fq3(self.q as u16)
    }

    /// `[α] = (a0, a1, a2)`.
    pub fn components(&self, a: Fq3) -> [Fq; 3] {
        let q = self.q as u16;
        [Fq((a.0 % q) as u8), Fq((a.0 / q % q) as u8), Fq((a.0 / (q * q)) as u8)]
    }

    pub fn from_components(&self, c: [Fq; 3]) -> Fq3 {
        let q = self.q as u16;
        Fq3(c[0].0 as u16 + c[1].0 as u16 * q + c[2].0 as u16 * q * q)
    }

    pub fn embed(&self, a: Fq) -> Fq3 {
        Fq3(a.0 as u16)
    }

    /// `Some(a)` when the element lies in GF(q).
    pub fn to_base(&self, a: Fq3) -> Option<Fq> {
        (a.0 < self.q as u16).then_some(Fq(a.0 as u8))
    }

    /// Multiplication by polynomial reduction, bypassing the log tables.
    pub fn mul_direct(&self, a: Fq3, b: Fq3) -> Fq3 {
        self.from_components(cubic_mul_direct(
            &self.base,
            &self.t,
            self.components(a),
            self.components(b),
        ))
    }

    /// τ^e for any integer exponent.
    pub fn tau_pow(&self, e: i64) -> Fq3 {
        let m = (self.n - 1) as i64;
        Fq3(self.exp[e.rem_euclid(m) as usize])
    }

    /// Discrete log base τ of a nonzero element.
    pub fn log(&self, a: Fq3) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    /// a^e for any integer exponent; negative exponents require a ≠ 0.
    pub fn pow(&self, a: Fq3, e: i64) -> Result<Fq3> {
        if a.0 == 0 {
            return match e.cmp(&0) {
                std::cmp::Ordering::Greater => Ok(Fq3(0)),
                std::cmp::Ordering::Equal => Ok(Fq3(1)),
                std::cmp::Ordering::Less => Err(Error::ZeroInverse),
            };
        }
        let m = (self.n - 1) as i64;
        let l = self.log[a.0 as usize] as i64;
        Ok(Fq3(self.exp[(l * e.rem_euclid(m)).rem_euclid(m) as usize]))
    }

    /// α ↦ α^q.
    #[inline]
    pub fn frobenius(&self, a: Fq3) -> Fq3 {
        Fq3(self.frob[a.0 as usize])
    }

    /// α ↦ α^{q^i}.
    pub fn frobenius_pow(&self, a: Fq3, i: u32) -> Fq3 {
        (0..i % 3).fold(a, |x, _| self.frobenius(x))
    }

    /// α^{1+q+q²}, an element of GF(q).
    pub fn norm(&self, a: Fq3) -> Fq {
        let a1 = self.frobenius(a);
        let a2 = self.frobenius(a1);
        let n = self.mul(self.mul(a, a1), a2);
        self.to_base(n).expect("norm lies in the base field")
    }

    /// The matrix M_k over GF(q) with M_k [x] = [k x].
    pub fn mult_matrix(&self, k: Fq3) -> [[Fq; 3]; 3] {
        let mut m = [[Fq(0); 3]; 3];
        for j in 0..3 {
            let col = self.components(self.mul(k, self.tau_pow(j as i64)));
            for i in 0..3 {
                m[i][j] = col[i];
            }
        }
        m
    }

    /// The matrix N over GF(q) with N [y] = [y^q].
    pub fn frobenius_matrix(&self) -> [[Fq; 3]; 3] {
        self.frob_matrix
    }
}

impl Field for CubicExt {
    type Elem = Fq3;

    fn order(&self) -> usize {
        self.n
    }
    fn zero(&self) -> Fq3 {
        Fq3(0)
    }
    fn one(&self) -> Fq3 {
        Fq3(1)
    }
    #[inline]
    fn add(&self, a: Fq3, b: Fq3) -> Fq3 {
        Fq3(self.add[a.0 as usize * self.n + b.0 as usize])
    }
    #[inline]
    fn neg(&self, a: Fq3) -> Fq3 {
        Fq3(self.neg[a.0 as usize])
    }
    #[inline]
    fn mul(&self, a: Fq3, b: Fq3) -> Fq3 {
        if a.0 == 0 || b.0 == 0 {
            return Fq3(0);
        }
        let m = self.n - 1;
        let s = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        Fq3(self.exp[if s >= m { s - m } else { s }])
    }
    fn inv(&self, a: Fq3) -> Option<Fq3> {
        if a.0 == 0 {
            return None;
        }
        let m = self.n - 1;
        let l = self.log[a.0 as usize] as usize;
        Some(Fq3(self.exp[(m - l) % m]))
    }
    fn elem(&self, i: usize) -> Fq3 {
        Fq3(i as u16)
    }
    fn index(&self, a: Fq3) -> usize {
        a.0 as usize
    }
}

/// The two-level tower with its printable configuration token.
#[derive(Clone, Debug)]
pub struct FieldTower {
    ext: CubicExt,
}

impl FieldTower {
    pub fn new(base: BaseField, t: CubicCoeffs) -> Result<Self> {
        Ok(FieldTower {
            ext: CubicExt::new(base, t)?,
        })
    }

    /// Built-in GF(q) with the smallest primitive cubic.
    pub fn for_q(q: u32) -> Result<Self> {
        let t = find_primitive_poly(q)?;
        FieldTower::new(BaseField::builtin(q)?, t)
    }

    pub fn base(&self) -> &BaseField {
        &self.ext.base
    }

    pub fn ext(&self) -> &CubicExt {
        &self.ext
    }

    pub fn q(&self) -> u32 {
        self.ext.q
    }

    /// `p^d:basepoly:t0,t1,t2` with the base polynomial little-endian over GF(p)
    /// and t_i as GF(q) codes.
    pub fn token(&self) -> String {
        let b = self.base();
        let poly: Vec<String> = b.modulus().iter().map(|c| c.to_string()).collect();
        let t = self.ext.t;
        format!(
            "{}^{}:{}:{},{},{}",
            b.characteristic(),
            b.degree(),
            poly.join(","),
            t[0].0,
            t[1].0,
            t[2].0
        )
    }

    pub fn parse_token(token: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidToken {
            token: token.to_string(),
            reason: reason.to_string(),
        };
        let parts: Vec<&str> = token.trim().split(':').collect();
        let [pd, poly, ts] = parts[..] else {
            return Err(bad("expected three ':'-separated fields"));
        };
        let (p, d) = pd.split_once('^').ok_or_else(|| bad("expected p^d"))?;
        let p: u32 = p.parse().map_err(|_| bad("p is not an integer"))?;
        let d: u32 = d.parse().map_err(|_| bad("d is not an integer"))?;
        let modulus = poly
            .split(',')
            .map(|c| c.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad("base polynomial coefficients must be integers"))?;
        if modulus.len() != d as usize + 1 {
            return Err(bad("base polynomial must have d+1 coefficients"));
        }
        let base = BaseField::new(p, &modulus)?;
        let t = ts
            .split(',')
            .map(|c| c.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad("t0,t1,t2 must be integers"))?;
        let [t0, t1, t2] = t[..] else {
            return Err(bad("expected exactly three cubic coefficients"));
        };
        if [t0, t1, t2].iter().any(|&c| c >= base.q()) {
            return Err(bad("cubic coefficient out of range for GF(q)"));
        }
        FieldTower::new(base, [Fq(t0 as u8), Fq(t1 as u8), Fq(t2 as u8)])
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

/// The points A = (p0, p1, p2) and η spanning the spread transversals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalFrame {
    pub p: [Fq3; 3],
    pub eta: Fq3,
}

impl TransversalFrame {
    pub fn new(tower: &FieldTower) -> Self {
        let e = tower.ext();
        let [_, t1, t2] = e.coeffs().map(|c| e.embed(c));
        let tau = e.tau();
        let tau2 = e.mul(tau, tau);
        let p0 = e.sub(e.add(t1, e.mul(t2, tau)), tau2);
        let p1 = e.sub(t2, tau);
        let p2 = e.neg(e.one());
        let eta = e.add(e.add(p0, e.mul(p1, tau)), e.mul(p2, tau2));
        TransversalFrame {
            p: [p0, p1, p2],
            eta,
        }
    }

    /// A^{q^i}, entrywise.
    pub fn a_conj(&self, tower: &FieldTower, i: u32) -> [Fq3; 3] {
        self.p.map(|x| tower.ext().frobenius_pow(x, i))
    }

    /// U_i = (p0 I + p1 M_τ + p2 M_τ²) with Frobenius^i applied entrywise.
    pub fn u_matrix(&self, tower: &FieldTower, i: u32) -> [[Fq3; 3]; 3] {
        let e = tower.ext();
        let m1 = e.mult_matrix(e.tau());
        let m2 = e.mult_matrix(e.tau_pow(2));
        let mut u = [[Fq3(0); 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                let id = if r == c { self.p[0] } else { Fq3(0) };
                let v = e.add(
                    id,
                    e.add(
                        e.mul(self.p[1], e.embed(m1[r][c])),
                        e.mul(self.p[2], e.embed(m2[r][c])),
                    ),
                );
                u[r][c] = e.frobenius_pow(v, i);
            }
        }
        u
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn towers() -> Vec<FieldTower> {
        [2, 3, 4, 5].iter().map(|&q| FieldTower::for_q(q).unwrap()).collect()
    }

    #[test]
    fn q2_smallest_primitive_is_x3_x_1() {
        assert_eq!(find_primitive_poly(2).unwrap(), [Fq(1), Fq(1), Fq(0)]);
    }

    #[test]
    fn smallest_primitive_q3_has_order_26() {
        let t = find_primitive_poly(3).unwrap();
        let base = BaseField::builtin(3).unwrap();
        assert_eq!(tau_order(&base, &t), Some(26));
    }

    #[test]
    fn primitive_poly_counts_match_totient() {
        // φ(q³−1)/3 primitive cubics.
        assert_eq!(primitive_polys(2).unwrap().len(), 2);
        assert_eq!(primitive_polys(3).unwrap().len(), 4);
        assert_eq!(primitive_polys(4).unwrap().len(), 12);
    }

    #[test]
    fn every_supported_q_builds() {
        for q in SUPPORTED_Q {
            let t = FieldTower::for_q(q).unwrap();
            let e = t.ext();
            // τ is a root of its cubic.
            let [t0, t1, t2] = e.coeffs().map(|c| e.embed(c));
            let tau = e.tau();
            let tau2 = e.mul(tau, tau);
            let lhs = e.mul(tau2, tau);
            let rhs = e.add(e.add(t0, e.mul(t1, tau)), e.mul(t2, tau2));
            assert_eq!(lhs, rhs, "q={q}");
        }
    }

    #[test]
    fn base_field_tables_are_a_field() {
        for q in SUPPORTED_Q {
            let f = BaseField::builtin(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Fq(0));
                if a.0 != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq(1));
                }
                for b in f.elements() {
                    for c in f.elements() {
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn tau_times_tau_squared_q2() {
        let t = FieldTower::for_q(2).unwrap();
        let e = t.ext();
        let prod = e.mul(e.tau(), e.tau_pow(2));
        assert_eq!(e.components(prod), [Fq(1), Fq(1), Fq(0)]);
    }

    #[test]
    fn q2_multiplication_table_matches_reduction() {
        // Oracle: schoolbook multiplication of bit-polynomials mod x³+x+1.
        fn clmul_mod(a: u16, b: u16) -> u16 {
            let mut r = 0u16;
            for i in 0..3 {
                if b >> i & 1 == 1 {
                    r ^= a << i;
                }
            }
            for deg in (3..5).rev() {
                if r >> deg & 1 == 1 {
                    r ^= 0b1011 << (deg - 3);
                }
            }
            r
        }
        let t = FieldTower::for_q(2).unwrap();
        let e = t.ext();
        for a in 0..8u16 {
            for b in 0..8u16 {
                assert_eq!(e.mul(Fq3(a), Fq3(b)), Fq3(clmul_mod(a, b)));
            }
        }
    }

    #[test]
    fn log_and_direct_multiplication_agree() {
        for t in towers() {
            let e = t.ext();
            for a in e.elements() {
                for b in e.elements() {
                    assert_eq!(e.mul(a, b), e.mul_direct(a, b));
                }
            }
        }
    }

    #[test]
    fn frobenius_matches_powering() {
        for t in towers() {
            let e = t.ext();
            let q = t.q() as i64;
            for a in e.elements() {
                assert_eq!(e.frobenius(a), e.pow(a, q).unwrap());
            }
        }
    }

    #[test]
    fn frobenius_fixes_base_field() {
        for t in towers() {
            let e = t.ext();
            for a in t.base().elements() {
                assert_eq!(e.frobenius(e.embed(a)), e.embed(a));
            }
        }
    }

    #[test]
    fn norm_of_tau_is_t0() {
        for t in towers() {
            let e = t.ext();
            assert_eq!(e.norm(e.tau()), e.coeffs()[0]);
        }
    }

    #[test]
    fn frobenius_is_an_automorphism_exhaustively() {
        for q in [2, 3] {
            let t = FieldTower::for_q(q).unwrap();
            let e = t.ext();
            for a in e.elements() {
                for b in e.elements() {
                    let f = |x| e.frobenius(x);
                    assert_eq!(f(e.add(a, b)), e.add(f(a), f(b)));
                    assert_eq!(f(e.mul(a, b)), e.mul(f(a), f(b)));
                }
            }
        }
    }

    #[test]
    fn norm_is_multiplicative_and_onto() {
        for q in [2, 3] {
            let t = FieldTower::for_q(q).unwrap();
            let e = t.ext();
            let mut image = std::collections::BTreeSet::new();
            for a in e.elements().skip(1) {
                image.insert(e.norm(a));
                for b in e.elements().skip(1) {
                    assert_eq!(
                        e.norm(e.mul(a, b)),
                        t.base().mul(e.norm(a), e.norm(b))
                    );
                }
            }
            assert_eq!(image.len(), q as usize - 1);
        }
    }

    #[test]
    fn mult_matrix_q2_companion() {
        let t = FieldTower::for_q(2).unwrap();
        let m = t.ext().mult_matrix(t.ext().tau());
        // columns [τ], [τ²], [τ³] = (0,1,0), (0,0,1), (1,1,0)
        let expect = [[0, 0, 1], [1, 0, 1], [0, 1, 0]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m[i][j].0, expect[i][j]);
            }
        }
        assert_eq!(t.ext().mult_matrix(Fq3(1)), [[Fq(1), Fq(0), Fq(0)], [Fq(0), Fq(1), Fq(0)], [Fq(0), Fq(0), Fq(1)]]);
    }

    fn mat_vec_ext(e: &CubicExt, m: &[[Fq; 3]; 3], v: [Fq3; 3]) -> [Fq3; 3] {
        let mut out = [Fq3(0); 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i] = e.add(out[i], e.mul(e.embed(m[i][j]), v[j]));
            }
        }
        out
    }

    #[test]
    fn mult_matrix_eigenvector_and_linearity() {
        for t in towers() {
            let e = t.ext();
            let frame = TransversalFrame::new(&t);
            let a = frame.p;
            let aq2 = frame.a_conj(&t, 2);
            for k in e.elements() {
                let m = e.mult_matrix(k);
                assert_eq!(mat_vec_ext(e, &m, a), a.map(|x| e.mul(k, x)));
                let k2 = e.frobenius_pow(k, 2);
                assert_eq!(mat_vec_ext(e, &m, aq2), aq2.map(|x| e.mul(k2, x)));
                for x in e.elements() {
                    let img = mat_vec_ext(e, &m, e.components(x).map(|c| e.embed(c)));
                    assert_eq!(img, e.components(e.mul(k, x)).map(|c| e.embed(c)));
                }
            }
        }
    }

    #[test]
    fn frobenius_matrix_properties() {
        for t in towers() {
            let e = t.ext();
            let n = e.frobenius_matrix();
            let frame = TransversalFrame::new(&t);
            // N [1] = [1]
            assert_eq!(
                mat_vec_ext(e, &n, [Fq3(1), Fq3(0), Fq3(0)]),
                [Fq3(1), Fq3(0), Fq3(0)]
            );
            // N A = η^{1−q²} A^{q²}
            let q = t.q() as i64;
            let s = e.pow(frame.eta, 1 - q * q).unwrap();
            let rhs = frame.a_conj(&t, 2).map(|x| e.mul(s, x));
            assert_eq!(mat_vec_ext(e, &n, frame.p), rhs);
            // N³ = I
            let mut v = [Fq3(0); 3];
            for x in e.elements() {
                let c = e.components(x).map(|c| e.embed(c));
                v = mat_vec_ext(e, &n, mat_vec_ext(e, &n, mat_vec_ext(e, &n, c)));
                assert_eq!(v, c);
            }
            let _ = v;
        }
    }

    #[test]
    fn transversal_frame_identities() {
        for t in towers() {
            let e = t.ext();
            let f = TransversalFrame::new(&t);
            let tau = e.tau();
            let tq = e.frobenius(tau);
            let tq2 = e.frobenius(tq);
            assert_eq!(f.p[0], e.neg(e.mul(tq, tq2)));
            assert_eq!(f.p[1], e.add(tq, tq2));
            assert_ne!(f.eta, Fq3(0));
        }
    }

    #[test]
    fn eta_q2_is_tau6() {
        let t = FieldTower::for_q(2).unwrap();
        let e = t.ext();
        let f = TransversalFrame::new(&t);
        assert_eq!(f.eta, e.tau_pow(6));
        assert_eq!(e.pow(f.eta, -1).unwrap(), e.tau());
    }

    #[test]
    fn u_matrices_act_as_scaled_conjugates() {
        for t in towers() {
            let e = t.ext();
            let f = TransversalFrame::new(&t);
            for i in 0..3 {
                let u = f.u_matrix(&t, i);
                let ai = f.a_conj(&t, i);
                for alpha in e.elements() {
                    let col = e.components(alpha).map(|c| e.embed(c));
                    let mut img = [Fq3(0); 3];
                    for r in 0..3 {
                        for c in 0..3 {
                            img[r] = e.add(img[r], e.mul(u[r][c], col[c]));
                        }
                    }
                    let s = e.frobenius_pow(alpha, i);
                    assert_eq!(img, ai.map(|x| e.mul(s, x)));
                }
            }
        }
    }

    #[test]
    fn token_round_trip_and_validation() {
        for q in SUPPORTED_Q {
            let t = FieldTower::for_q(q).unwrap();
            let back = FieldTower::parse_token(&t.token()).unwrap();
            assert_eq!(back.token(), t.token());
        }
        assert_eq!(FieldTower::for_q(2).unwrap().token(), "2^1:0,1:1,1,0");
        // x³ + 1 = (x+1)(x²+x+1): reducible.
        assert!(FieldTower::parse_token("2^1:0,1:1,0,0").is_err());
        // x³ − 1 over GF(3)... any cubic with a root is rejected; so is garbage.
        assert!(FieldTower::parse_token("3^1:0,1:1,0,0").is_err());
        assert!(FieldTower::parse_token("nonsense").is_err());
        assert!(FieldTower::parse_token("6^1:0,1:1,1,0").is_err());
    }

    #[test]
    fn irreducible_but_not_primitive_is_rejected() {
        // Over GF(4) some irreducible cubics have non-primitive roots.
        let base = BaseField::builtin(4).unwrap();
        let found = (0..64)
            .map(|c| coeffs_from_code(4, c))
            .find(|t| !cubic_has_root(&base, t) && !is_primitive_cubic(&base, t))
            .expect("GF(4) has irreducible non-primitive cubics");
        assert!(matches!(
            CubicExt::new(base, found),
            Err(Error::NotPrimitive(_))
        ));
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let t = FieldTower::for_q(3).unwrap();
        assert_eq!(t.ext().inv(Fq3(0)), None);
        assert_eq!(t.ext().pow(Fq3(0), -1), Err(Error::ZeroInverse));
    }
}
