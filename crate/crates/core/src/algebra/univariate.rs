//! Dense univariate polynomials over a [`Field`], with root finding in the base field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Field, FieldElement};

/// Coefficients are stored lowest degree first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly1 {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl Poly1 {
    pub fn new(field: Field, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly1 { field, coeffs }
    }

    pub fn zero(field: Field) -> Self {
        Poly1 { field, coeffs: vec![] }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::new(c.field(), vec![c])
    }

    /// The polynomial `t - a`.
    pub fn linear_root(a: &FieldElement) -> Self {
        let f = a.field();
        Self::new(f, vec![-a, f.one()])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, other: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(self.field, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly1) -> Poly1 {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(self.field, (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Poly1) -> Poly1 {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(self.field, out)
    }

    pub fn scale(&self, c: &FieldElement) -> Poly1 {
        Self::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Poly1 {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(self.field, coeffs)
    }

    pub fn monic(&self) -> Poly1 {
        match self.lc() {
            Some(lc) => self.scale(&lc.inv().expect("nonzero")),
            None => self.clone(),
        }
    }

    /// Euclidean division. Panics if `den` is zero.
    pub fn div_rem(&self, den: &Poly1) -> (Poly1, Poly1) {
        let dd = den.degree().expect("division by zero polynomial");
        let inv = den.lc().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(self.field), self.clone());
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in den.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * dc);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(self.field, quot), Self::new(self.field, rem))
    }

    /// Exact division; `None` when `den` does not divide `self`.
    pub fn div_exact(&self, den: &Poly1) -> Option<Poly1> {
        let (q, r) = self.div_rem(den);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly1) -> Poly1 {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly1 {
        Self::new(
            self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &self.field.from_i64(i as i64))
                .collect(),
        )
    }

    /// Newton interpolation through `(xs[i], ys[i])`; the `xs` must be distinct.
    pub fn interpolate(field: Field, xs: &[FieldElement], ys: &[FieldElement]) -> Poly1 {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd: Vec<FieldElement> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = &dd[i] - &dd[i - 1];
                let den = &xs[i] - &xs[i - j];
                dd[i] = &num / &den;
            }
        }
        let mut acc = Poly1::zero(field);
        for i in (0..n).rev() {
            acc = acc.mul(&Poly1::linear_root(&xs[i])).add(&Poly1::constant(dd[i].clone()));
        }
        acc
    }

    /// Roots lying in the base field, with multiplicities, together with the cofactor
    /// left after dividing those roots out. A cofactor of positive degree certifies
    /// roots outside the base field.
    pub fn split_roots(&self) -> (Vec<(FieldElement, u32)>, Poly1) {
        assert!(!self.is_zero(), "roots of the zero polynomial");
        let candidates: Vec<FieldElement> = match self.field {
            Field::Prime(_) => {
                let mut c = Vec::new();
                if self.degree().unwrap_or(0) > 0 {
                    for e in self.field.elements().unwrap() {
                        if self.eval(&e).is_zero() {
                            c.push(e);
                        }
                    }
                }
                c
            }
            Field::Rationals => rational_roots(self),
        };
        let mut rest = self.clone();
        let mut out = Vec::new();
        for r in candidates {
            let lin = Poly1::linear_root(&r);
            let mut mult = 0;
            while let Some(q) = rest.div_exact(&lin) {
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((r, mult));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        (out, rest)
    }
}

fn integer_coeffs(p: &Poly1) -> Vec<BigInt> {
    let rats: Vec<&BigRational> = p.coeffs.iter().map(|c| c.as_rational().expect("rational")).collect();
    let lcm = rats.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = rats.iter().map(|q| (q.numer() * &lcm) / q.denom()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|v| v / &g).collect()
}

fn eval_mod(coeffs: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = (acc * x + c).mod_floor(m);
    }
    acc
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Rational roots of a nonzero polynomial over Q, by lifting simple roots modulo a
/// small prime and reconstructing fractions with bounded numerator and denominator.
fn rational_roots(p: &Poly1) -> Vec<FieldElement> {
    let q = Field::Rationals;
    let deg = p.degree().unwrap_or(0);
    if deg == 0 {
        return vec![];
    }
    let mut roots = Vec::new();
    let mut sf = p.div_exact(&p.gcd(&p.derivative())).expect("gcd divides");
    if sf.coeff(0).is_zero() {
        roots.push(q.zero());
        sf = sf.div_exact(&Poly1::linear_root(&q.zero())).unwrap();
    }
    if sf.degree().unwrap_or(0) == 0 {
        return roots;
    }
    let ints = integer_coeffs(&sf);
    let lead = ints.last().unwrap().abs();
    let trail = ints[0].abs();
    let bound = lead.clone().max(trail.clone());
    // Need modulus > 2 * bound^2 for unique reconstruction.
    let target = BigInt::from(2) * &bound * &bound;

    let mut ell: u64 = 101;
    let (prime, residues) = loop {
        if Field::prime(ell).is_ok() && !(&lead % ell).is_zero() {
            let f = Field::Prime(ell);
            let reduced = Poly1::new(f, ints.iter().map(|c| f.from_bigint(c)).collect());
            if reduced.degree() == sf.degree() && reduced.gcd(&reduced.derivative()).degree() == Some(0) {
                let rs: Vec<u64> = f
                    .elements()
                    .unwrap()
                    .filter(|e| reduced.eval(e).is_zero())
                    .map(|e| match e {
                        FieldElement::Residue { value, .. } => value,
                        _ => unreachable!(),
                    })
                    .collect();
                break (ell, rs);
            }
        }
        ell += 2;
    };

    let deriv: Vec<BigInt> = ints
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    for r0 in residues {
        let mut modulus = BigInt::from(prime);
        let mut r = BigInt::from(r0);
        while modulus <= target {
            modulus = &modulus * &modulus;
            let fv = eval_mod(&ints, &r, &modulus);
            let dv = eval_mod(&deriv, &r, &modulus);
            let inv = match mod_inverse(&dv, &modulus) {
                Some(v) => v,
                None => break,
            };
            r = (r - fv * inv).mod_floor(&modulus);
        }
        if let Some(cand) = reconstruct(&r, &modulus, &bound) {
            let fe = q.from_rational(&cand).unwrap();
            if sf.eval(&fe).is_zero() && !roots.contains(&fe) {
                roots.push(fe);
            }
        }
    }
    roots
}

/// Wang's rational reconstruction: `n/d ≡ r (mod m)` with `|n|, d <= bound`.
fn reconstruct(r: &BigInt, m: &BigInt, bound: &BigInt) -> Option<BigRational> {
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let qt = &r0 / &r1;
        let r2 = &r0 - &qt * &r1;
        let s2 = &s0 - &qt * &s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if s1.is_zero() || &s1.abs() > bound {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

impl std::fmt::Display for Poly1 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})*t"),
                _ => format!("({c})*t^{k}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qpoly(cs: &[i64]) -> Poly1 {
        Poly1::new(Field::Rationals, cs.iter().map(|&c| Field::Rationals.from_i64(c)).collect())
    }

    #[test]
    fn rational_roots_found_with_multiplicity() {
        // (2t - 3)^2 (t + 5) (t^2 + 1)
        let a = qpoly(&[-3, 2]);
        let p = a.mul(&a).mul(&qpoly(&[5, 1])).mul(&qpoly(&[1, 0, 1]));
        let (roots, rest) = p.split_roots();
        let q = Field::Rationals;
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0], (q.from_i64(-5), 1));
        assert_eq!(roots[1], (q.parse("3/2").unwrap(), 2));
        assert_eq!(rest.degree(), Some(2));
    }

    #[test]
    fn large_rational_root() {
        let q = Field::Rationals;
        let r = q.parse("123456789/987654").unwrap();
        let p = Poly1::linear_root(&r).mul(&qpoly(&[7, 0, 0, 1])).mul(&Poly1::linear_root(&q.zero()));
        let (roots, rest) = p.split_roots();
        assert_eq!(roots.iter().map(|x| x.0.clone()).collect::<Vec<_>>(), vec![q.zero(), r]);
        assert_eq!(rest.degree(), Some(3));
    }

    #[test]
    fn prime_field_roots() {
        let f = Field::prime(13).unwrap();
        // t^2 + 1 splits mod 13 (5^2 = -1)
        let p = Poly1::new(f, vec![f.one(), f.zero(), f.one()]);
        let (roots, rest) = p.split_roots();
        assert_eq!(roots.len(), 2);
        assert_eq!(rest.degree(), Some(0));
    }

    #[test]
    fn interpolation_recovers() {
        let p = qpoly(&[3, -1, 0, 2]);
        let q = Field::Rationals;
        let xs: Vec<_> = (0..4).map(|i| q.from_i64(i)).collect();
        let ys: Vec<_> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(Poly1::interpolate(q, &xs, &ys), p);
    }
}
