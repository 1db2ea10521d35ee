//! Greatest common divisors of ternary forms.
//!
//! A form `f` factors as `z^v * f'` with `z ∤ f'`, and `f'` is recovered from its
//! dehomogenization `f(x, y, 1)`. The gcd of the dehomogenized polynomials is taken
//! in `K[y][x]` by a primitive pseudo-remainder sequence, with contents computed by
//! univariate Euclid in `K[y]`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::is_prime;
use super::{AlgebraError, Field, FieldElement, HomogeneousForm, Monomial, Poly1};

const MODULAR_PRIMES: usize = 64;

/// Polynomial in `x` with coefficients in `K[y]`, lowest power of `x` first.
#[derive(Clone, Debug, PartialEq)]
struct Bivariate {
    field: Field,
    coeffs: Vec<Poly1>,
}

impl Bivariate {
    fn new(field: Field, mut coeffs: Vec<Poly1>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Bivariate { field, coeffs }
    }

    fn from_form(f: &HomogeneousForm) -> Self {
        let field = f.field();
        let mut rows: Vec<Vec<_>> = Vec::new();
        for (m, c) in f.terms() {
            let [i, j, _] = m.0;
            let (i, j) = (i as usize, j as usize);
            if rows.len() <= i {
                rows.resize(i + 1, Vec::new());
            }
            if rows[i].len() <= j {
                rows[i].resize(j + 1, field.zero());
            }
            rows[i][j] = c.clone();
        }
        Self::new(field, rows.into_iter().map(|r| Poly1::new(field, r)).collect())
    }

    fn total_degree(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.degree().map(|d| d + i))
            .max()
            .unwrap_or(0)
    }

    fn homogenize(&self, degree: u32) -> HomogeneousForm {
        let terms = self.coeffs.iter().enumerate().flat_map(|(i, c)| {
            c.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(j, v)| ([i as u32, j as u32, degree - i as u32 - j as u32], v.clone()))
                .collect::<Vec<_>>()
        });
        HomogeneousForm::from_terms(self.field, degree, terms).expect("homogenization is consistent")
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn deg_x(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn content(&self) -> Poly1 {
        self.coeffs
            .iter()
            .fold(Poly1::zero(self.field), |acc, c| acc.gcd(c))
    }

    fn div_poly(&self, c: &Poly1) -> Self {
        Self::new(
            self.field,
            self.coeffs
                .iter()
                .map(|a| a.div_exact(c).expect("content divides every coefficient"))
                .collect(),
        )
    }

    /// Divides out the `K[y]`-content and makes the leading scalar 1, which keeps
    /// rational coefficients from growing across the remainder sequence.
    fn primitive_part(&self) -> Self {
        let c = self.content();
        let p = self.div_poly(&c);
        match p.coeffs.last().and_then(|l| l.lc()).and_then(|l| l.inv()) {
            Some(inv) => Self::new(p.field, p.coeffs.iter().map(|a| a.scale(&inv)).collect()),
            None => p,
        }
    }

    fn scale_poly(&self, c: &Poly1) -> Self {
        Self::new(self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Pseudo-remainder of `self` by `other` with respect to `x`.
    fn prem(&self, other: &Bivariate) -> Bivariate {
        let n = other.deg_x();
        let lc = other.coeffs.last().unwrap().clone();
        let mut a = self.clone();
        while !a.is_zero() && a.deg_x() >= n {
            let shift = a.deg_x() - n;
            let la = a.coeffs.last().unwrap().clone();
            let mut next: Vec<Poly1> = a.coeffs.iter().map(|c| c.mul(&lc)).collect();
            for (k, oc) in other.coeffs.iter().enumerate() {
                next[k + shift] = next[k + shift].sub(&oc.mul(&la));
            }
            a = Bivariate::new(self.field, next);
        }
        a
    }

    fn gcd(&self, other: &Bivariate) -> Bivariate {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let c = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.deg_x() < b.deg_x() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.deg_x() == 0 {
                // b is a nonzero element of K[y] and primitive, hence a unit.
                a = Bivariate::new(self.field, vec![Poly1::constant(self.field.one())]);
                break;
            }
            let r = a.prem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part() };
        }
        a.primitive_part().scale_poly(&c)
    }
}

/// Gcd of two forms, monic in graded-lex order; zero only when both are zero.
pub fn gcd2(f: &HomogeneousForm, g: &HomogeneousForm) -> Result<HomogeneousForm, AlgebraError> {
    f.check_field(g)?;
    if f.is_zero() {
        return Ok(g.monic());
    }
    if g.is_zero() {
        return Ok(f.monic());
    }
    if f.field() == Field::Rationals {
        if let Some(h) = modular_gcd(f, g) {
            return Ok(h);
        }
    }
    let v = f.var_valuation(2).min(g.var_valuation(2));
    let h = Bivariate::from_form(f).gcd(&Bivariate::from_form(g));
    let d = h.total_degree() as u32;
    let core = h.homogenize(d);
    let zv = HomogeneousForm::monomial(Monomial([0, 0, v]), f.field().one());
    Ok((&core * &zv).monic())
}

fn large_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        (1u64 << 31..1 << 32)
            .rev()
            .filter(|&p| p % 2 == 1 && is_prime(p))
            .take(MODULAR_PRIMES)
            .collect()
    })
}

fn reduce(f: &HomogeneousForm, fp: Field) -> Option<HomogeneousForm> {
    let terms = f
        .terms()
        .map(|(m, c)| Some((m.0, fp.from_rational(c.as_rational()?).ok()?)))
        .collect::<Option<Vec<_>>>()?;
    HomogeneousForm::from_terms(fp, f.degree(), terms).ok()
}

/// `r/s ≡ a (mod m)` with `|r|, |s| ≤ √(m/2)`.
fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        (r0, r1) = (r1.clone(), &r0 - &q * &r1);
        (s0, s1) = (s1.clone(), &s0 - &q * &s1);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, s1))
}

/// Gcd over ℚ from its images mod large primes, combined by CRT and rational
/// reconstruction and confirmed by exact division. A constant image mod a prime
/// not dividing any denominator proves the gcd is 1. `None` means give up.
fn modular_gcd(f: &HomogeneousForm, g: &HomogeneousForm) -> Option<HomogeneousForm> {
    let mut modulus = BigInt::one();
    let mut residues: BTreeMap<Monomial, BigInt> = BTreeMap::new();
    let mut shape: Option<(u32, Monomial)> = None;
    for &p in large_primes() {
        let fp = Field::prime(p).expect("listed primes are valid");
        let (Some(a), Some(b)) = (reduce(f, fp), reduce(g, fp)) else {
            continue;
        };
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let h = gcd2(&a, &b).ok()?;
        if h.degree() == 0 {
            return Some(HomogeneousForm::one(Field::Rationals));
        }
        let lead = *h.leading().expect("nonzero gcd").0;
        match shape {
            Some((d, m)) if (d, m) == (h.degree(), lead) => {}
            Some((d, _)) if d < h.degree() => continue,
            _ => {
                shape = Some((h.degree(), lead));
                modulus = BigInt::one();
                residues.clear();
            }
        }
        let pb = BigInt::from(p);
        let inv = modulus.modpow(&(&pb - 2u32), &pb);
        let mons: Vec<Monomial> = residues.keys().copied().chain(h.terms().map(|(m, _)| *m)).collect();
        for m in mons {
            let r = match h.coeff(m.0) {
                FieldElement::Residue { value, .. } => BigInt::from(value),
                FieldElement::Rational(_) => unreachable!("prime field"),
            };
            let old = residues.get(&m).cloned().unwrap_or_default();
            // x ≡ old (mod M), x ≡ r (mod p)
            let t = ((&r - &old) * &inv).mod_floor(&pb);
            residues.insert(m, &old + &modulus * t);
        }
        modulus *= &pb;
        let terms = residues
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(m, v)| Some((m.0, FieldElement::Rational(rational_reconstruction(v, &modulus)?))))
            .collect::<Option<Vec<_>>>();
        let Some(terms) = terms else { continue };
        let cand = HomogeneousForm::from_terms(Field::Rationals, h.degree(), terms).ok()?;
        if f.divexact(&cand).is_ok() && g.divexact(&cand).is_ok() {
            return Some(cand.monic());
        }
    }
    None
}

/// Greatest common divisor of a nonempty list of forms, normalized to leading coefficient 1.
pub fn form_gcd(forms: &[HomogeneousForm]) -> Result<HomogeneousForm, AlgebraError> {
    let first = forms.first().ok_or(AlgebraError::ZeroSystem)?;
    let mut acc = HomogeneousForm::zero(first.field(), 0);
    for f in forms {
        if f.is_zero() {
            continue;
        }
        acc = if acc.is_zero() { f.monic() } else { gcd2(&acc, f)? };
        if acc.degree() == 0 {
            break;
        }
    }
    if acc.is_zero() {
        return Err(AlgebraError::ZeroSystem);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> HomogeneousForm {
        HomogeneousForm::parse(Field::Rationals, s).unwrap()
    }

    #[test]
    fn shared_variable() {
        assert_eq!(form_gcd(&[q("x*y"), q("x*z")]).unwrap(), q("x"));
        assert_eq!(form_gcd(&[q("y*z^2"), q("z^3")]).unwrap(), q("z^2"));
    }

    #[test]
    fn divisor_case() {
        let f = q("x*y*z*x^2 - x*y*z*z^2");
        let g = &f * &q("x + 2y - z");
        assert_eq!(form_gcd(&[f.clone(), g]).unwrap(), f.monic());
    }

    #[test]
    fn coprime_and_constants() {
        assert_eq!(form_gcd(&[q("x^2 + y^2"), q("x*z + y^2")]).unwrap().degree(), 0);
        assert!(form_gcd(&[HomogeneousForm::zero(Field::Rationals, 2)]).is_err());
        assert!(form_gcd(&[]).is_err());
    }

    #[test]
    fn over_prime_field() {
        let f = Field::prime(7).unwrap();
        let a = HomogeneousForm::parse(f, "x^2 - y*z").unwrap();
        let b = HomogeneousForm::parse(f, "x + 3y").unwrap();
        let c = HomogeneousForm::parse(f, "y - z").unwrap();
        let g = form_gcd(&[&a * &b, &a * &c]).unwrap();
        assert_eq!(g, a.monic());
    }

    #[test]
    fn modular_agrees_with_remainder_sequence() {
        let common = q("3/2*x^2 - 7*y*z + 5/3*z^2");
        let f = &common * &q("x^3 - 2/5*x*y^2 + y*z^2 + 11*z^3");
        let g = &common * &q("4*x*y - 9/7*z^2");
        let fast = modular_gcd(&f, &g).unwrap();
        let slow = Bivariate::from_form(&f).gcd(&Bivariate::from_form(&g)).homogenize(2).monic();
        assert_eq!(fast, slow);
        assert_eq!(fast, common.monic());
        assert_eq!(modular_gcd(&q("x^2 + y^2"), &q("x*z - y^2")).unwrap().degree(), 0);
    }

    #[test]
    fn reconstruction() {
        let m = BigInt::from(1_000_003u64) * BigInt::from(999_983u64);
        // a ≡ −7/3 (mod m)
        let a = (0..3)
            .map(|k| BigInt::from(-7) + &m * k)
            .find(|v: &BigInt| (v % 3u32).is_zero())
            .unwrap()
            / 3u32;
        assert_eq!(rational_reconstruction(&a, &m).unwrap(), BigRational::new((-7).into(), 3.into()));
        assert_eq!(rational_reconstruction(&BigInt::from(5), &m).unwrap(), BigRational::from_integer(5.into()));
    }
}
