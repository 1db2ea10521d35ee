//! Homogeneous forms in three variables `x, y, z` with exact coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{AlgebraError, Field, FieldElement, Matrix3, PlanePoint};

/// Exponent triple, ordered graded-lexicographically with `x > y > z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..3).all(|i| self.0[i] <= other.0[i])
    }

    fn quotient(&self, by: &Monomial) -> Monomial {
        Monomial(std::array::from_fn(|i| self.0[i] - by.0[i]))
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(std::array::from_fn(|i| self.0[i] + other.0[i]))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// A homogeneous polynomial of declared degree. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousForm {
    field: Field,
    degree: u32,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl HomogeneousForm {
    pub fn zero(field: Field, degree: u32) -> Self {
        HomogeneousForm {
            field,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        let field = c.field();
        let mut f = Self::zero(field, 0);
        if !c.is_zero() {
            f.terms.insert(Monomial([0, 0, 0]), c);
        }
        f
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    /// The coordinate form `x`, `y` or `z`.
    pub fn var(field: Field, index: usize) -> Self {
        let mut e = [0; 3];
        e[index] = 1;
        Self::monomial(Monomial(e), field.one())
    }

    pub fn monomial(m: Monomial, c: FieldElement) -> Self {
        let mut f = Self::zero(c.field(), m.degree());
        if !c.is_zero() {
            f.terms.insert(m, c);
        }
        f
    }

    /// The linear form `a x + b y + c z`.
    pub fn linear(coeffs: &[FieldElement; 3]) -> Self {
        let field = coeffs[0].field();
        let mut f = Self::zero(field, 1);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = [0; 3];
                e[i] = 1;
                f.terms.insert(Monomial(e), c.clone());
            }
        }
        f
    }

    pub fn from_terms(
        field: Field,
        degree: u32,
        terms: impl IntoIterator<Item = ([u32; 3], FieldElement)>,
    ) -> Result<Self, AlgebraError> {
        let mut f = Self::zero(field, degree);
        for (e, c) in terms {
            let m = Monomial(e);
            if m.degree() != degree {
                return Err(AlgebraError::DegreeMismatch {
                    expected: degree,
                    found: m.degree(),
                });
            }
            if c.field() != field {
                return Err(AlgebraError::FieldMismatch);
            }
            f.add_term(m, c);
        }
        Ok(f)
    }

    /// Parses expressions such as `y^2*z - x^3 + 3/2*x*z^2`.
    pub fn parse(field: Field, src: &str) -> Result<Self, AlgebraError> {
        parse_form(field, src, None)
    }

    /// Like [`HomogeneousForm::parse`] but with an explicit degree, so `0` is accepted.
    pub fn parse_with_degree(field: Field, src: &str, degree: u32) -> Result<Self, AlgebraError> {
        parse_form(field, src, Some(degree))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: [u32; 3]) -> FieldElement {
        self.terms
            .get(&Monomial(exps))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn leading(&self) -> Option<(&Monomial, &FieldElement)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(self.field, self.degree);
        }
        HomogeneousForm {
            field: self.field,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// Scales so that the graded-lex leading coefficient is 1. The zero form is returned as is.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, lc)) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.field);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval_coords(&self, pt: &[FieldElement; 3]) -> FieldElement {
        let max = self.degree as usize;
        let powers: Vec<Vec<FieldElement>> = pt
            .iter()
            .map(|v| {
                let mut p = Vec::with_capacity(max + 1);
                p.push(self.field.one());
                for k in 0..max {
                    let next = &p[k] * v;
                    p.push(next);
                }
                p
            })
            .collect();
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let e = m.0;
            let t = &(&powers[0][e[0] as usize] * &powers[1][e[1] as usize]) * &powers[2][e[2] as usize];
            acc = acc + &(c * &t);
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derive(&self, var: usize) -> Self {
        assert!(var < 3, "variable index out of range");
        if self.degree == 0 {
            return Self::zero(self.field, 0);
        }
        let mut out = Self::zero(self.field, self.degree - 1);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut n = m.0;
            n[var] -= 1;
            out.add_term(Monomial(n), c * &self.field.from_i64(e as i64));
        }
        out
    }

    /// Full division by `den` in graded-lex order; returns `(quotient, remainder)`.
    pub fn div_rem(&self, den: &HomogeneousForm) -> Result<(Self, Self), AlgebraError> {
        self.check_field(den)?;
        let (lm, lc) = den.leading().ok_or(AlgebraError::DivisionByZero)?;
        let lc_inv = lc.inv().expect("nonzero");
        let qdeg = self.degree.checked_sub(den.degree);
        let mut quotient = Self::zero(self.field, qdeg.unwrap_or(0));
        let mut remainder = Self::zero(self.field, self.degree);
        let mut work = self.clone();
        while let Some((m, c)) = work.leading().map(|(m, c)| (*m, c.clone())) {
            if qdeg.is_some() && lm.divides(&m) {
                let qm = m.quotient(lm);
                let qc = &c * &lc_inv;
                for (dm, dc) in &den.terms {
                    work.add_term(qm.times(dm), -(&qc * dc));
                }
                quotient.add_term(qm, qc);
            } else {
                work.terms.remove(&m);
                remainder.add_term(m, c);
            }
        }
        Ok((quotient, remainder))
    }

    /// Exact quotient `self / den`, or `NonDivisible` carrying the remainder.
    pub fn divexact(&self, den: &HomogeneousForm) -> Result<Self, AlgebraError> {
        let (q, r) = self.div_rem(den)?;
        if !r.is_zero() {
            return Err(AlgebraError::NonDivisible {
                remainder: r.to_string(),
            });
        }
        if self.is_zero() && self.degree < den.degree {
            return Ok(Self::zero(self.field, 0));
        }
        Ok(q)
    }

    /// Substitutes `x, y, z := subs[0], subs[1], subs[2]`; all substitutes share one degree.
    pub fn substitute(&self, subs: &[HomogeneousForm; 3]) -> Result<Self, AlgebraError> {
        let e = subs[0].degree;
        if subs.iter().any(|s| s.degree != e) {
            return Err(AlgebraError::DegreeMismatch {
                expected: e,
                found: subs.iter().map(|s| s.degree).find(|&d| d != e).unwrap_or(e),
            });
        }
        for s in subs {
            self.check_field(s)?;
        }
        let mut max = [0u32; 3];
        for m in self.terms.keys() {
            for i in 0..3 {
                max[i] = max[i].max(m.0[i]);
            }
        }
        let powers: Vec<Vec<HomogeneousForm>> = (0..3)
            .map(|i| {
                let mut p = vec![Self::one(self.field)];
                for k in 0..max[i] as usize {
                    let next = &p[k] * &subs[i];
                    p.push(next);
                }
                p
            })
            .collect();
        let mut out = Self::zero(self.field, self.degree * e);
        for (m, c) in &self.terms {
            let t = &(&powers[0][m.0[0] as usize] * &powers[1][m.0[1] as usize]) * &powers[2][m.0[2] as usize];
            for (tm, tc) in t.terms {
                out.add_term(tm, c * &tc);
            }
        }
        Ok(out)
    }

    /// `f ∘ M`, i.e. `f(M·(x,y,z))`.
    pub fn linear_change(&self, m: &Matrix3) -> Result<Self, AlgebraError> {
        if m.field() != self.field {
            return Err(AlgebraError::FieldMismatch);
        }
        if m.det().is_zero() {
            return Err(AlgebraError::SingularMatrix);
        }
        let subs = std::array::from_fn(|i| Self::linear(&m.rows()[i]));
        self.substitute(&subs)
    }

    /// Largest `k` such that `var^k` divides the form (the form's degree for the zero form).
    pub fn var_valuation(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).min().unwrap_or(self.degree)
    }

    /// Divides out `var^k`.
    pub fn strip_var(&self, var: usize, k: u32) -> Self {
        let mut out = Self::zero(self.field, self.degree - k);
        for (m, c) in &self.terms {
            let mut e = m.0;
            e[var] -= k;
            out.terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Vanishing order at `(1:0:0)`: the least `deg - i` over monomials `x^i y^j z^k`.
    pub fn order_at_first_unit(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.degree - m.0[0]).min()
    }

    pub(crate) fn check_field(&self, other: &HomogeneousForm) -> Result<(), AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch);
        }
        Ok(())
    }

    pub fn to_json(&self) -> FormJson {
        FormJson {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(m, c)| TermJson {
                    exp: m.0,
                    c: c.to_literal(),
                })
                .collect(),
        }
    }

    pub fn from_json(field: Field, json: &FormJson) -> Result<Self, AlgebraError> {
        let terms = json
            .terms
            .iter()
            .map(|t| Ok((t.exp, field.parse(&t.c)?)))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        Self::from_terms(field, json.degree, terms)
    }
}

/// Form evaluation at the canonical representative of a point.
pub fn form_eval(f: &HomogeneousForm, pt: &PlanePoint) -> Result<FieldElement, AlgebraError> {
    if f.field() != pt.field() {
        return Err(AlgebraError::FieldMismatch);
    }
    Ok(f.eval_coords(pt.coords()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: [u32; 3],
    pub c: String,
}

/// Serialized form: terms sorted leading-first in graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

impl<'a> Add<&'a HomogeneousForm> for &'a HomogeneousForm {
    type Output = HomogeneousForm;
    fn add(self, rhs: &HomogeneousForm) -> HomogeneousForm {
        assert_eq!(self.field, rhs.field, "field mismatch");
        assert_eq!(self.degree, rhs.degree, "adding forms of different degrees");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a HomogeneousForm> for &'a HomogeneousForm {
    type Output = HomogeneousForm;
    fn sub(self, rhs: &HomogeneousForm) -> HomogeneousForm {
        self + &(-rhs)
    }
}

impl Neg for &HomogeneousForm {
    type Output = HomogeneousForm;
    fn neg(self) -> HomogeneousForm {
        HomogeneousForm {
            field: self.field,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for HomogeneousForm {
    type Output = HomogeneousForm;
    fn neg(self) -> HomogeneousForm {
        -&self
    }
}

impl<'a> Mul<&'a HomogeneousForm> for &'a HomogeneousForm {
    type Output = HomogeneousForm;
    fn mul(self, rhs: &HomogeneousForm) -> HomogeneousForm {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let mut acc: std::collections::HashMap<Monomial, FieldElement> = Default::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let m = a.times(b);
                let v = ca * cb;
                acc.entry(m)
                    .and_modify(|e| *e = &*e + &v)
                    .or_insert(v);
            }
        }
        HomogeneousForm {
            field: self.field,
            degree: self.degree + rhs.degree,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<HomogeneousForm> for HomogeneousForm {
            type Output = HomogeneousForm;
            fn $method(self, rhs: HomogeneousForm) -> HomogeneousForm {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.field;
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = match c {
                FieldElement::Rational(q) if q < &num_rational::BigRational::from_integer(0.into()) => {
                    (true, -c)
                }
                _ => (false, c.clone()),
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.degree() == 0 {
                factors.push(mag.to_string());
            }
            for (i, name) in ["x", "y", "z"].iter().enumerate() {
                match m.0[i] {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        let _ = field;
        Ok(())
    }
}

fn parse_form(field: Field, src: &str, degree: Option<u32>) -> Result<HomogeneousForm, AlgebraError> {
    let err = |msg: &str| AlgebraError::Parse(format!("{msg} in form `{src}`"));
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms: Vec<(Monomial, FieldElement)> = Vec::new();
    let mut i = 0;
    if chars.is_empty() {
        return Err(err("empty expression"));
    }
    while i < chars.len() {
        let mut negative = false;
        while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
            if chars[i] == '-' {
                negative = !negative;
            }
            i += 1;
        }
        let mut coeff = field.one();
        let mut exps = [0u32; 3];
        let mut saw_factor = false;
        loop {
            if i >= chars.len() {
                break;
            }
            let ch = chars[i];
            if ch.is_ascii_digit() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                coeff = &coeff * &field.parse(&lit)?;
            } else if let Some(v) = ['x', 'y', 'z'].iter().position(|&c| c == ch) {
                i += 1;
                let mut e = 1u32;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let lit: String = chars[start..i].iter().collect();
                    e = lit.parse().map_err(|_| err("bad exponent"))?;
                }
                exps[v] += e;
            } else {
                return Err(err(&format!("unexpected `{ch}`")));
            }
            saw_factor = true;
            if i < chars.len() && chars[i] == '*' {
                i += 1;
                continue;
            }
            if i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                break;
            }
        }
        if !saw_factor {
            return Err(err("dangling sign"));
        }
        if negative {
            coeff = -coeff;
        }
        terms.push((Monomial(exps), coeff));
    }
    let deg = match degree {
        Some(d) => d,
        None => terms
            .iter()
            .find(|(_, c)| !c.is_zero())
            .map(|(m, _)| m.degree())
            .unwrap_or(0),
    };
    let mut f = HomogeneousForm::zero(field, deg);
    for (m, c) in terms {
        if c.is_zero() {
            continue;
        }
        if m.degree() != deg {
            return Err(AlgebraError::DegreeMismatch {
                expected: deg,
                found: m.degree(),
            });
        }
        f.add_term(m, c);
    }
    Ok(f)
}
