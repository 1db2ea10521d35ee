//! Divisor classes on the blow-up `S → P²` of `Ω`, the action of the lifted
//! involutions `σ'_p`, and the functionals `Δ` and `Λ`.

mod certify;
mod word;

pub use certify::{certify_free_product, Certificate, Counterexample, ORIENTATION};
pub use word::{predicted_degree, word_evaluate, Assertion, AssertionCheck, InvariantReport, Word};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::MarkedPointSet;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PicardError {
    #[error("{0} is not a generator")]
    NotAGenerator(usize),
    #[error("unknown omega id {0}")]
    UnknownId(usize),
    #[error("{b} ≻ {a} does not hold")]
    NotInSuccRelation { b: usize, a: usize },
    #[error("recursion table disagrees with direct evaluation: {0}")]
    RecursionMismatch(String),
    #[error("word {0:?} repeats a letter")]
    WordNotReduced(Vec<usize>),
    #[error("assertion {family} fails on word {word:?} at prefix {prefix}: {detail}")]
    AssertionFailure {
        word: Vec<usize>,
        prefix: usize,
        family: String,
        detail: String,
    },
    #[error("lattice action of {p} breaks {what}")]
    InvariantViolated { p: usize, what: String },
    #[error("certificate needs at least one generator and max_len ≥ 1")]
    EmptyCertificate,
}

/// `Pic(S)` with basis `L, E_0, …, E_{n−1}` and form `diag(1, −1, …, −1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicLattice {
    marked: MarkedPointSet,
}

/// `m·L − Σ m_q·E_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub m: BigInt,
    pub mults: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorJson {
    pub m: String,
    pub mults: Vec<String>,
}

impl DivisorClass {
    pub fn zero(n: usize) -> Self {
        DivisorClass {
            m: BigInt::zero(),
            mults: vec![BigInt::zero(); n],
        }
    }

    pub fn line(n: usize) -> Self {
        DivisorClass {
            m: BigInt::one(),
            ..Self::zero(n)
        }
    }

    pub fn exceptional(n: usize, q: usize) -> Self {
        let mut d = Self::zero(n);
        d.mults[q] = -BigInt::one();
        d
    }

    /// `−3L + Σ E_q`.
    pub fn canonical(n: usize) -> Self {
        DivisorClass {
            m: BigInt::from(-3),
            mults: vec![-BigInt::one(); n],
        }
    }

    pub fn from_i64(m: i64, mults: &[i64]) -> Self {
        DivisorClass {
            m: m.into(),
            mults: mults.iter().map(|&v| v.into()).collect(),
        }
    }

    /// Coordinates in the basis `L, E_0, …`.
    pub fn coords(&self) -> Vec<BigInt> {
        std::iter::once(self.m.clone()).chain(self.mults.iter().map(|v| -v)).collect()
    }

    pub fn from_coords(c: &[BigInt]) -> Self {
        DivisorClass {
            m: c[0].clone(),
            mults: c[1..].iter().map(|v| -v).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        DivisorClass {
            m: &self.m + &other.m,
            mults: self.mults.iter().zip(&other.mults).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        DivisorClass {
            m: &self.m - &other.m,
            mults: self.mults.iter().zip(&other.mults).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn max_abs_bits(&self) -> u64 {
        std::iter::once(&self.m).chain(&self.mults).map(|v| v.abs().bits()).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> DivisorJson {
        DivisorJson {
            m: self.m.to_string(),
            mults: self.mults.iter().map(|v| v.to_string()).collect(),
        }
    }
}

/// An integer matrix acting on coordinate vectors; column `j` is the image of basis
/// vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeAction {
    pub p: usize,
    pub matrix: Vec<Vec<i64>>,
}

impl LatticeAction {
    pub fn apply(&self, d: &DivisorClass) -> DivisorClass {
        let c = d.coords();
        let out: Vec<BigInt> = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(&c).filter(|(a, _)| **a != 0).map(|(a, v)| v * *a).sum())
            .collect();
        DivisorClass::from_coords(&out)
    }

    /// The invariants `M² = I`, `MᵀJM = J`, `MK = K`, `M(L − E_p) = L − E_p`; returns
    /// the names of those that fail.
    pub fn failed_invariants(&self) -> Vec<&'static str> {
        let n = self.matrix.len();
        let m = &self.matrix;
        let j = |i: usize| if i == 0 { 1 } else { -1 };
        let mut bad = Vec::new();
        let square_is_id = (0..n).all(|r| {
            (0..n).all(|c| (0..n).map(|k| m[r][k] * m[k][c]).sum::<i64>() == i64::from(r == c))
        });
        if !square_is_id {
            bad.push("M² = I");
        }
        let isometry = (0..n).all(|r| {
            (0..n).all(|c| (0..n).map(|k| m[k][r] * j(k) * m[k][c]).sum::<i64>() == if r == c { j(r) } else { 0 })
        });
        if !isometry {
            bad.push("MᵀJM = J");
        }
        let k = DivisorClass::canonical(n - 1);
        if self.apply(&k) != k {
            bad.push("MK = K");
        }
        let l_minus_ep = DivisorClass::line(n - 1).sub(&DivisorClass::exceptional(n - 1, self.p));
        if self.apply(&l_minus_ep) != l_minus_ep {
            bad.push("M(L − E_p) = L − E_p");
        }
        bad
    }
}

impl PicLattice {
    pub fn new(marked: MarkedPointSet) -> Self {
        PicLattice { marked }
    }

    pub fn marked(&self) -> &MarkedPointSet {
        &self.marked
    }

    /// `|Ω|`.
    pub fn len(&self) -> usize {
        self.marked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.marked.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.len() + 1
    }

    /// Diagonal of the intersection form.
    pub fn form(&self) -> Vec<i64> {
        std::iter::once(1).chain(std::iter::repeat(-1).take(self.len())).collect()
    }

    pub fn line(&self) -> DivisorClass {
        DivisorClass::line(self.len())
    }

    pub fn canonical(&self) -> DivisorClass {
        DivisorClass::canonical(self.len())
    }

    pub fn intersect(&self, a: &DivisorClass, b: &DivisorClass) -> BigInt {
        let mut s = &a.m * &b.m;
        for (x, y) in a.mults.iter().zip(&b.mults) {
            s -= x * y;
        }
        s
    }

    fn check_id(&self, q: usize) -> Result<(), PicardError> {
        if q < self.len() {
            Ok(())
        } else {
            Err(PicardError::UnknownId(q))
        }
    }

    fn check_generator(&self, p: usize) -> Result<(), PicardError> {
        if self.marked.is_generator(p) {
            Ok(())
        } else {
            Err(PicardError::NotAGenerator(p))
        }
    }

    pub(crate) fn delta_raw(&self, d: &DivisorClass, b: usize) -> BigInt {
        let mut v = BigInt::from(2) * (&d.m - &d.mults[b]);
        for &c in self.marked.successors(b) {
            v -= &d.mults[c];
        }
        v
    }

    pub(crate) fn lambda_raw(&self, d: &DivisorClass, b: usize, a: usize) -> BigInt {
        let mut v = &d.m - &d.mults[b] + &d.mults[a];
        for &c in self.marked.successors(b) {
            if c != a {
                v -= &d.mults[c];
            }
        }
        v
    }

    /// `σ'_p(D)` from the closed formulas.
    pub(crate) fn apply_sigma_raw(&self, d: &DivisorClass, p: usize) -> DivisorClass {
        let succ = self.marked.successors(p);
        let n_sum: BigInt = succ.iter().map(|&c| &d.mults[c]).sum();
        let (n, np) = (&d.m, &d.mults[p]);
        let mut out = d.clone();
        out.m = BigInt::from(3) * n - BigInt::from(2) * np - &n_sum;
        out.mults[p] = BigInt::from(2) * n - np - &n_sum;
        for &a in succ {
            out.mults[a] = n - np - &d.mults[a];
        }
        out
    }
}

pub fn lattice_new(marked: MarkedPointSet) -> PicLattice {
    PicLattice::new(marked)
}

/// The matrix of `σ'_p`, with its invariants verified.
pub fn sigma_action(lat: &PicLattice, p: usize) -> Result<LatticeAction, PicardError> {
    lat.check_generator(p)?;
    let r = lat.rank();
    let mut matrix = vec![vec![0i64; r]; r];
    let succ = lat.marked.successors(p);
    // L ↦ 3L − 2E_p − Σ E_b
    matrix[0][0] = 3;
    matrix[1 + p][0] = -2;
    // E_p ↦ 2L − E_p − Σ E_b
    matrix[0][1 + p] = 2;
    matrix[1 + p][1 + p] = -1;
    for &b in succ {
        matrix[1 + b][0] = -1;
        matrix[1 + b][1 + p] = -1;
    }
    for q in 0..lat.len() {
        if q == p {
            continue;
        }
        if succ.contains(&q) {
            // E_a ↦ L − E_p − E_a
            matrix[0][1 + q] = 1;
            matrix[1 + p][1 + q] = -1;
            matrix[1 + q][1 + q] = -1;
        } else {
            matrix[1 + q][1 + q] = 1;
        }
    }
    let action = LatticeAction { p, matrix };
    if let Some(what) = action.failed_invariants().first() {
        return Err(PicardError::InvariantViolated { p, what: what.to_string() });
    }
    Ok(action)
}

pub fn delta(lat: &PicLattice, d: &DivisorClass, b: usize) -> Result<BigInt, PicardError> {
    lat.check_id(b)?;
    Ok(lat.delta_raw(d, b))
}

pub fn lambda(lat: &PicLattice, d: &DivisorClass, b: usize, a: usize) -> Result<BigInt, PicardError> {
    lat.check_id(b)?;
    lat.check_id(a)?;
    if !lat.marked.succ(b, a) {
        return Err(PicardError::NotInSuccRelation { b, a });
    }
    Ok(lat.lambda_raw(d, b, a))
}

/// All `Δ_q` and all `Λ_{b,a}` (in the order of [`MarkedPointSet::pairs`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalValues {
    pub delta: Vec<BigInt>,
    pub lambda: Vec<([usize; 2], BigInt)>,
}

impl FunctionalValues {
    pub fn of(lat: &PicLattice, d: &DivisorClass) -> Self {
        FunctionalValues {
            delta: (0..lat.len()).map(|q| lat.delta_raw(d, q)).collect(),
            lambda: lat
                .marked
                .pairs()
                .into_iter()
                .map(|[b, a]| ([b, a], lat.lambda_raw(d, b, a)))
                .collect(),
        }
    }

    pub fn lambda_of(&self, b: usize, a: usize) -> &BigInt {
        &self.lambda.iter().find(|(k, _)| *k == [b, a]).expect("b ≻ a").1
    }
}

/// Values on `σ'_p(D)` predicted from those on `D`, case by case.
fn recursion_table(lat: &PicLattice, before: &FunctionalValues, p: usize) -> FunctionalValues {
    let ms = &lat.marked;
    let dp = &before.delta[p];
    let two = BigInt::from(2);
    let delta = (0..lat.len())
        .map(|a| {
            let da = &before.delta[a];
            if a == p {
                -da
            } else if ms.succ(a, p) {
                da + dp
            } else if ms.succ(p, a) {
                da + &two * before.lambda_of(p, a)
            } else {
                da + &two * dp
            }
        })
        .collect();
    let lambda = before
        .lambda
        .iter()
        .map(|([b, a], l)| {
            let (b, a) = (*b, *a);
            let v = if b == p {
                -l
            } else if a == p {
                l + &two * dp
            } else if ms.succ(b, p) {
                l.clone()
            } else if ms.succ(p, b) {
                l + before.lambda_of(p, b)
            } else {
                l + dp
            };
            ([b, a], v)
        })
        .collect();
    FunctionalValues { delta, lambda }
}

/// `σ'_p(D)` with all its `Δ`/`Λ` values, computed from the recursion table and
/// checked against direct evaluation.
pub fn overt_step(
    lat: &PicLattice,
    d: &DivisorClass,
    p: usize,
) -> Result<(DivisorClass, FunctionalValues), PicardError> {
    lat.check_generator(p)?;
    let before = FunctionalValues::of(lat, d);
    let next = lat.apply_sigma_raw(d, p);
    let table = recursion_table(lat, &before, p);
    let direct = FunctionalValues::of(lat, &next);
    if table != direct {
        let what = (0..lat.len())
            .find(|&q| table.delta[q] != direct.delta[q])
            .map(|q| format!("Δ_{q}: table {} vs direct {}", table.delta[q], direct.delta[q]))
            .or_else(|| {
                table
                    .lambda
                    .iter()
                    .zip(&direct.lambda)
                    .find(|(x, y)| x != y)
                    .map(|((k, x), (_, y))| format!("Λ_{{{},{}}}: table {x} vs direct {y}", k[0], k[1]))
            })
            .unwrap_or_default();
        return Err(PicardError::RecursionMismatch(format!("σ'_{p}: {what}")));
    }
    Ok((next, table))
}
