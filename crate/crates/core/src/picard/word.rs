use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use super::{overt_step, DivisorClass, FunctionalValues, PicLattice, PicardError};

/// A reduced word in the generators, as omega ids; `D = σ'_{p_m} ∘ … ∘ σ'_{p_1}(L)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(lat: &PicLattice, letters: Vec<usize>) -> Result<Self, PicardError> {
        for &p in &letters {
            lat.check_generator(p)?;
        }
        if letters.windows(2).any(|w| w[0] == w[1]) {
            return Err(PicardError::WordNotReduced(letters));
        }
        Ok(Word(letters))
    }

    /// From 0-based positions in the generator list.
    pub fn from_indices(lat: &PicLattice, idx: &[usize]) -> Result<Self, PicardError> {
        let gens = lat.marked().generators();
        let letters = idx
            .iter()
            .map(|&i| gens.get(i).copied().ok_or(PicardError::NotAGenerator(i)))
            .collect::<Result<_, _>>()?;
        Self::new(lat, letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Assertion {
    /// `δ_p < 0`
    LastNegative,
    /// `δ_a > 0` for `a ≠ p`
    OthersPositive,
    /// `−δ_p < δ_a` for `a ≠ p`, `a ⊁ p`
    OthersDominate,
    /// `iδ_a + jλ_{b,a} + kδ_b > 0`
    FirstFamily,
    /// `i(δ_a + 2λ_{b,a}) + jδ_{a'} + kδ_b > 0`
    SecondFamily,
    /// `δ_a + 2λ_{p,a} + δ_r > δ_p`
    Closing,
    /// `D ≠ L`
    NotLine,
}

impl Assertion {
    pub const ALL: [Assertion; 7] = [
        Assertion::LastNegative,
        Assertion::OthersPositive,
        Assertion::OthersDominate,
        Assertion::FirstFamily,
        Assertion::SecondFamily,
        Assertion::Closing,
        Assertion::NotLine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Assertion::LastNegative => "delta_p_negative",
            Assertion::OthersPositive => "delta_a_positive",
            Assertion::OthersDominate => "delta_a_exceeds_minus_delta_p",
            Assertion::FirstFamily => "ijk_first_family",
            Assertion::SecondFamily => "ijk_second_family",
            Assertion::Closing => "delta_a_2lambda_delta_r",
            Assertion::NotLine => "d_not_l",
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssertionCheck {
    pub assertion: Assertion,
    /// Number of instances checked; zero when vacuous.
    pub instances: usize,
    pub counterexample: Option<String>,
}

impl AssertionCheck {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub prefix: usize,
    pub values: FunctionalValues,
    pub checks: Vec<AssertionCheck>,
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn first_failure(&self) -> Option<&AssertionCheck> {
        self.checks.iter().find(|c| !c.passed())
    }
}

struct Tally {
    assertion: Assertion,
    instances: usize,
    counterexample: Option<String>,
}

impl Tally {
    fn new(assertion: Assertion) -> Self {
        Tally {
            assertion,
            instances: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(what());
        }
    }

    fn done(self) -> AssertionCheck {
        AssertionCheck {
            assertion: self.assertion,
            instances: self.instances,
            counterexample: self.counterexample,
        }
    }
}

/// `slope·j + offset > 0` for every integer `j ≥ j0`.
fn positive_from(slope: &BigInt, offset: &BigInt, j0: i64) -> bool {
    !slope.is_negative() && (slope * j0 + offset).is_positive()
}

/// Evaluates every assertion family on `D` with last letter `p` (`None` for `m = 0`).
///
/// The `(i, j, k)` families are quantified over infinitely many `(i, j)`; along each
/// pattern the left side is affine in `j`, so positivity for all `j` is decided by the
/// sign of the slope and the value at the smallest admissible `j`.
pub(crate) fn check_assertions(
    lat: &PicLattice,
    d: &DivisorClass,
    p: Option<usize>,
    prefix: usize,
) -> InvariantReport {
    let ms = lat.marked();
    let values = FunctionalValues::of(lat, d);
    let dl = &values.delta;
    let n = lat.len();
    let not_p = |q: usize| Some(q) != p;
    let two = BigInt::from(2);

    let mut last = Tally::new(Assertion::LastNegative);
    let mut others = Tally::new(Assertion::OthersPositive);
    let mut dominate = Tally::new(Assertion::OthersDominate);
    let mut first = Tally::new(Assertion::FirstFamily);
    let mut second = Tally::new(Assertion::SecondFamily);
    let mut closing = Tally::new(Assertion::Closing);
    let mut not_line = Tally::new(Assertion::NotLine);

    if let Some(p) = p {
        last.check(dl[p].is_negative(), || format!("δ_{p} = {}", dl[p]));
        not_line.check(*d != lat.line(), || "D = L".into());
    }
    for a in (0..n).filter(|&a| not_p(a)) {
        others.check(dl[a].is_positive(), || format!("δ_{a} = {}", dl[a]));
        if let Some(p) = p {
            if !ms.succ(a, p) {
                dominate.check(-&dl[p] < dl[a], || format!("−δ_{p} = {} ≥ δ_{a} = {}", -&dl[p], dl[a]));
            }
        }
    }
    for ([b, a], l) in &values.lambda {
        let (b, a) = (*b, *a);
        let (da, db) = (&dl[a], &dl[b]);
        let s = da + l;
        let mut case = |ok: bool, pattern: &str| {
            first.check(ok, || format!("b={b}, a={a}, pattern {pattern}: δ_a={da}, λ={l}, δ_b={db}"))
        };
        if not_p(a) {
            case(positive_from(&s, &-db, 2), "i=j, k=−1");
            case(positive_from(&s, &(da + db), 2), "i=j+1, k=1");
        }
        if not_p(b) {
            case(positive_from(&s, db, 2), "i=j, k=1");
            case(positive_from(&s, &(-da - db), 2), "i=j−1, k=−1");
        }
    }
    for b in 0..n {
        let succ = ms.successors(b);
        let db = &dl[b];
        for &a in succ {
            let x = &dl[a] + &two * &lat.lambda_raw(d, b, a);
            for &a2 in succ.iter().filter(|&&a2| a2 != a) {
                let da2 = &dl[a2];
                let s = &x + da2;
                let mut case = |ok: bool, pattern: &str| {
                    second.check(ok, || {
                        format!("b={b}, a={a}, a'={a2}, pattern {pattern}: δ_a+2λ={x}, δ_a'={da2}, δ_b={db}")
                    })
                };
                if not_p(b) {
                    case(positive_from(&s, db, 1), "i=j, k=1");
                    case(positive_from(&s, &(&x - db), 1), "i=j+1, k=−1");
                }
                if not_p(a2) {
                    case(positive_from(&s, &-db, 1), "i=j, k=−1");
                    case(positive_from(&s, &(db - &x), 2), "i=j−1, k=1");
                }
            }
        }
    }
    if let Some(p) = p {
        for &a in ms.successors(p) {
            let lhs = &dl[a] + &two * &lat.lambda_raw(d, p, a);
            for r in (0..n).filter(|&r| r != p) {
                closing.check(&lhs + &dl[r] > dl[p], || {
                    format!("a={a}, r={r}: δ_a+2λ_(p,a)={lhs}, δ_r={}, δ_p={}", dl[r], dl[p])
                });
            }
        }
    }
    InvariantReport {
        prefix,
        values,
        checks: [last, others, dominate, first, second, closing, not_line]
            .into_iter()
            .map(Tally::done)
            .collect(),
    }
}

/// `D` for the word and the assertion report on every prefix (including the empty one).
pub fn word_evaluate(lat: &PicLattice, w: &Word) -> Result<(DivisorClass, Vec<InvariantReport>), PicardError> {
    let mut d = lat.line();
    let mut reports = vec![check_assertions(lat, &d, None, 0)];
    for (i, &p) in w.letters().iter().enumerate() {
        d = overt_step(lat, &d, p)?.0;
        reports.push(check_assertions(lat, &d, Some(p), i + 1));
    }
    for r in &reports {
        if let Some(f) = r.first_failure() {
            return Err(PicardError::AssertionFailure {
                word: w.letters().to_vec(),
                prefix: r.prefix,
                family: f.assertion.name().into(),
                detail: f.counterexample.clone().unwrap_or_default(),
            });
        }
    }
    Ok((d, reports))
}

/// The `L`-coefficient of `σ'_{p_m} ∘ … ∘ σ'_{p_1}(L)`: the degree of
/// `σ_{p_m} ∘ … ∘ σ_{p_1}` (and of its inverse).
pub fn predicted_degree(lat: &PicLattice, w: &Word) -> Result<BigInt, PicardError> {
    Ok(word_evaluate(lat, w)?.0.m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::MarkedPointSet;
    use num_traits::One;

    #[test]
    fn empty_word_is_line() {
        let lat = PicLattice::new(MarkedPointSet::generic(&[false, false]));
        let w = Word::new(&lat, vec![]).unwrap();
        let (d, reps) = word_evaluate(&lat, &w).unwrap();
        assert_eq!(d, lat.line());
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].checks[0].instances, 0);
        assert!(reps[0].passed());
    }

    #[test]
    fn single_letter() {
        let lat = PicLattice::new(MarkedPointSet::generic(&[false, false]));
        let w = Word::new(&lat, vec![0]).unwrap();
        let (d, reps) = word_evaluate(&lat, &w).unwrap();
        assert_eq!(d.m, BigInt::from(3));
        assert_eq!(reps[1].values.delta[0], BigInt::from(-2));
        assert_eq!(predicted_degree(&lat, &w).unwrap(), BigInt::from(3));
        let w2 = Word::new(&lat, vec![0, 5]).unwrap();
        assert_eq!(predicted_degree(&lat, &w2).unwrap(), BigInt::from(9));
        assert!(!predicted_degree(&lat, &w2).unwrap().is_one());
    }

    #[test]
    fn rejects_unreduced() {
        let lat = PicLattice::new(MarkedPointSet::generic(&[false, false]));
        assert!(matches!(Word::new(&lat, vec![0, 0]), Err(PicardError::WordNotReduced(_))));
        assert!(matches!(Word::new(&lat, vec![1]), Err(PicardError::NotAGenerator(1))));
        assert_eq!(Word::from_indices(&lat, &[1, 0]).unwrap().letters(), &[5, 0]);
    }

    #[test]
    fn affine_positivity() {
        let b = |v: i64| BigInt::from(v);
        assert!(positive_from(&b(0), &b(1), 2));
        assert!(!positive_from(&b(-1), &b(100), 2));
        assert!(!positive_from(&b(3), &b(-6), 2));
        assert!(positive_from(&b(3), &b(-5), 2));
    }
}
