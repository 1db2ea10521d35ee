use serde::Serialize;

use super::{MapError, RationalMap};
use crate::algebra::{
    binary_gcd, binary_roots, common_zeros, AlgebraError, FieldElement, HomogeneousForm, Matrix3, PlanePoint,
};
use crate::curve::{CubicCurve, InfinitelyNearRecord, OmegaKind};

/// A base point with its multiplicity. `location` is `Proper` or `Near`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasePointRecord {
    pub location: OmegaKind,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BasePointJson {
    Proper { point: [String; 3], multiplicity: u32 },
    Near { base: [String; 3], line: [String; 3], multiplicity: u32 },
}

impl BasePointRecord {
    pub fn is_near(&self) -> bool {
        matches!(self.location, OmegaKind::Near(_))
    }

    pub fn to_json(&self) -> BasePointJson {
        match &self.location {
            OmegaKind::Near(r) => BasePointJson::Near {
                base: r.base.literals(),
                line: r.line.literals(),
                multiplicity: self.multiplicity,
            },
            OmegaKind::Proper(p) => BasePointJson::Proper {
                point: p.literals(),
                multiplicity: self.multiplicity,
            },
            OmegaKind::Formal { .. } => unreachable!("base points carry coordinates"),
        }
    }
}

/// Minimum vanishing order of the components at `p`.
pub fn multiplicity_at(phi: &RationalMap, p: &PlanePoint) -> u32 {
    let m = Matrix3::moving_unit_to(p, 0);
    phi.components()
        .iter()
        .filter_map(|c| c.linear_change(&m).ok()?.order_at_first_unit())
        .min()
        .unwrap_or(0)
}

/// Base points in the first neighbourhood of `p`, where `phi` has multiplicity `k`.
/// Returns the records and the degree of the tangent-cone factor with no root over
/// the base field.
fn near_base_points(phi: &RationalMap, p: &PlanePoint, k: u32) -> Result<(Vec<BasePointRecord>, usize), MapError> {
    let field = phi.field();
    let m = Matrix3::moving_unit_to(p, 0);
    let local: Vec<HomogeneousForm> = phi
        .components()
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.linear_change(&m))
        .collect::<Result<_, _>>()?;
    let d = phi.degree();
    let cones: Vec<HomogeneousForm> = local
        .iter()
        .map(|g| {
            let terms = g
                .terms()
                .filter(|(mo, _)| mo.0[0] == d - k)
                .map(|(mo, c)| ([mo.0[1], mo.0[2], 0], c.clone()));
            HomogeneousForm::from_terms(field, k, terms).unwrap()
        })
        .collect();
    let Some(h) = binary_gcd(cones.iter()) else {
        return Ok((vec![], 0));
    };
    if h.degree() == 0 {
        return Ok((vec![], 0));
    }
    let roots = binary_roots(&h)?;
    let mut out = Vec::new();
    for ([s, t], _) in &roots.roots {
        let mult = near_multiplicity(&local, k, s, t)?;
        if mult == 0 {
            continue;
        }
        let dir = m.apply_point(&PlanePoint::new([field.zero(), s.clone(), t.clone()])?)?;
        out.push(BasePointRecord {
            location: OmegaKind::Near(InfinitelyNearRecord {
                base: p.clone(),
                line: p.join(&dir)?,
            }),
            multiplicity: mult,
        });
    }
    Ok((out, roots.unresolved_degree))
}

/// Multiplicity of the strict transform at the point of the exceptional divisor
/// over the direction `(y:z) = (s:t)`. In the chart `x = 1` with `w` the coordinate
/// transverse to the direction, `yᵇwᶜ` contributes `b + 2c − k` after one blow-up.
fn near_multiplicity(local: &[HomogeneousForm], k: u32, s: &FieldElement, t: &FieldElement) -> Result<u32, MapError> {
    let field = s.field();
    let (along, across) = if s.is_zero() { (2, 1) } else { (1, 2) };
    let slope = if s.is_zero() { field.zero() } else { t / s };
    let mut subs: [HomogeneousForm; 3] = std::array::from_fn(|i| HomogeneousForm::var(field, i));
    subs[across] = &subs[across] + &subs[along].scale(&slope);
    let mut best = u32::MAX;
    for g in local {
        let g = g.substitute(&subs)?;
        for (mo, _) in g.terms() {
            let v = mo.0[along] + 2 * mo.0[across];
            best = best.min(v.saturating_sub(k));
        }
    }
    Ok(best)
}

fn scan_common_zeros(phi: &RationalMap) -> Option<Vec<PlanePoint>> {
    let pts = PlanePoint::enumerate(phi.field())?;
    Some(
        pts.into_iter()
            .filter(|p| phi.components().iter().all(|c| c.eval_coords(p.coords()).is_zero()))
            .collect(),
    )
}

/// Base points found over the base field, proper and first-order near, together with
/// the degree of what elimination certified to lie outside it.
pub fn base_points_partial(phi: &RationalMap) -> Result<(Vec<BasePointRecord>, usize), MapError> {
    if phi.degree() == 0 {
        return Ok((vec![], 0));
    }
    let (mut proper, mut unresolved) = match common_zeros(phi.components()) {
        Ok(cz) => {
            let u = if cz.complete { 0 } else { 1 };
            (cz.points, u)
        }
        Err(AlgebraError::FieldTooSmall { .. }) => (scan_common_zeros(phi).expect("small prime field"), 0),
        Err(e) => return Err(e.into()),
    };
    proper.sort();
    let mut records = Vec::new();
    for p in proper {
        let k = multiplicity_at(phi, &p);
        records.push(BasePointRecord {
            location: OmegaKind::Proper(p.clone()),
            multiplicity: k,
        });
        let (near, u) = near_base_points(phi, &p, k)?;
        records.extend(near);
        unresolved += u;
    }
    Ok((records, unresolved))
}

pub fn proper_base_points(phi: &RationalMap) -> Result<Vec<BasePointRecord>, MapError> {
    let (records, unresolved) = base_points_partial(phi)?;
    if unresolved > 0 {
        let found = records
            .iter()
            .filter_map(|r| match &r.location {
                OmegaKind::Proper(p) => Some(p.clone()),
                _ => None,
            })
            .collect();
        return Err(MapError::BasePointsNotRational { found, unresolved });
    }
    Ok(records)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomaloidalReport {
    pub degree: u32,
    pub records: Vec<BasePointRecord>,
    pub sum_k: i64,
    pub sum_k2: i64,
    pub deficit: (i64, i64),
    /// Multiset check for `d ≤ 3`; `None` above.
    pub pattern_ok: Option<bool>,
    /// False when some base points lie outside the base field.
    pub complete: bool,
}

impl HomaloidalReport {
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut ks: Vec<u32> = self.records.iter().map(|r| r.multiplicity).collect();
        ks.sort_unstable_by(|a, b| b.cmp(a));
        ks
    }

    pub fn passes(&self) -> bool {
        self.deficit == (0, 0) && self.pattern_ok != Some(false)
    }
}

fn expected_pattern(d: u32) -> Option<Vec<u32>> {
    match d {
        1 => Some(vec![]),
        2 => Some(vec![1, 1, 1]),
        3 => Some(vec![2, 1, 1, 1, 1]),
        _ => None,
    }
}

pub fn homaloidal_check(phi: &RationalMap) -> Result<HomaloidalReport, MapError> {
    let (records, unresolved) = base_points_partial(phi)?;
    let d = phi.degree() as i64;
    let sum_k: i64 = records.iter().map(|r| r.multiplicity as i64).sum();
    let sum_k2: i64 = records.iter().map(|r| (r.multiplicity as i64).pow(2)).sum();
    let deficit = if d == 0 { (0, 0) } else { (3 * d - 3 - sum_k, d * d - 1 - sum_k2) };
    let mut report = HomaloidalReport {
        degree: phi.degree(),
        records,
        sum_k,
        sum_k2,
        deficit,
        pattern_ok: None,
        complete: unresolved == 0,
    };
    report.pattern_ok = expected_pattern(phi.degree()).map(|p| report.multiplicities() == p);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub checked: usize,
    pub violations: Vec<String>,
    /// Degree of the base-point locus left outside the base field.
    pub unresolved: usize,
}

/// Checks that every base point found lies on `C`: proper points on the curve, near
/// points over a point of the curve in its tangent direction.
pub fn decomposition_candidate_check(phi: &RationalMap, c: &CubicCurve) -> Result<DecompositionReport, MapError> {
    if phi.field() != c.field() {
        return Err(AlgebraError::FieldMismatch.into());
    }
    let (records, unresolved) = base_points_partial(phi)?;
    let mut violations = Vec::new();
    for r in &records {
        match &r.location {
            OmegaKind::Proper(p) => {
                if !c.contains(p) {
                    violations.push(format!("proper base point {p} is off the curve"));
                }
            }
            OmegaKind::Near(n) => {
                if !c.contains(&n.base) {
                    violations.push(format!("near base point over {} which is off the curve", n.base));
                } else if c.tangent_dual(&n.base)? != n.line {
                    violations.push(format!("near base point over {} not in the tangent direction", n.base));
                }
            }
            OmegaKind::Formal { .. } => {}
        }
    }
    Ok(DecompositionReport {
        checked: records.len(),
        violations,
        unresolved,
    })
}
