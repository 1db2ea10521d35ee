//! Rational self-maps of the plane as triples of forms, and the inertia predicates.

mod basepoints;
mod construct;

pub use basepoints::{
    base_points_partial, decomposition_candidate_check, homaloidal_check, multiplicity_at, proper_base_points,
    BasePointJson, BasePointRecord, DecompositionReport, HomaloidalReport,
};
pub use construct::{
    conic_for_cubic4pts, cubic4pts, cubic4pts_forms, pencil_map, pencil_map_forms, sigma,
};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{form_gcd, AlgebraError, Field, FormJson, HomogeneousForm, Matrix3, PlanePoint};
use crate::curve::{CubicCurve, CurveError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("components have different degrees ({0:?})")]
    DegreeMismatch([u32; 3]),
    #[error("all components are zero")]
    ZeroMap,
    #[error("composition collapses to the zero triple")]
    ComposedToZero,
    #[error("base points outside the base field: elimination leaves a factor of degree {unresolved}")]
    BasePointsNotRational { found: Vec<PlanePoint>, unresolved: usize },
    #[error("map does not fix the curve: {0}")]
    NotInInertia(String),
    #[error("determinant form vanishes, map is not birational")]
    NotBirational,
    #[error("input not in normalized position: {0}")]
    NormalizationViolated(String),
    #[error("curve has multiplicity {found} at the point, expected {expected}")]
    WrongMultiplicity { expected: u32, found: u32 },
    #[error("residual point coincides with a fixed point on every line")]
    DegenerateConfiguration,
    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `(P₁:P₂:P₃)` with no common factor, first nonzero component monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMap {
    comps: [HomogeneousForm; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub degree: u32,
    pub components: [FormJson; 3],
}

impl RationalMap {
    pub fn new(p1: HomogeneousForm, p2: HomogeneousForm, p3: HomogeneousForm) -> Result<Self, MapError> {
        map_new(p1, p2, p3)
    }

    pub fn identity(field: Field) -> Self {
        Self::linear(&Matrix3::identity(field))
    }

    /// The projectivity `X ↦ M·X`.
    pub fn linear(m: &Matrix3) -> Self {
        let comps = std::array::from_fn(|i| HomogeneousForm::linear(&m.rows()[i]));
        map_new_unchecked(comps)
    }

    pub fn components(&self) -> &[HomogeneousForm; 3] {
        &self.comps
    }

    pub fn degree(&self) -> u32 {
        self.comps[0].degree()
    }

    pub fn field(&self) -> Field {
        self.comps[0].field()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.field())
    }

    /// Image of a point, or `None` at a base point.
    pub fn apply_point(&self, p: &PlanePoint) -> Option<PlanePoint> {
        PlanePoint::new(self.comps.clone().map(|c| c.eval_coords(p.coords()))).ok()
    }

    pub fn to_json(&self) -> MapJson {
        MapJson {
            degree: self.degree(),
            components: self.comps.clone().map(|c| c.to_json()),
        }
    }

    pub fn from_json(field: Field, json: &MapJson) -> Result<Self, MapError> {
        let [a, b, c] = json
            .components
            .clone()
            .map(|f| HomogeneousForm::from_json(field, &f));
        let m = map_new(a?, b?, c?)?;
        if m.degree() != json.degree {
            return Err(MapError::PostconditionFailed(format!(
                "declared degree {} but the reduced map has degree {}",
                json.degree,
                m.degree()
            )));
        }
        Ok(m)
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {} : {})", self.comps[0], self.comps[1], self.comps[2])
    }
}

fn map_new_unchecked(comps: [HomogeneousForm; 3]) -> RationalMap {
    let lead = comps
        .iter()
        .find(|c| !c.is_zero())
        .and_then(|c| c.leading().map(|(_, v)| v.clone()))
        .expect("nonzero map");
    let inv = lead.inv().unwrap();
    RationalMap {
        comps: comps.map(|c| c.scale(&inv)),
    }
}

/// Removes the content of a triple; returns the reduced map and the removed factor.
pub fn map_new_with_content(
    p1: HomogeneousForm,
    p2: HomogeneousForm,
    p3: HomogeneousForm,
) -> Result<(RationalMap, HomogeneousForm), MapError> {
    let degs = [p1.degree(), p2.degree(), p3.degree()];
    if degs[0] != degs[1] || degs[1] != degs[2] {
        return Err(MapError::DegreeMismatch(degs));
    }
    if p1.field() != p2.field() || p2.field() != p3.field() {
        return Err(AlgebraError::FieldMismatch.into());
    }
    let comps = [p1, p2, p3];
    if comps.iter().all(|c| c.is_zero()) {
        return Err(MapError::ZeroMap);
    }
    let g = form_gcd(&comps)?;
    let reduced = comps
        .iter()
        .map(|c| c.divexact(&g))
        .collect::<Result<Vec<_>, _>>()?;
    let d = degs[0] - g.degree();
    // Zero components keep the reduced degree.
    let reduced: Vec<HomogeneousForm> = reduced
        .into_iter()
        .map(|c| if c.is_zero() { HomogeneousForm::zero(c.field(), d) } else { c })
        .collect();
    let comps: [HomogeneousForm; 3] = reduced.try_into().unwrap();
    Ok((map_new_unchecked(comps), g))
}

pub fn map_new(p1: HomogeneousForm, p2: HomogeneousForm, p3: HomogeneousForm) -> Result<RationalMap, MapError> {
    Ok(map_new_with_content(p1, p2, p3)?.0)
}

/// `f ∘ g` (apply `g` first), with the content removed along the way.
pub fn map_compose_with_content(f: &RationalMap, g: &RationalMap) -> Result<(RationalMap, HomogeneousForm), MapError> {
    if f.field() != g.field() {
        return Err(AlgebraError::FieldMismatch.into());
    }
    let subs = g.comps.clone();
    let raw: Vec<HomogeneousForm> = f
        .comps
        .iter()
        .map(|c| c.substitute(&subs))
        .collect::<Result<_, _>>()?;
    if raw.iter().all(|c| c.is_zero()) {
        return Err(MapError::ComposedToZero);
    }
    let [a, b, c]: [HomogeneousForm; 3] = raw.try_into().unwrap();
    map_new_with_content(a, b, c)
}

pub fn map_compose(f: &RationalMap, g: &RationalMap) -> Result<RationalMap, MapError> {
    Ok(map_compose_with_content(f, g)?.0)
}

/// Projective equality: all `fᵢgⱼ − fⱼgᵢ` vanish.
pub fn map_equal(f: &RationalMap, g: &RationalMap) -> bool {
    if f.field() != g.field() {
        return false;
    }
    (0..3).all(|i| (0..3).all(|j| (&f.comps[i] * &g.comps[j] - &f.comps[j] * &g.comps[i]).is_zero()))
}

fn cross_products(phi: &RationalMap) -> [HomogeneousForm; 3] {
    let field = phi.field();
    let x: [HomogeneousForm; 3] = std::array::from_fn(|i| HomogeneousForm::var(field, i));
    let p = &phi.comps;
    [
        &x[0] * &p[1] - &x[1] * &p[0],
        &x[0] * &p[2] - &x[2] * &p[0],
        &x[1] * &p[2] - &x[2] * &p[1],
    ]
}

/// Whether `F` divides `xP₂ − yP₁`, `xP₃ − zP₁` and `yP₃ − zP₂`.
pub fn fixes_curve(phi: &RationalMap, c: &CubicCurve) -> bool {
    degfix_quotients(phi, c).is_ok()
}

/// The quotients of the three cross products by `F`.
pub fn degfix_quotients(phi: &RationalMap, c: &CubicCurve) -> Result<[HomogeneousForm; 3], MapError> {
    if phi.field() != c.field() {
        return Err(AlgebraError::FieldMismatch.into());
    }
    let qs = cross_products(phi)
        .iter()
        .map(|cp| {
            cp.divexact(c.form()).map_err(|e| match e {
                AlgebraError::NonDivisible { remainder } => MapError::NotInInertia(remainder),
                other => other.into(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(qs.try_into().unwrap())
}

/// Whether `F` divides `F(P₁, P₂, P₃)`.
pub fn preserves_curve(phi: &RationalMap, c: &CubicCurve) -> bool {
    if phi.field() != c.field() {
        return false;
    }
    match c.form().substitute(&phi.comps) {
        Ok(img) => img.divexact(c.form()).is_ok(),
        Err(_) => false,
    }
}
