//! Search helpers over prime fields: points of the curve and generators whose
//! tangency quartic splits.

use super::{tangency_points, CubicCurve, CurveError, TangencyPoints};
use crate::algebra::PlanePoint;

/// All points of the curve, for a curve over a prime field.
pub fn points_on(c: &CubicCurve) -> Option<Vec<PlanePoint>> {
    Some(
        PlanePoint::enumerate(c.field())?
            .into_iter()
            .filter(|p| c.contains(p))
            .collect(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPoint {
    pub point: PlanePoint,
    pub inflexion: bool,
    pub tangency: TangencyPoints,
}

/// Points of the curve whose tangency quartic splits over the base field.
pub fn split_points(c: &CubicCurve) -> Option<Vec<SplitPoint>> {
    let pts = points_on(c)?;
    let mut out = Vec::new();
    for p in pts {
        match tangency_points(c, &p) {
            Ok(tangency) => out.push(SplitPoint {
                inflexion: tangency.inflexion_direction.is_some(),
                point: p,
                tangency,
            }),
            Err(CurveError::QuarticNotSplit { .. }) => {}
            Err(e) => panic!("unexpected failure at {p}: {e}"),
        }
    }
    Some(out)
}

/// Whether the base points of `σ_a` and `σ_b` (the centre and its tangency points)
/// are disjoint, so that the composite has degree 9.
pub fn relation_free(a: &SplitPoint, b: &SplitPoint) -> bool {
    let set = |s: &SplitPoint| {
        let mut v = s.tangency.proper.clone();
        v.push(s.point.clone());
        v
    };
    let sa = set(a);
    set(b).iter().all(|p| !sa.contains(p))
}
