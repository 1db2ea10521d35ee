//! Constructions of inertia elements: the cubic involutions, the cubics of the
//! four-point construction, and the pencil maps attached to a curve with a point of
//! multiplicity `d − 1`.

use super::basepoints::multiplicity_at;
use super::{fixes_curve, map_compose, map_new, MapError, RationalMap};
use crate::algebra::linalg::nullspace;
use crate::algebra::{HomogeneousForm, Matrix3, PlanePoint};
use crate::curve::{CubicCurve, Normalization};

fn conjugate(local: &RationalMap, m: &Matrix3, m_inv: &Matrix3) -> Result<RationalMap, MapError> {
    map_compose(&RationalMap::linear(m), &map_compose(local, &RationalMap::linear(m_inv))?)
}

fn check(cond: bool, what: &str) -> Result<(), MapError> {
    if cond {
        Ok(())
    } else {
        Err(MapError::PostconditionFailed(what.to_string()))
    }
}

/// The cubic involution centred at `p`.
///
/// In coordinates where `p = (1:0:0)` and `F = x²y + xF₂ + F₃`, the line through `p`
/// in direction `(y:z)` meets `C` residually in the roots of `y·u² + F₂·u + F₃`, and
/// the involution of that line fixing both roots is
/// `(F₂x + 2F₃ : −y(2xy + F₂) : −z(2xy + F₂))`.
pub fn sigma(c: &CubicCurve, p: &PlanePoint) -> Result<RationalMap, MapError> {
    let n = c.normalize_at(p)?;
    let field = c.field();
    let x = HomogeneousForm::var(field, 0);
    let y = HomogeneousForm::var(field, 1);
    let z = HomogeneousForm::var(field, 2);
    let two = field.from_i64(2);
    let polar = &(&x * &y).scale(&two) + &n.f2;
    let local = map_new(
        &(&x * &n.f2) + &n.f3.scale(&two),
        -(&y * &polar),
        -(&z * &polar),
    )?;
    let s = conjugate(&local, &n.matrix, &n.inverse)?;
    check(s.degree() == 3, "degree 3")?;
    check(map_compose(&s, &s)?.is_identity(), "involution")?;
    check(fixes_curve(&s, c), "fixes the curve")?;
    Ok(s)
}

fn x_part(f: &HomogeneousForm, xexp: u32) -> HomogeneousForm {
    let terms = f
        .terms()
        .filter(|(m, _)| m.0[0] == xexp)
        .map(|(m, c)| ([0, m.0[1], m.0[2]], c.clone()));
    HomogeneousForm::from_terms(f.field(), f.degree() - xexp, terms).unwrap()
}

/// The map `(xG − F : yG : zG)` for raw forms `F = x²y + xF₂ + F₃` and
/// `G = xy + G₂` (each up to a scalar). Nothing is assumed about `F` beyond its shape,
/// so degenerate inputs reach the birationality test.
pub fn cubic4pts_forms(f: &HomogeneousForm, g: &HomogeneousForm) -> Result<RationalMap, MapError> {
    if f.degree() != 3 || g.degree() != 2 {
        return Err(MapError::NormalizationViolated(format!(
            "expected a cubic and a conic, got degrees {} and {}",
            f.degree(),
            g.degree()
        )));
    }
    if f.field() != g.field() {
        return Err(crate::algebra::AlgebraError::FieldMismatch.into());
    }
    let field = f.field();
    let fc = f.coeff([2, 1, 0]);
    if !f.coeff([3, 0, 0]).is_zero() || !f.coeff([2, 0, 1]).is_zero() || fc.is_zero() {
        return Err(MapError::NormalizationViolated(
            "F must read x²y + x·F₂(y,z) + F₃(y,z)".into(),
        ));
    }
    let gc = g.coeff([1, 1, 0]);
    if !g.coeff([2, 0, 0]).is_zero() || !g.coeff([1, 0, 1]).is_zero() || gc.is_zero() {
        return Err(MapError::NormalizationViolated("G must read xy + G₂(y,z)".into()));
    }
    let f = f.scale(&fc.inv().unwrap());
    let g = g.scale(&gc.inv().unwrap());
    let (f2, f3, g2) = (x_part(&f, 1), x_part(&f, 0), x_part(&g, 0));
    let x = HomogeneousForm::var(field, 0);
    let y = HomogeneousForm::var(field, 1);
    let z = HomogeneousForm::var(field, 2);
    let det = &(&(&g2 - &f2) * &g2) + &(&y * &f3);
    if det.is_zero() {
        return Err(MapError::NotBirational);
    }
    map_new(&(&x * &g) - &f, &y * &g, &z * &g)
}

/// The four-point cubic for a curve in normalized position at `p₁ = (1:0:0)` (tangent
/// `y = 0`), with `p₂, p₃, p₄` proper points of `C` on the conic `G`.
pub fn cubic4pts(c: &CubicCurve, points: &[PlanePoint; 4], g: &HomogeneousForm) -> Result<RationalMap, MapError> {
    let p1 = PlanePoint::from_i64(c.field(), [1, 0, 0])?;
    if points[0] != p1 {
        return Err(MapError::NormalizationViolated("p₁ must be (1:0:0)".into()));
    }
    for p in points {
        if !c.contains(p) || !g.eval_coords(p.coords()).is_zero() {
            return Err(MapError::NormalizationViolated(format!("{p} is not on both C and G")));
        }
    }
    let phi = cubic4pts_forms(c.form(), g)?;
    check(phi.degree() == 3, "degree 3")?;
    check(fixes_curve(&phi, c), "fixes the curve")?;
    check(multiplicity_at(&phi, &p1) == 2, "double point at p₁")?;
    for p in points {
        check(multiplicity_at(&phi, p) >= 1, "the given points are base points")?;
    }
    Ok(phi)
}

/// The conic `xy + G₂` through `p₁ = (1:0:0)`, tangent there to `y = 0`, and through
/// three further proper points.
pub fn conic_for_cubic4pts(points: &[PlanePoint; 3]) -> Result<HomogeneousForm, MapError> {
    let field = points[0].field();
    // Unknowns: coefficients of x², xy, xz, y², yz, z².
    const MONS: [[u32; 3]; 6] = [[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]];
    let unit = |k: usize| (0..6).map(|i| if i == k { field.one() } else { field.zero() }).collect();
    let mut rows: Vec<Vec<_>> = vec![unit(0), unit(2)];
    for p in points {
        rows.push(
            MONS.iter()
                .map(|m| {
                    let c = p.coords();
                    &(&c[0].pow(m[0] as u64) * &c[1].pow(m[1] as u64)) * &c[2].pow(m[2] as u64)
                })
                .collect(),
        );
    }
    let kernel = nullspace(field, rows, 6);
    if kernel.len() != 1 {
        return Err(MapError::NormalizationViolated(format!(
            "conic through the points is not unique ({} dimensional family)",
            kernel.len()
        )));
    }
    let g = HomogeneousForm::from_terms(field, 2, MONS.iter().copied().zip(kernel[0].iter().cloned()))?;
    Ok(g.monic())
}

/// The map preserving every line through `p`, fixing the two residual points of `C`
/// on it and sending the residual point of `C_d` to `p`, for a raw cubic form.
///
/// On the line with direction `(y:z)` the residual `C`-points are the roots of
/// `a·u² + b·u + c` (`a = y`, `b = F₂`, `c = F₃`) and the residual `C_d`-point is
/// `τ₀ = −A_d / A_{d−1}`, where `C_d = x·A_{d−1} + A_d` near `p`. The Möbius map
/// `((aτ₀ + b, c), (−a, aτ₀))` fixes the roots and sends `τ₀` to infinity.
pub fn pencil_map_forms(f: &HomogeneousForm, p: &PlanePoint, c_d: &HomogeneousForm) -> Result<RationalMap, MapError> {
    let n = Normalization::from_form(f, p)?;
    let d = c_d.degree();
    if d == 0 || c_d.is_zero() {
        return Err(MapError::WrongMultiplicity {
            expected: d.saturating_sub(1),
            found: d,
        });
    }
    let g = c_d.linear_change(&n.matrix)?;
    let order = g.order_at_first_unit().unwrap();
    if order != d - 1 {
        return Err(MapError::WrongMultiplicity {
            expected: d - 1,
            found: order,
        });
    }
    let field = f.field();
    let x = HomogeneousForm::var(field, 0);
    let y = HomogeneousForm::var(field, 1);
    let z = HomogeneousForm::var(field, 2);
    let (a_hi, a_lo) = (x_part(&g, 1), x_part(&g, 0));
    let (a, b, c) = (&y, &n.f2, &n.f3);
    let alpha = &(&*b * &a_hi) - &(a * &a_lo);
    let beta = c * &a_hi;
    let gamma = -(a * &a_hi);
    let delta = -(a * &a_lo);
    let det = &(&alpha * &delta) - &(&beta * &gamma);
    if det.is_zero() {
        return Err(MapError::DegenerateConfiguration);
    }
    let denom = &(&gamma * &x) + &delta;
    let local = map_new(&(&alpha * &x) + &beta, &denom * &y, &denom * &z)?;
    conjugate(&local, &n.matrix, &n.inverse)
}

pub fn pencil_map(c: &CubicCurve, p: &PlanePoint, c_d: &HomogeneousForm) -> Result<RationalMap, MapError> {
    if !c.contains(p) {
        return Err(crate::curve::CurveError::PointNotOnCurve(p.clone()).into());
    }
    let phi = pencil_map_forms(c.form(), p, c_d)?;
    check(fixes_curve(&phi, c), "fixes the curve")?;
    Ok(phi)
}
