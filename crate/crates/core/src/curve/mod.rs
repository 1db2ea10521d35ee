//! Smooth plane cubics: certification, tangents, inflexions, tangency quartics and
//! the marked point sets built from them.

mod marked;
mod search;

pub use marked::{
    marked_set_build, InfinitelyNearRecord, MarkedPointSet, MarkedSetJson, OmegaJson, OmegaKind, OmegaPoint,
};
pub use search::{points_on, relation_free, split_points, SplitPoint};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    binary_roots, common_zeros, AlgebraError, Field, FieldElement, HomogeneousForm, Matrix3, PlanePoint,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("expected a cubic, got degree {0}")]
    NotDegree3(u32),
    #[error("singular cubic{}: {certificate}", .witness.as_ref().map(|w| format!(" at {w}")).unwrap_or_default())]
    Singular {
        witness: Option<PlanePoint>,
        certificate: String,
    },
    #[error("reducible cubic, factor {factor}")]
    Reducible { factor: String },
    #[error("point {0} is not on the curve")]
    PointNotOnCurve(PlanePoint),
    #[error("tangency quartic at {generator} does not split; leftover factor {factor}")]
    QuarticNotSplit { generator: PlanePoint, factor: String },
    #[error("duplicate generator {0}")]
    DuplicateGenerator(PlanePoint),
    #[error("generator {0} is not on the curve")]
    GeneratorOffCurve(PlanePoint),
    #[error("marked set invariant violated: {0}")]
    InvalidMarkedSet(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Coefficient order used by the 10-entry JSON encoding.
pub const CUBIC_MONOMIALS: [[u32; 3]; 10] = [
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

/// A smooth, irreducible plane cubic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicCurve {
    f: HomogeneousForm,
}

/// Curve JSON: either a bare list of ten coefficients or `{"coefficients": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurveJson {
    Bare(Vec<String>),
    Wrapped { coefficients: Vec<String> },
}

impl CurveJson {
    pub fn coefficients(&self) -> &[String] {
        match self {
            CurveJson::Bare(c) | CurveJson::Wrapped { coefficients: c } => c,
        }
    }
}

impl CubicCurve {
    pub fn new(f: HomogeneousForm) -> Result<Self, CurveError> {
        curve_new(f)
    }

    pub fn from_coefficients(field: Field, coeffs: &[impl AsRef<str>]) -> Result<Self, CurveError> {
        if coeffs.len() != 10 {
            return Err(AlgebraError::Parse(format!("a cubic needs 10 coefficients, got {}", coeffs.len())).into());
        }
        let terms = coeffs
            .iter()
            .zip(CUBIC_MONOMIALS)
            .map(|(c, m)| Ok((m, field.parse(c.as_ref())?)))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        curve_new(HomogeneousForm::from_terms(field, 3, terms)?)
    }

    pub fn parse(field: Field, src: &str) -> Result<Self, CurveError> {
        curve_new(HomogeneousForm::parse(field, src)?)
    }

    pub fn form(&self) -> &HomogeneousForm {
        &self.f
    }

    pub fn field(&self) -> Field {
        self.f.field()
    }

    pub fn coefficients(&self) -> [String; 10] {
        CUBIC_MONOMIALS.map(|m| self.f.coeff(m).to_literal())
    }

    pub fn contains(&self, a: &PlanePoint) -> bool {
        a.field() == self.field() && self.f.eval_coords(a.coords()).is_zero()
    }

    fn require_on(&self, a: &PlanePoint) -> Result<(), CurveError> {
        if a.field() != self.field() {
            return Err(AlgebraError::FieldMismatch.into());
        }
        if !self.contains(a) {
            return Err(CurveError::PointNotOnCurve(a.clone()));
        }
        Ok(())
    }

    /// Gradient of `F` at `a`, i.e. the coefficients of the tangent line.
    pub fn gradient(&self, a: &PlanePoint) -> [FieldElement; 3] {
        std::array::from_fn(|i| self.f.derive(i).eval_coords(a.coords()))
    }

    pub fn tangent_line(&self, a: &PlanePoint) -> Result<HomogeneousForm, CurveError> {
        tangent_line(self, a)
    }

    /// The tangent line at `a` as a point of the dual plane.
    pub fn tangent_dual(&self, a: &PlanePoint) -> Result<PlanePoint, CurveError> {
        self.require_on(a)?;
        Ok(PlanePoint::new(self.gradient(a))?)
    }

    pub fn is_inflexion(&self, a: &PlanePoint) -> Result<bool, CurveError> {
        is_inflexion(self, a)
    }

    pub fn normalize_at(&self, p: &PlanePoint) -> Result<Normalization, CurveError> {
        self.require_on(p)?;
        Ok(Normalization::new(self, p))
    }
}

/// Restriction of `f` to the coordinate line `x_i = 0`, as a binary form in the
/// two remaining variables (kept in order, placed in the `x, y` slots).
fn restrict_to_coordinate_line(f: &HomogeneousForm, i: usize) -> HomogeneousForm {
    let rest: Vec<usize> = (0..3).filter(|&k| k != i).collect();
    let terms = f
        .terms()
        .filter(|(m, _)| m.0[i] == 0)
        .map(|(m, c)| ([m.0[rest[0]], m.0[rest[1]], 0], c.clone()));
    HomogeneousForm::from_terms(f.field(), f.degree(), terms).expect("same degree")
}

/// A linear factor of `f`, if any; a cubic without one is irreducible.
fn linear_factor(f: &HomogeneousForm) -> Result<Option<HomogeneousForm>, AlgebraError> {
    let field = f.field();
    for i in 0..3 {
        if f.var_valuation(i) > 0 {
            return Ok(Some(HomogeneousForm::var(field, i)));
        }
    }
    // A non-coordinate line meets at least two coordinate lines in distinct points,
    // each of which is a root of the corresponding restriction.
    let mut roots: Vec<Vec<PlanePoint>> = Vec::new();
    for i in 0..3 {
        let r = binary_roots(&restrict_to_coordinate_line(f, i))?;
        let rest: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let pts = r
            .roots
            .iter()
            .map(|([s, t], _)| {
                let mut c: [FieldElement; 3] = std::array::from_fn(|_| field.zero());
                c[rest[0]] = s.clone();
                c[rest[1]] = t.clone();
                PlanePoint::new(c)
            })
            .collect::<Result<Vec<_>, _>>()?;
        roots.push(pts);
    }
    for i in 0..3 {
        for j in i + 1..3 {
            for a in &roots[i] {
                for b in &roots[j] {
                    if a == b {
                        continue;
                    }
                    let line = HomogeneousForm::linear(a.join(b)?.coords());
                    if f.divexact(&line).is_ok() {
                        return Ok(Some(line));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Certifies `F` as a smooth irreducible cubic. Smoothness is decided by elimination
/// on the partials, which also sees singular points outside the base field.
pub fn curve_new(f: HomogeneousForm) -> Result<CubicCurve, CurveError> {
    if f.degree() != 3 || f.is_zero() {
        return Err(CurveError::NotDegree3(f.degree()));
    }
    if let Some(l) = linear_factor(&f)? {
        return Err(CurveError::Reducible { factor: l.to_string() });
    }
    let partials: Vec<HomogeneousForm> = (0..3).map(|i| f.derive(i)).collect();
    match common_zeros(&partials) {
        Ok(cz) => {
            if let Some(w) = cz.points.first() {
                return Err(CurveError::Singular {
                    witness: Some(w.clone()),
                    certificate: "all partial derivatives vanish at the witness".into(),
                });
            }
            if !cz.complete {
                return Err(CurveError::Singular {
                    witness: None,
                    certificate: "elimination finds common zeros of the partials outside the base field".into(),
                });
            }
        }
        Err(AlgebraError::PositiveDimensional) => {
            return Err(CurveError::Singular {
                witness: None,
                certificate: "the partials share a common factor".into(),
            })
        }
        Err(e) => return Err(e.into()),
    }
    Ok(CubicCurve { f })
}

pub fn tangent_line(c: &CubicCurve, a: &PlanePoint) -> Result<HomogeneousForm, CurveError> {
    c.require_on(a)?;
    Ok(HomogeneousForm::linear(&c.gradient(a)).monic())
}

/// A second point on the line with coefficients `g`, different from `a` (which lies on it).
fn other_point_on_line(g: &[FieldElement; 3], a: &PlanePoint) -> PlanePoint {
    let field = a.field();
    (0..3)
        .filter_map(|k| {
            let mut e: [FieldElement; 3] = std::array::from_fn(|_| field.zero());
            e[k] = field.one();
            PlanePoint::new(crate::algebra::cross(g, &e)).ok()
        })
        .find(|q| q != a)
        .expect("a line has at least two coordinate-axis points")
}

/// Order of contact of `F` with its tangent line at `a` (3 or more means inflexion;
/// `u32::MAX` if the tangent is a component).
pub fn contact_order(c: &CubicCurve, a: &PlanePoint) -> Result<u32, CurveError> {
    c.require_on(a)?;
    let field = c.field();
    let g = c.gradient(a);
    let q = other_point_on_line(&g, a);
    // x_i = a_i*X + q_i*Y, so (X:Y) = (1:0) is a.
    let subs = std::array::from_fn(|i| {
        HomogeneousForm::from_terms(
            field,
            1,
            [([1, 0, 0], a.coords()[i].clone()), ([0, 1, 0], q.coords()[i].clone())],
        )
        .unwrap()
    });
    let r = c.f.substitute(&subs)?;
    if r.is_zero() {
        return Ok(u32::MAX);
    }
    Ok(r.var_valuation(1))
}

pub fn is_inflexion(c: &CubicCurve, a: &PlanePoint) -> Result<bool, CurveError> {
    Ok(contact_order(c, a)? >= 3)
}

/// `b ≻ a` for proper points: `a ≠ b` and `b` lies on the tangent at `a`.
pub fn succ(c: &CubicCurve, b: &PlanePoint, a: &PlanePoint) -> Result<bool, CurveError> {
    c.require_on(a)?;
    c.require_on(b)?;
    Ok(a != b && b.dot(&c.gradient(a)).is_zero())
}

/// Coordinates adapted to a point `p` of the curve: `M·e1 = p`, `M·e3` on the tangent
/// at `p`, so that `F∘M = c·(x²y + x·F₂(y,z) + F₃(y,z))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub point: PlanePoint,
    pub matrix: Matrix3,
    pub inverse: Matrix3,
    pub scale: FieldElement,
    /// `F₂` and `F₃`, as ternary forms free of `x`.
    pub f2: HomogeneousForm,
    pub f3: HomogeneousForm,
}

impl Normalization {
    fn new(c: &CubicCurve, p: &PlanePoint) -> Self {
        Self::from_form(&c.f, p).expect("smooth point of the curve")
    }

    /// Normalization of a cubic form at a point where it vanishes with nonzero gradient.
    /// No smoothness or irreducibility is assumed.
    pub fn from_form(f: &HomogeneousForm, p: &PlanePoint) -> Result<Self, CurveError> {
        if f.degree() != 3 {
            return Err(CurveError::NotDegree3(f.degree()));
        }
        if f.field() != p.field() {
            return Err(AlgebraError::FieldMismatch.into());
        }
        if !f.eval_coords(p.coords()).is_zero() {
            return Err(CurveError::PointNotOnCurve(p.clone()));
        }
        let field = f.field();
        let g: [FieldElement; 3] = std::array::from_fn(|i| f.derive(i).eval_coords(p.coords()));
        let Some(off) = (0..3).find(|&j| !g[j].is_zero()) else {
            return Err(CurveError::Singular {
                witness: Some(p.clone()),
                certificate: "gradient vanishes at the point".into(),
            });
        };
        let q = other_point_on_line(&g, p);
        let mut e: [FieldElement; 3] = std::array::from_fn(|_| field.zero());
        e[off] = field.one();
        let matrix = Matrix3::from_columns([p.coords().clone(), e, q.coords().clone()]);
        let inverse = matrix.inverse().expect("p, off-tangent vector and tangent point are independent");
        let g_m = f.linear_change(&matrix)?;
        let scale = g_m.coeff([2, 1, 0]);
        let normal = g_m.scale(&scale.inv().unwrap());
        let part = |xexp: u32| {
            let terms = normal
                .terms()
                .filter(|(m, _)| m.0[0] == xexp)
                .map(|(m, c)| ([0, m.0[1], m.0[2]], c.clone()));
            HomogeneousForm::from_terms(field, 3 - xexp, terms).unwrap()
        };
        let (f2, f3) = (part(1), part(0));
        debug_assert_eq!(normal, {
            let x = HomogeneousForm::var(field, 0);
            let y = HomogeneousForm::var(field, 1);
            &(&(&(&x * &x) * &y) + &(&x * &f2)) + &f3
        });
        Ok(Normalization {
            point: p.clone(),
            matrix,
            inverse,
            scale,
            f2,
            f3,
        })
    }

    /// The point of the plane lying over the direction `(s:t)` with `s ≠ 0`, i.e.
    /// the double point of the residual quadratic on that line.
    pub fn tangency_point(&self, s: &FieldElement, t: &FieldElement) -> Result<PlanePoint, AlgebraError> {
        let f2 = self.f2.eval_coords(&[s.field().zero(), s.clone(), t.clone()]);
        let two_s = s + s;
        let u = -(&f2 / &two_s);
        self.matrix.apply_point(&PlanePoint::new([u, s.clone(), t.clone()])?)
    }

    /// The line through `p` in direction `(s:t)`, as a dual point.
    pub fn direction_line(&self, s: &FieldElement, t: &FieldElement) -> Result<PlanePoint, AlgebraError> {
        let field = s.field();
        let q = self.matrix.apply_point(&PlanePoint::new([field.zero(), s.clone(), t.clone()])?)?;
        self.point.join(&q)
    }
}

/// Moves a form free of `x` into the binary slots: `y^j z^k ↦ x^j y^k`.
pub(crate) fn yz_to_binary(f: &HomogeneousForm) -> HomogeneousForm {
    let terms = f.terms().map(|(m, c)| ([m.0[1], m.0[2], 0], c.clone()));
    HomogeneousForm::from_terms(f.field(), f.degree(), terms).unwrap()
}

/// The tangency quartic `F₂(s,t)² − 4·s·F₃(s,t)` with `(s,t)` in the `x, y` slots,
/// together with the normalization it was computed in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangencyQuartic {
    pub disc: HomogeneousForm,
    pub normalization: Normalization,
}

pub fn tangency_quartic(c: &CubicCurve, p: &PlanePoint) -> Result<TangencyQuartic, CurveError> {
    let n = c.normalize_at(p)?;
    let field = c.field();
    let f2 = yz_to_binary(&n.f2);
    let f3 = yz_to_binary(&n.f3);
    let four_s = HomogeneousForm::var(field, 0).scale(&field.from_i64(4));
    let disc = &(&f2 * &f2) - &(&four_s * &f3);
    Ok(TangencyQuartic { disc, normalization: n })
}

/// The tangency data at a point: the proper tangency points, and the tangent line
/// when `p` is an inflexion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangencyPoints {
    pub proper: Vec<PlanePoint>,
    pub inflexion_direction: Option<PlanePoint>,
}

pub fn tangency_points(c: &CubicCurve, p: &PlanePoint) -> Result<TangencyPoints, CurveError> {
    let tq = tangency_quartic(c, p)?;
    let roots = binary_roots(&tq.disc)?;
    if !roots.is_split() {
        return Err(CurveError::QuarticNotSplit {
            generator: p.clone(),
            factor: roots.unresolved.to_string(),
        });
    }
    if roots.roots.iter().any(|(_, m)| *m != 1) {
        return Err(CurveError::InvalidMarkedSet(format!(
            "tangency quartic at {p} has a repeated root"
        )));
    }
    let n = &tq.normalization;
    let mut proper = Vec::new();
    let mut inflexion_direction = None;
    for ([s, t], _) in &roots.roots {
        if s.is_zero() {
            inflexion_direction = Some(n.direction_line(s, t)?);
        } else {
            proper.push(n.tangency_point(s, t)?);
        }
    }
    proper.sort();
    Ok(TangencyPoints {
        proper,
        inflexion_direction,
    })
}
