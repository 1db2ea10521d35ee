//! Elimination: binary forms, resultants with respect to `z`, and common zeros of
//! systems of ternary forms over the algebraic closure.
//!
//! Binary forms are ternary forms in which `z` does not occur; `(x:y)` plays the
//! role of the coordinate on the projective line.

use super::{AlgebraError, Field, FieldElement, HomogeneousForm, Matrix3, PlanePoint, Poly1};
use crate::algebra::linalg::determinant;

/// `h(1, t)` as a univariate polynomial in `t`.
pub fn binary_dehomogenize(h: &HomogeneousForm) -> Poly1 {
    let field = h.field();
    let e = h.degree() as usize;
    let mut coeffs = vec![field.zero(); e + 1];
    for (m, c) in h.terms() {
        debug_assert_eq!(m.0[2], 0, "not a binary form");
        coeffs[m.0[1] as usize] = c.clone();
    }
    Poly1::new(field, coeffs)
}

/// Homogenizes `p(t)` to a binary form of degree `degree` in `(x, y)`.
pub fn binary_homogenize(p: &Poly1, degree: u32) -> HomogeneousForm {
    let terms = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| ([degree - j as u32, j as u32, 0], c.clone()));
    HomogeneousForm::from_terms(p.field(), degree, terms).expect("degree bound respected")
}

/// Roots of a binary form in the projective line over the base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryRoots {
    /// Roots `(s:t)`, canonically scaled, with multiplicities.
    pub roots: Vec<([FieldElement; 2], u32)>,
    /// Degree of the part whose roots lie outside the base field.
    pub unresolved_degree: usize,
    /// That part itself, dehomogenized.
    pub unresolved: Poly1,
}

impl BinaryRoots {
    pub fn is_split(&self) -> bool {
        self.unresolved_degree == 0
    }
}

pub fn binary_roots(h: &HomogeneousForm) -> Result<BinaryRoots, AlgebraError> {
    if h.is_zero() {
        return Err(AlgebraError::ZeroSystem);
    }
    let field = h.field();
    let p = binary_dehomogenize(h);
    let at_infinity = h.degree() as usize - p.degree().unwrap();
    let (finite, rest) = p.split_roots();
    let mut roots: Vec<([FieldElement; 2], u32)> = finite
        .into_iter()
        .map(|(t, m)| ([field.one(), t], m))
        .collect();
    if at_infinity > 0 {
        roots.push(([field.zero(), field.one()], at_infinity as u32));
    }
    Ok(BinaryRoots {
        roots,
        unresolved_degree: rest.degree().unwrap_or(0),
        unresolved: rest,
    })
}

/// Gcd of binary forms, monic; zero only if all inputs are zero.
pub fn binary_gcd<'a>(forms: impl IntoIterator<Item = &'a HomogeneousForm>) -> Option<HomogeneousForm> {
    let mut acc: Option<(Poly1, usize)> = None;
    let mut field = None;
    for h in forms {
        field = Some(h.field());
        if h.is_zero() {
            continue;
        }
        let p = binary_dehomogenize(h);
        let xpow = h.degree() as usize - p.degree().unwrap();
        acc = Some(match acc {
            None => (p.monic(), xpow),
            Some((g, k)) => (g.gcd(&p), k.min(xpow)),
        });
    }
    let field = field?;
    Some(match acc {
        None => HomogeneousForm::zero(field, 0),
        Some((g, k)) => {
            let d = g.degree().unwrap() + k;
            binary_homogenize(&g, d as u32)
        }
    })
}

fn z_coeffs(f: &HomogeneousForm, y: &FieldElement) -> Vec<FieldElement> {
    let field = f.field();
    let mut out = vec![field.zero(); f.degree() as usize + 1];
    for (m, c) in f.terms() {
        let k = m.0[2] as usize;
        out[k] = &out[k] + &(c * &y.pow(m.0[1] as u64));
    }
    out
}

fn sylvester(field: Field, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let n = da + db;
    if n == 0 {
        return field.one();
    }
    let mut rows = Vec::with_capacity(n);
    for i in 0..db {
        let mut row = vec![field.zero(); n];
        for (k, c) in a.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..da {
        let mut row = vec![field.zero(); n];
        for (k, c) in b.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    determinant(field, rows)
}

/// Resultant with respect to `z` (formal degrees), a binary form of degree `deg a * deg b`.
pub fn resultant_z(a: &HomogeneousForm, b: &HomogeneousForm) -> Result<HomogeneousForm, AlgebraError> {
    a.check_field(b)?;
    let field = a.field();
    let de = a.degree() * b.degree();
    let samples = de as u64 + 1;
    if let Field::Prime(p) = field {
        if samples > p {
            return Err(AlgebraError::FieldTooSmall { needed: samples, order: p });
        }
    }
    let xs: Vec<FieldElement> = (0..samples as i64).map(|i| field.from_i64(i)).collect();
    let ys: Vec<FieldElement> = xs
        .iter()
        .map(|y| sylvester(field, &z_coeffs(a, y), &z_coeffs(b, y)))
        .collect();
    let p = Poly1::interpolate(field, &xs, &ys);
    Ok(binary_homogenize(&p, de))
}

/// Common zeros of a system over the algebraic closure, reported through the
/// base-field ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonZeros {
    pub points: Vec<PlanePoint>,
    /// False when elimination certifies common zeros outside the base field.
    pub complete: bool,
}

fn small_points(field: Field) -> Vec<PlanePoint> {
    match field {
        Field::Prime(_) => PlanePoint::enumerate(field).unwrap(),
        Field::Rationals => {
            let mut pts = Vec::new();
            for a in -3i64..=3 {
                for b in -3i64..=3 {
                    for c in -3i64..=3 {
                        if let Ok(p) = PlanePoint::from_i64(field, [a, b, c]) {
                            if !pts.contains(&p) {
                                pts.push(p);
                            }
                        }
                    }
                }
            }
            pts
        }
    }
}

/// Decides, by elimination, whether the forms have common zeros over the algebraic
/// closure, and returns the base-field ones.
///
/// The system is moved so that the pivot form does not vanish at `(0:0:1)`; then a
/// point `(x0:y0)` is the projection of a common zero iff `Res_z(A, ΣtⁱBᵢ)` vanishes
/// there for every `t`. Sampling `t` at `deg_z A * (k-1) + 1` values spans that family.
pub fn common_zeros(forms: &[HomogeneousForm]) -> Result<CommonZeros, AlgebraError> {
    let mut nz: Vec<&HomogeneousForm> = forms.iter().filter(|f| !f.is_zero()).collect();
    let Some(first) = nz.first() else {
        return Err(AlgebraError::ZeroSystem);
    };
    let field = first.field();
    if nz.iter().any(|f| f.field() != field) {
        return Err(AlgebraError::FieldMismatch);
    }
    if nz.iter().any(|f| f.degree() == 0) {
        return Ok(CommonZeros {
            points: vec![],
            complete: true,
        });
    }
    if nz.len() == 1 {
        return Err(AlgebraError::PositiveDimensional);
    }
    nz.sort_by_key(|f| (f.degree(), f.num_terms()));
    let pivot = nz[0];
    let rest = &nz[1..];
    let dr = rest[0].degree();
    if rest.iter().any(|f| f.degree() != dr) {
        return Err(AlgebraError::DegreeMismatch {
            expected: dr,
            found: rest.iter().map(|f| f.degree()).find(|&d| d != dr).unwrap(),
        });
    }
    let centre = small_points(field)
        .into_iter()
        .find(|c| !pivot.eval_coords(c.coords()).is_zero())
        .ok_or(AlgebraError::FieldTooSmall {
            needed: 0,
            order: field.characteristic(),
        })?;
    let m = Matrix3::moving_unit_to(&centre, 2);
    let a = pivot.linear_change(&m)?;
    let bs: Vec<HomogeneousForm> = rest.iter().map(|f| f.linear_change(&m)).collect::<Result<_, _>>()?;

    let t_samples = a.degree() as u64 * (bs.len() as u64 - 1) + 1;
    if let Field::Prime(p) = field {
        if t_samples > p {
            return Err(AlgebraError::FieldTooSmall { needed: t_samples, order: p });
        }
    }
    let mut resultants = Vec::new();
    for t in 0..t_samples as i64 {
        let tv = field.from_i64(t);
        let mut comb = HomogeneousForm::zero(field, dr);
        let mut tp = field.one();
        for b in &bs {
            comb = &comb + &b.scale(&tp);
            tp = &tp * &tv;
        }
        resultants.push(resultant_z(&a, &comb)?);
    }
    let h = binary_gcd(resultants.iter()).expect("nonempty");
    if h.is_zero() {
        return Err(AlgebraError::PositiveDimensional);
    }
    if h.degree() == 0 {
        return Ok(CommonZeros {
            points: vec![],
            complete: true,
        });
    }
    let br = binary_roots(&h)?;
    let mut complete = br.is_split();
    let mut points = Vec::new();
    for ([x0, y0], _) in &br.roots {
        let univ = |f: &HomogeneousForm| -> Poly1 {
            let mut coeffs = vec![field.zero(); f.degree() as usize + 1];
            for (mo, c) in f.terms() {
                let k = mo.0[2] as usize;
                let v = &(c * &x0.pow(mo.0[0] as u64)) * &y0.pow(mo.0[1] as u64);
                coeffs[k] = &coeffs[k] + &v;
            }
            Poly1::new(field, coeffs)
        };
        let mut g = univ(&a);
        for b in &bs {
            g = g.gcd(&univ(b));
        }
        let (zs, left) = g.split_roots();
        if left.degree().unwrap_or(0) > 0 {
            complete = false;
        }
        for (z0, _) in zs {
            let p = m.apply_point(&PlanePoint::new([x0.clone(), y0.clone(), z0])?)?;
            if !points.contains(&p) {
                points.push(p);
            }
        }
    }
    points.sort();
    Ok(CommonZeros { points, complete })
}
