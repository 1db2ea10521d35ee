use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, Field, FieldElement};

/// A point of the projective plane, scaled so its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanePoint {
    coords: [FieldElement; 3],
}

impl PlanePoint {
    pub fn new(coords: [FieldElement; 3]) -> Result<Self, AlgebraError> {
        let field = coords[0].field();
        if coords.iter().any(|c| c.field() != field) {
            return Err(AlgebraError::FieldMismatch);
        }
        let pivot = coords
            .iter()
            .find(|c| !c.is_zero())
            .ok_or(AlgebraError::ZeroPoint)?
            .inv()
            .expect("nonzero");
        let [a, b, c] = coords;
        Ok(PlanePoint {
            coords: [&a * &pivot, &b * &pivot, &c * &pivot],
        })
    }

    pub fn from_i64(field: Field, coords: [i64; 3]) -> Result<Self, AlgebraError> {
        Self::new(coords.map(|c| field.from_i64(c)))
    }

    /// Parses three coefficient literals.
    pub fn parse(field: Field, coords: &[impl AsRef<str>]) -> Result<Self, AlgebraError> {
        if coords.len() != 3 {
            return Err(AlgebraError::Parse(format!(
                "a point needs 3 coordinates, got {}",
                coords.len()
            )));
        }
        Self::new([
            field.parse(coords[0].as_ref())?,
            field.parse(coords[1].as_ref())?,
            field.parse(coords[2].as_ref())?,
        ])
    }

    pub fn coords(&self) -> &[FieldElement; 3] {
        &self.coords
    }

    pub fn field(&self) -> Field {
        self.coords[0].field()
    }

    /// Index of the first nonzero coordinate (the one equal to 1).
    pub fn pivot(&self) -> usize {
        self.coords.iter().position(|c| !c.is_zero()).expect("nonzero point")
    }

    pub fn literals(&self) -> [String; 3] {
        [
            self.coords[0].to_literal(),
            self.coords[1].to_literal(),
            self.coords[2].to_literal(),
        ]
    }

    /// Bilinear pairing of coordinate vectors (line coefficients against a point).
    pub fn dot(&self, v: &[FieldElement; 3]) -> FieldElement {
        let mut acc = self.field().zero();
        for i in 0..3 {
            acc = acc + &self.coords[i] * &v[i];
        }
        acc
    }

    /// The line through two distinct points, as a point of the dual plane.
    pub fn join(&self, other: &PlanePoint) -> Result<PlanePoint, AlgebraError> {
        PlanePoint::new(cross(&self.coords, &other.coords))
    }

    /// All points of the plane over a prime field.
    pub fn enumerate(field: Field) -> Option<Vec<PlanePoint>> {
        let elems: Vec<FieldElement> = field.elements()?.collect();
        let (zero, one) = (field.zero(), field.one());
        let mut out = Vec::with_capacity(elems.len() * elems.len() + elems.len() + 1);
        for a in &elems {
            for b in &elems {
                out.push(PlanePoint {
                    coords: [one.clone(), a.clone(), b.clone()],
                });
            }
        }
        for b in &elems {
            out.push(PlanePoint {
                coords: [zero.clone(), one.clone(), b.clone()],
            });
        }
        out.push(PlanePoint {
            coords: [zero.clone(), zero, one],
        });
        Some(out)
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl Serialize for PlanePoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.literals().serialize(serializer)
    }
}

/// Point literals as they appear in JSON, before a field is attached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointLiteral(pub [String; 3]);

impl PointLiteral {
    pub fn resolve(&self, field: Field) -> Result<PlanePoint, AlgebraError> {
        PlanePoint::parse(field, &self.0)
    }
}

pub(crate) fn cross(a: &[FieldElement; 3], b: &[FieldElement; 3]) -> [FieldElement; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// A 3x3 matrix acting on column vectors of coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix3 {
    rows: [[FieldElement; 3]; 3],
}

impl Matrix3 {
    pub fn new(rows: [[FieldElement; 3]; 3]) -> Result<Self, AlgebraError> {
        let field = rows[0][0].field();
        if rows.iter().flatten().any(|e| e.field() != field) {
            return Err(AlgebraError::FieldMismatch);
        }
        Ok(Matrix3 { rows })
    }

    pub fn from_i64(field: Field, rows: [[i64; 3]; 3]) -> Self {
        Matrix3 {
            rows: rows.map(|r| r.map(|v| field.from_i64(v))),
        }
    }

    pub fn identity(field: Field) -> Self {
        Self::from_i64(field, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: [[FieldElement; 3]; 3]) -> Self {
        let rows = std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].clone()));
        Matrix3 { rows }
    }

    pub fn field(&self) -> Field {
        self.rows[0][0].field()
    }

    pub fn rows(&self) -> &[[FieldElement; 3]; 3] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        &self.rows[i][j]
    }

    pub fn det(&self) -> FieldElement {
        let r = &self.rows;
        let c = cross(&r[1], &r[2]);
        &(&r[0][0] * &c[0] + &r[0][1] * &c[1]) + &(&r[0][2] * &c[2])
    }

    pub fn inverse(&self) -> Result<Matrix3, AlgebraError> {
        let d = self.det().inv().ok_or(AlgebraError::SingularMatrix)?;
        let r = &self.rows;
        // Columns of the adjugate transpose are cross products of rows.
        let c0 = cross(&r[1], &r[2]);
        let c1 = cross(&r[2], &r[0]);
        let c2 = cross(&r[0], &r[1]);
        let cols = [c0, c1, c2].map(|c| c.map(|e| &e * &d));
        Ok(Matrix3::from_columns(cols))
    }

    pub fn mul(&self, other: &Matrix3) -> Matrix3 {
        let field = self.field();
        let rows = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..3).fold(field.zero(), |acc, k| acc + &self.rows[i][k] * &other.rows[k][j])
            })
        });
        Matrix3 { rows }
    }

    pub fn apply(&self, v: &[FieldElement; 3]) -> [FieldElement; 3] {
        let field = self.field();
        std::array::from_fn(|i| (0..3).fold(field.zero(), |acc, k| acc + &self.rows[i][k] * &v[k]))
    }

    pub fn apply_point(&self, p: &PlanePoint) -> Result<PlanePoint, AlgebraError> {
        PlanePoint::new(self.apply(p.coords()))
    }

    pub fn transpose(&self) -> Matrix3 {
        let rows = std::array::from_fn(|i| std::array::from_fn(|j| self.rows[j][i].clone()));
        Matrix3 { rows }
    }

    /// An invertible matrix whose column `col` is `p` and whose other columns are unit vectors.
    pub fn moving_unit_to(p: &PlanePoint, col: usize) -> Matrix3 {
        let field = p.field();
        let pivot = p.pivot();
        let mut units: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
        let mut cols: [[FieldElement; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| field.zero()));
        cols[col] = p.coords().clone();
        for (j, c) in cols.iter_mut().enumerate() {
            if j == col {
                continue;
            }
            let u = units.remove(0);
            c[u] = field.one();
        }
        Matrix3::from_columns(cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_scaling() {
        let q = Field::Rationals;
        let p = PlanePoint::from_i64(q, [0, 2, -4]).unwrap();
        assert_eq!(p, PlanePoint::from_i64(q, [0, 1, -2]).unwrap());
        assert_eq!(p.pivot(), 1);
        assert!(PlanePoint::from_i64(q, [0, 0, 0]).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let f = Field::prime(11).unwrap();
        let m = Matrix3::from_i64(f, [[1, 2, 3], [0, 1, 4], [5, 6, 0]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix3::identity(f));
        let s = Matrix3::from_i64(f, [[1, 2, 3], [2, 4, 6], [0, 0, 1]]);
        assert!(s.inverse().is_err());
    }

    #[test]
    fn enumerate_counts() {
        let f = Field::prime(7).unwrap();
        assert_eq!(PlanePoint::enumerate(f).unwrap().len(), 57);
    }

    #[test]
    fn moving_unit_keeps_column() {
        let q = Field::Rationals;
        let p = PlanePoint::from_i64(q, [0, 1, 3]).unwrap();
        for col in 0..3 {
            let m = Matrix3::moving_unit_to(&p, col);
            assert!(!m.det().is_zero());
            let mut e = [q.zero(), q.zero(), q.zero()];
            e[col] = q.one();
            assert_eq!(m.apply_point(&PlanePoint::new(e).unwrap()).unwrap(), p);
        }
    }
}
