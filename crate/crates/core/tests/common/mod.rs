#![allow(dead_code)]

use inertia_core::algebra::{Field, PlanePoint};
use inertia_core::curve::{split_points, CubicCurve, SplitPoint};

pub const WORKED: &str = "y^2*z - x^3 + x*z^2";
pub const MORDELL: &str = "y^2*z - x^3 - z^3";

pub fn q() -> Field {
    Field::Rationals
}

pub fn fp(p: u64) -> Field {
    Field::prime(p).unwrap()
}

pub fn curve(field: Field, src: &str) -> CubicCurve {
    CubicCurve::parse(field, src).unwrap()
}

pub fn pt(field: Field, v: [i64; 3]) -> PlanePoint {
    PlanePoint::from_i64(field, v).unwrap()
}

/// The worked curve over F_29 and its split points: 10 of them, one inflexion.
pub fn f29() -> (CubicCurve, Vec<SplitPoint>) {
    let c = curve(fp(29), WORKED);
    let sp = split_points(&c).unwrap();
    (c, sp)
}

/// Three split generators over F_29 with no inflexion and no mutual relation.
pub fn omega0() -> (CubicCurve, Vec<PlanePoint>) {
    let (c, sp) = f29();
    (c, sp[..3].iter().map(|s| s.point.clone()).collect())
}

/// Exact split configurations used for randomized lattice checks.
pub fn split_configs() -> Vec<(CubicCurve, Vec<SplitPoint>)> {
    [(29, WORKED), (37, MORDELL), (31, MORDELL)]
        .into_iter()
        .map(|(p, src)| {
            let c = curve(fp(p), src);
            let sp = split_points(&c).unwrap();
            (c, sp)
        })
        .collect()
}
