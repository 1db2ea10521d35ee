use proptest::prelude::*;

use inertia_core::algebra::{form_gcd, Field, FieldElement, HomogeneousForm, Matrix3, PlanePoint};

const PRIMES: [u64; 4] = [7, 13, 29, 4_294_967_291];

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::Rationals),
        prop::sample::select(PRIMES.to_vec()).prop_map(|p| Field::prime(p).unwrap()),
    ]
}

fn element(f: Field) -> impl Strategy<Value = FieldElement> {
    (-50i64..=50, 1i64..=6).prop_map(move |(n, d)| &f.from_i64(n) / &f.from_i64(d))
}

fn monomials(d: u32) -> Vec<[u32; 3]> {
    (0..=d).rev().flat_map(|a| (0..=d - a).rev().map(move |b| [a, b, d - a - b])).collect()
}

fn form_of(f: Field, max_deg: u32) -> impl Strategy<Value = HomogeneousForm> {
    (0..=max_deg).prop_flat_map(move |d| {
        let ms = monomials(d);
        prop::collection::vec(prop::option::weighted(0.6, -6i64..=6), ms.len()).prop_map(move |cs| {
            let terms = ms.iter().zip(cs).filter_map(|(m, c)| c.map(|c| (*m, f.from_i64(c))));
            HomogeneousForm::from_terms(f, d, terms).unwrap()
        })
    })
}

fn nonzero_form(f: Field, max_deg: u32) -> impl Strategy<Value = HomogeneousForm> {
    form_of(f, max_deg).prop_filter("nonzero", |g| !g.is_zero())
}

fn field_and_forms(n: usize, max_deg: u32) -> impl Strategy<Value = (Field, Vec<HomogeneousForm>)> {
    field().prop_flat_map(move |f| (Just(f), prop::collection::vec(nonzero_form(f, max_deg), n)))
}

fn matrix(f: Field) -> impl Strategy<Value = Matrix3> {
    prop::array::uniform3(prop::array::uniform3(-4i64..=4))
        .prop_map(move |rows| Matrix3::from_i64(f, rows))
        .prop_filter("invertible", |m| !m.det().is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms((a, b, c) in field().prop_flat_map(|f| (element(f), element(f), element(f)))) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        } else {
            prop_assert!(a.inv().is_none());
        }
    }

    #[test]
    fn residues_are_canonical(p in prop::sample::select(PRIMES.to_vec()), n in any::<i64>()) {
        let f = Field::prime(p).unwrap();
        let lit: u64 = f.from_i64(n).to_literal().parse().unwrap();
        prop_assert!(lit < p);
        prop_assert_eq!(lit as i128, (n as i128).rem_euclid(p as i128));
    }

    #[test]
    fn divexact_inverts_multiplication((_f, fs) in field_and_forms(2, 3)) {
        let prod = &fs[0] * &fs[1];
        prop_assert_eq!(prod.divexact(&fs[1]).unwrap(), fs[0].clone());
        prop_assert_eq!(prod.degree(), fs[0].degree() + fs[1].degree());
    }

    #[test]
    fn gcd_divides_inputs((_f, fs) in field_and_forms(3, 2)) {
        let a = &fs[0] * &fs[2];
        let b = &fs[1] * &fs[2];
        let g = form_gcd(&[a.clone(), b.clone()]).unwrap();
        prop_assert!(a.divexact(&g).is_ok());
        prop_assert!(b.divexact(&g).is_ok());
        // The common factor survives.
        prop_assert!(g.divexact(&fs[2]).is_ok());
    }

    #[test]
    fn linear_change_is_multiplicative(
        (fs, m) in field().prop_flat_map(|f| (prop::collection::vec(form_of(f, 2), 2), matrix(f)))
    ) {
        let lhs = (&fs[0] * &fs[1]).linear_change(&m).unwrap();
        let rhs = &fs[0].linear_change(&m).unwrap() * &fs[1].linear_change(&m).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_identity(g in field().prop_flat_map(|f| form_of(f, 4))) {
        let f = g.field();
        let d = g.degree();
        let mut sum = HomogeneousForm::zero(f, d);
        for i in 0..3 {
            let xi = HomogeneousForm::var(f, i);
            let di = g.derive(i);
            if d > 0 {
                sum = &sum + &(&xi * &di);
            }
        }
        prop_assert_eq!(sum, g.scale(&f.from_i64(d as i64)));
    }

    #[test]
    fn json_round_trip(g in field().prop_flat_map(|f| form_of(f, 3))) {
        let back = HomogeneousForm::from_json(g.field(), &g.to_json()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn points_are_canonically_scaled(
        (f, v, s) in field().prop_flat_map(|f| (Just(f), prop::array::uniform3(-9i64..=9), 1i64..=6))
    ) {
        let p = PlanePoint::from_i64(f, v);
        prop_assume!(p.is_ok());
        let p = p.unwrap();
        let first = p.coords().iter().find(|c| !c.is_zero()).unwrap();
        prop_assert!(first.is_one());
        let scaled = PlanePoint::from_i64(f, v.map(|c| c * s)).unwrap();
        prop_assert_eq!(scaled, p);
    }
}

#[test]
fn small_characteristics_rejected() {
    for p in [0, 1, 2, 3, 4, 5, 9, 15] {
        assert!(Field::prime(p).is_err(), "{p}");
    }
    assert!(Field::prime(1 << 32).is_err());
}
