//! Randomised and exhaustive checks of the structural invariants.

use birfol_core::algebra::{
    eigen2, matrix_order, roots_in_tower, BiPoly, BiRat, IntMatrix2, MatrixOrder, QuadNumber, Rational, SquareMatrix,
};
use birfol_core::blowup::{seidenberg_reduce, BaseAtlas, SurfaceModel};
use birfol_core::dynamics::{
    commutes_with_kummer_involution, degree_sequence, growth_class, invariant_foliations, is_algebraically_stable,
    pullback_action, pullback_log_form, GrowthClass, MonomialMap,
};
use birfol_core::error::Error;
use birfol_core::foliation::{
    camacho_sad_index, classify_singularity, dulac_invariant, parse_one_form, tangency_order, Axis, OneForm, Point,
    SingularityKind,
};
use birfol_core::liouville::{exterior_derivative, group_average, singer_check, wedge, RatOneForm};
use birfol_core::torus::{h11_growth, h11_matrix, stable_unstable_slopes, anosov_check, LatticeKind, TorusAut};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

const RADICANDS: [i64; 5] = [-3, -1, 2, 3, 5];

fn q(n: i64) -> QuadNumber {
    QuadNumber::from_int(n)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// An irrational real quadratic number, never a rational ratio.
fn irrational() -> impl Strategy<Value = QuadNumber> {
    (rational(), rational().prop_filter("nonzero", |s| !s.is_zero()), prop::sample::select(vec![2i64, 3, 5]))
        .prop_map(|(r, s, d)| QuadNumber::new(r, s, d))
}

fn poly() -> impl Strategy<Value = BiPoly> {
    prop::collection::vec((-3i64..=3, 0u32..3, 0u32..3), 1..5)
        .prop_map(|ts| BiPoly::from_int_terms(&ts))
}

fn higher_order(max_deg: u32) -> impl Strategy<Value = BiPoly> {
    prop::collection::vec((-3i64..=3, 0u32..=max_deg, 0u32..=max_deg), 0..4).prop_map(|ts| {
        let ts: Vec<_> = ts.into_iter().filter(|&(_, i, j)| i + j >= 2).collect();
        BiPoly::from_int_terms(&ts)
    })
}

fn unimodular(max: i64) -> impl Strategy<Value = IntMatrix2> {
    prop::array::uniform4(-max..=max)
        .prop_map(|[a, b, c, d]| IntMatrix2::new(a, b, c, d))
        .prop_filter("unimodular", |m| m.det().abs() == 1)
}

fn nonneg_hyperbolic(max: i64) -> impl Strategy<Value = IntMatrix2> {
    prop::array::uniform4(0..=max)
        .prop_map(|[a, b, c, d]| IntMatrix2::new(a, b, c, d))
        .prop_filter("hyperbolic unimodular", |m| m.det().abs() == 1 && m.trace().abs() > 2)
}

fn to_big(m: &IntMatrix2) -> [[BigInt; 2]; 2] {
    m.rows().map(|r| r.map(BigInt::from))
}

fn big_mul(x: &[[BigInt; 2]; 2], y: &[[BigInt; 2]; 2]) -> [[BigInt; 2]; 2] {
    let mut out: [[BigInt; 2]; 2] = Default::default();
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
        }
    }
    out
}

fn birat_eq(a: &BiRat, b: &BiRat) -> bool {
    a.sub(b).is_zero()
}

fn one_form_eq(a: &RatOneForm, b: &RatOneForm) -> bool {
    birat_eq(&a.p, &b.p) && birat_eq(&a.q, &b.q)
}

/// Determinant by cofactor expansion; the matrices here are tiny.
fn det(m: &[Vec<i64>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0] as i128,
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] as i128 * det(&minor)
            })
            .sum(),
    }
}

// ---------- exact arithmetic ----------

proptest! {
    #[test]
    fn field_axioms_on_independent_samples(d in prop::sample::select(RADICANDS.to_vec()),
                                           a in rational(), b in rational(), c in rational(), e in rational()) {
        let x = QuadNumber::new(a.clone(), b.clone(), d);
        let y = QuadNumber::new(c.clone(), e.clone(), d);
        let z = QuadNumber::new(b, c, d);
        prop_assert_eq!((&x * &y) * &z, &x * (&y * &z));
        prop_assert_eq!(&x * (&y + &z), &x * &y + &x * &z);
        prop_assert_eq!(&x - &x, QuadNumber::zero());
        if !x.is_zero() {
            prop_assert_eq!(&(&y / &x) * &x, y);
        }
    }
}

#[test]
fn finite_orders_are_crystallographic() {
    let mut finite = 0;
    for a in -3..=3 {
        for b in -3..=3 {
            for c in -3..=3 {
                for d in -3..=3 {
                    let m = IntMatrix2::new(a, b, c, d);
                    if m.det().abs() != 1 {
                        continue;
                    }
                    if let MatrixOrder::Finite { order, .. } = matrix_order(&m.to_square(), 12) {
                        assert!([1, 2, 3, 4, 6].contains(&order), "{m} has order {order}");
                        finite += 1;
                    }
                }
            }
        }
    }
    assert!(finite > 0);
}

// ---------- local theory ----------

proptest! {
    #[test]
    fn saturation_is_idempotent(a in poly(), b in poly(), g in poly()) {
        prop_assume!(!(a.is_zero() && b.is_zero()) && !g.is_zero());
        let f = OneForm::xy(&g * &a, &g * &b).unwrap();
        let once = f.saturate().unwrap();
        prop_assert_eq!(once.saturate().unwrap(), once);
    }

    #[test]
    fn swapping_axes_inverts_the_ratio(lambda in irrational(), ha in higher_order(3), hb in higher_order(3)) {
        // a = λy + h.o.t., b = x + h.o.t.
        let a = &BiPoly::monomial(lambda, 0, 1) + &ha;
        let b = &BiPoly::x() + &hb;
        let f = OneForm::xy(a, b).unwrap();
        let r = classify_singularity(&f, &Point::origin()).unwrap();
        let s = classify_singularity(&f.swap(), &Point::origin()).unwrap();
        match (r.kind, s.kind) {
            (SingularityKind::NonDegenerate { ratio: x }, SingularityKind::NonDegenerate { ratio: y }) => {
                prop_assert_eq!(&x * &y, QuadNumber::one());
            }
            (k1, k2) => prop_assert!(false, "unexpected kinds {:?} / {:?}", k1, k2),
        }
    }

    #[test]
    fn cs_indices_of_a_nondegenerate_corner_multiply_to_one(lambda in irrational(),
                                                             ha in higher_order(2), hb in higher_order(2)) {
        // a = y(λ + h.o.t.), b = x(1 + h.o.t.): both axes invariant.
        let a = (&BiPoly::constant(lambda) + &ha.mul_monomial(1, 0)).mul_monomial(0, 1);
        let b = (&BiPoly::one() + &hb.mul_monomial(0, 1)).mul_monomial(1, 0);
        let f = OneForm::xy(a, b).unwrap();
        let o = Point::origin();
        let r = classify_singularity(&f, &o).unwrap();
        let nondegenerate = matches!(r.kind, SingularityKind::NonDegenerate { .. });
        prop_assert!(nondegenerate);
        let p = camacho_sad_index(&f, Axis::X0, &o).unwrap() * camacho_sad_index(&f, Axis::Y0, &o).unwrap();
        prop_assert_eq!(p, QuadNumber::one());
    }

    #[test]
    fn not_invariant_exactly_when_tangency_is_defined(a in poly(), b in poly(), x in -2i64..=2, y in -2i64..=2,
                                                      along_x in any::<bool>()) {
        prop_assume!(!(a.is_zero() && b.is_zero()));
        let f = OneForm::xy(a, b).unwrap();
        let p = Point::ints(x, y);
        let axis = if along_x { Axis::X0 } else { Axis::Y0 };
        let cs = camacho_sad_index(&f, axis, &p);
        let tang = tangency_order(&f, axis, &p);
        prop_assert_eq!(matches!(cs, Err(Error::NotInvariant(_))), tang.is_ok());
    }

    #[test]
    fn reported_dulac_value_matches(lambda in rational(), p in 1u32..=3) {
        // x(1 + λy^p)dy − y^{p+1}dx
        let a = BiPoly::from_int_terms(&[(-1, 0, p + 1)]);
        let b = &BiPoly::x() + &BiPoly::monomial(QuadNumber::from(lambda.clone()), 1, p);
        let f = OneForm::xy(a, b).unwrap();
        let o = Point::origin();
        let r = classify_singularity(&f, &o).unwrap();
        let nu = dulac_invariant(&f, &o).unwrap();
        match r.kind {
            SingularityKind::SaddleNode { dulac: Some(v), .. } => prop_assert_eq!(&v, &nu),
            k => prop_assert!(false, "expected a saddle-node, got {:?}", k),
        }
        prop_assert_eq!(nu, QuadNumber::from(lambda));
    }
}

// ---------- blowups ----------

fn linear_form(lambda: &QuadNumber, ha: &BiPoly, hb: &BiPoly) -> OneForm {
    // x dy + λ y dx plus terms of order ≥ 2 keeping both axes invariant.
    let a = (&BiPoly::constant(lambda.clone()) + &ha.mul_monomial(1, 0)).mul_monomial(0, 1);
    let b = (&BiPoly::one() + &hb.mul_monomial(0, 1)).mul_monomial(1, 0);
    OneForm::xy(a, b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn camacho_sad_on_the_exceptional_divisor(lambda in irrational(), ha in higher_order(1), hb in higher_order(1)) {
        let m = SurfaceModel::affine(linear_form(&lambda, &ha, &hb)).unwrap();
        let m = m.blow_up(0, &Point::origin()).unwrap();
        let check = m.verify_camacho_sad("E1").unwrap();
        prop_assert!(check.ok, "{:?}", check);
        prop_assert_eq!(check.self_intersection, -1);
        prop_assert_eq!(check.sum, q(-1));
    }

    #[test]
    fn separatrix_indices_drop_by_one(lambda in irrational(), ha in higher_order(1), hb in higher_order(1)) {
        let f = linear_form(&lambda, &ha, &hb);
        let o = Point::origin();
        let before_y = camacho_sad_index(&f, Axis::Y0, &o).unwrap();
        let before_x = camacho_sad_index(&f, Axis::X0, &o).unwrap();
        let m = SurfaceModel::affine(f).unwrap().blow_up(0, &o).unwrap();
        let (c1, c2) = m.log[0].new_charts;
        // {y=0} survives as {t=0} in chart 1; {x=0} as {s=0} in chart 2.
        let after_y = camacho_sad_index(&m.charts[c1].form, Axis::Y0, &o).unwrap();
        let after_x = camacho_sad_index(&m.charts[c2].form, Axis::X0, &o).unwrap();
        prop_assert_eq!(after_y, before_y - q(1));
        prop_assert_eq!(after_x, before_x - q(1));
    }

    #[test]
    fn reduced_points_stay_reduced(lambda in irrational(), ha in higher_order(1), hb in higher_order(1)) {
        let o = Point::origin();
        let f = linear_form(&lambda, &ha, &hb);
        prop_assert!(classify_singularity(&f, &o).unwrap().is_reduced());
        let m = SurfaceModel::affine(f).unwrap().blow_up(0, &o).unwrap();
        let (c1, c2) = m.log[0].new_charts;
        // E = {x = 0} in chart 1 is invariant, so its singular points are the zeros of a(0, t);
        // chart 2 adds only its origin.
        let mut on_e: Vec<(usize, Point)> = roots_in_tower(&m.charts[c1].form.a().restrict_x_zero())
            .unwrap()
            .into_iter()
            .map(|r| (c1, Point::new(q(0), r.value)))
            .collect();
        on_e.push((c2, o.clone()));
        for (k, p) in on_e {
            let r = classify_singularity(&m.charts[k].form, &p).unwrap();
            prop_assert!(r.is_regular() || r.is_reduced(), "chart {} {:?}: {:?}", k, p, r);
        }
    }

    #[test]
    fn reduction_ends_reduced_with_negative_definite_divisor(p in 1i64..=7, qq in 1i64..=7) {
        prop_assume!(num_integer::gcd(p, qq) == 1);
        let f = parse_one_form(&format!("{qq}*x*dy - {p}*y*dx")).unwrap();
        let t = seidenberg_reduce(&f, BaseAtlas::Affine, 64).unwrap();
        prop_assert!(t.final_reports.iter().all(|r| r.report.is_reduced()));
        let mat = t.model.exceptional_intersection_matrix();
        for k in 1..=mat.len() {
            let lead: Vec<Vec<i64>> = mat[..k].iter().map(|r| r[..k].to_vec()).collect();
            let d = det(&lead);
            prop_assert!(if k % 2 == 1 { d < 0 } else { d > 0 }, "minor {} of {:?} is {}", k, mat, d);
        }
        for c in t.model.exceptional_curves() {
            if c.invariant {
                prop_assert!(t.model.verify_camacho_sad(&c.id).unwrap().ok);
            }
        }
    }
}

// ---------- monomial dynamics ----------

proptest! {
    #[test]
    fn pullback_is_contravariant_on_same_sign_maps(f in nonneg_hyperbolic(3), g in nonneg_hyperbolic(3)) {
        let (f, g) = (MonomialMap::new(f).unwrap(), MonomialMap::new(g).unwrap());
        let fg = f.compose(&g);
        prop_assert_eq!(pullback_action(&fg), pullback_action(&g).mul(&pullback_action(&f)));
    }

    #[test]
    fn nonnegative_maps_are_stable(m in nonneg_hyperbolic(4)) {
        let f = MonomialMap::new(m).unwrap();
        prop_assert!(is_algebraically_stable(&f));
        let a = to_big(&pullback_action(&f));
        let mut acc = a.clone();
        for (k, d) in degree_sequence(&f, 8).iter().enumerate() {
            prop_assert_eq!(d, &acc, "n = {}", k + 1);
            acc = big_mul(&acc, &a);
        }
    }

    #[test]
    fn stable_maps_satisfy_the_power_law(m in unimodular(3)) {
        let f = MonomialMap::new(m).unwrap();
        if is_algebraically_stable(&f) {
            let a = to_big(&pullback_action(&f));
            let mut acc = a.clone();
            for d in degree_sequence(&f, 8) {
                prop_assert_eq!(&d, &acc);
                acc = big_mul(&acc, &a);
            }
        }
    }

    #[test]
    fn invariant_foliations_are_eigen_directions(m in unimodular(4)) {
        let f = MonomialMap::new(m).unwrap();
        if let Ok(fols) = invariant_foliations(&f) {
            for l in fols {
                let image = pullback_log_form(&f, &l.coeffs);
                prop_assert_eq!(&image[0], &(&l.eigenvalue * &l.coeffs[0]));
                prop_assert_eq!(&image[1], &(&l.eigenvalue * &l.coeffs[1]));
            }
        }
    }

    #[test]
    fn kummer_involution_is_central(m in unimodular(5)) {
        prop_assert!(commutes_with_kummer_involution(&MonomialMap::new(m).unwrap()));
    }

    #[test]
    fn exponential_rate_is_the_spectral_radius(m in nonneg_hyperbolic(4)) {
        let f = MonomialMap::new(m).unwrap();
        let rho = eigen2(&pullback_action(&f)).unwrap().spectral_radius;
        prop_assert_eq!(growth_class(&f).unwrap(), GrowthClass::Exponential(rho));
        // Degrees obey a two-term recurrence: the Casoratian is constant up to sign.
        let d: Vec<BigInt> = degree_sequence(&f, 11).iter().map(|x| x[0][0].clone()).collect();
        let cas = |k: usize| (&d[k + 1] * &d[k - 1] - &d[k] * &d[k]).abs();
        for k in 1..10 {
            prop_assert_eq!(cas(k), cas(1));
        }
    }
}

// ---------- toral dynamics ----------

fn torus(m: &IntMatrix2) -> TorusAut {
    let r = m.rows();
    TorusAut::from_ints(LatticeKind::ESquare, &[&r[0], &r[1]]).unwrap()
}

#[test]
fn anosov_growth_rate_is_rho_squared() {
    let mut seen = 0;
    for a in -3..=3 {
        for b in -3..=3 {
            for c in -3..=3 {
                for d in -3..=3 {
                    let m = IntMatrix2::new(a, b, c, d);
                    if m.det().abs() != 1 {
                        continue;
                    }
                    let t = torus(&m);
                    if anosov_check(&t).unwrap() {
                        let rho = eigen2(&m).unwrap().spectral_radius;
                        assert_eq!(h11_growth(&t).unwrap(), GrowthClass::Exponential(&rho * &rho), "{m}");
                        seen += 1;
                    }
                }
            }
        }
    }
    assert!(seen > 100);
}

#[test]
fn unipotent_h11_entries_grow_quadratically() {
    let k = h11_matrix(&torus(&IntMatrix2::new(1, 0, 1, 1))).unwrap();
    let mut acc = SquareMatrix::identity(k.size());
    for n in 1..=100i64 {
        acc = acc.mul(&k);
        let max = acc.rows().into_iter().flatten().map(|x| x.abs_real().unwrap()).fold(q(0), |m, x| {
            if x.cmp_real(&m) == Some(std::cmp::Ordering::Greater) {
                x
            } else {
                m
            }
        });
        assert_eq!(max, q(n * n), "n = {n}");
    }
}

#[test]
fn same_matrix_is_linear_monomially_and_quadratic_torically() {
    let m = IntMatrix2::new(1, 0, 1, 1);
    assert_eq!(growth_class(&MonomialMap::new(m).unwrap()).unwrap(), GrowthClass::Linear);
    assert_eq!(h11_growth(&torus(&m)).unwrap(), GrowthClass::Quadratic);
}

fn parallel(u: &[QuadNumber; 2], v: &[QuadNumber; 2]) -> bool {
    (&u[0] * &v[1] - &u[1] * &v[0]).is_zero()
}

proptest! {
    #[test]
    fn inverse_exchanges_stable_and_unstable(m in unimodular(3)) {
        let t = torus(&m);
        prop_assume!(anosov_check(&t).unwrap());
        let inv = torus(&m.inverse().unwrap());
        let (s, si) = (stable_unstable_slopes(&t).unwrap(), stable_unstable_slopes(&inv).unwrap());
        prop_assert!(parallel(&s.stable, &si.unstable));
        prop_assert!(parallel(&s.unstable, &si.stable));
        prop_assert_eq!(&s.stable_eigenvalue * &si.unstable_eigenvalue, q(1));
    }
}

// ---------- exterior calculus ----------

fn rat_form() -> impl Strategy<Value = RatOneForm> {
    (poly(), poly(), poly(), poly())
        .prop_filter("nonzero denominators", |(_, d1, _, d2)| !d1.is_zero() && !d2.is_zero())
        .prop_map(|(n1, d1, n2, d2)| RatOneForm::new(BiRat::new(n1, d1).unwrap(), BiRat::new(n2, d2).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_of_d_vanishes(f in poly()) {
        let df = RatOneForm::differential(&BiRat::from_poly(f));
        prop_assert!(exterior_derivative(&df).is_zero());
    }

    #[test]
    fn leibniz_rule(f in poly(), omega in rat_form()) {
        let f = BiRat::from_poly(f);
        let lhs = exterior_derivative(&omega.scale(&f));
        let rhs = wedge(&RatOneForm::differential(&f), &omega).r.add(&exterior_derivative(&omega).r.mul(&f));
        prop_assert!(birat_eq(&lhs.r, &rhs));
    }

    #[test]
    fn singer_criterion_is_gauge_invariant(alpha in irrational(), g in poly()) {
        prop_assume!(!g.is_zero());
        let omega = RatOneForm::linear(&alpha);
        let eta = RatOneForm::log_zw();
        prop_assert!(singer_check(&omega, &eta));
        let g = BiRat::from_poly(g);
        let dg_over_g = RatOneForm::differential(&g).scale(&BiRat::one().div(&g).unwrap());
        prop_assert!(singer_check(&omega.scale(&g), &eta.add(&dg_over_g)));
        // A wrong η stays wrong after the same gauge change.
        prop_assert!(!singer_check(&omega.scale(&g), &RatOneForm::zero().add(&dg_over_g)));
    }

    #[test]
    fn group_average_is_a_projection(alpha in rat_form()) {
        let group = [MonomialMap::new(IntMatrix2::identity()).unwrap(), MonomialMap::kummer_involution()];
        let once = group_average(&alpha, &group).unwrap();
        let twice = group_average(&once, &group).unwrap();
        prop_assert!(one_form_eq(&once, &twice));
    }

    #[test]
    fn printed_rational_forms_reparse(alpha in rat_form()) {
        let again = RatOneForm::parse_in(&alpha.pretty(), ("z", "w")).unwrap();
        prop_assert!(one_form_eq(&again, &alpha), "{}", alpha.pretty());
    }

    #[test]
    fn printed_polynomial_forms_reparse(a in poly(), b in poly(), s in irrational()) {
        prop_assume!(!(a.is_zero() && b.is_zero()));
        let f = OneForm::xy(a.scale(&s), b).unwrap();
        let again = OneForm::from_parsed(
            &birfol_core::expr::parse_form(&f.pretty(), Some(("x", "y"))).unwrap(),
        ).unwrap();
        prop_assert!(again.proportional_to(&f), "{}", f.pretty());
    }
}
