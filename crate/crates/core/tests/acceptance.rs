//! Acceptance criteria 1–12, exact arithmetic throughout. Prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::RngExt;
use proptest::test_runner::{RngAlgorithm, TestRng};

use birfol_core::algebra::{eigen2, matrix_order, BiPoly, IntMatrix2, MatrixOrder, QuadNumber, SquareMatrix};
use birfol_core::blowup::{
    flip, monomial_substitution, riccati_local_model, seidenberg_reduce, BaseAtlas, CsCheck, FlipSide, SurfaceModel,
};
use birfol_core::dynamics::{
    bir_group_classify, class_action, degree_sequence, growth_class, invariant_foliations, is_algebraically_stable,
    pullback_action, stabilize_conjugate, BirClassification, GrowthClass, MonomialMap, SearchBounds,
};
use birfol_core::error::Error;
use birfol_core::foliation::{camacho_sad_index, classify_singularity, dulac_invariant, Axis, OneForm, Point};
use birfol_core::liouville::{group_average, pullback, singer_check, RatOneForm};
use birfol_core::torus::{
    classify_quotient, crystallographic_constraint, h11_growth, h11_matrix, LatticeKind, QuotientClassification, TorusAut,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn q(n: i64) -> QuadNumber {
    QuadNumber::from_int(n)
}

fn sqrt2() -> QuadNumber {
    QuadNumber::sqrt_int(2)
}

fn one_plus_sqrt2() -> QuadNumber {
    &q(1) + &sqrt2()
}

fn e<T, E: std::fmt::Debug>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|err| format!("{err:?}"))
}

/// `x dy + λ y dx`.
fn saddle(lambda: &QuadNumber) -> OneForm {
    let a = BiPoly::monomial(lambda.clone(), 0, 1);
    let b = BiPoly::monomial(q(1), 1, 0);
    OneForm::xy(a, b).unwrap()
}

/// `w dz + α z dw`.
fn riccati(alpha: &QuadNumber) -> OneForm {
    let a = BiPoly::monomial(q(1), 0, 1);
    let b = BiPoly::monomial(alpha.clone(), 1, 0);
    OneForm::new(a, b, ("z", "w")).unwrap()
}

fn same_multiset(mut a: Vec<QuadNumber>, mut b: Vec<QuadNumber>) -> bool {
    let key = |x: &QuadNumber| format!("{x:?}");
    a.sort_by_key(key);
    b.sort_by_key(key);
    a == b
}

/// The strict check, falling back to the unrestricted sum when the curve
/// passes through a resonant node. Rational fixtures have one at the far end
/// of the curve (`[1:0:0]` with ratio `1/(1+λ)` on ℙ², `w = ∞` with ratio `α`
/// on ℙ¹×ℙ¹); its index is still a well-defined residue.
fn cs_sum(m: &SurfaceModel, id: &str, label: &str, notes: &mut Vec<String>) -> Result<CsCheck, String> {
    match m.verify_camacho_sad(id) {
        Ok(c) => Ok(c),
        Err(Error::NonReducedOnCurve(at)) => {
            notes.push(format!("{label}: resonant node at {at} on {id}, unrestricted sum"));
            e(m.camacho_sad_sum(id))
        }
        Err(err) => Err(format!("{label}, {id}: {err:?}")),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for lambda in [q(2), sqrt2(), one_plus_sqrt2()] {
        // (a) exceptional divisor of one blowup
        let m = e(SurfaceModel::affine(saddle(&lambda)))?;
        let m = e(m.blow_up(0, &Point::origin()))?;
        let c = e(m.verify_camacho_sad("E1"))?;
        let s = &q(1) + &lambda;
        let oracle = vec![-&(&q(1) / &s), -&(&lambda / &s)];
        let got: Vec<_> = c.contributions.iter().map(|x| x.cs.clone()).collect();
        ensure!(c.ok && c.sum == q(-1) && c.self_intersection == -1, "(a) λ = {lambda}: {c:?}");
        ensure!(same_multiset(got, oracle), "(a) λ = {lambda}: contributions {:?}", c.contributions);

        // (c) strict transform of {y = 0}: the line L_y of ℙ², self-intersection 1 → 0
        let m = e(SurfaceModel::new(BaseAtlas::P2, saddle(&lambda)))?;
        let before = cs_sum(&m, "L_y", &format!("λ = {lambda}"), &mut notes)?;
        ensure!(before.ok && before.self_intersection == 1, "(c) λ = {lambda} before: {before:?}");
        let m = e(m.blow_up(0, &Point::origin()))?;
        let c = cs_sum(&m, "L_y", &format!("λ = {lambda}"), &mut notes)?;
        let got: Vec<_> = c.contributions.iter().map(|x| x.cs.clone()).collect();
        ensure!(c.ok && c.self_intersection == 0 && c.sum.is_zero(), "(c) λ = {lambda}: {c:?}");
        ensure!(same_multiset(got, vec![-&s, s.clone()]), "(c) λ = {lambda}: {:?}", c.contributions);
    }
    // (b) Riccati fibre {z = 0}: indices −α and +α
    for alpha in [q(3), sqrt2()] {
        let m = e(SurfaceModel::new(BaseAtlas::P1xP1, riccati(&alpha)))?;
        let c = cs_sum(&m, "z=0", &format!("α = {alpha}"), &mut notes)?;
        let got: Vec<_> = c.contributions.iter().map(|x| x.cs.clone()).collect();
        ensure!(c.ok && c.self_intersection == 0, "(b) α = {alpha}: {c:?}");
        ensure!(same_multiset(got, vec![-&alpha, alpha.clone()]), "(b) α = {alpha}: {:?}", c.contributions);
    }
    notes.dedup();
    let dt = start.elapsed();
    ensure!(dt.as_secs_f64() < 1.0, "runtime {dt:?} ≥ 1 s");
    Ok(format!("fixtures 8/8 in {dt:.0?}; {}", notes.join("; ")))
}

/// Follows the separatrix along `axis` through `depth` blowups at the origin
/// and returns its index after each one.
fn follow_separatrix(f: &OneForm, axis: Axis, depth: usize) -> Result<Vec<QuadNumber>, String> {
    let mut m = e(SurfaceModel::affine(f.clone()))?;
    let mut k = 0;
    let mut out = vec![e(camacho_sad_index(f, axis, &Point::origin()))?];
    for _ in 0..depth {
        m = e(m.blow_up(k, &Point::origin()))?;
        let (c1, c2) = m.log.last().unwrap().new_charts;
        // {y = 0} lifts to {t = 0} in chart 1, {x = 0} to {s = 0} in chart 2
        k = if axis == Axis::Y0 { c1 } else { c2 };
        out.push(e(camacho_sad_index(&m.charts[k].form, axis, &Point::origin()))?);
    }
    Ok(out)
}

fn criterion_2() -> Outcome {
    let dulac = |nu: i64| {
        let a = BiPoly::monomial(q(-1), 0, 2);
        let b = BiPoly::from_int_terms(&[(1, 1, 0), (nu, 1, 1)]);
        OneForm::xy(a, b).unwrap()
    };
    // (form, closed-form index along {y=0}, along {x=0})
    let fixtures = [
        (saddle(&sqrt2()), -sqrt2(), -&sqrt2().inv().unwrap()),
        (saddle(&one_plus_sqrt2()), -one_plus_sqrt2(), -&one_plus_sqrt2().inv().unwrap()),
        (saddle(&q(-3)), q(3), QuadNumber::from_ratio(1, 3)),
        (dulac(3), q(0), q(3)),
    ];
    let depth = 3;
    for (f, cs_y, cs_x) in &fixtures {
        for (axis, c0) in [(Axis::Y0, cs_y), (Axis::X0, cs_x)] {
            let seq = follow_separatrix(f, axis, depth)?;
            let oracle: Vec<_> = (0..=depth as i64).map(|k| c0 - &q(k)).collect();
            ensure!(seq == oracle, "{f} along {axis:?}: {seq:?} vs {oracle:?}");
        }
    }
    // β·x dy + y dx, with β attached to the separatrix C = {x = 0}
    for beta in [q(2), sqrt2(), QuadNumber::from_ratio(-1, 2)] {
        let f = OneForm::xy(BiPoly::monomial(q(1), 0, 1), BiPoly::monomial(beta.clone(), 1, 0)).unwrap();
        let cs_c = e(camacho_sad_index(&f, Axis::X0, &Point::origin()))?;
        for n in 1..=3 {
            let g = e(monomial_substitution(&f, n))?;
            let shifted = &beta + &q(n);
            let oracle = OneForm::new(
                BiPoly::monomial(q(1), 0, 1),
                BiPoly::monomial(shifted.clone(), 1, 0),
                ("u", "v"),
            )
            .unwrap();
            ensure!(g.proportional_to(&oracle), "β = {beta}, n = {n}: {g}");
            let cs = e(camacho_sad_index(&g, Axis::X0, &Point::origin()))?;
            ensure!(cs == &cs_c - &q(n), "β = {beta}, n = {n}: CS of C {cs} vs {cs_c} − n");
        }
    }
    Ok(format!("{} fixtures × 2 separatrices × {depth} blowups; substitution n = 1, 2, 3", fixtures.len()))
}

fn criterion_3() -> Outcome {
    for (lambda, p) in [(3i64, 1u32), (5, 2)] {
        // x(1 + λy^p) dy − y^{p+1} dx
        let a = BiPoly::monomial(q(-1), 0, p + 1);
        let b = BiPoly::from_int_terms(&[(1, 1, 0), (lambda, 1, p)]);
        let f = e(OneForm::xy(a, b))?;
        ensure!(e(dulac_invariant(&f, &Point::origin()))? == q(lambda), "ν before blowup");
        let m = e(e(SurfaceModel::affine(f))?.blow_up(0, &Point::origin()))?;
        // the weak separatrix {x = 0} meets E at the origin of chart 2, coordinates (s, y)
        let (_, c2) = m.log[0].new_charts;
        let g = &m.charts[c2].form;
        let oracle = OneForm::xy(
            BiPoly::monomial(q(-1), 0, p + 1),
            BiPoly::from_int_terms(&[(1, 1, 0), (lambda - 1, 1, p)]),
        )
        .unwrap();
        ensure!(g.with_vars(("x", "y")).proportional_to(&oracle), "(λ, p) = ({lambda}, {p}): {g}");
        let r = e(classify_singularity(g, &Point::origin()))?;
        let nu = match &r.kind {
            birfol_core::foliation::SingularityKind::SaddleNode { milnor_order, dulac, .. } => {
                ensure!(*milnor_order == p, "milnor order {milnor_order}");
                dulac.clone()
            }
            k => return Err(format!("not a saddle-node: {k:?}")),
        };
        ensure!(nu == Some(q(lambda - 1)), "(λ, p) = ({lambda}, {p}): ν = {nu:?}");
        ensure!(e(dulac_invariant(g, &Point::origin()))? == q(lambda - 1), "dulac_invariant");
    }
    Ok("ν drops by 1 for (3,1) and (5,2)".into())
}

/// Sum of the partial quotients of `p/q` by Euclid.
fn cf_sum(mut p: i64, mut q: i64) -> i64 {
    let mut s = 0;
    while q != 0 {
        s += p / q;
        (p, q) = (q, p % q);
    }
    s
}

fn criterion_4() -> Outcome {
    let budget = 64;
    let mut counts = Vec::new();
    for (p, qq) in [(2, 1), (3, 2), (5, 3)] {
        // q·x dy − p·y dx
        let f = e(OneForm::xy(BiPoly::monomial(q(-p), 0, 1), BiPoly::monomial(q(qq), 1, 0)))?;
        let t = e(seidenberg_reduce(&f, BaseAtlas::Affine, budget))?;
        ensure!(t.blowup_count as i64 == cf_sum(p, qq), "({p},{qq}): {} blowups, oracle {}", t.blowup_count, cf_sum(p, qq));
        ensure!(t.final_reports.iter().all(|r| r.report.is_reduced()), "({p},{qq}) not all reduced");
        counts.push(t.blowup_count);
    }
    let radial = e(OneForm::xy(BiPoly::monomial(q(-1), 0, 1), BiPoly::monomial(q(1), 1, 0)))?;
    let t = e(seidenberg_reduce(&radial, BaseAtlas::Affine, budget))?;
    ensure!(t.blowups.first().is_some_and(|b| b.dicritical), "radial form not dicritical at blowup 1");
    ensure!(t.final_reports.iter().all(|r| r.report.is_reduced()), "radial not reduced");
    // further fixtures: a cusp-like form and a saddle-node
    for text in ["2*x*dy - 3*y*dx + y^2*dy", "x^2*dy - y*dx", "y*dy + x^2*dx"] {
        let f = e(birfol_core::foliation::parse_one_form(text))?;
        let t = e(seidenberg_reduce(&f, BaseAtlas::Affine, budget))?;
        ensure!(t.final_reports.iter().all(|r| r.report.is_reduced()), "{text} not reduced");
    }
    Ok(format!("blowup counts {counts:?} match partial-quotient sums; budget {budget} never hit"))
}

fn criterion_5() -> Outcome {
    let mono = |rows| growth_class(&MonomialMap::from_rows(rows).unwrap()).unwrap();
    let torus = |rows: &[&[i64]]| h11_growth(&TorusAut::from_ints(LatticeKind::ESquare, rows).unwrap()).unwrap();
    ensure!(mono([[1, 0], [1, 1]]) == GrowthClass::Linear, "monomial unipotent");
    ensure!(torus(&[&[1, 0], &[1, 1]]) == GrowthClass::Quadratic, "torus unipotent");
    let rho = one_plus_sqrt2();
    ensure!(mono([[1, 2], [1, 1]]) == GrowthClass::Exponential(rho.clone()), "monomial rate");
    ensure!(torus(&[&[1, 2], &[1, 1]]) == GrowthClass::Exponential(&rho * &rho), "torus rate");
    ensure!(mono([[0, -1], [1, 0]]) == GrowthClass::Bounded, "monomial rotation");
    ensure!(torus(&[&[0, -1], &[1, 0]]) == GrowthClass::Bounded, "torus rotation");
    // n² law: the H¹¹ action of [[1,0],[n,1]] has largest entry exactly n²
    let h = e(h11_matrix(&e(TorusAut::from_ints(LatticeKind::ESquare, &[&[1, 0], &[1, 1]]))?))?;
    let mut acc = h.clone();
    for n in 1..=100i64 {
        let direct = e(h11_matrix(&e(TorusAut::from_ints(LatticeKind::ESquare, &[&[1, 0], &[n, 1]]))?))?;
        ensure!(acc == direct, "H¹¹ not multiplicative at n = {n}");
        let max = acc.rows().into_iter().flatten().map(|x| x.as_integer().unwrap().abs()).max().unwrap();
        ensure!(max == BigInt::from(n * n), "n = {n}: max entry {max}");
        acc = acc.mul(&h);
    }
    Ok("Linear/Quadratic/Exponential(1+√2, 3+2√2)/Bounded; n² law for n ≤ 100".into())
}

const HYPERBOLIC: [[[i64; 2]; 2]; 7] = [
    [[2, 1], [1, 1]],
    [[1, 2], [1, 1]],
    [[1, 1], [1, 0]],
    [[3, 1], [-1, 0]],
    [[2, -1], [-1, 1]],
    [[0, 1], [-1, 3]],
    [[-3, 1], [-1, 0]],
];

fn big(m: &IntMatrix2) -> [[BigInt; 2]; 2] {
    let r = m.rows();
    r.map(|row| row.map(BigInt::from))
}

/// `(φⁿ)*` from the n-fold composite and `(φ*)ⁿ`, for `n = 1..=8`.
fn stability_defect(f: &MonomialMap) -> Option<u32> {
    let star = pullback_action(f);
    let seq = degree_sequence(f, 8);
    let mut iter = *f;
    for n in 1..=8u32 {
        let composite = big(&class_action(iter.matrix()));
        assert_eq!(seq[n as usize - 1], composite, "degree_sequence disagrees with composition");
        if composite != star.pow_big(n) {
            return Some(n);
        }
        iter = iter.compose(f);
    }
    None
}

fn is_hyperbolic(m: &IntMatrix2) -> bool {
    eigen2(m).is_ok_and(|e| e.is_real() && e.expanding())
}

fn criterion_6() -> Outcome {
    let mut pool = Vec::new();
    for a in 0..=6 {
        for b in 0..=6 {
            for c in 0..=6 {
                for d in 0..=6 {
                    let m = IntMatrix2::new(a, b, c, d);
                    if m.det().abs() == 1 && is_hyperbolic(&m) {
                        pool.push(m);
                    }
                }
            }
        }
    }
    let mut rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut sample = Vec::new();
    while sample.len() < 25 {
        let m = pool[rng.random_range(0..pool.len())];
        if !sample.contains(&m) {
            sample.push(m);
        }
    }
    for m in &sample {
        let f = e(MonomialMap::new(*m))?;
        ensure!(stability_defect(&f).is_none(), "{m} fails (φⁿ)* = (φ*)ⁿ");
        ensure!(is_algebraically_stable(&f), "{m} not flagged stable");
    }
    let mixed = e(MonomialMap::from_rows([[3, 1], [-1, 0]]))?;
    let n = stability_defect(&mixed).ok_or("mixed-sign fixture satisfies the identity")?;
    ensure!(!is_algebraically_stable(&mixed), "mixed-sign fixture flagged stable");
    for rows in HYPERBOLIC {
        let f = e(MonomialMap::from_rows(rows))?;
        let (p, g) = e(stabilize_conjugate(&f, 20))?;
        let pinv = p.inverse().ok_or("conjugator not invertible")?;
        ensure!(p.mul(f.matrix()).mul(&pinv) == *g.matrix(), "{:?}: P·M·P⁻¹ mismatch", rows);
        let coherent = if f.matrix().trace() >= 0 { g.matrix().is_nonnegative() } else { g.matrix().is_nonpositive() };
        ensure!(coherent, "{:?}: conjugate {} not sign-coherent", rows, g.matrix());
        ensure!(stability_defect(&g).is_none(), "{:?}: conjugate not stable", rows);
    }
    Ok(format!(
        "25/{} sampled maps stable to n = 8; [[3,1],[-1,0]] breaks at n = {n}; {} fixtures stabilized",
        pool.len(),
        HYPERBOLIC.len()
    ))
}

fn criterion_7() -> Outcome {
    let mut count = 0;
    for rows in HYPERBOLIC {
        let f = e(MonomialMap::from_rows(rows))?;
        for fol in e(invariant_foliations(&f))? {
            let [al, be] = &fol.coeffs;
            // α dz/z + β dw/w, pulled back symbolically
            let form = e(RatOneForm::parse(&format!("({al})/z*dz + ({be})/w*dw")))?;
            let pulled = e(pullback(&form, &f))?;
            let scaled = form.scale(&birfol_core::algebra::BiRat::constant(fol.eigenvalue.clone()));
            ensure!(pulled == scaled, "{:?}: f*ω ≠ {}·ω", rows, fol.eigenvalue);
            count += 1;
        }
    }
    Ok(format!("{count} eigen-forms pull back to eigenvalue multiples"))
}

fn criterion_8() -> Outcome {
    let b = SearchBounds::default();
    ensure!(e(bir_group_classify(&QuadNumber::from_ratio(2, 3), b))? == BirClassification::Fibration, "2/3");
    let alpha = one_plus_sqrt2();
    let BirClassification::InfiniteMonomial { witness, eigenvalue, .. } = e(bir_group_classify(&alpha, b))? else {
        return Err("1+√2 not InfiniteMonomial".into());
    };
    ensure!(witness.det().abs() == 1, "witness det {}", witness.det());
    let ev = e(eigen2(&witness))?;
    ensure!(ev.is_real() && ev.spectral_radius.modulus_cmp_one().is_gt(), "ρ = {}", ev.spectral_radius);
    // ᵗM·(1, α) = λ·(1, α): the form w dz + α z dw is an eigen-form
    let [m0, m1] = birfol_core::dynamics::pullback_log_form(&MonomialMap::new(witness).unwrap(), &[q(1), alpha.clone()]);
    let t = witness.transpose();
    let direct = [&q(t.a) + &(&q(t.b) * &alpha), &q(t.c) + &(&q(t.d) * &alpha)];
    ensure!([m0.clone(), m1.clone()] == direct, "pullback_log_form vs ᵗM");
    ensure!(m0 == eigenvalue && m1 == &eigenvalue * &alpha, "(1, α) not an eigenvector for {eigenvalue}");
    let BirClassification::Finite { certified, .. } = e(bir_group_classify(&QuadNumber::i(), b))? else {
        return Err("i not Finite".into());
    };
    ensure!(certified, "i: finiteness not certified");
    Ok(format!("witness {witness}, eigenvalue {eigenvalue}"))
}

fn criterion_9() -> Outcome {
    for lambda in [q(-2), QuadNumber::from_ratio(-7, 2), sqrt2(), &q(-1) - &sqrt2()] {
        let up = e(flip(&lambda, FlipSide::P))?;
        let down = e(flip(&lambda, FlipSide::Q))?;
        ensure!(up == &lambda + &q(1) && down == &lambda - &q(1), "λ = {lambda}: {up}, {down}");
        ensure!(e(flip(&up, FlipSide::Q))? == lambda, "λ = {lambda}: P then Q");
        // blowing up the origin of λw dz − z dw: w = z·t gives (λ−1)t dz − z dt
        let m = e(e(SurfaceModel::affine(e(riccati_local_model(&lambda))?))?.blow_up(0, &Point::origin()))?;
        let c1 = &m.charts[m.log[0].new_charts.0].form;
        let oracle = OneForm::new(
            BiPoly::monomial(&lambda - &q(1), 0, 1),
            BiPoly::monomial(q(-1), 1, 0),
            ("z", "w"),
        )
        .unwrap();
        ensure!(c1.with_vars(("z", "w")).proportional_to(&oracle), "λ = {lambda}: chart {c1}");
    }
    ensure!(
        matches!(flip(&q(-1), FlipSide::P), Err(Error::WouldCreateNonReduced(_))),
        "flip to λ = 0 accepted"
    );
    Ok("±1 shifts, engine round-trip and P∘Q = id on 4 values".into())
}

fn criterion_10() -> Outcome {
    let mut finite = 0;
    for a in -3..=3i64 {
        for b in -3..=3 {
            for c in -3..=3 {
                for d in -3..=3 {
                    let m = IntMatrix2::new(a, b, c, d);
                    if m.det().abs() != 1 {
                        continue;
                    }
                    let (det, tr) = (m.det(), m.trace());
                    // finite order ⟺ ±Id, or elliptic (det 1, |tr| ≤ 1), or a reflection (det −1, tr 0)
                    let scalar = b == 0 && c == 0 && a == d;
                    let oracle = scalar || (det == 1 && tr.abs() <= 1) || (det == -1 && tr == 0);
                    match matrix_order(&m.to_square().map(|&x| BigInt::from(x)), 60) {
                        MatrixOrder::Finite { order, .. } => {
                            ensure!(oracle, "{m}: order {order} but oracle says infinite");
                            ensure!([1, 2, 3, 4, 6].contains(&order), "{m}: order {order}");
                            finite += 1;
                        }
                        MatrixOrder::Infinite => ensure!(!oracle, "{m}: oracle says finite"),
                    }
                }
            }
        }
    }
    // companion matrix of 1 + x + x² + x³ + x⁴
    let rows = [[0, 0, 0, -1], [1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1]];
    let c5 = SquareMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect());
    let r = e(crystallographic_constraint(&c5))?;
    ensure!(!r.pass && r.order == 5 && r.phi == 4 && r.diagnostic.is_some(), "order-5 report {r:?}");
    use QuotientClassification::*;
    for (lattice, xi, label) in [
        (LatticeKind::ZiSquare, QuadNumber::i(), RationalZi4),
        (LatticeKind::ZjSquare, QuadNumber::j(), RationalZj3),
        (LatticeKind::ZjSquare, -QuadNumber::j(), RationalZj6),
        (LatticeKind::ESquare, q(-1), Kummer),
        (LatticeKind::ESquare, q(1), Torus),
    ] {
        ensure!(e(classify_quotient(lattice, &xi))? == label, "{lattice:?}, {xi}");
    }
    Ok(format!("{finite} finite-order elements, all orders in {{1,2,3,4,6}}; order 5 rejected; 5 labels"))
}

fn random_poly(rng: &mut TestRng) -> String {
    let mut terms = vec![format!("{}", rng.random_range(1..=4))];
    for mono in ["z", "w", "z*w", "z^2", "w^2"] {
        let c: i64 = rng.random_range(-3..=3);
        if c != 0 {
            terms.push(format!("({c})*{mono}"));
        }
    }
    terms.join(" + ")
}

fn criterion_11() -> Outcome {
    for alpha in [q(2), one_plus_sqrt2()] {
        let omega = e(RatOneForm::parse(&format!("w*dz + ({alpha})*z*dw")))?;
        let eta = e(RatOneForm::parse("1/z*dz + 1/w*dw"))?;
        ensure!(singer_check(&omega, &eta), "α = {alpha}");
        ensure!(!singer_check(&omega, &RatOneForm::zero()), "α = {alpha}: η = 0 accepted");
    }
    let group = [MonomialMap::from_rows([[1, 0], [0, 1]]).unwrap(), MonomialMap::kummer_involution()];
    let dz_z = e(RatOneForm::parse("1/z*dz"))?;
    ensure!(e(group_average(&dz_z, &group))?.is_zero(), "dz/z not annihilated");
    let mut rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    for _ in 0..5 {
        let text = format!(
            "({})/({})*dz + ({})/({})*dw",
            random_poly(&mut rng),
            random_poly(&mut rng),
            random_poly(&mut rng),
            random_poly(&mut rng)
        );
        let f = e(RatOneForm::parse_in(&text, ("z", "w")))?;
        let once = e(group_average(&f, &group))?;
        let twice = e(group_average(&once, &group))?;
        ensure!(once == twice, "not idempotent on {text}");
    }
    Ok("Singer identity for α = 2, 1+√2; averaging kills dz/z and is idempotent on 5 forms".into())
}

fn criterion_12() -> Outcome {
    let mut m = e(SurfaceModel::new(BaseAtlas::P1xP1, riccati(&sqrt2())))?;
    e(m.track_line("z=1", Axis::X0, q(1)))?;
    let inv = e(m.tf_dot_curve("z=0"))?;
    ensure!(inv.invariant && inv.chi == 2 && inv.index_sum == 2, "invariant fibre {inv:?}");
    ensure!(inv.value == 0 && (0..=2).contains(&inv.value), "invariant fibre value {}", inv.value);
    let other = e(m.tf_dot_curve("z=1"))?;
    ensure!(!other.invariant && other.index_sum == 0, "non-invariant fibre {other:?}");
    ensure!(other.value == other.self_intersection, "Tang ≠ 0: {other:?}");
    Ok(format!("[T]·[V] = 2 − (1+1) = {}; Tang on z = 1 is {}", inv.value, other.index_sum))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Camacho–Sad sums", criterion_1),
        ("index drop", criterion_2),
        ("Dulac invariant drop", criterion_3),
        ("Seidenberg reduction", criterion_4),
        ("growth classes", criterion_5),
        ("algebraic stability", criterion_6),
        ("invariant foliations", criterion_7),
        ("Bir trichotomy", criterion_8),
        ("flips", criterion_9),
        ("finite symmetries and quotients", criterion_10),
        ("Singer criterion", criterion_11),
        ("Riccati intersection bookkeeping", criterion_12),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS – {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL – {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/12 passed in {:.2?}", 12 - failed, total.elapsed());
    if failed > 0 {
        std::process::exit(1);
    }
}
