//! Surfaces as explicit chart forests: a base atlas with monomial
//! transitions, plus two charts per blowup.
//!
//! Every surface point is *owned* by exactly one chart, so singular points
//! are enumerated once: a base chart owns the points no earlier base chart
//! sees, the first blowup chart owns its exceptional line `{x = 0}` except
//! the one point only the second chart sees, and that chart owns just its
//! origin. Blown-up centres are excluded from their chart.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::monomial::{monomial_pullback, Monomial, BLOWUP_CHART_1, BLOWUP_CHART_2};
use crate::algebra::{roots_in_tower, BiPoly, IntMatrix2, QuadNumber, UniPoly};
use crate::error::{Error, Result};
use crate::foliation::{
    camacho_sad_index, classify_singularity, is_axis_invariant, tangency_order, z_index, Axis, OneForm, Point,
    SingularityReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseAtlas {
    Affine,
    P2,
    P1xP1,
}

impl BaseAtlas {
    /// Coordinate maps from each base chart into chart 0.
    pub fn transitions(self) -> Vec<Monomial> {
        match self {
            BaseAtlas::Affine => vec![[[1, 0], [0, 1]]],
            BaseAtlas::P2 => vec![[[1, 0], [0, 1]], [[-1, 0], [-1, 1]], [[1, -1], [0, -1]]],
            BaseAtlas::P1xP1 => vec![
                [[1, 0], [0, 1]],
                [[-1, 0], [0, 1]],
                [[1, 0], [0, -1]],
                [[-1, 0], [0, -1]],
            ],
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "affine" | "a2" => Ok(BaseAtlas::Affine),
            "p2" => Ok(BaseAtlas::P2),
            "p1xp1" | "p1p1" => Ok(BaseAtlas::P1xP1),
            _ => Err(Error::InvalidInput(format!("unknown atlas '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    One,
    Two,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ChartOrigin {
    Base { index: usize, to_chart0: Monomial },
    Blowup { parent: usize, center: Point, side: Side },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub id: usize,
    pub origin: ChartOrigin,
    #[serde(serialize_with = "ser_form")]
    pub form: OneForm,
    pub excluded: Vec<Point>,
}

fn ser_form<S: serde::Serializer>(f: &OneForm, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.pretty())
}

/// A coordinate line `{axis-coordinate = value}` of a chart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Occurrence {
    pub chart: usize,
    pub axis: Axis,
    pub value: QuadNumber,
}

impl Occurrence {
    fn contains(&self, p: &Point) -> bool {
        match self.axis {
            Axis::X0 => p.0 == self.value,
            Axis::Y0 => p.1 == self.value,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Curve {
    pub id: String,
    /// `None` for non-compact curves.
    pub self_intersection: Option<i64>,
    pub invariant: bool,
    pub exceptional: bool,
    pub occurrences: Vec<Occurrence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupRecord {
    pub chart: usize,
    pub center: Point,
    pub multiplicity: i64,
    pub curve: String,
    pub dicritical: bool,
    pub new_charts: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceModel {
    pub atlas: BaseAtlas,
    pub charts: Vec<Chart>,
    pub curves: Vec<Curve>,
    /// Intersection counts between distinct curves (by index, `i < j`).
    pub edges: BTreeMap<(usize, usize), i64>,
    pub log: Vec<BlowupRecord>,
}

/// A singular point together with the chart that owns it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocatedReport {
    pub chart: usize,
    pub report: SingularityReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CsContribution {
    pub chart: usize,
    pub point: Point,
    pub cs: QuadNumber,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CsCheck {
    pub curve: String,
    pub sum: QuadNumber,
    pub self_intersection: i64,
    pub ok: bool,
    pub contributions: Vec<CsContribution>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TfDot {
    pub curve: String,
    pub invariant: bool,
    /// `χ − ΣZ` for invariant curves, `V² − ΣTang` otherwise.
    pub value: i64,
    pub chi: i64,
    pub index_sum: i64,
    pub self_intersection: i64,
}

fn zero_point_on(axis: Axis, v: &QuadNumber, other: QuadNumber) -> Point {
    match axis {
        Axis::X0 => Point(v.clone(), other),
        Axis::Y0 => Point(other, v.clone()),
    }
}

/// Base-chart variable names: chart 0 keeps the form's own names.
fn base_vars(f: &OneForm, k: usize) -> (String, String) {
    if k == 0 {
        let v = f.vars();
        (v.0.to_string(), v.1.to_string())
    } else {
        (format!("u{k}"), format!("v{k}"))
    }
}

impl SurfaceModel {
    /// Builds the base atlas with the form given in chart 0 and the
    /// default tracked curves (lines of ℙ², the four boundary fibres of ℙ¹×ℙ¹).
    pub fn new(atlas: BaseAtlas, form: OneForm) -> Result<Self> {
        let mut charts = Vec::new();
        for (k, m) in atlas.transitions().into_iter().enumerate() {
            let vars = base_vars(&form, k);
            let f = if k == 0 {
                form.clone()
            } else {
                monomial_pullback(&form, m, (&vars.0, &vars.1))?.0
            };
            charts.push(Chart {
                id: k,
                origin: ChartOrigin::Base {
                    index: k,
                    to_chart0: m,
                },
                form: f,
                excluded: vec![],
            });
        }
        let mut model = SurfaceModel {
            atlas,
            charts,
            curves: vec![],
            edges: BTreeMap::new(),
            log: vec![],
        };
        let z = QuadNumber::zero;
        let occ = |chart, axis| Occurrence {
            chart,
            axis,
            value: z(),
        };
        match atlas {
            BaseAtlas::Affine => {}
            BaseAtlas::P2 => {
                model.add_curve("L_x", Some(1), vec![occ(0, Axis::X0), occ(2, Axis::X0)]);
                model.add_curve("L_y", Some(1), vec![occ(0, Axis::Y0), occ(1, Axis::Y0)]);
                model.add_curve("L_inf", Some(1), vec![occ(1, Axis::X0), occ(2, Axis::Y0)]);
                model.set_edge(0, 1, 1);
                model.set_edge(0, 2, 1);
                model.set_edge(1, 2, 1);
            }
            BaseAtlas::P1xP1 => {
                let (a, b) = (form.vars().0.to_string(), form.vars().1.to_string());
                model.add_curve(&format!("{a}=0"), Some(0), vec![occ(0, Axis::X0), occ(2, Axis::X0)]);
                model.add_curve(&format!("{a}=inf"), Some(0), vec![occ(1, Axis::X0), occ(3, Axis::X0)]);
                model.add_curve(&format!("{b}=0"), Some(0), vec![occ(0, Axis::Y0), occ(1, Axis::Y0)]);
                model.add_curve(&format!("{b}=inf"), Some(0), vec![occ(2, Axis::Y0), occ(3, Axis::Y0)]);
                for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
                    model.set_edge(i, j, 1);
                }
            }
        }
        Ok(model)
    }

    pub fn affine(form: OneForm) -> Result<Self> {
        Self::new(BaseAtlas::Affine, form)
    }

    fn add_curve(&mut self, id: &str, self_int: Option<i64>, occurrences: Vec<Occurrence>) -> usize {
        let invariant = occurrences
            .first()
            .map(|o| self.occurrence_invariant(o))
            .unwrap_or(false);
        self.curves.push(Curve {
            id: id.to_string(),
            self_intersection: self_int,
            invariant,
            exceptional: false,
            occurrences,
        });
        self.curves.len() - 1
    }

    fn occurrence_invariant(&self, o: &Occurrence) -> bool {
        let f = &self.charts[o.chart].form;
        let p = zero_point_on(o.axis, &o.value, QuadNumber::zero());
        is_axis_invariant(f, o.axis, &p)
    }

    fn set_edge(&mut self, i: usize, j: usize, n: i64) {
        let key = (i.min(j), i.max(j));
        if n == 0 {
            self.edges.remove(&key);
        } else {
            self.edges.insert(key, n);
        }
    }

    fn edge(&self, i: usize, j: usize) -> i64 {
        self.edges.get(&(i.min(j), i.max(j))).copied().unwrap_or(0)
    }

    /// Tracks the line `{x = c}` (axis `X0`) or `{y = c}` (axis `Y0`) of
    /// chart 0. On ℙ¹×ℙ¹ the line is a compact fibre and is followed
    /// through every base chart; elsewhere it is recorded as non-compact.
    pub fn track_line(&mut self, id: &str, axis: Axis, c: QuadNumber) -> Result<usize> {
        let mut occs = vec![Occurrence {
            chart: 0,
            axis,
            value: c.clone(),
        }];
        let compact = self.atlas == BaseAtlas::P1xP1;
        if compact {
            let inv = (!c.is_zero()).then(|| c.inv()).transpose()?;
            // the coordinate along `axis` is inverted in charts 1/3 (X0) or 2/3 (Y0)
            let (same, flipped) = match axis {
                Axis::X0 => ([0usize, 2], [1usize, 3]),
                Axis::Y0 => ([0, 1], [2, 3]),
            };
            occs.push(Occurrence {
                chart: same[1],
                axis,
                value: c.clone(),
            });
            if let Some(inv) = inv {
                for k in flipped {
                    occs.push(Occurrence {
                        chart: k,
                        axis,
                        value: inv.clone(),
                    });
                }
            }
        }
        let idx = self.add_curve(id, compact.then_some(0), occs);
        if compact && !c.is_zero() {
            // a fibre of one ruling meets both boundary fibres of the other
            let (lo, hi) = match axis {
                Axis::X0 => (2, 3),
                Axis::Y0 => (0, 1),
            };
            self.set_edge(idx, lo, 1);
            self.set_edge(idx, hi, 1);
        }
        Ok(idx)
    }

    pub fn curve_index(&self, id: &str) -> Result<usize> {
        self.curves
            .iter()
            .position(|c| c.id == id)
            .ok_or_else(|| Error::InvalidInput(format!("unknown curve '{id}'")))
    }

    pub fn curve(&self, id: &str) -> Result<&Curve> {
        Ok(&self.curves[self.curve_index(id)?])
    }

    /// Whether chart `k` owns point `p`.
    pub fn owns(&self, k: usize, p: &Point) -> bool {
        let chart = &self.charts[k];
        if chart.excluded.contains(p) {
            return false;
        }
        match &chart.origin {
            ChartOrigin::Base { index, to_chart0 } => (0..*index).all(|j| {
                let ChartOrigin::Base { to_chart0: mj, .. } = &self.charts[j].origin else {
                    unreachable!("base charts come first")
                };
                !transition_defined(*mj, *to_chart0, p)
            }),
            ChartOrigin::Blowup { side: Side::One, .. } => p.0.is_zero(),
            ChartOrigin::Blowup { side: Side::Two, .. } => p.is_origin(),
        }
    }

    /// Singular points owned by chart `k`, in deterministic order.
    pub fn singular_points(&self, k: usize) -> Result<Vec<Point>> {
        let chart = &self.charts[k];
        let f = &chart.form;
        let mut pts = match chart.origin {
            ChartOrigin::Blowup { side: Side::One, .. } => {
                let g = f.a().restrict_x_zero().gcd(&f.b().restrict_x_zero());
                line_roots(&g)?
                    .into_iter()
                    .map(|t| Point(QuadNumber::zero(), t))
                    .collect()
            }
            ChartOrigin::Blowup { side: Side::Two, .. } => {
                let o = Point::origin();
                if f.is_singular_at(&o) {
                    vec![o]
                } else {
                    vec![]
                }
            }
            ChartOrigin::Base { .. } => solve_singular(f)?,
        };
        pts.retain(|p| self.owns(k, p));
        pts.sort_by(|a, b| a.cmp_lex(b));
        pts.dedup();
        Ok(pts)
    }

    /// Reports for every singular point of the surface, charts in order.
    pub fn singular_reports(&self) -> Result<Vec<LocatedReport>> {
        let mut out = Vec::new();
        for k in 0..self.charts.len() {
            for p in self.singular_points(k)? {
                out.push(LocatedReport {
                    chart: k,
                    report: classify_singularity(&self.charts[k].form, &p)?,
                });
            }
        }
        Ok(out)
    }

    /// Blows up `p` in chart `k`.
    pub fn blow_up(&self, k: usize, p: &Point) -> Result<SurfaceModel> {
        let parent = self
            .charts
            .get(k)
            .ok_or_else(|| Error::InvalidInput(format!("no chart {k}")))?;
        if parent.excluded.contains(p) {
            return Err(Error::InvalidInput(format!("{p} was already blown up in chart {k}")));
        }
        QuadNumber::join_tower(parent.form.tower()?, p.tower()?).map_err(|_| {
            Error::FieldTowerExceeded(format!("centre {p} lies outside the coefficient field"))
        })?;
        let g = parent.form.translate(p);
        let (f1, (m, _)) = monomial_pullback(&g, BLOWUP_CHART_1, ("x", "t"))?;
        let (f2, _) = monomial_pullback(&g, BLOWUP_CHART_2, ("s", "y"))?;
        let invariant = f1.b().restrict_x_zero().is_zero();
        let mut out = self.clone();
        let (c1, c2) = (out.charts.len(), out.charts.len() + 1);
        for (id, side, form) in [(c1, Side::One, f1), (c2, Side::Two, f2)] {
            out.charts.push(Chart {
                id,
                origin: ChartOrigin::Blowup {
                    parent: k,
                    center: p.clone(),
                    side,
                },
                form,
                excluded: vec![],
            });
        }
        out.charts[k].excluded.push(p.clone());
        let through: Vec<(usize, Axis)> = self
            .curves
            .iter()
            .enumerate()
            .flat_map(|(i, c)| {
                c.occurrences
                    .iter()
                    .filter(|o| o.chart == k && o.contains(p))
                    .map(move |o| (i, o.axis))
            })
            .collect();
        let eid = format!("E{}", self.log.len() + 1);
        out.curves.push(Curve {
            id: eid.clone(),
            self_intersection: Some(-1),
            invariant,
            exceptional: true,
            occurrences: vec![
                Occurrence {
                    chart: c1,
                    axis: Axis::X0,
                    value: QuadNumber::zero(),
                },
                Occurrence {
                    chart: c2,
                    axis: Axis::Y0,
                    value: QuadNumber::zero(),
                },
            ],
        });
        let e = out.curves.len() - 1;
        for &(i, axis) in &through {
            let curve = &mut out.curves[i];
            if let Some(s) = curve.self_intersection.as_mut() {
                *s -= 1;
            }
            let (chart, ax) = match axis {
                Axis::X0 => (c2, Axis::X0),
                Axis::Y0 => (c1, Axis::Y0),
            };
            curve.occurrences.push(Occurrence {
                chart,
                axis: ax,
                value: QuadNumber::zero(),
            });
            out.set_edge(i, e, 1);
        }
        let ids: BTreeSet<usize> = through.iter().map(|&(i, _)| i).collect();
        let ids: Vec<usize> = ids.into_iter().collect();
        for (n, &i) in ids.iter().enumerate() {
            for &j in &ids[n + 1..] {
                let w = out.edge(i, j);
                out.set_edge(i, j, (w - 1).max(0));
            }
        }
        out.log.push(BlowupRecord {
            chart: k,
            center: p.clone(),
            multiplicity: m,
            curve: eid,
            dicritical: !invariant,
            new_charts: (c1, c2),
        });
        Ok(out)
    }

    /// Whether the exceptional curve of the blowup at `p` fails to be invariant.
    pub fn is_dicritical(&self, k: usize, p: &Point) -> Result<bool> {
        Ok(self.blow_up(k, p)?.log.last().expect("just blown up").dicritical)
    }

    /// Owned points of a curve that are singular for the foliation.
    fn singular_points_on(&self, c: &Curve) -> Result<Vec<(usize, Point, Axis)>> {
        let mut out = Vec::new();
        for o in &c.occurrences {
            for p in self.singular_points(o.chart)? {
                if o.contains(&p) {
                    out.push((o.chart, p, o.axis));
                }
            }
        }
        Ok(out)
    }

    /// Camacho–Sad check: sum of indices along a compact invariant curve
    /// against its self-intersection.
    pub fn verify_camacho_sad(&self, id: &str) -> Result<CsCheck> {
        self.camacho_sad(id, true)
    }

    /// Same sum without the reducedness precondition: the index of a smooth
    /// invariant curve through an isolated singularity is a residue, and the
    /// index formula holds for any such curve.
    pub fn camacho_sad_sum(&self, id: &str) -> Result<CsCheck> {
        self.camacho_sad(id, false)
    }

    fn camacho_sad(&self, id: &str, require_reduced: bool) -> Result<CsCheck> {
        let c = self.curve(id)?;
        let self_int = c
            .self_intersection
            .ok_or_else(|| Error::InvalidInput(format!("curve {id} is not compact")))?;
        if !c.invariant {
            return Err(Error::NotInvariant(id.to_string()));
        }
        let mut sum = QuadNumber::zero();
        let mut contributions = Vec::new();
        for (k, p, axis) in self.singular_points_on(c)? {
            let f = &self.charts[k].form;
            if require_reduced && !classify_singularity(f, &p)?.is_reduced() {
                return Err(Error::NonReducedOnCurve(format!("{p} in chart {k}")));
            }
            let cs = camacho_sad_index(f, axis, &p)?;
            sum = sum.try_add(&cs)?;
            contributions.push(CsContribution { chart: k, point: p, cs });
        }
        let ok = sum == QuadNumber::from_int(self_int);
        Ok(CsCheck {
            curve: id.to_string(),
            sum,
            self_intersection: self_int,
            ok,
            contributions,
        })
    }

    /// `[T_F]·[V]`: `χ(V) − ΣZ` if `V` is invariant, `V² − ΣTang` otherwise.
    pub fn tf_dot_curve(&self, id: &str) -> Result<TfDot> {
        let c = self.curve(id)?;
        let self_int = c
            .self_intersection
            .ok_or_else(|| Error::InvalidInput(format!("curve {id} is not compact")))?;
        let chi = 2;
        if c.invariant {
            let mut total = 0i64;
            for (k, p, axis) in self.singular_points_on(c)? {
                let f = &self.charts[k].form;
                if !classify_singularity(f, &p)?.is_reduced() {
                    return Err(Error::NonReducedOnCurve(format!("{p} in chart {k}")));
                }
                total += z_index(f, axis, &p)? as i64;
            }
            return Ok(TfDot {
                curve: id.to_string(),
                invariant: true,
                value: chi - total,
                chi,
                index_sum: total,
                self_intersection: self_int,
            });
        }
        let mut total = 0i64;
        for o in &c.occurrences {
            let f = &self.charts[o.chart].form;
            // tangency points: zeros of the coefficient along the line
            let along = match o.axis {
                Axis::X0 => f.b().translate(&o.value, &QuadNumber::zero()).restrict_x_zero(),
                Axis::Y0 => f.a().translate(&QuadNumber::zero(), &o.value).restrict_y_zero(),
            };
            for t in line_roots(&along)? {
                let p = zero_point_on(o.axis, &o.value, t);
                if self.owns(o.chart, &p) {
                    total += tangency_order(f, o.axis, &p)? as i64;
                }
            }
        }
        Ok(TfDot {
            curve: id.to_string(),
            invariant: false,
            value: self_int - total,
            chi,
            index_sum: total,
            self_intersection: self_int,
        })
    }

    /// Exceptional curves in creation order.
    pub fn exceptional_curves(&self) -> Vec<&Curve> {
        self.curves.iter().filter(|c| c.exceptional).collect()
    }

    /// Intersection matrix of the exceptional curves.
    pub fn exceptional_intersection_matrix(&self) -> Vec<Vec<i64>> {
        let idx: Vec<usize> = (0..self.curves.len()).filter(|&i| self.curves[i].exceptional).collect();
        idx.iter()
            .map(|&i| {
                idx.iter()
                    .map(|&j| {
                        if i == j {
                            self.curves[i].self_intersection.unwrap_or(0)
                        } else {
                            self.edge(i, j)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Deterministic Graphviz rendering of the curve configuration.
    pub fn export_dual_graph(&self) -> String {
        let mut s = String::from("graph dual {\n");
        for (i, c) in self.curves.iter().enumerate() {
            let si = c
                .self_intersection
                .map_or_else(|| "noncompact".to_string(), |v| v.to_string());
            let style = if c.invariant { "solid" } else { "dashed" };
            let inv = if c.invariant { "invariant" } else { "not invariant" };
            let _ = writeln!(
                s,
                "  n{i} [label=\"{} ({si})\\n{inv}\", style={style}];",
                c.id
            );
        }
        for (&(i, j), &w) in &self.edges {
            for _ in 0..w {
                let _ = writeln!(s, "  n{i} -- n{j};");
            }
        }
        s.push_str("}\n");
        s
    }

    /// Checks that two base charts' forms agree up to a unit where the
    /// transition is a monomial isomorphism: pulling chart 0 back must give
    /// the stored chart form.
    pub fn base_forms_consistent(&self) -> Result<bool> {
        let f0 = &self.charts[0].form;
        for c in &self.charts {
            if let ChartOrigin::Base { to_chart0, .. } = c.origin {
                let v = c.form.vars();
                let (g, _) = monomial_pullback(f0, to_chart0, v)?;
                if !g.proportional_to(&c.form) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Whether the chart with map `mk` into chart 0 is expressible at `p` in
/// the chart with map `mj`.
fn transition_defined(mj: Monomial, mk: Monomial, p: &Point) -> bool {
    let j = IntMatrix2::from_rows(mj).inverse().expect("unimodular transition");
    let n = j.mul(&IntMatrix2::from_rows(mk)).rows();
    n.iter().all(|row| (row[0] >= 0 || !p.0.is_zero()) && (row[1] >= 0 || !p.1.is_zero()))
}

/// Roots of a univariate polynomial, or none for the zero polynomial
/// (a line with no isolated solutions is handled by the callers).
fn line_roots(u: &UniPoly) -> Result<Vec<QuadNumber>> {
    if u.is_zero() || u.degree() == Some(0) {
        return Ok(vec![]);
    }
    Ok(roots_in_tower(u)?.into_iter().map(|r| r.value).collect())
}

/// Common zeros of `a` and `b` via the resultant in `y`.
fn solve_singular(f: &OneForm) -> Result<Vec<Point>> {
    let (a, b) = (f.a(), f.b());
    if a.is_zero() || b.is_zero() {
        // saturation leaves a nonzero constant in the other slot
        return Ok(vec![]);
    }
    let r = a.resultant_y(b);
    let xs = if r.is_zero() {
        return Err(Error::InvalidInput("coefficients share a factor".into()));
    } else {
        line_roots(&r)?
    };
    let mut out = Vec::new();
    for x0 in xs {
        let ay = restrict_x(a, &x0);
        let by = restrict_x(b, &x0);
        let g = ay.gcd(&by);
        for y0 in line_roots(&g)? {
            out.push(Point(x0.clone(), y0));
        }
    }
    Ok(out)
}

/// `p(x₀, y)` as a polynomial in `y`.
fn restrict_x(p: &BiPoly, x0: &QuadNumber) -> UniPoly {
    p.translate(x0, &QuadNumber::zero()).restrict_x_zero()
}
