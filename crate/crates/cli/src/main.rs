//! `birfol`: reduction of foliation singularities, Camacho–Sad checks and
//! the dynamics of monomial and toral maps, from the command line.
//!
//! Exit codes: 0 success, 1 input error, 2 blowup budget exhausted,
//! 3 field tower, 4 curve not invariant, 5 non-unimodular matrix,
//! 6 inconsistent lattice.

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use birfol_core::algebra::{eigen2, IntMatrix2, QuadNumber, SquareMatrix};
use birfol_core::blowup::{replay, seidenberg_reduce, BaseAtlas, StoredTrace, SurfaceModel};
use birfol_core::dynamics::{
    bir_group_classify, growth_class, invariant_foliations, is_algebraically_stable, pullback_action,
    stabilize_conjugate, MonomialMap, SearchBounds,
};
use birfol_core::error::Error;
use birfol_core::expr::parse_constant;
use birfol_core::foliation::{parse_one_form, Axis, Point};
use birfol_core::liouville::{construct_eta_linear, exterior_derivative, singer_check, wedge, RatOneForm};
use birfol_core::torus::{
    anosov_check, classify_quotient, crystallographic_constraint, h11_growth, homothety_and_commutation,
    stable_unstable_slopes, LatticeKind, TorusAut,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "birfol", version, about = "Exact computations with holomorphic foliations and birational maps")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Monomial,
    Torus,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Resolve the singularities of a polynomial 1-form by blowups.
    Reduce {
        form: String,
        #[arg(long, default_value = "affine")]
        atlas: String,
        #[arg(long, default_value_t = 64)]
        max_blowups: usize,
        /// Write the reduction trace to this file.
        #[arg(long)]
        trace: Option<String>,
    },
    /// Check the Camacho–Sad formula along a compact invariant curve.
    CsCheck {
        /// The form; omit when replaying a trace.
        form: Option<String>,
        #[arg(long)]
        curve: String,
        #[arg(long, default_value = "affine")]
        atlas: String,
        /// Replay the blowups of a trace written by `reduce`.
        #[arg(long)]
        trace: Option<String>,
        /// Blow up a point `x,y` of chart 0 first (repeatable).
        #[arg(long, allow_hyphen_values = true)]
        blowup: Vec<String>,
        /// Track the chart-0 line `x=c` or `y=c` (repeatable).
        #[arg(long)]
        line: Vec<String>,
    },
    /// Growth, stability and invariant foliations of a 2×2 matrix.
    Classify {
        #[arg(long, value_enum, default_value_t = Mode::Monomial)]
        mode: Mode,
        /// Matrix entries in row order, comma separated; in torus mode also
        /// an inline JSON object or `@FILE` with `{lattice, matrix}`.
        #[arg(allow_hyphen_values = true)]
        matrix: String,
        /// Lattice for torus mode: zi, zj, e or z4 (inferred when omitted).
        #[arg(long)]
        lattice: Option<String>,
    },
    /// Classify the birational symmetries of `w dz + α z dw`.
    BirGroup {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
        /// Witness search bounds `t,a`.
        #[arg(long, default_value = "10,50")]
        bounds: String,
    },
    /// Quotient of a torus by a cyclic group of homotheties.
    TorusClassify {
        #[arg(long)]
        lattice: String,
        #[arg(long, allow_hyphen_values = true)]
        generator: String,
        /// An Anosov linear part, for the commutation report.
        #[arg(long, allow_hyphen_values = true)]
        anosov: Option<String>,
    },
    /// Singer criterion `dω = η ∧ ω` with `η` closed.
    Liouville {
        form: String,
        #[arg(long)]
        eta: Option<String>,
    },
}

struct Output {
    json: Value,
    text: String,
    dot: Option<String>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_) => 2,
        Error::FieldTowerMismatch(..) | Error::FieldTowerExceeded(_) => 3,
        Error::NotInvariant(_) => 4,
        Error::NotUnimodular(_) => 5,
        Error::InconsistentLattice(_) | Error::LatticeMismatch(_) => 6,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(out) => {
            match cli.format {
                Format::Json => emit(&pretty_json(&out.json)),
                Format::Text => emit(&out.text),
                Format::Dot => match out.dot {
                    Some(d) => emit(&d),
                    None => {
                        eprintln!("error: this command has no DOT output");
                        return ExitCode::from(1);
                    }
                },
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = exit_code(&e);
            if cli.format == Format::Json {
                let v = json!({
                    "schema_version": SCHEMA_VERSION,
                    "error": { "kind": e.kind(), "message": e.to_string(), "exit_code": code },
                });
                emit(&pretty_json(&v));
            }
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}

fn pretty_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(s: &str) {
    let _ = std::io::stdout().write_all(s.as_bytes());
}

fn run(cmd: &Command) -> Result<Output, Error> {
    match cmd {
        Command::Reduce {
            form,
            atlas,
            max_blowups,
            trace,
        } => cmd_reduce(form, atlas, *max_blowups, trace.as_deref()),
        Command::CsCheck {
            form,
            curve,
            atlas,
            trace,
            blowup,
            line,
        } => cmd_cs_check(form.as_deref(), curve, atlas, trace.as_deref(), blowup, line),
        Command::Classify { mode, matrix, lattice } => match mode {
            Mode::Monomial => cmd_classify_monomial(matrix),
            Mode::Torus => cmd_classify_torus(matrix, lattice.as_deref()),
        },
        Command::BirGroup { alpha, bounds } => cmd_bir_group(alpha, bounds),
        Command::TorusClassify {
            lattice,
            generator,
            anosov,
        } => cmd_torus_classify(lattice, generator, anosov.as_deref()),
        Command::Liouville { form, eta } => cmd_liouville(form, eta.as_deref()),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn read_file(path: &str) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))
}

fn cmd_reduce(form: &str, atlas: &str, max_blowups: usize, trace_path: Option<&str>) -> Result<Output, Error> {
    let f = parse_one_form(form)?;
    let atlas = BaseAtlas::parse(atlas)?;
    let trace = seidenberg_reduce(&f, atlas, max_blowups)?;
    let json = to_value(&trace);
    if let Some(p) = trace_path {
        fs::write(p, pretty_json(&json))
            .map_err(|e| Error::InvalidInput(format!("{p}: {e}")))?;
    }
    let mut text = format!("form: {}\natlas: {:?}\nblowups: {}\n", trace.form, trace.atlas, trace.blowup_count);
    for b in &trace.blowups {
        let kind = if b.dicritical { "dicritical" } else { "invariant" };
        text.push_str(&format!(
            "  {} at {} in chart {} (m = {}, {kind})\n",
            b.curve, b.center, b.chart, b.multiplicity
        ));
    }
    for r in &trace.final_reports {
        text.push_str(&format!("  chart {} {}: {}\n", r.chart, r.report.point, kind_name(&to_value(&r.report.kind))));
    }
    Ok(Output {
        json,
        text,
        dot: Some(trace.model.export_dual_graph()),
    })
}

fn kind_name(v: &Value) -> String {
    v.get("type").and_then(Value::as_str).unwrap_or("?").to_string()
}

fn parse_point(s: &str) -> Result<Point, Error> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| Error::InvalidInput(format!("expected a point x,y, got '{s}'")))?;
    Ok(Point(parse_constant(x)?, parse_constant(y)?))
}

fn cmd_cs_check(
    form: Option<&str>,
    curve: &str,
    atlas: &str,
    trace: Option<&str>,
    blowups: &[String],
    lines: &[String],
) -> Result<Output, Error> {
    let mut model = match (trace, form) {
        (Some(path), _) => {
            let stored: StoredTrace = serde_json::from_str(&read_file(path)?)
                .map_err(|e| Error::InvalidInput(format!("{path}: {e}")))?;
            replay(&stored)?
        }
        (None, Some(f)) => SurfaceModel::new(BaseAtlas::parse(atlas)?, parse_one_form(f)?)?,
        (None, None) => return Err(Error::InvalidInput("give a form or --trace".into())),
    };
    for l in lines {
        let (axis, c) = match l.split_once('=') {
            Some(("x", c)) | Some(("z", c)) => (Axis::X0, c),
            Some(("y", c)) | Some(("w", c)) => (Axis::Y0, c),
            _ => return Err(Error::InvalidInput(format!("expected x=c or y=c, got '{l}'"))),
        };
        let c = parse_constant(c)?;
        let vars = model.charts[0].form.vars();
        let name = match axis {
            Axis::X0 => vars.0,
            Axis::Y0 => vars.1,
        };
        let id = format!("{name}={c}");
        if model.curve_index(&id).is_err() {
            model.track_line(&id, axis, c)?;
        }
    }
    for b in blowups {
        model = model.blow_up(0, &parse_point(b)?)?;
    }
    let check = model.verify_camacho_sad(curve)?;
    let tf = model.tf_dot_curve(curve).ok();
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "curve": check.curve,
        "sum": check.sum,
        "self_int": check.self_intersection,
        "ok": check.ok,
        "contributions": check.contributions,
        "tf_dot": tf.as_ref().map(|t| t.value),
    });
    let mut text = format!(
        "curve {}: sum of indices {} vs self-intersection {} -> {}\n",
        check.curve,
        check.sum,
        check.self_intersection,
        if check.ok { "ok" } else { "MISMATCH" }
    );
    for c in &check.contributions {
        text.push_str(&format!("  chart {} {}: {}\n", c.chart, c.point, c.cs));
    }
    Ok(Output {
        json,
        text,
        dot: Some(model.export_dual_graph()),
    })
}

fn parse_entries(s: &str) -> Result<Vec<QuadNumber>, Error> {
    s.trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|t| parse_constant(t.trim_matches(|c: char| c == '[' || c == ']' || c.is_whitespace())))
        .collect()
}

fn parse_int_matrix(s: &str) -> Result<IntMatrix2, Error> {
    let e = parse_entries(s)?;
    let ints: Option<Vec<i64>> = e
        .iter()
        .map(|x| x.as_integer().and_then(|b| i64::try_from(b).ok()))
        .collect();
    match ints.as_deref() {
        Some(&[a, b, c, d]) => Ok(IntMatrix2::new(a, b, c, d)),
        _ => Err(Error::InvalidInput(format!("expected four integers, got '{s}'"))),
    }
}

fn cmd_classify_monomial(matrix: &str) -> Result<Output, Error> {
    let m = parse_int_matrix(matrix)?;
    let f = MonomialMap::new(m)?;
    let growth = growth_class(&f)?;
    let eig = eigen2(&m)?;
    let stable = is_algebraically_stable(&f);
    let conj = if eig.is_real() && eig.expanding() {
        match stabilize_conjugate(&f, 50) {
            Ok((p, g)) => json!({ "p": p, "conjugate": g.matrix() }),
            Err(e) => json!({ "error": e.to_string() }),
        }
    } else {
        Value::Null
    };
    let foliations = match invariant_foliations(&f) {
        Ok(v) => to_value(&v),
        Err(Error::ComplexEigenvalues) => json!([]),
        Err(e) => return Err(e),
    };
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "mode": "monomial",
        "matrix": m,
        "det": m.det(),
        "growth": growth,
        "eigen": eig,
        "pullback_action": pullback_action(&f),
        "algebraically_stable": stable,
        "stabilizing_conjugate": conj,
        "invariant_foliations": foliations,
    });
    let text = format!(
        "monomial map {m}: {} growth, spectral radius {}, algebraically stable: {stable}\n",
        growth.name(),
        eig.spectral_radius
    );
    Ok(Output { json, text, dot: None })
}

fn infer_lattice(entries: &[QuadNumber]) -> LatticeKind {
    if entries.len() == 16 {
        LatticeKind::GeneralZ4
    } else if entries.iter().any(|x| x.radicand() == -1) {
        LatticeKind::ZiSquare
    } else if entries.iter().any(|x| x.radicand() == -3) {
        LatticeKind::ZjSquare
    } else {
        LatticeKind::ESquare
    }
}

fn json_rational(v: &Value) -> Result<QuadNumber, Error> {
    let q = match v {
        Value::Number(n) => parse_constant(&n.to_string())?,
        Value::String(t) => parse_constant(t)?,
        _ => return Err(Error::InvalidInput(format!("expected a rational, got {v}"))),
    };
    if q.is_rational() {
        Ok(q)
    } else {
        Err(Error::InvalidInput(format!("expected a rational, got {v}")))
    }
}

/// An entry given as an integer, a constant expression, a
/// `[rational, surd, radicand]` triple or an object with those keys.
fn json_entry(v: &Value) -> Result<QuadNumber, Error> {
    let triple = |r: &Value, s: &Value, d: &Value| -> Result<QuadNumber, Error> {
        let d = d
            .as_i64()
            .ok_or_else(|| Error::InvalidInput(format!("radicand must be an integer, got {d}")))?;
        let r = json_rational(r)?;
        let s = json_rational(s)?;
        let root = QuadNumber::sqrt_int(d);
        r.try_add(&s.try_mul(&root)?)
    };
    match v {
        Value::Number(_) => json_rational(v),
        Value::String(t) => parse_constant(t),
        Value::Array(a) if a.len() == 3 => triple(&a[0], &a[1], &a[2]),
        Value::Object(o) => match (o.get("rational"), o.get("surd"), o.get("radicand")) {
            (Some(r), Some(s), Some(d)) => triple(r, s, d),
            _ => Err(Error::InvalidInput(format!("entry object needs rational, surd, radicand: {v}"))),
        },
        _ => Err(Error::InvalidInput(format!("unreadable matrix entry {v}"))),
    }
}

/// Reads `{"lattice": ..., "matrix": [[...], ...]}`.
fn parse_torus_json(text: &str, lattice: Option<&str>) -> Result<(Vec<QuadNumber>, Option<String>), Error> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("JSON input: {e}")))?;
    let rows = v
        .get("matrix")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("JSON input needs a 'matrix' array".into()))?;
    let mut entries = Vec::new();
    for row in rows {
        match row {
            Value::Array(r) => {
                for x in r {
                    entries.push(json_entry(x)?);
                }
            }
            x => entries.push(json_entry(x)?),
        }
    }
    let lat = lattice
        .map(str::to_string)
        .or_else(|| v.get("lattice").and_then(Value::as_str).map(str::to_string));
    Ok((entries, lat))
}

/// The matrix argument is a comma-separated list, an inline JSON object,
/// or `@FILE` naming a JSON document.
fn parse_torus(matrix: &str, lattice: Option<&str>) -> Result<TorusAut, Error> {
    let m = matrix.trim();
    let (e, lattice) = if let Some(path) = m.strip_prefix('@') {
        parse_torus_json(&read_file(path)?, lattice)?
    } else if m.starts_with('{') {
        parse_torus_json(m, lattice)?
    } else {
        (parse_entries(m)?, lattice.map(str::to_string))
    };
    let lattice = lattice
        .as_deref()
        .map(LatticeKind::parse)
        .transpose()?
        .unwrap_or_else(|| infer_lattice(&e));
    let n = match e.len() {
        4 => 2,
        16 => 4,
        k => return Err(Error::InvalidInput(format!("expected 4 or 16 entries, got {k}"))),
    };
    let rows = e.chunks(n).map(|r| r.to_vec()).collect();
    TorusAut::new(lattice, SquareMatrix::from_rows(rows))
}

fn cmd_classify_torus(matrix: &str, lattice: Option<&str>) -> Result<Output, Error> {
    let a = parse_torus(matrix, lattice)?;
    let anosov = anosov_check(&a)?;
    let two_dim = a.linear.size() == 2;
    let growth = if two_dim { Some(h11_growth(&a)?) } else { None };
    let slopes = if anosov && two_dim {
        stable_unstable_slopes(&a).ok()
    } else {
        None
    };
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "mode": "torus",
        "lattice": a.lattice,
        "matrix": a.linear,
        "anosov": anosov,
        "growth": growth,
        "slopes": slopes,
        "translations_dropped": true,
    });
    let text = format!(
        "torus map over {:?}: anosov {anosov}, growth {}\n",
        a.lattice,
        growth.as_ref().map_or("n/a", |g| g.name())
    );
    Ok(Output { json, text, dot: None })
}

fn parse_bounds(s: &str) -> Result<SearchBounds, Error> {
    let bad = || Error::InvalidInput(format!("expected bounds t,a with positive integers, got '{s}'"));
    let (t, a) = s.split_once(',').ok_or_else(bad)?;
    let t: i64 = t.trim().parse().map_err(|_| bad())?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    if t <= 0 || a <= 0 {
        return Err(bad());
    }
    Ok(SearchBounds { t, a })
}

fn cmd_bir_group(alpha: &str, bounds: &str) -> Result<Output, Error> {
    let a = parse_constant(alpha)?;
    let bounds = parse_bounds(bounds)?;
    let c = bir_group_classify(&a, bounds)?;
    let mut json = to_value(&c);
    let obj = json.as_object_mut().expect("tagged enum");
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("alpha".into(), to_value(&a));
    obj.insert("search_bounds".into(), to_value(&bounds));
    let text = format!("alpha = {a}: {}\n", json["class"].as_str().unwrap_or("?"));
    Ok(Output { json, text, dot: None })
}

fn cmd_torus_classify(lattice: &str, generator: &str, anosov: Option<&str>) -> Result<Output, Error> {
    let kind = LatticeKind::parse(lattice)?;
    let xi = parse_constant(generator)?;
    let class = classify_quotient(kind, &xi)?;
    let g = TorusAut::homothety(kind, &xi)?;
    let crystal = crystallographic_constraint(&g.linear)?;
    let homothety = match anosov {
        Some(m) => Some(homothety_and_commutation(&g, &parse_torus(m, Some(lattice))?)?),
        None => None,
    };
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "lattice": kind,
        "generator": xi,
        "classification": class,
        "crystallographic": crystal,
        "homothety": homothety,
    });
    let text = format!("quotient of {kind:?} by <{xi}>: {class:?}\n");
    Ok(Output { json, text, dot: None })
}

/// `α` when the form is `c·(w dz + α z dw)`.
fn linear_alpha(f: &RatOneForm) -> Option<QuadNumber> {
    use birfol_core::algebra::{BiPoly, BiRat};
    let w = BiRat::from_poly(BiPoly::y());
    let z = BiRat::from_poly(BiPoly::x());
    let c = f.p.div(&w).ok()?.as_constant()?;
    let d = f.q.div(&z).ok()?.as_constant()?;
    d.try_div(&c).ok()
}

fn cmd_liouville(form: &str, eta: Option<&str>) -> Result<Output, Error> {
    let omega = RatOneForm::parse(form)?;
    let eta = match eta {
        Some(e) => RatOneForm::parse_in(e, omega.vars())?,
        None => {
            let alpha = linear_alpha(&omega).ok_or_else(|| {
                Error::InvalidInput("give --eta unless the form is w dz + α z dw".into())
            })?;
            construct_eta_linear(&alpha)?
        }
    };
    let eta = RatOneForm::with_vars(eta.p.clone(), eta.q.clone(), omega.vars());
    let ok = singer_check(&omega, &eta);
    let vars = omega.vars();
    let json = json!({
        "schema_version": SCHEMA_VERSION,
        "omega": omega.pretty(),
        "eta": eta.pretty(),
        "d_eta": exterior_derivative(&eta).r.display_in(vars),
        "d_omega": exterior_derivative(&omega).r.display_in(vars),
        "eta_wedge_omega": wedge(&eta, &omega).r.display_in(vars),
        "singer": ok,
    });
    let text = format!("omega = {omega}\neta = {eta}\nsinger: {ok}\n");
    Ok(Output { json, text, dot: None })
}
