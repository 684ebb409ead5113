use serde::{Deserialize, Serialize};

use super::model::{BaseAtlas, BlowupRecord, LocatedReport, SurfaceModel};
use crate::error::{Error, Result};
use crate::foliation::{classify_singularity, parse_one_form, OneForm, Point};

pub const TRACE_SCHEMA_VERSION: u32 = 1;

/// Blowup centre as stored in a trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub chart: usize,
    pub center: Point,
    pub multiplicity: i64,
    pub curve: String,
    pub dicritical: bool,
}

impl From<&BlowupRecord> for TraceStep {
    fn from(r: &BlowupRecord) -> Self {
        TraceStep {
            chart: r.chart,
            center: r.center.clone(),
            multiplicity: r.multiplicity,
            curve: r.curve.clone(),
            dicritical: r.dicritical,
        }
    }
}

/// Result of a reduction: the blowups performed and the final local picture.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReductionTrace {
    pub schema_version: u32,
    pub form: String,
    pub atlas: BaseAtlas,
    pub blowups: Vec<TraceStep>,
    pub final_reports: Vec<LocatedReport>,
    pub dicritical_curves: Vec<String>,
    pub blowup_count: usize,
    #[serde(skip)]
    pub model: SurfaceModel,
}

/// Trace fields needed to rebuild a model.
#[derive(Clone, Debug, Deserialize)]
pub struct StoredTrace {
    pub schema_version: u32,
    pub form: String,
    pub atlas: BaseAtlas,
    pub blowups: Vec<TraceStep>,
}

/// Blows up non-reduced singular points, first in chart/point order, until
/// every singular point is reduced.
pub fn seidenberg_reduce(form: &OneForm, atlas: BaseAtlas, max_blowups: usize) -> Result<ReductionTrace> {
    let mut model = SurfaceModel::new(atlas, form.clone())?;
    loop {
        let reports = model.singular_reports()?;
        let Some(next) = reports.iter().find(|r| !r.report.is_reduced()) else {
            return Ok(trace_of(form, model, reports));
        };
        if model.log.len() >= max_blowups {
            return Err(Error::BudgetExceeded(max_blowups));
        }
        let (chart, p) = (next.chart, next.report.point.clone());
        let before: Vec<LocatedReport> = reports.into_iter().filter(|r| r.report.is_reduced()).collect();
        model = model.blow_up(chart, &p)?;
        // a blowup touches only its centre
        for r in &before {
            let again = classify_singularity(&model.charts[r.chart].form, &r.report.point)?;
            debug_assert!(again.is_reduced() && model.owns(r.chart, &r.report.point));
        }
    }
}

fn trace_of(form: &OneForm, model: SurfaceModel, final_reports: Vec<LocatedReport>) -> ReductionTrace {
    let blowups: Vec<TraceStep> = model.log.iter().map(TraceStep::from).collect();
    let dicritical_curves = blowups.iter().filter(|b| b.dicritical).map(|b| b.curve.clone()).collect();
    ReductionTrace {
        schema_version: TRACE_SCHEMA_VERSION,
        form: form.pretty(),
        atlas: model.atlas,
        blowup_count: blowups.len(),
        blowups,
        final_reports,
        dicritical_curves,
        model,
    }
}

/// Rebuilds the model of a stored trace, checking each recorded step.
pub fn replay(trace: &StoredTrace) -> Result<SurfaceModel> {
    if trace.schema_version != TRACE_SCHEMA_VERSION {
        return Err(Error::InvalidInput(format!(
            "unsupported trace schema version {}",
            trace.schema_version
        )));
    }
    let form = parse_one_form(&trace.form)?;
    let mut model = SurfaceModel::new(trace.atlas, form)?;
    for step in &trace.blowups {
        model = model.blow_up(step.chart, &step.center)?;
        let rec = model.log.last().expect("just blown up");
        if rec.multiplicity != step.multiplicity || rec.dicritical != step.dicritical || rec.curve != step.curve {
            return Err(Error::InvalidInput(format!("trace step {} does not replay", step.curve)));
        }
    }
    Ok(model)
}
