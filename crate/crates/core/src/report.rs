//! Batch ratio reports.

use std::io;

use crate::engine::{default_step_budget, run, strict_ratio, StaticSource};
use crate::grid::Instance;
use crate::opt::{best_known_opt_with, OptError};
use crate::strategy::StrategyRegistry;
use crate::Ratio;

pub const REPORT_HEADER: [&str; 8] = [
    "instance",
    "strategy",
    "alg_cost",
    "opt_cost",
    "ratio_exact",
    "ratio_decimal",
    "complete",
    "error",
];

/// One `(instance, strategy)` evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioRow {
    pub instance: String,
    pub strategy: String,
    pub alg_cost: Option<u64>,
    pub opt_cost: Option<u64>,
    pub ratio: Option<Ratio>,
    pub complete: bool,
    pub error: Option<String>,
}

/// Six-place decimal rendering of an exact ratio, rounded half up.
pub fn ratio_decimal(r: Ratio) -> String {
    let (p, q) = (u128::from(*r.numer()), u128::from(*r.denom()));
    let scaled = (p * 1_000_000 * 2 + q) / (2 * q);
    format!("{}.{:06}", scaled / 1_000_000, scaled % 1_000_000)
}

impl RatioRow {
    pub fn failed(instance: &str, strategy: &str, error: String) -> Self {
        RatioRow {
            instance: instance.to_string(),
            strategy: strategy.to_string(),
            alg_cost: None,
            opt_cost: None,
            ratio: None,
            complete: false,
            error: Some(error),
        }
    }

    fn record(&self) -> [String; 8] {
        let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
        [
            self.instance.clone(),
            self.strategy.clone(),
            opt(self.alg_cost),
            opt(self.opt_cost),
            self.ratio
                .map(|r| format!("{}/{}", r.numer(), r.denom()))
                .unwrap_or_default(),
            self.ratio.map(ratio_decimal).unwrap_or_default(),
            self.complete.to_string(),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

/// Limits for one evaluation; `None` means the library default.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvalLimits {
    pub step_budget: Option<u64>,
    pub opt_vertex_limit: Option<usize>,
}

/// Runs `strategy` on `inst` and compares it with the exact optimum.
pub fn evaluate(
    label: &str,
    inst: &Instance,
    strategy: &str,
    registry: &StrategyRegistry,
    limits: EvalLimits,
) -> RatioRow {
    let Some(mut agent) = registry.create(strategy) else {
        return RatioRow::failed(label, strategy, format!("unknown strategy `{strategy}`"));
    };
    let k = inst.k.unwrap_or_else(|| inst.weights.iter().copied().max().unwrap_or(1));
    let budget = limits.step_budget.unwrap_or_else(|| default_step_budget(&inst.spec, k));
    let out = match run(StaticSource::new(inst.clone()), inst.start, &mut agent, budget) {
        Ok(o) => o,
        Err(e) => return RatioRow::failed(label, strategy, e.to_string()),
    };
    let mut row = RatioRow {
        instance: label.to_string(),
        strategy: strategy.to_string(),
        alg_cost: Some(out.trace.total_cost),
        opt_cost: None,
        ratio: None,
        complete: out.trace.complete,
        error: None,
    };
    match best_known_opt_with(inst, limits.opt_vertex_limit) {
        Ok(opt) => {
            row.opt_cost = Some(opt);
            if !row.complete {
                row.error = Some("trace is incomplete".to_string());
            } else {
                match strict_ratio(out.trace.total_cost, opt) {
                    Ok(r) => row.ratio = Some(r),
                    Err(e) => row.error = Some(e.to_string()),
                }
            }
        }
        Err(e @ OptError::TooLarge { .. }) => {
            row.error = Some(format!("{e}; replay a witness walk instead"))
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Rows sorted by instance label, then strategy.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
}

impl RatioReport {
    pub fn new(mut rows: Vec<RatioRow>) -> Self {
        rows.sort_by(|a, b| (&a.instance, &a.strategy).cmp(&(&b.instance, &b.strategy)));
        RatioReport { rows }
    }

    pub fn max_ratio(&self) -> Option<Ratio> {
        self.rows.iter().filter_map(|r| r.ratio).max()
    }

    pub fn mean_ratio(&self) -> Option<f64> {
        let rs: Vec<f64> = self
            .rows
            .iter()
            .filter_map(|r| r.ratio)
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
            .collect();
        (!rs.is_empty()).then(|| rs.iter().sum::<f64>() / rs.len() as f64)
    }

    pub fn has_errors(&self) -> bool {
        self.rows.iter().any(|r| r.error.is_some())
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(REPORT_HEADER)?;
        for r in &self.rows {
            w.write_record(r.record())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 labels")
    }
}
