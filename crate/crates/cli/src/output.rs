//! Output formatting: stable CSV schemas and JSON envelopes.
//!
//! CSV files are UTF-8 with a header row, comma separators and floats
//! rendered with 9 significant digits. Every JSON document is a single
//! top-level object carrying `schema_version`. Column order and field names
//! are fixed; the golden tests in `tests/cli.rs` pin them.

use std::path::Path;

use permsep_core::eval::EvalReport;
use permsep_core::timing::BenchRow;
use permsep_core::trainer::{ComparisonRow, TrainRecord};

pub const SCHEMA_VERSION: u32 = 1;

pub const BENCH_CSV_HEADER: &str = "n,method,phase,mean_time_s,std_time_s,trials";
pub const TRAIN_CSV_HEADER: &str = "step,loss,opt_perm_si_sdr_db,auc_sdr,collapse_rate";
pub const COMPARE_CSV_HEADER: &str =
    "method,final_loss,opt_perm_si_sdr_db,auc_sdr,collapse_rate,wall_time_s";
pub const EVAL_CSV_HEADER: &str = "scene,n_sources,opt_perm_si_sdr_db,auc_sdr";
pub const ASSIGN_CSV_HEADER: &str = "target,prediction,pair_cost";

/// Nine significant digits: one leading digit plus eight decimals in
/// scientific notation.
pub fn fmt_float(value: f64) -> String {
    format!("{value:.8e}")
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(BENCH_CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.n,
            row.method.name(),
            row.phase.name(),
            fmt_float(row.mean_time),
            fmt_float(row.std_time),
            row.trials
        ));
    }
    out
}

pub fn train_csv(records: &[TrainRecord]) -> String {
    let mut out = String::from(TRAIN_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.step,
            fmt_float(r.loss),
            fmt_float(r.opt_perm_si_sdr),
            fmt_float(r.auc_sdr),
            fmt_float(r.collapse_rate)
        ));
    }
    out
}

pub fn compare_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from(COMPARE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.method.name(),
            fmt_float(r.final_loss),
            fmt_float(r.opt_perm_si_sdr),
            fmt_float(r.auc_sdr),
            fmt_float(r.collapse_rate),
            fmt_float(r.wall_time.as_secs_f64())
        ));
    }
    out
}

pub fn eval_csv(report: &EvalReport) -> String {
    let mut out = String::from(EVAL_CSV_HEADER);
    out.push('\n');
    for s in &report.scenes {
        out.push_str(&format!(
            "{},{},{},{}\n",
            s.scene,
            s.n_sources,
            fmt_float(s.opt_perm_si_sdr),
            fmt_float(s.auc_sdr)
        ));
    }
    out
}

pub fn assign_csv(mapping: &[usize], pair_costs: &[f64]) -> String {
    let mut out = String::from(ASSIGN_CSV_HEADER);
    out.push('\n');
    for (target, (&prediction, &cost)) in mapping.iter().zip(pair_costs).enumerate() {
        out.push_str(&format!("{target},{prediction},{}\n", fmt_float(cost)));
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> std::io::Result<()> {
    std::fs::write(path, contents)
}
