use serde_json::json;

use permsep_core::losses::LossMethod;
use permsep_core::timing::{bench_losses, fit_loglog_slope, BenchPhase, BenchRow};

use crate::cli::{BenchArgs, Cli};
use crate::commands::CliResult;
use crate::output::{self, fmt_float};
use crate::svg::{Chart, Series, PALETTE};

const METHODS: [LossMethod; 4] = [
    LossMethod::PitExhaustive,
    LossMethod::PitHungarian,
    LossMethod::SinkPit,
    LossMethod::Mcl,
];

pub fn run_bench(cli: &Cli, args: &BenchArgs) -> CliResult {
    let rows = bench_losses(&args.sizes, args.length, args.trials, cli.seed)?;

    let mut slopes = Vec::new();
    for method in METHODS {
        for phase in [BenchPhase::CostMatrix, BenchPhase::Assignment, BenchPhase::Total] {
            if let Ok(slope) = fit_loglog_slope(&rows, method, phase) {
                slopes.push((method, phase, slope));
            }
        }
    }

    if let Some(path) = &cli.csv {
        output::write_file(path, &output::bench_csv(&rows))?;
    }
    if let Some(path) = &cli.svg {
        output::write_file(path, &assignment_chart(&rows).render())?;
    }

    if cli.json {
        let doc = json!({
            "schema_version": output::SCHEMA_VERSION,
            "command": "bench",
            "seed": cli.seed,
            "length": args.length,
            "trials": args.trials,
            "rows": rows.iter().map(|r| json!({
                "n": r.n,
                "method": r.method.name(),
                "phase": r.phase.name(),
                "mean_time_s": r.mean_time,
                "std_time_s": r.std_time,
                "trials": r.trials,
            })).collect::<Vec<_>>(),
            "slopes": slopes.iter().map(|(m, p, s)| json!({
                "method": m.name(),
                "phase": p.name(),
                "slope": s,
            })).collect::<Vec<_>>(),
        });
        println!("{doc}");
        return Ok(());
    }

    println!(
        "{:>5}  {:<14}  {:<11}  {:>15}  {:>15}  {:>6}",
        "n", "method", "phase", "mean_time_s", "std_time_s", "trials"
    );
    for r in &rows {
        println!(
            "{:>5}  {:<14}  {:<11}  {:>15}  {:>15}  {:>6}",
            r.n,
            r.method.name(),
            r.phase.name(),
            fmt_float(r.mean_time),
            fmt_float(r.std_time),
            r.trials
        );
    }
    println!();
    for (method, phase, slope) in &slopes {
        if *phase == BenchPhase::Assignment {
            println!("log-log slope  {:<14} {:<11} {:.3}", method.name(), phase.name(), slope);
        }
    }
    Ok(())
}

fn assignment_chart(rows: &[BenchRow]) -> Chart {
    let mut series = Vec::new();
    for (i, method) in METHODS.iter().enumerate() {
        let points: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.method == *method && r.phase == BenchPhase::Assignment)
            .map(|r| (r.n as f64, r.mean_time))
            .collect();
        if !points.is_empty() {
            series.push(Series {
                label: method.name().to_string(),
                color: PALETTE[i % PALETTE.len()],
                points,
            });
        }
    }
    Chart {
        title: "Assignment time per sample".into(),
        x_label: "speakers".into(),
        y_label: "seconds".into(),
        log_log: true,
        series,
    }
}
