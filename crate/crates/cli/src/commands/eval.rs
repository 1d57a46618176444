use serde_json::json;

use permsep_core::eval::{eval_directories, EvalOptions};

use crate::cli::{Cli, EvalArgs};
use crate::commands::CliResult;
use crate::output::{self, fmt_float};

pub fn run_eval(cli: &Cli, args: &EvalArgs) -> CliResult {
    let report = eval_directories(
        &args.refs,
        &args.ests,
        EvalOptions {
            zero_mean: args.zero_mean,
        },
    )?;

    if let Some(path) = &cli.csv {
        output::write_file(path, &output::eval_csv(&report))?;
    }

    if cli.json {
        let doc = json!({
            "schema_version": output::SCHEMA_VERSION,
            "command": "eval",
            "zero_mean": args.zero_mean,
            "scenes": report.scenes.iter().map(|s| json!({
                "scene": s.scene,
                "n_sources": s.n_sources,
                "opt_perm_si_sdr_db": s.opt_perm_si_sdr,
                "auc_sdr": s.auc_sdr,
            })).collect::<Vec<_>>(),
            "mean_si_sdr_db": report.mean_si_sdr,
            "mean_auc": report.mean_auc,
        });
        println!("{doc}");
        return Ok(());
    }

    println!(
        "{:<24}  {:>9}  {:>15}  {:>10}",
        "scene", "n_sources", "si_sdr_db", "auc_sdr"
    );
    for s in &report.scenes {
        println!(
            "{:<24}  {:>9}  {:>15}  {:>10.4}",
            s.scene,
            s.n_sources,
            fmt_float(s.opt_perm_si_sdr),
            s.auc_sdr
        );
    }
    println!(
        "\ncorpus mean: si-sdr {:.2} dB | auc {:.4} over {} scene(s)",
        report.mean_si_sdr,
        report.mean_auc,
        report.scenes.len()
    );
    Ok(())
}
