use serde_json::json;

use permsep_core::synth::gen_sources;
use permsep_core::trainer::compare_methods;

use crate::cli::{Cli, CompareArgs};
use crate::commands::train::{scene_spec, train_config};
use crate::commands::CliResult;
use crate::output::{self, fmt_float};

pub fn run_compare(cli: &Cli, args: &CompareArgs) -> CliResult {
    let targets = gen_sources(&scene_spec(cli, &args.scene))?;
    let base = train_config(cli, &args.knobs);
    let rows = compare_methods(&targets, &base)?;

    if let Some(path) = &cli.csv {
        output::write_file(path, &output::compare_csv(&rows))?;
    }

    if cli.json {
        let doc = json!({
            "schema_version": output::SCHEMA_VERSION,
            "command": "compare",
            "seed": cli.seed,
            "sources": args.scene.sources,
            "length": args.scene.length,
            "kind": args.scene.kind_name(),
            "steps": args.knobs.steps,
            "rows": rows.iter().map(|r| json!({
                "method": r.method.name(),
                "final_loss": r.final_loss,
                "opt_perm_si_sdr_db": r.opt_perm_si_sdr,
                "auc_sdr": r.auc_sdr,
                "collapse_rate": r.collapse_rate,
                "wall_time_s": r.wall_time.as_secs_f64(),
            })).collect::<Vec<_>>(),
        });
        println!("{doc}");
        return Ok(());
    }

    println!(
        "{:<14}  {:>15}  {:>12}  {:>8}  {:>13}  {:>11}",
        "method", "final_loss", "si_sdr_db", "auc_sdr", "collapse_rate", "wall_time_s"
    );
    let reference = rows[0].wall_time.as_secs_f64();
    for r in &rows {
        println!(
            "{:<14}  {:>15}  {:>12.2}  {:>8.4}  {:>13.4}  {:>11.3}",
            r.method.name(),
            fmt_float(r.final_loss),
            r.opt_perm_si_sdr,
            r.auc_sdr,
            r.collapse_rate,
            r.wall_time.as_secs_f64()
        );
    }
    println!();
    for r in &rows {
        println!(
            "relative epoch time  {:<14} {:.2}",
            r.method.name(),
            r.wall_time.as_secs_f64() / reference
        );
    }
    Ok(())
}
