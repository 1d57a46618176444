use serde_json::json;

use permsep_core::synth::{gen_sources, SynthSpec};
use permsep_core::trainer::{train_direct, TrainConfig};

use crate::cli::{Cli, SceneArgs, TrainArgs, TrainKnobs};
use crate::commands::CliResult;
use crate::output::{self, fmt_float};
use crate::svg::{Chart, Series, PALETTE};

pub fn scene_spec(cli: &Cli, scene: &SceneArgs) -> SynthSpec {
    SynthSpec::new(scene.sources, scene.length, scene.kind.into(), cli.seed)
}

pub fn train_config(cli: &Cli, knobs: &TrainKnobs) -> TrainConfig {
    TrainConfig {
        steps: knobs.steps,
        learning_rate: knobs.learning_rate,
        optimizer: knobs.optimizer.into(),
        init_scale: knobs.init_scale,
        seed: cli.seed,
        epsilon: knobs.epsilon,
        log_every: knobs.log_every,
        ..TrainConfig::default()
    }
}

pub fn run_train(cli: &Cli, args: &TrainArgs) -> CliResult {
    let targets = gen_sources(&scene_spec(cli, &args.scene))?;
    let config = TrainConfig {
        loss_kind: args.loss.into(),
        ..train_config(cli, &args.knobs)
    };
    let trajectory = train_direct(&targets, &config)?;

    if let Some(path) = &cli.csv {
        output::write_file(path, &output::train_csv(&trajectory.records))?;
    }
    if let Some(path) = &cli.svg {
        let points: Vec<(f64, f64)> = trajectory
            .records
            .iter()
            .map(|r| (r.step as f64, r.opt_perm_si_sdr))
            .collect();
        let chart = Chart {
            title: format!("{} training", config.loss_kind.name()),
            x_label: "step".into(),
            y_label: "optimal-permutation SI-SDR (dB)".into(),
            log_log: false,
            series: vec![Series {
                label: config.loss_kind.name().to_string(),
                color: PALETTE[0],
                points,
            }],
        };
        output::write_file(path, &chart.render())?;
    }

    if cli.json {
        let doc = json!({
            "schema_version": output::SCHEMA_VERSION,
            "command": "train",
            "loss": config.loss_kind.name(),
            "seed": cli.seed,
            "sources": args.scene.sources,
            "length": args.scene.length,
            "kind": args.scene.kind_name(),
            "steps": config.steps,
            "records": trajectory.records.iter().map(|r| json!({
                "step": r.step,
                "loss": r.loss,
                "opt_perm_si_sdr_db": r.opt_perm_si_sdr,
                "auc_sdr": r.auc_sdr,
                "collapse_rate": r.collapse_rate,
            })).collect::<Vec<_>>(),
            "final": {
                "loss": trajectory.final_loss(),
                "opt_perm_si_sdr_db": trajectory.final_si_sdr(),
                "auc_sdr": trajectory.final_auc(),
                "collapse_rate": trajectory.final_collapse_rate(),
                "permutation": trajectory.final_permutation.as_slice(),
                "collapse_persisted": trajectory.collapse_persisted,
            },
        });
        println!("{doc}");
        return Ok(());
    }

    println!(
        "{:>7}  {:>15}  {:>15}  {:>10}  {:>13}",
        "step", "loss", "si_sdr_db", "auc_sdr", "collapse_rate"
    );
    for r in &trajectory.records {
        println!(
            "{:>7}  {:>15}  {:>15}  {:>10.4}  {:>13.4}",
            r.step,
            fmt_float(r.loss),
            fmt_float(r.opt_perm_si_sdr),
            r.auc_sdr,
            r.collapse_rate
        );
    }
    println!(
        "\nfinal: loss {} | si-sdr {:.2} dB | auc {:.4} | permutation {:?}{}",
        fmt_float(trajectory.final_loss()),
        trajectory.final_si_sdr(),
        trajectory.final_auc(),
        trajectory.final_permutation.as_slice(),
        if trajectory.collapse_persisted {
            " | collapse persisted"
        } else {
            ""
        }
    );
    Ok(())
}
