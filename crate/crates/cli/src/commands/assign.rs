use serde_json::json;

use permsep_core::assignment::{hungarian, plan_to_permutation, sinkhorn};
use permsep_core::losses::{pit_from_cost, PitSolver};
use permsep_core::sdr::CostMatrix;

use crate::cli::{AssignArgs, Cli, SolverArg};
use crate::commands::{CliError, CliResult};
use crate::output::{self, fmt_float};

/// Parses an n x n cost matrix from headerless CSV.
fn parse_cost_csv(text: &str, path: &std::path::Path) -> Result<CostMatrix, CliError> {
    let mut rows = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let row: Result<Vec<f64>, _> = trimmed
            .split(',')
            .map(|cell| cell.trim().parse::<f64>())
            .collect();
        let row = row.map_err(|e| {
            CliError::Data(format!("{}:{}: {e}", path.display(), line_no + 1))
        })?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Data(format!(
            "{}: no rows in cost matrix",
            path.display()
        )));
    }
    CostMatrix::from_rows(rows).map_err(|e| CliError::Data(e.to_string()))
}

pub fn run_assign(cli: &Cli, args: &AssignArgs) -> CliResult {
    let text = std::fs::read_to_string(&args.cost)?;
    let costs = parse_cost_csv(&text, &args.cost)?;

    let mut sinkhorn_info = None;
    let (method_name, permutation) = match args.method {
        SolverArg::Hungarian => ("hungarian", hungarian(&costs).permutation),
        SolverArg::Exhaustive => (
            "exhaustive",
            pit_from_cost(&costs, PitSolver::Exhaustive)?.permutation,
        ),
        SolverArg::Sinkhorn => {
            let plan = sinkhorn(&costs, args.epsilon, args.max_iters, args.tol)?;
            let permutation = plan_to_permutation(&plan);
            sinkhorn_info = Some((plan.converged(), plan.iterations_used()));
            ("sinkhorn", permutation)
        }
    };

    let pair_costs: Vec<f64> = permutation
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &j)| costs.get(i, j))
        .collect();
    let total_cost: f64 = pair_costs.iter().sum();

    if let Some(path) = &cli.csv {
        output::write_file(path, &output::assign_csv(permutation.as_slice(), &pair_costs))?;
    }

    if cli.json {
        let mut doc = json!({
            "schema_version": output::SCHEMA_VERSION,
            "command": "assign",
            "method": method_name,
            "n": costs.n(),
            "permutation": permutation.as_slice(),
            "pair_costs": pair_costs,
            "total_cost": total_cost,
        });
        if let Some((converged, iterations)) = sinkhorn_info {
            doc["converged"] = json!(converged);
            doc["iterations_used"] = json!(iterations);
        }
        println!("{doc}");
        return Ok(());
    }

    println!("method: {method_name}");
    println!(
        "{:>7}  {:>11}  {:>15}",
        "target", "prediction", "pair_cost"
    );
    for (i, (&j, &c)) in permutation.as_slice().iter().zip(&pair_costs).enumerate() {
        println!("{i:>7}  {j:>11}  {:>15}", fmt_float(c));
    }
    println!("total cost: {}", fmt_float(total_cost));
    if let Some((converged, iterations)) = sinkhorn_info {
        println!("sinkhorn: converged {converged} after {iterations} iteration(s)");
    }
    Ok(())
}
