use std::path::Path;

use anyhow::Context;
use qdist_cli::config::parse_args;
use qdist_cli::experiment::{ExperimentResult, ExperimentSpec, Mode, Table};
use qdist_cli::output::{emit_qasm, fmt_sig, table_path, write_csv, write_svg};
use qdist_cli::run_experiment;

fn print_table(table: &Table) {
    if let Some(label) = &table.label {
        println!("[{label}]");
    }
    println!(
        "{:>14} {:>14} {:>14} {:>14} {:>12}",
        table.param, "estimate", "std_error", "oracle", "|diff|"
    );
    for r in &table.rows {
        println!(
            "{:>14} {:>14} {:>14} {:>14} {:>12.3e}",
            fmt_sig(r.param),
            fmt_sig(r.estimate),
            fmt_sig(r.std_error),
            fmt_sig(r.oracle),
            (r.estimate - r.oracle).abs()
        );
    }
    println!("max |estimate - oracle| = {:.3e}\n", table.max_deviation());
}

fn print_summary(spec: &ExperimentSpec, result: &ExperimentResult) {
    let mode = match spec.mode {
        Mode::Exact => "exact".to_string(),
        Mode::Sampled => format!(
            "sampled, {} shots, seed {}, noise {}",
            spec.shots,
            spec.seed,
            if spec.noise.is_some() { "on" } else { "off" }
        ),
    };
    println!("{} ({mode})\n", result.experiment);
    for t in &result.tables {
        print_table(t);
    }
}

fn write_outputs(result: &ExperimentResult, out: &Path, svg: bool) -> anyhow::Result<()> {
    for t in &result.tables {
        let csv_path = table_path(out, t, "csv");
        write_csv(t, &csv_path).with_context(|| format!("writing {}", csv_path.display()))?;
        if svg {
            let svg_path = table_path(out, t, "svg");
            write_svg(t, &svg_path).with_context(|| format!("writing {}", svg_path.display()))?;
        }
    }
    Ok(())
}

fn run() -> anyhow::Result<()> {
    let args = parse_args(std::env::args_os()).unwrap_or_else(|e| e.exit());
    let spec = args.to_spec()?;
    if args.svg && args.out.is_none() {
        anyhow::bail!("--svg needs --out to name the chart files");
    }
    let result = run_experiment(&spec)?;
    print_summary(&spec, &result);
    if let Some(out) = &args.out {
        write_outputs(&result, out, args.svg)?;
    }
    if let Some(dir) = &args.qasm_dir {
        let files = emit_qasm(&spec, dir).with_context(|| format!("writing QASM to {}", dir.display()))?;
        println!("wrote {} OpenQASM files to {}", files.len(), dir.display());
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
