//! `cosetlab`: subgroup classes, coset geometries, and MIC scans for
//! finitely presented groups.

use clap::{Args, Parser, Subcommand};
use cosetlab::low_index::low_index_subgroups;
use cosetlab::mic::{mic_scan, ScanBudget};
use cosetlab::permgroup::PermGroup;
use cosetlab::presentations::{catalog_lookup, catalog_names, parse_presentation, Presentation};
use cosetlab::report::{analyze, emit_json, emit_tsv, geometry_out, mic_out, RunConfig};
use std::path::Path;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "cosetlab",
    version,
    about = "coset geometries and MIC fiducials of finitely presented groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GroupArg {
    /// Catalog name (trefoil, fig8, trefoil-0surgery, fig8-0surgery,
    /// a6-demo) or a path to a presentation file.
    #[arg(long)]
    group: String,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline over an index range and write reports.
    Analyze {
        #[command(flatten)]
        group: GroupArg,
        /// Index or range, e.g. `4` or `4..6` (inclusive).
        #[arg(long)]
        index: String,
        /// Stabilizer convention for lines: `excl` or `incl`.
        #[arg(long, default_value = "excl")]
        convention: String,
        /// Gram rank / clustering tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Group-order cap for the exhaustive candidate scan.
        #[arg(long, default_value_t = 20_000)]
        element_cap: usize,
        /// Use the exhaustive candidate scan for groups within the element
        /// cap (also the default; kept as an explicit switch for scripts).
        #[arg(long, default_value_t = false)]
        exhaustive: bool,
        /// Seed for the heuristic sampling fallback.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// JSON report path.
        #[arg(long)]
        out: String,
        /// Optional TSV table path.
        #[arg(long)]
        tsv: Option<String>,
    },
    /// Print the subgroup-class counts for indices 1..=max.
    Eta {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        max: usize,
    },
    /// Print the incidence geometry of one subgroup class as JSON.
    Geometry {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        index: usize,
        /// 1-based class ordinal within the index.
        #[arg(long, default_value_t = 1)]
        class: usize,
        #[arg(long, default_value = "excl")]
        convention: String,
    },
    /// Print the MIC scan of one subgroup class as JSON.
    Mic {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        index: usize,
        #[arg(long, default_value_t = 1)]
        class: usize,
        #[arg(long, default_value_t = 20_000)]
        element_cap: usize,
        #[arg(long, default_value_t = false)]
        exhaustive: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

fn resolve_group(spec: &str) -> Result<Presentation, String> {
    if let Ok(entry) = catalog_lookup(spec) {
        return Ok(entry.presentation);
    }
    if Path::new(spec).exists() {
        let text = std::fs::read_to_string(spec).map_err(|e| format!("reading {spec}: {e}"))?;
        return parse_presentation(&text).map_err(|e| format!("parsing {spec}: {e}"));
    }
    Err(format!(
        "`{spec}` is neither a catalog group ({}) nor a file",
        catalog_names().join(", ")
    ))
}

fn parse_index_range(s: &str) -> Result<(usize, usize), String> {
    let parse_one =
        |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad index `{t}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse_one(a)?, parse_one(b)?),
        None => {
            let d = parse_one(s)?;
            (d, d)
        }
    };
    if lo < 1 || hi < lo || hi > 24 {
        return Err(format!("index range {lo}..{hi} must sit within 1..24"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            group,
            index,
            convention,
            tol,
            element_cap,
            exhaustive,
            seed,
            out,
            tsv,
        } => {
            let pres = resolve_group(&group.group)?;
            let (index_lo, index_hi) = parse_index_range(&index)?;
            if !matches!(convention.as_str(), "excl" | "incl") {
                return Err(format!("--convention must be excl or incl, got `{convention}`"));
            }
            let config = RunConfig {
                group: group.group.clone(),
                index_lo,
                index_hi,
                convention,
                tol,
                element_cap,
                exhaustive,
                seed,
            };
            let report = analyze(&pres, &config);
            std::fs::write(&out, emit_json(&report)).map_err(|e| format!("writing {out}: {e}"))?;
            if let Some(tsv_path) = tsv {
                std::fs::write(&tsv_path, emit_tsv(&report))
                    .map_err(|e| format!("writing {tsv_path}: {e}"))?;
            }
            Ok(if report.errors.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Eta { group, max } => {
            let pres = resolve_group(&group.group)?;
            let eta = cosetlab::low_index::eta_sequence(&pres, max).map_err(|e| e.to_string())?;
            println!("{}", eta.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","));
            Ok(ExitCode::SUCCESS)
        }
        Command::Geometry { group, index, class, convention } => {
            let pres = resolve_group(&group.group)?;
            let config = RunConfig {
                group: group.group.clone(),
                index_lo: index,
                index_hi: index,
                convention,
                ..RunConfig::default()
            };
            let records = low_index_subgroups(&pres, index).map_err(|e| e.to_string())?;
            let record = records
                .get(class.checked_sub(1).ok_or("class ordinals are 1-based")?)
                .ok_or_else(|| format!("index {index} has only {} classes", records.len()))?;
            let perm_group = PermGroup::new(index, record.table.permutation_rep());
            let geom =
                cosetlab::geometry::build_geometry(&perm_group, config.active_convention());
            let (out, _) = geometry_out(&geom, record, config.active_convention());
            println!("{}", emit_json(&out));
            Ok(ExitCode::SUCCESS)
        }
        Command::Mic { group, index, class, element_cap, exhaustive, seed, tol } => {
            let pres = resolve_group(&group.group)?;
            let records = low_index_subgroups(&pres, index).map_err(|e| e.to_string())?;
            let record = records
                .get(class.checked_sub(1).ok_or("class ordinals are 1-based")?)
                .ok_or_else(|| format!("index {index} has only {} classes", records.len()))?;
            let budget = ScanBudget {
                element_cap: if exhaustive { element_cap.max(20_000) } else { element_cap },
                seed,
                rank_tol: tol,
                cluster_tol: tol,
                ..ScanBudget::default()
            };
            let mic = mic_scan(record, &budget);
            println!("{}", emit_json(&mic_out(&mic)));
            Ok(ExitCode::SUCCESS)
        }
    }
}
