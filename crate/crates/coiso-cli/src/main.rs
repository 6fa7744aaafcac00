//! Batch interface to the coiso engine: per-pair reports, catalog-wide
//! verification, branching queries and Poisson checks, with machine-readable
//! output. Runs are byte-deterministic for a fixed seed and catalog.

use clap::{Parser, Subcommand, ValueEnum};
use coiso::catalog::{self, Catalog, CatalogEntry, Status, VerifyConfig};
use coiso::{homog, poisson, repth};
use rayon::prelude::*;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "coiso",
    version,
    about = "Exact invariants of coisotropy representations: complexity, rank, nullcones, branching, Poisson checks"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for all sampled-point checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Coordinate-sum bound for multiplicity scans
    #[arg(long, global = true, default_value_t = 3)]
    bound: u32,
    /// Catalog file or directory (defaults to the bundled catalog)
    #[arg(long, global = true, env = "COISO_CATALOG")]
    catalog: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full derived report for one catalog pair
    Report { label: String },
    /// Recompute every expected value of every catalog entry
    VerifyAll,
    /// Branch a module of G along a catalog pair ("adjoint" or fundamental
    /// coordinates like "1,0,2" with torus charges after a semicolon)
    Branch { label: String, weight: String },
    /// Relation, invariance and Poisson-rank checks for one entry
    PoissonCheck {
        label: String,
        /// Sampled points per relation
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// List catalog entries
    List,
}

fn load_catalog(path: &Option<PathBuf>) -> Result<Catalog, String> {
    match path {
        None => Ok(Catalog::bundled()),
        Some(p) => Catalog::load(p).map_err(|e| e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let catalog = match load_catalog(&cli.catalog) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.cmd {
        Cmd::Report { label } => cmd_report(&cli, &catalog, label),
        Cmd::VerifyAll => cmd_verify_all(&cli, &catalog),
        Cmd::Branch { label, weight } => cmd_branch(&cli, &catalog, label, weight),
        Cmd::PoissonCheck { label, points } => cmd_poisson(&cli, &catalog, label, *points),
        Cmd::List => cmd_list(&cli, &catalog),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn verify_config(cli: &Cli) -> VerifyConfig {
    VerifyConfig {
        seed: cli.seed,
        multiplicity_bound: Some(cli.bound),
        ..VerifyConfig::default()
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

fn cmd_report(cli: &Cli, catalog: &Catalog, label: &str) -> Result<bool, String> {
    let entry = catalog.get(label).map_err(|e| e.to_string())?;
    let report = homog::verify_theorems(&entry.embedding).map_err(|e| e.to_string())?;
    let one_sided = entry
        .one_sided
        .map(|(c, r)| homog::one_sided_report(&entry.embedding, c, r))
        .transpose()
        .map_err(|e| e.to_string())?;
    match cli.format {
        Format::Json => {
            let mut v = serde_json::to_value(&report).map_err(|e| e.to_string())?;
            if let Some(os) = &one_sided {
                v["one_sided"] = serde_json::to_value(os).map_err(|e| e.to_string())?;
            }
            v["provenance"] = serde_json::Value::String(entry.provenance.clone());
            println!(
                "{}",
                serde_json::to_string_pretty(&v).map_err(|e| e.to_string())?
            );
        }
        Format::Csv => {
            println!(
                "label,ctilde,rtilde,quotient_dim,fixed_dim,nullcone_dim,defect,s_regular,generic_stab_rank,diamond1,diamond2,checks"
            );
            let checks: Vec<String> = report
                .inequality_verdicts
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            println!(
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                csv_escape(&report.label),
                report.c_tilde,
                report.r_tilde,
                report.quotient_dim,
                report.fixed_dim,
                report.nullcone_dim,
                report.defect,
                report.s_regular,
                report.generic_stab_rank,
                report.diamond_verdicts.0,
                report.diamond_verdicts.1,
                csv_escape(&checks.join(";"))
            );
        }
        Format::Text => {
            println!("pair {} ({})", report.label, entry.provenance);
            println!("  complexity      {}", report.c_tilde);
            println!("  rank            {}", report.r_tilde);
            println!("  quotient dim    {}", report.quotient_dim);
            println!("  fixed space dim {}", report.fixed_dim);
            println!("  nullcone dim    {}", report.nullcone_dim);
            println!("  defect          {}", report.defect);
            println!("  s-regular       {}", report.s_regular);
            println!(
                "  torus conditions: multiplicities ≤ 2: {}, doubled weights ≤ 2·rk: {}",
                report.diamond_verdicts.0, report.diamond_verdicts.1
            );
            for (name, verdict) in &report.inequality_verdicts {
                println!("  check {name}: {verdict}");
            }
            if let Some(os) = &one_sided {
                println!(
                    "  one-sided: c = {}, r = {}, dim m = {}, quotient dim = {}, nullcone in [{}, {}], cone intersection = {}, upper bound = {}",
                    os.c,
                    os.r,
                    os.dim_m,
                    os.quotient_dim,
                    os.nullcone_lo,
                    os.nullcone_hi,
                    os.cone_intersection_dim,
                    os.gerry_bound
                );
            }
        }
    }
    Ok(report.all_checks_pass())
}

// ---------------------------------------------------------------------------
// verify-all
// ---------------------------------------------------------------------------

fn cmd_verify_all(cli: &Cli, catalog: &Catalog) -> Result<bool, String> {
    let cfg = verify_config(cli);
    // fan out across entries; the output is re-sorted by label afterwards, so
    // scheduling cannot leak into the byte stream
    let mut verdicts: Vec<catalog::EntryVerdict> = catalog
        .entries
        .par_iter()
        .map(|e| catalog::verify_entry(e, &cfg))
        .collect();
    verdicts.sort_by(|a, b| a.label.cmp(&b.label));
    let total_mismatches: usize = verdicts.iter().map(|v| v.mismatches()).sum();
    let clean = total_mismatches == 0;
    match cli.format {
        Format::Json => {
            let arr: Vec<serde_json::Value> = verdicts
                .iter()
                .map(|v| {
                    let results: Vec<serde_json::Value> = v
                        .results
                        .iter()
                        .map(|r| {
                            let mut o = serde_json::Map::new();
                            o.insert("name".into(), r.name.clone().into());
                            match &r.status {
                                Status::Match { detail } => {
                                    o.insert("status".into(), "match".into());
                                    o.insert("detail".into(), detail.clone().into());
                                }
                                Status::Mismatch { expected, computed } => {
                                    o.insert("status".into(), "mismatch".into());
                                    o.insert("expected".into(), expected.clone().into());
                                    o.insert("computed".into(), computed.clone().into());
                                }
                                Status::Skipped { reason } => {
                                    o.insert("status".into(), "skipped".into());
                                    o.insert("reason".into(), reason.clone().into());
                                }
                            }
                            o.into()
                        })
                        .collect();
                    serde_json::json!({ "label": v.label, "results": results })
                })
                .collect();
            let doc = serde_json::json!({
                "seed": cli.seed,
                "entries": arr,
                "mismatches": total_mismatches,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?
            );
        }
        Format::Csv => {
            println!("label,quantity,status,expected,computed");
            for v in &verdicts {
                for r in &v.results {
                    let (status, expected, computed) = match &r.status {
                        Status::Match { detail } => ("match", String::new(), detail.clone()),
                        Status::Mismatch { expected, computed } => {
                            ("mismatch", expected.clone(), computed.clone())
                        }
                        Status::Skipped { reason } => ("skipped", String::new(), reason.clone()),
                    };
                    println!(
                        "{},{},{},{},{}",
                        csv_escape(&v.label),
                        csv_escape(&r.name),
                        status,
                        csv_escape(&expected),
                        csv_escape(&computed)
                    );
                }
            }
        }
        Format::Text => {
            for v in &verdicts {
                print!("{v}");
            }
            println!(
                "verified {} entries, {} mismatches: {}",
                verdicts.len(),
                total_mismatches,
                if clean { "PASS" } else { "FAIL" }
            );
        }
    }
    Ok(clean)
}

// ---------------------------------------------------------------------------
// branch
// ---------------------------------------------------------------------------

fn cmd_branch(cli: &Cli, catalog: &Catalog, label: &str, weight: &str) -> Result<bool, String> {
    let entry = catalog.get(label).map_err(|e| e.to_string())?;
    let e = &entry.embedding;
    let dec = if weight == "adjoint" {
        repth::branch_adjoint(e).map_err(|x| x.to_string())?
    } else {
        let w = repth::parse_weight(&e.big, weight).map_err(|x| x.to_string())?;
        repth::branch(e, &w).map_err(|x| x.to_string())?
    };
    match cli.format {
        Format::Json => {
            let summands: Vec<serde_json::Value> = dec
                .summands
                .iter()
                .map(|(w, m)| {
                    serde_json::json!({
                        "coords": w.coords,
                        "torus": w.torus.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                        "mult": m,
                        "notation": repth::weight_notation(&e.small, w),
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "label": label,
                    "weight": weight,
                    "summands": summands,
                }))
                .map_err(|x| x.to_string())?
            );
        }
        Format::Csv => {
            println!("coords,torus,mult");
            for (w, m) in &dec.summands {
                let coords: Vec<String> = w.coords.iter().map(|c| c.to_string()).collect();
                let torus: Vec<String> = w.torus.iter().map(|c| c.to_string()).collect();
                println!(
                    "{},{},{}",
                    csv_escape(&coords.join(" ")),
                    csv_escape(&torus.join(" ")),
                    m
                );
            }
        }
        Format::Text => {
            println!("{}", repth::decomposition_notation(&e.small, &dec));
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// poisson-check
// ---------------------------------------------------------------------------

fn cmd_poisson(cli: &Cli, catalog: &Catalog, label: &str, points: usize) -> Result<bool, String> {
    let entry = catalog.get(label).map_err(|e| e.to_string())?;
    if entry.invariant_sets.is_empty() {
        return Err(format!("{label} carries no invariant sets"));
    }
    let cfg = VerifyConfig {
        seed: cli.seed,
        relation_points: points,
        ..VerifyConfig::default()
    };
    let mut clean = true;
    let mut lines: Vec<serde_json::Value> = Vec::new();
    for data in &entry.invariant_sets {
        let set = catalog::resolve_invariant_set(entry, data).map_err(|e| e.to_string())?;
        set.check_invariance().map_err(|e| e.to_string())?;
        let mut rng = entry_seeded_rng(cli.seed.wrapping_add(1), &data.label);
        let outcomes = poisson::verify_relations(&set, points, &mut rng, cfg.height);
        for o in &outcomes {
            let ok = o.as_expected;
            clean &= ok;
            match cli.format {
                Format::Json => lines.push(serde_json::json!({
                    "set": data.label,
                    "kind": "relation",
                    "name": o.name,
                    "holds": o.holds,
                    "as_expected": ok,
                })),
                _ => println!(
                    "{label} {}::{}: holds={} ({})",
                    data.label,
                    o.name,
                    o.holds,
                    if ok { "as expected" } else { "UNEXPECTED" }
                ),
            }
        }
        if set.expected_rank.is_some() || set.rank_bound.is_some() {
            let mut rng = entry_seeded_rng(cli.seed.wrapping_add(2), &data.label);
            let sample = poisson::generic_rank(&set, &mut rng, cfg.height, cfg.rank_stabilize)
                .map_err(|e| e.to_string())?;
            let bound_ok = set
                .rank_bound
                .is_none_or(|b| sample.ranks.iter().all(|&r| r as i64 <= b));
            let rank_ok = set
                .expected_rank
                .is_none_or(|r| sample.max_rank as i64 == r);
            let ok = bound_ok && rank_ok && sample.stabilized;
            clean &= ok;
            match cli.format {
                Format::Json => lines.push(serde_json::json!({
                    "set": data.label,
                    "kind": "rank",
                    "max_rank": sample.max_rank,
                    "stabilized": sample.stabilized,
                    "expected": set.expected_rank,
                    "bound": set.rank_bound,
                    "ok": ok,
                })),
                _ => println!(
                    "{label} {}::rank: {} over {} samples ({})",
                    data.label,
                    sample.max_rank,
                    sample.ranks.len(),
                    if ok { "ok" } else { "FAIL" }
                ),
            }
        }
    }
    if cli.format == Format::Json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "label": label,
                "points": points,
                "checks": lines,
                "pass": clean,
            }))
            .map_err(|e| e.to_string())?
        );
    } else {
        println!("{label}: {}", if clean { "PASS" } else { "FAIL" });
    }
    Ok(clean)
}

fn entry_seeded_rng(seed: u64, label: &str) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ h)
}

// ---------------------------------------------------------------------------
// list
// ---------------------------------------------------------------------------

fn cmd_list(cli: &Cli, catalog: &Catalog) -> Result<bool, String> {
    match cli.format {
        Format::Json => {
            let arr: Vec<serde_json::Value> = catalog.entries.iter().map(list_line).collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&arr).map_err(|e| e.to_string())?
            );
        }
        Format::Csv => {
            println!("label,big,small,proper,provenance");
            for e in &catalog.entries {
                println!(
                    "{},{},{},{},{}",
                    csv_escape(&e.label),
                    csv_escape(&group_name(&e.embedding.big)),
                    csv_escape(&group_name(&e.embedding.small)),
                    e.embedding.proper,
                    csv_escape(&e.provenance)
                );
            }
        }
        Format::Text => {
            for e in &catalog.entries {
                println!(
                    "{:16} {} ⊃ {}  ({})",
                    e.label,
                    group_name(&e.embedding.big),
                    group_name(&e.embedding.small),
                    e.provenance
                );
            }
        }
    }
    Ok(true)
}

fn group_name(g: &repth::ReductiveSpec) -> String {
    let mut parts: Vec<String> = g.factors.iter().map(|t| t.to_string()).collect();
    if g.torus_rank > 0 {
        parts.push(format!("T{}", g.torus_rank));
    }
    if parts.is_empty() {
        "T0".into()
    } else {
        parts.join("x")
    }
}

fn list_line(e: &CatalogEntry) -> serde_json::Value {
    serde_json::json!({
        "label": e.label,
        "big": group_name(&e.embedding.big),
        "small": group_name(&e.embedding.small),
        "proper": e.embedding.proper,
        "provenance": e.provenance,
        "has_realization": e.realization.is_some(),
        "invariant_sets": e.invariant_sets.iter().map(|s| s.label.clone()).collect::<Vec<_>>(),
        "one_sided": e.one_sided.map(|(c, r)| serde_json::json!({"c": c, "r": r})),
    })
}
