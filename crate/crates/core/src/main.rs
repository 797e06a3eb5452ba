use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use g2cover::acceptance;
use g2cover::amalgam::{certify_universal, export_presentation, standard_amalgam};
use g2cover::covers::{flag_complex, sheets};
use g2cover::fpgroup::{tietze_reduce, todd_coxeter};
use g2cover::incidence::{GeometryJson, IncidenceGeometry};
use g2cover::permgroup::flag_orbits;
use g2cover::report::{Report, RunConfig};
use g2cover::workbench::Workbench;
use g2cover::Error;

/// Geometries of the split Cayley hexagon in W(5,q), q a power of two.
///
/// Machine output is JSON: written to --out when given (with a summary on
/// standard output), otherwise printed on standard output (with the summary
/// on standard error). Exit codes: 0 pass, 1 check failed, 2 resource cap
/// reached, 3 usage or configuration error.
#[derive(Parser, Debug)]
#[command(name = "g2cover", version)]
struct Cli {
    /// Run the acceptance criteria (1-10; add --stretch for 11).
    #[arg(long)]
    verify_all: bool,
    /// Include the non-gating q = 4 criterion in --verify-all.
    #[arg(long)]
    stretch: bool,
    /// Field order, a power of two.
    #[arg(long, global = true, default_value_t = 2)]
    q: u32,
    /// Geometry variant 0..3.
    #[arg(long, global = true)]
    gamma: Option<u8>,
    /// Maximum number of live cosets in an enumeration.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Maximum number of subspaces enumerated while building the model.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Output path for the JSON report.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the geometry Γ<gamma> over GF(q) as JSON.
    Build,
    /// Order of the fundamental group of the flag complex.
    Pi1 {
        /// Read the geometry from a file written by `build` instead.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Line and plane census of PG(5,q).
    Census,
    /// Orbits of G2(2) on flags of the given types.
    Orbits {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1u8, 2, 3])]
        flags: Vec<u8>,
    },
    /// Certificate for the amalgam of parabolics (default Γ2).
    Certify,
    /// Presentation of the universal enveloping group of the amalgam.
    ExportPresentation {
        /// Also run coset enumeration on the presentation.
        #[arg(long)]
        enumerate: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) | Error::Parse { .. } => 3,
            Error::Resource(_) => 2,
            Error::Domain(_) | Error::Hypothesis(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 3, message: msg.into() }
}

/// A finished command: the JSON text, a one-line summary and the exit code.
struct Outcome {
    json: String,
    summary: String,
    code: u8,
}

fn emit<T: Serialize>(cfg: &RunConfig, claim: &str, body: T, extra: &[u8], summary: String, code: u8) -> Outcome {
    Outcome { json: Report::new(cfg, claim, body, extra).to_json(), summary, code }
}

fn config(cli: &Cli, command: &str, variant: Option<u8>) -> Result<RunConfig, Failure> {
    let mut cfg = RunConfig::new(command, variant, cli.q);
    if let Some(c) = cli.cap {
        cfg.coset_cap = c;
    }
    if let Some(b) = cli.budget {
        cfg.enumeration_budget = b;
    }
    cfg.output = cli.out.as_ref().map(|p| p.display().to_string());
    cfg.validate()?;
    Ok(cfg)
}

fn require_gamma(cli: &Cli) -> Result<u8, Failure> {
    cli.gamma.ok_or_else(|| usage("--gamma is required for this command"))
}

fn workbench(cfg: &RunConfig) -> Result<Workbench, Failure> {
    Ok(Workbench::with_budget(cfg.q, cfg.enumeration_budget)?)
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    if cli.verify_all {
        if cli.command.is_some() {
            return Err(usage("--verify-all does not take a subcommand"));
        }
        let cfg = config(cli, "verify-all", None)?;
        if cfg.q != 2 {
            return Err(usage("--verify-all runs at q = 2; the q = 4 criterion is enabled with --stretch"));
        }
        let results = acceptance::run_all(cli.stretch);
        for r in &results {
            if cli.out.is_some() {
                println!("{}", r.line());
            } else {
                eprintln!("{}", r.line());
            }
        }
        let failed: Vec<u8> = results.iter().filter(|r| r.gating && !r.passed).map(|r| r.id).collect();
        let body: Vec<_> = results
            .iter()
            .map(|r| json!({"id": r.id, "title": r.title, "gating": r.gating, "passed": r.passed, "detail": r.detail}))
            .collect();
        let summary = if failed.is_empty() {
            "all gating criteria passed".to_string()
        } else {
            format!("failed criteria {failed:?}")
        };
        let code = if failed.is_empty() { 0 } else { 1 };
        return Ok(emit(&cfg, "acceptance criteria", json!({"criteria": body, "failed": failed}), b"", summary, code));
    }
    let Some(command) = &cli.command else {
        return Err(usage("no command given; see --help"));
    };
    match command {
        Command::Build => {
            let v = require_gamma(cli)?;
            let cfg = config(cli, "build", Some(v))?;
            let gamma = workbench(&cfg)?.gamma(v)?;
            let counts: Vec<usize> = [1u8, 2, 3].iter().map(|&t| gamma.geometry.count_of_type(t)).collect();
            let summary = format!("Γ{v} over GF({}): {} elements {counts:?}", cfg.q, gamma.geometry.len());
            Ok(emit(&cfg, "element counts of the geometry by type", gamma.to_json(), b"", summary, 0))
        }
        Command::Pi1 { input } => {
            let (geo, variant, extra, q) = match input {
                Some(path) => {
                    let bytes =
                        std::fs::read(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
                    let parsed: GeometryJson = serde_json::from_slice(&bytes)
                        .map_err(|e| Failure { code: 3, message: format!("invalid geometry file: {e}") })?;
                    let geo = IncidenceGeometry::from_json(&parsed)?;
                    (geo, parsed.variant, bytes, parsed.q.map_or(cli.q, |q| q as u32))
                }
                None => {
                    let v = require_gamma(cli)?;
                    let cfg = config(cli, "pi1", Some(v))?;
                    (workbench(&cfg)?.gamma(v)?.geometry, Some(v), Vec::new(), cli.q)
                }
            };
            let mut cfg = config(cli, "pi1", variant)?;
            cfg.q = q;
            let complex = flag_complex(&geo)?;
            let r = sheets(&complex, cfg.coset_cap)?;
            let body = json!({
                "pi1_order": r.pi1_order,
                "cap": r.cap,
                "simply_connected": r.simply_connected(),
                "complex": {"vertices": complex.vertices, "edges": complex.edges.len(), "triangles": complex.triangles.len(),
                            "euler_characteristic": complex.euler_characteristic()},
            });
            let (summary, code) = match r.pi1_order {
                Some(t) => (format!("π1 has order {t}: the universal cover has {t} sheet(s)"), 0),
                None => (format!("coset enumeration exceeded the cap of {} live cosets", cfg.coset_cap), 2),
            };
            Ok(emit(&cfg, "order of the fundamental group of the flag complex", body, &extra, summary, code))
        }
        Command::Census => {
            let cfg = config(cli, "census", None)?;
            let c = workbench(&cfg)?.census();
            let summary = format!(
                "q = {}: {} lines, {} planes; generalized hexagon check {}",
                c.q,
                c.line_counts.total,
                c.plane_counts.total,
                if c.gh_check.passed { "passed" } else { "failed" }
            );
            let code = if c.gh_check.passed { 0 } else { 1 };
            Ok(emit(&cfg, "line and plane classes of PG(5,q)", c, b"", summary, code))
        }
        Command::Orbits { flags } => {
            let v = require_gamma(cli)?;
            let cfg = config(cli, "orbits", Some(v))?;
            let mut types = flags.clone();
            types.sort_unstable();
            types.dedup();
            if types.is_empty() || types.iter().any(|&t| !(1..=3).contains(&t)) {
                return Err(usage("--flags takes distinct types from 1,2,3"));
            }
            let wb = workbench(&cfg)?;
            let groups = wb.groups()?;
            let gamma = wb.gamma(v)?;
            let (action, _) = groups.action_on(&gamma.geometry)?;
            let o = flag_orbits(&action, &gamma.geometry, &types);
            let summary = format!(
                "{} flags of type {types:?} in {} orbit(s) of sizes {:?}",
                o.flag_count, o.orbit_count, o.orbit_sizes
            );
            Ok(emit(&cfg, "orbits of G2(2) on flags", o, b"", summary, 0))
        }
        Command::Certify => {
            let v = cli.gamma.unwrap_or(2);
            let cfg = config(cli, "certify", Some(v))?;
            let wb = workbench(&cfg)?;
            let groups = wb.groups()?;
            let gamma = wb.gamma(v)?;
            let cert = certify_universal(&format!("Γ{v}"), &gamma.geometry, &groups, cfg.coset_cap);
            let failed: Vec<&str> = cert.hypotheses.iter().filter(|h| !h.passed).map(|h| h.name.as_str()).collect();
            let summary = match &cert.conclusion {
                Some(c) => format!("{} route, all {} hypotheses hold: {c}", cert.route, cert.hypotheses.len()),
                None => format!("{} route, no conclusion; failed hypotheses {failed:?}", cert.route),
            };
            let code = if cert.passed() { 0 } else { 1 };
            Ok(emit(&cfg, "universal completion of the amalgam of parabolics", cert, b"", summary, code))
        }
        Command::ExportPresentation { enumerate } => {
            let v = cli.gamma.unwrap_or(2);
            let cfg = config(cli, "export-presentation", Some(v))?;
            let wb = workbench(&cfg)?;
            let groups = wb.groups()?;
            let gamma = wb.gamma(v)?;
            let a = standard_amalgam(&gamma.geometry, &groups)?;
            let p = export_presentation(&a, &groups.elements)?;
            let s1: usize = a.nodes.iter().map(|n| n.order * n.order).sum();
            let s2: usize = a.comparable_pairs().iter().map(|&(i, _)| a.nodes[i].order).sum();
            let s3 = a.fusion.as_ref().map_or(0, |f| a.nodes[f.j1].order);
            let order = enumerate.then(|| todd_coxeter(&tietze_reduce(&p), cfg.coset_cap));
            let nodes: BTreeMap<String, usize> = a.nodes.iter().map(|n| (n.name.clone(), n.order)).collect();
            let body = json!({
                "nodes": nodes,
                "fused": a.fusion.is_some(),
                "generators": p.num_generators(),
                "relators": p.relators().len(),
                "relator_sets": {"S1": s1, "S2": s2, "S3": s3},
                "order": order,
                "presentation": p.to_text(),
            });
            let mut summary = format!("{} generators, {} relators", p.num_generators(), p.relators().len());
            let mut code = 0;
            if let Some(o) = order {
                match o.finite() {
                    Some(n) => summary.push_str(&format!("; enveloping group of order {n}")),
                    None => {
                        summary.push_str("; enumeration exceeded the cap");
                        code = 2;
                    }
                }
            }
            Ok(emit(&cfg, "presentation of the universal enveloping group", body, b"", summary, code))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(o) => {
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &o.json) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(3);
                    }
                    println!("{}", o.summary);
                }
                None => {
                    print!("{}", o.json);
                    eprintln!("{}", o.summary);
                }
            }
            ExitCode::from(o.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
