//! `flipgraph` command-line front end.
//!
//! Triangulations are given as JSON files or constructor expressions:
//! `base` / `base:<surface>` (the base triangulation), `gamma:<i>` (position
//! `i` on the flip-graph of the cylinder with one point per boundary curve)
//! and `walk:<n>` (`n` seeded random flips from the base of `--surface`).
//!
//! Exit codes: 0 pass, 1 check failure, 2 budget exceeded, 3 input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use flipgraph::bounds;
use flipgraph::explore::{self, sample_roots, Budget, FiniteGraph};
use flipgraph::frame::FrameSpec;
use flipgraph::harness::{self, VerifyOptions};
use flipgraph::{ContractionContext, Error, ExplorationCache, Frame, Regime, SurfaceSig, Triangulation};

#[derive(Parser)]
#[command(name = "flipgraph", version, about = "Flip-graphs of triangulated genus-0 marked surfaces")]
struct Cli {
    #[command(flatten)]
    g: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Global {
    /// Surface as shorthand (disk:n, pdisk:p,n, cyl:m1,m2, sphere:p) or JSON.
    #[arg(long, global = true)]
    surface: Option<String>,
    #[arg(long, global = true)]
    radius: Option<u32>,
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget_states: usize,
    #[arg(long, global = true, default_value_t = 8 << 30)]
    budget_bytes: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Cache file to write (explore, ball) or read (export).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// κ, marked points, boundary curves and growth regime of a surface.
    Surface,
    /// Breadth-first exploration from the base triangulation.
    Explore,
    /// Distance and number of geodesics between two triangulations.
    Geodesics {
        from: String,
        to: String,
        /// Also list up to this many geodesics.
        #[arg(long)]
        list: Option<usize>,
    },
    /// Flip distance between two triangulations.
    Distance { from: String, to: String },
    /// Ball sizes around a triangulation.
    Ball { center: String },
    /// Largest geodesic count per distance (exact on finite flip-graphs,
    /// sampled lower bounds otherwise).
    Deltak {
        /// Number of sampled roots on infinite flip-graphs.
        #[arg(long, default_value_t = 8)]
        roots: usize,
        /// Random-walk length used to sample roots.
        #[arg(long, default_value_t = 6)]
        walk: u32,
    },
    /// Contract a boundary arc of a triangulation.
    Contract {
        triangulation: String,
        /// Endpoints of the boundary arc, as `tail,head`.
        #[arg(long)]
        arc: String,
        /// Endpoint merged away; defaults to the head.
        #[arg(long)]
        removed: Option<u32>,
    },
    /// Lift a contracted triangulation back to the source surface.
    Section { triangulation: String },
    /// Closed-form bounds per k.
    Bounds,
    /// Run a verification suite.
    Verify { suite: String },
    /// Export a cache file as DOT or JSON.
    Export {
        cache_file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

/// Failed checks, reported with exit code 1.
#[derive(Debug)]
struct CheckFailure;

impl std::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for CheckFailure {}

/// A verification check ran out of budget.
#[derive(Debug)]
struct BudgetFailure;

impl std::fmt::Display for BudgetFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("a check exceeded the budget")
    }
}

impl std::error::Error for BudgetFailure {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = if e.is::<CheckFailure>() {
                1
            } else if e.is::<BudgetFailure>() || matches!(e.downcast_ref::<Error>(), Some(Error::BudgetExceeded { .. })) {
                2
            } else {
                3
            };
            if code != 1 {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}

impl Global {
    fn budget(&self) -> Budget {
        Budget { max_states: self.budget_states, max_bytes: self.budget_bytes, ..Budget::default() }
    }

    fn sig(&self) -> Result<SurfaceSig> {
        let s = self.surface.as_deref().ok_or_else(|| anyhow!("--surface is required"))?;
        parse_surface(s)
    }
}

fn parse_surface(s: &str) -> Result<SurfaceSig> {
    if !s.trim_start().starts_with('{') && Path::new(s).is_file() {
        return Ok(fs::read_to_string(s)?.parse()?);
    }
    Ok(s.parse()?)
}

/// Resolves a constructor expression or a JSON file.
fn triangulation(expr: &str, g: &Global) -> Result<Triangulation> {
    if let Some(i) = expr.strip_prefix("gamma:") {
        let i: i64 = i.parse().with_context(|| format!("bad position {i:?}"))?;
        return Ok(bounds::gamma_position(i)?);
    }
    if expr == "base" {
        return Ok(Triangulation::base(&g.sig()?)?);
    }
    if let Some(s) = expr.strip_prefix("base:") {
        return Ok(Triangulation::base(&parse_surface(s)?)?);
    }
    if let Some(n) = expr.strip_prefix("walk:") {
        let n: u32 = n.parse().with_context(|| format!("bad walk length {n:?}"))?;
        let t = Triangulation::base(&g.sig()?)?;
        return Ok(sample_roots(&t, 1, n, g.seed).pop().expect("one root"));
    }
    let text = fs::read_to_string(expr).with_context(|| format!("reading {expr}"))?;
    Ok(Triangulation::from_json_str(&text)?)
}

/// Writes to stdout; a closed pipe ends output quietly.
fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    if out.write_all(s.as_bytes()).and_then(|_| out.flush()).is_err() {
        std::process::exit(0);
    }
}

fn print(g: &Global, value: serde_json::Value, text: impl FnOnce() -> String) {
    if g.json {
        emit(&format!("{}\n", serde_json::to_string_pretty(&value).expect("serializable")));
    } else {
        emit(&text());
    }
}

fn write_cache(path: &Path, cache: &ExplorationCache) -> Result<()> {
    let mut f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    cache.write_to(&mut f)?;
    f.flush()?;
    Ok(())
}

/// Explores around `t`, writes the cache if asked, prints ball sizes.
fn ball_command(g: &Global, t: &Triangulation, radius: u32) -> Result<()> {
    let r = explore::explore(t, radius, &g.budget(), false, None);
    let exceeded = r.exceeded;
    let (reached, states) = (r.reached, r.len());
    let cache = ExplorationCache::from_region(t, &r);
    if let Some(p) = &g.cache {
        write_cache(p, &cache)?;
    }
    let sizes = cache.ball_sizes();
    print(
        g,
        json!({
            "surface": cache.header.surface,
            "root": cache.root.to_hex(),
            "radius": radius,
            "reached": reached,
            "vertices": cache.len(),
            "edges": cache.edge_count(),
            "closed": cache.closed,
            "partial": cache.partial,
            "ball_sizes": sizes,
        }),
        || {
            let mut s = format!("surface {}  vertices {}  edges {}  closed {}  partial {}\n", cache.header.surface, cache.len(), cache.edge_count(), cache.closed, cache.partial);
            s.push_str("k\tball\n");
            for (k, b) in sizes.iter().enumerate() {
                s.push_str(&format!("{k}\t{b}\n"));
            }
            s
        },
    );
    if exceeded {
        return Err(Error::BudgetExceeded { reached_radius: reached, states }.into());
    }
    Ok(())
}

fn parse_arc(s: &str) -> Result<(u32, u32)> {
    let (a, b) = s.split_once(',').ok_or_else(|| anyhow!("--arc expects tail,head"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn run(cli: &Cli) -> Result<()> {
    let g = &cli.g;
    match &cli.cmd {
        Cmd::Surface => {
            let s = g.sig()?;
            let regime = s.regime();
            print(
                g,
                json!({
                    "surface": s.shorthand(),
                    "signature": s,
                    "kappa": s.kappa(),
                    "n": s.n(),
                    "b": s.b(),
                    "triangles": s.triangles(),
                    "regime": regime,
                    "star": s.star(),
                }),
                || format!("surface {}\nkappa {}\nn {}\nb {}\ntriangles {}\nregime {:?}\n", s.shorthand(), s.kappa(), s.n(), s.b(), s.triangles(), regime),
            );
        }
        Cmd::Explore => {
            let t = Triangulation::base(&g.sig()?)?;
            ball_command(g, &t, g.radius.unwrap_or(10))?;
        }
        Cmd::Ball { center } => {
            let t = triangulation(center, g)?;
            ball_command(g, &t, g.radius.unwrap_or(3))?;
        }
        Cmd::Geodesics { from, to, list } => {
            let (s, t) = (triangulation(from, g)?, triangulation(to, g)?);
            let rep = explore::count_geodesics(&s, &t, &g.budget(), *list)?;
            // Always JSON: the report is the output format.
            emit(&format!("{}\n", serde_json::to_string_pretty(&rep)?));
        }
        Cmd::Distance { from, to } => {
            let (s, t) = (triangulation(from, g)?, triangulation(to, g)?);
            let d = explore::distance(&s, &t, &g.budget())?;
            print(g, json!({ "distance": d }), || format!("{d}\n"));
        }
        Cmd::Deltak { roots, walk } => {
            let sig = g.sig()?;
            let base = Triangulation::base(&sig)?;
            let budget = g.budget();
            let table = if sig.regime() == Regime::Finite {
                FiniteGraph::new(&base, &budget)?.delta_table(budget.exec)
            } else {
                let mut rs = vec![base.clone()];
                rs.extend(sample_roots(&base, *roots, *walk, g.seed));
                explore::delta_table(&rs, g.radius.unwrap_or(4), &budget, false)?
            };
            let tilde = table.tilde();
            print(g, json!({ "surface": sig.shorthand(), "seed": g.seed, "table": table, "tilde": tilde.iter().map(|v| v.to_string()).collect::<Vec<_>>() }), || {
                let mut s = format!("# {} ({})\nk\tdelta\tdelta_tilde\n", sig.shorthand(), if table.exact { "exact" } else { "lower bound from sampled roots" });
                for (k, v) in table.values.iter().enumerate() {
                    s.push_str(&format!("{k}\t{v}\t{}\n", tilde[k]));
                }
                s
            });
        }
        Cmd::Contract { triangulation: expr, arc, removed } => {
            let t = triangulation(expr, g)?;
            let (tail, head) = parse_arc(arc)?;
            let ctx = ContractionContext::new(t.frame(), tail, head, removed.unwrap_or(head))?;
            let c = ctx.contract(&t)?;
            emit(&format!("{}\n", serde_json::to_string_pretty(&c.to_json())?));
        }
        Cmd::Section { triangulation: expr } => {
            let t = triangulation(expr, g)?;
            let spec = &t.frame().spec;
            let step = *spec.contractions.last().ok_or_else(|| anyhow!("the triangulation is not on a contracted surface"))?;
            let parent = FrameSpec { root: spec.root.clone(), contractions: spec.contractions[..spec.contractions.len() - 1].to_vec() };
            let ctx = ContractionContext::new(&Frame::from_spec(&parent)?, step.tail, step.head, step.removed)?;
            let lift = ctx.section(&t)?;
            emit(&format!("{}\n", serde_json::to_string_pretty(&lift.to_json())?));
        }
        Cmd::Bounds => bounds_command(g)?,
        Cmd::Verify { suite } => {
            let opts = VerifyOptions {
                seed: g.seed,
                max_states: g.budget_states,
                max_bytes: g.budget_bytes,
                radius: g.radius,
                surface: g.surface.as_deref().map(parse_surface).transpose()?,
            };
            let report = harness::verify(suite, &opts)?;
            print(g, serde_json::to_value(&report)?, || report.to_text());
            if report.budget_exceeded() {
                return Err(BudgetFailure.into());
            }
            if !report.pass {
                return Err(CheckFailure.into());
            }
        }
        Cmd::Export { cache_file, format } => {
            let path = cache_file.as_ref().or(g.cache.as_ref()).ok_or_else(|| anyhow!("no cache file given"))?;
            let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let cache = ExplorationCache::from_bytes(&bytes)?;
            match format {
                Format::Dot => emit(&cache.to_dot()),
                Format::Json => emit(&format!("{}\n", serde_json::to_string_pretty(&cache.to_json())?)),
            }
        }
    }
    Ok(())
}

fn bounds_command(g: &Global) -> Result<()> {
    let sig = g.sig()?;
    let k_max = g.radius.unwrap_or(10);
    if k_max == 0 {
        bail!("--radius must be at least 1");
    }
    let (kappa, n, b) = (sig.kappa(), sig.n(), sig.b());
    let cylinder = sig.punctures == 0 && b == 2;
    let exponential = bounds::qualifies(&sig);
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let mut row = json!({ "k": k, "naive_upper": bounds::naive_upper_bound(kappa, k).to_string() });
        if cylinder {
            row["cylinder_upper"] = json!(bounds::cylinder_upper_bound(kappa, n, b, k)?.to_string());
        }
        if exponential && k >= 2 {
            let (binom, lower) = bounds::witness_expectation(k)?;
            row["witness_count"] = json!(binom.to_string());
            row["exp_lower"] = json!(lower);
        }
        rows.push(row);
    }
    if g.json {
        emit(&format!("{}\n", serde_json::to_string_pretty(&json!({ "surface": sig.shorthand(), "kappa": kappa, "n": n, "b": b, "rows": rows }))?));
        return Ok(());
    }
    let mut cols = vec!["k", "naive_upper"];
    if cylinder {
        cols.push("cylinder_upper");
    }
    if exponential {
        cols.extend(["witness_count", "exp_lower"]);
    }
    emit(&format!("{}\n", cols.join("\t")));
    for row in &rows {
        let cells: Vec<String> = cols
            .iter()
            .map(|c| match &row[*c] {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Null => "-".into(),
                v => v.to_string(),
            })
            .collect();
        emit(&format!("{}\n", cells.join("\t")));
    }
    Ok(())
}
