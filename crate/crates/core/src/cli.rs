//! The `cinf` command line: load a workspace file and run one operation.
//!
//! Exit codes: 0 on success or a passed check, 1 on a failed check, 2 on a
//! usage, workspace or library error.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};

use crate::cmodule::{fiber_at_point, sequence_check};
use crate::cring::{
    find_r_points, is_r_point, localize, morphism_check, pushout, sample_points, RPoint, Ring,
    SearchParams, Verdict, CLUSTER_RADIUS, NEWTON_TOL,
};
use crate::geom::{regular_value_check, transverse_check};
use crate::linalg::RANK_REL_TOL;
use crate::quotient::{
    coarse_moduli, equivariant_cotangent, equivariant_module_check, groupoid_check,
    groupoid_from_action, invariant_generators, orbit_space, stabilizer, stack_fibre_product,
    EquivariantModule, QuotientStackDesc, StackMap,
};
use crate::workspace::{Item, Workspace};

#[derive(Parser, Debug)]
#[command(
    name = "cinf",
    version,
    about = "Finitely presented C-infinity rings at the command line"
)]
pub struct Cli {
    /// Workspace file with the named declarations.
    #[arg(short, long, global = true, value_name = "FILE")]
    pub workspace: Option<String>,
    /// Tolerance for point admission and numerical checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for point subsampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Search {
    /// Search box, one `lo:hi` per generator; defaults to -2:2 each.
    #[arg(long = "box", value_name = "LO:HI,...", allow_hyphen_values = true)]
    pub bounds: Option<String>,
    /// Grid step of the search.
    #[arg(long, default_value_t = 0.25)]
    pub step: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Echo the workspace in canonical form.
    Parse {
        /// Workspace file (instead of --workspace).
        file: Option<String>,
    },
    /// Pushout of two morphisms with a common source.
    Pushout { left: String, right: String },
    /// Localization at an element.
    Localize { elem: String },
    /// Cotangent module of a ring, with fibre ranks at found points.
    Cotangent {
        ring: String,
        #[command(flatten)]
        search: Search,
        #[arg(long, default_value_t = 5)]
        points: usize,
    },
    /// ℝ-points of a ring, manifold or fibre product.
    Points {
        name: String,
        #[command(flatten)]
        search: Search,
        /// Keep at most this many points (seeded subsample).
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Presentation, points and transversality of a declared fibre product.
    FibreProduct {
        fibre: String,
        #[command(flatten)]
        search: Search,
    },
    /// Quotient-stack operations on an action.
    Quotient {
        #[command(subcommand)]
        op: QuotientOp,
    },
    /// Numerical checks; exit 1 when a check fails.
    Check {
        #[command(subcommand)]
        op: CheckOp,
    },
}

#[derive(Subcommand, Debug)]
pub enum QuotientOp {
    /// Stabilizer of a point.
    Stabilizer {
        action: String,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[command(flatten)]
        search: Search,
    },
    /// Orbits of the found ℝ-points.
    Orbits {
        action: String,
        #[command(flatten)]
        search: Search,
    },
    /// Invariant generators up to a degree (default: group order).
    Invariants {
        action: String,
        #[arg(long)]
        degree: Option<u32>,
        #[command(flatten)]
        search: Search,
    },
    /// Coarse moduli ring of invariants.
    Coarse {
        action: String,
        #[arg(long)]
        degree: Option<u32>,
        #[command(flatten)]
        search: Search,
    },
    /// Groupoid identities of the action groupoid.
    Groupoid {
        action: String,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[command(flatten)]
        search: Search,
    },
    /// Equivariant cotangent module and its cocycle check.
    Cotangent {
        action: String,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[command(flatten)]
        search: Search,
    },
    /// Fibre product of two stack maps with a common target.
    FibreProduct {
        left: String,
        right: String,
        #[command(flatten)]
        search: Search,
    },
}

#[derive(Subcommand, Debug)]
pub enum CheckOp {
    /// Exactness of the cotangent sequence of a fibre product.
    PushoutCotangent {
        fibre: String,
        #[arg(long, default_value_t = 20)]
        points: usize,
        /// Check at this point instead of sampled ones.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        #[command(flatten)]
        search: Search,
    },
    /// Relations of the source vanish at images of target points.
    Morphism {
        morphism: String,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[command(flatten)]
        search: Search,
    },
    /// Jacobian rank of a manifold presentation at its points.
    Regular {
        manifold: String,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[command(flatten)]
        search: Search,
    },
    /// Cocycle condition of an equivariant module.
    Cocycle {
        module: String,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[command(flatten)]
        search: Search,
    },
}

/// What a run printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Run = std::result::Result<i32, Failure>;

/// Parse `args` (including the program name) and run.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let mut out = String::new();
    match execute(&cli, &mut out) {
        Ok(code) => Outcome {
            code,
            stdout: out,
            stderr: String::new(),
        },
        Err(Failure(msg)) => Outcome {
            code: 2,
            stdout: out,
            stderr: format!("error: {msg}\n"),
        },
    }
}

/// Fixed-point text with nine decimals and no negative zero.
pub fn num(x: f64) -> String {
    let s = format!("{x:.9}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

fn coordinates(text: &str) -> std::result::Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure(format!("bad coordinate `{s}`")))
        })
        .collect()
}

fn point_text(coords: &[f64]) -> String {
    format!(
        "({})",
        coords
            .iter()
            .map(|&x| num(x))
            .collect::<Vec<_>>()
            .join(", ")
    )
}

fn header(cli: &Cli, out: &mut String) {
    let words = match &cli.command {
        Command::Parse { .. } => "parse".to_string(),
        Command::Pushout { left, right } => format!("pushout {left} {right}"),
        Command::Localize { elem } => format!("localize {elem}"),
        Command::Cotangent { ring, .. } => format!("cotangent {ring}"),
        Command::Points { name, .. } => format!("points {name}"),
        Command::FibreProduct { fibre, .. } => format!("fibre-product {fibre}"),
        Command::Quotient { op } => format!("quotient {}", quotient_words(op)),
        Command::Check { op } => format!("check {}", check_words(op)),
    };
    let _ = writeln!(
        out,
        "# cinf {words} | tol={:e} newton_tol={NEWTON_TOL:e} cluster_radius={CLUSTER_RADIUS:e} rank_tol={RANK_REL_TOL:e} seed={}",
        cli.tol, cli.seed
    );
}

fn quotient_words(op: &QuotientOp) -> String {
    match op {
        QuotientOp::Stabilizer { action, at, .. } => format!("stabilizer {action} --at {at}"),
        QuotientOp::Orbits { action, .. } => format!("orbits {action}"),
        QuotientOp::Invariants { action, .. } => format!("invariants {action}"),
        QuotientOp::Coarse { action, .. } => format!("coarse {action}"),
        QuotientOp::Groupoid { action, .. } => format!("groupoid {action}"),
        QuotientOp::Cotangent { action, .. } => format!("cotangent {action}"),
        QuotientOp::FibreProduct { left, right, .. } => format!("fibre-product {left} {right}"),
    }
}

fn check_words(op: &CheckOp) -> String {
    match op {
        CheckOp::PushoutCotangent {
            fibre,
            at: Some(at),
            ..
        } => format!("pushout-cotangent {fibre} --at {at}"),
        CheckOp::PushoutCotangent { fibre, .. } => format!("pushout-cotangent {fibre}"),
        CheckOp::Morphism { morphism, .. } => format!("morphism {morphism}"),
        CheckOp::Regular { manifold, .. } => format!("regular {manifold}"),
        CheckOp::Cocycle { module, .. } => format!("cocycle {module}"),
    }
}

fn load(cli: &Cli) -> std::result::Result<Workspace, Failure> {
    let path = match &cli.command {
        Command::Parse { file: Some(f) } => f.clone(),
        _ => cli
            .workspace
            .clone()
            .ok_or_else(|| Failure("no workspace file given (use --workspace FILE)".into()))?,
    };
    let text = std::fs::read_to_string(&path).map_err(|e| Failure(format!("{path}: {e}")))?;
    Workspace::parse(&text).map_err(|e| Failure(format!("{path}: {e}")))
}

impl Search {
    fn params(&self, arity: usize, seed: u64) -> std::result::Result<SearchParams, Failure> {
        let bounds = match &self.bounds {
            None => vec![(-2.0, 2.0); arity],
            Some(text) => text
                .split(',')
                .map(|iv| {
                    let (lo, hi) = iv
                        .split_once(':')
                        .ok_or_else(|| Failure(format!("bad interval `{iv}`")))?;
                    let lo: f64 = lo
                        .trim()
                        .parse()
                        .map_err(|_| Failure(format!("bad bound `{lo}`")))?;
                    let hi: f64 = hi
                        .trim()
                        .parse()
                        .map_err(|_| Failure(format!("bad bound `{hi}`")))?;
                    if lo > hi {
                        return Err(Failure(format!("empty interval `{iv}`")));
                    }
                    Ok((lo, hi))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?,
        };
        if bounds.len() != arity {
            return Err(Failure(format!(
                "box has {} intervals but {arity} generators",
                bounds.len()
            )));
        }
        if !(self.step > 0.0) {
            return Err(Failure("step must be positive".into()));
        }
        Ok(SearchParams::new(bounds, self.step).with_seed(seed))
    }

    fn describe(&self, params: &SearchParams) -> String {
        let b: Vec<String> = params
            .bounds
            .iter()
            .map(|(lo, hi)| format!("[{}, {}]", lo, hi))
            .collect();
        let b = if b.is_empty() {
            "point".to_string()
        } else {
            b.join(" x ")
        };
        format!("box {b} step {}", self.step)
    }
}

fn ring(ws: &Workspace, name: &str) -> std::result::Result<Ring, Failure> {
    ws.ring_of(name).ok_or_else(|| match ws.get(name) {
        None => Failure(format!("unknown name `{name}`")),
        Some(item) => Failure(format!(
            "`{name}` is a {}, expected a ring, manifold or fibre",
            item.kind()
        )),
    })
}

fn item<'a>(ws: &'a Workspace, name: &str, kind: &str) -> std::result::Result<&'a Item, Failure> {
    match ws.get(name) {
        None => Err(Failure(format!("unknown name `{name}`"))),
        Some(i) if i.kind() != kind => Err(Failure(format!(
            "`{name}` is a {}, expected a {kind}",
            i.kind()
        ))),
        Some(i) => Ok(i),
    }
}

fn stack(
    ws: &Workspace,
    name: &str,
    search: &Search,
    cli: &Cli,
) -> std::result::Result<QuotientStackDesc, Failure> {
    let Item::Action {
        action,
        ring: ring_name,
        ..
    } = item(ws, name, "action")?
    else {
        unreachable!()
    };
    let r = ring(ws, ring_name)?;
    let params = search.params(r.arity(), cli.seed)?;
    Ok(QuotientStackDesc::new(
        &r,
        action.clone(),
        &params,
        cli.tol,
    )?)
}

fn execute(cli: &Cli, out: &mut String) -> Run {
    let ws = load(cli)?;
    header(cli, out);
    match &cli.command {
        Command::Parse { .. } => {
            out.push_str(&ws.echo());
            Ok(0)
        }
        Command::Pushout { left, right } => {
            let Item::Mor { morphism: phi, .. } = item(&ws, left, "mor")? else {
                unreachable!()
            };
            let Item::Mor { morphism: psi, .. } = item(&ws, right, "mor")? else {
                unreachable!()
            };
            let po = pushout(phi, psi)?;
            let _ = writeln!(out, "ring {}", po.ring);
            let _ = writeln!(out, "left {}", po.left);
            let _ = writeln!(out, "right {}", po.right);
            Ok(0)
        }
        Command::Localize { elem } => {
            let Item::Elem { elem: c, .. } = item(&ws, elem, "elem")? else {
                unreachable!()
            };
            let (r, map) = localize(c.owner(), c)?;
            let _ = writeln!(out, "ring {r}");
            let _ = writeln!(out, "map {map}");
            Ok(0)
        }
        Command::Cotangent {
            ring: name,
            search,
            points,
        } => {
            let r = ring(&ws, name)?;
            let module = crate::cmodule::cotangent(&r);
            let _ = writeln!(out, "{module}");
            let params = search.params(r.arity(), cli.seed)?;
            let _ = writeln!(out, "{}", search.describe(&params));
            for p in sample_points(&r, &params, *points)? {
                let f = fiber_at_point(&module, &p)?;
                let _ = writeln!(out, "fibre rank {} at {}", f.rank, point_text(p.coords()));
            }
            Ok(0)
        }
        Command::Points {
            name,
            search,
            limit,
        } => {
            let r = ring(&ws, name)?;
            let params = search.params(r.arity(), cli.seed)?;
            let pts = match limit {
                Some(n) => sample_points(&r, &params, *n)?,
                None => find_r_points(&r, &params)?,
            };
            let _ = writeln!(out, "ring {r}");
            let _ = writeln!(out, "{}", search.describe(&params));
            let _ = writeln!(out, "count {}", pts.len());
            for p in &pts {
                let _ = writeln!(out, "{}", point_text(p.coords()));
            }
            Ok(0)
        }
        Command::FibreProduct { fibre, search } => {
            let Item::Fibre {
                fibre: fp,
                left,
                right,
            } = item(&ws, fibre, "fibre")?
            else {
                unreachable!()
            };
            let Item::Map { map: g, .. } = item(&ws, left, "map")? else {
                unreachable!()
            };
            let Item::Map { map: h, .. } = item(&ws, right, "map")? else {
                unreachable!()
            };
            let r = &fp.manifold.ring;
            let _ = writeln!(out, "ring {r}");
            let _ = writeln!(out, "dim {}", fp.manifold.dim);
            let params = search.params(r.arity(), cli.seed)?;
            let _ = writeln!(out, "{}", search.describe(&params));
            let pts = find_r_points(r, &params)?;
            let _ = writeln!(out, "count {}", pts.len());
            let m = g.source.arity();
            for p in &pts {
                let (xc, yc) = p.coords().split_at(m);
                let x = is_r_point(&g.source.ring, xc, cli.tol)?.point();
                let y = is_r_point(&h.source.ring, yc, cli.tol)?.point();
                let verdict = match (x, y) {
                    (Some(x), Some(y)) => {
                        let t = transverse_check(g, h, &x, &y, cli.tol)?;
                        if t.is_common && t.spans {
                            "transverse"
                        } else {
                            "not transverse"
                        }
                    }
                    _ => "not admitted on the factors",
                };
                let _ = writeln!(out, "{} {verdict}", point_text(p.coords()));
            }
            Ok(0)
        }
        Command::Quotient { op } => quotient(cli, &ws, op, out),
        Command::Check { op } => check(cli, &ws, op, out),
    }
}

fn quotient(cli: &Cli, ws: &Workspace, op: &QuotientOp, out: &mut String) -> Run {
    match op {
        QuotientOp::Stabilizer { action, at, search } => {
            let d = stack(ws, action, search, cli)?;
            let coords = coordinates(at)?;
            let Some(p) = is_r_point(d.ring(), &coords, cli.tol)?.point() else {
                return Err(Failure(format!(
                    "{} is not an R-point of {}",
                    point_text(&coords),
                    d.ring()
                )));
            };
            let s = stabilizer(&d, &p)?;
            let _ = writeln!(out, "status {}", d.status());
            let _ = writeln!(out, "stabilizer order {}", s.len());
            let _ = writeln!(out, "elements {s:?}");
            Ok(0)
        }
        QuotientOp::Orbits { action, search } => {
            let d = stack(ws, action, search, cli)?;
            let params = search.params(d.ring().arity(), cli.seed)?;
            let pts = find_r_points(d.ring(), &params)?;
            let orbits = orbit_space(&d, &pts)?;
            let _ = writeln!(out, "{}", search.describe(&params));
            let _ = writeln!(out, "points {} orbits {}", pts.len(), orbits.len());
            for o in &orbits {
                let _ = writeln!(
                    out,
                    "size {} rep {}",
                    o.members.len(),
                    point_text(&o.representative)
                );
            }
            Ok(0)
        }
        QuotientOp::Invariants {
            action,
            degree,
            search,
        } => {
            let d = stack(ws, action, search, cli)?;
            let bound = degree.unwrap_or(d.group().order() as u32);
            let _ = writeln!(out, "degree bound {bound}");
            for g in invariant_generators(d.action(), bound)? {
                let _ = writeln!(out, "{g}");
            }
            Ok(0)
        }
        QuotientOp::Coarse {
            action,
            degree,
            search,
        } => {
            let d = stack(ws, action, search, cli)?;
            let bound = degree.unwrap_or(d.group().order() as u32);
            let cm = coarse_moduli(&d, bound)?;
            let _ = writeln!(out, "degree bound {bound}");
            let _ = writeln!(out, "ring {}", cm.ring);
            for (i, p) in cm.generators.iter().enumerate() {
                let _ = writeln!(out, "x{i} = {p}");
            }
            for (f, why) in &cm.annotations {
                let _ = writeln!(out, "annotation {f} ({why})");
            }
            Ok(0)
        }
        QuotientOp::Groupoid {
            action,
            points,
            search,
        } => {
            let d = stack(ws, action, search, cli)?;
            let gd = groupoid_from_action(&d)?;
            let params = search.params(d.ring().arity(), cli.seed)?;
            let pts = sample_points(d.ring(), &params, *points)?;
            let report = groupoid_check(&gd, &pts, cli.tol)?;
            let _ = writeln!(out, "points {}", report.checked_points);
            for (name, r) in &report.identities {
                let _ = writeln!(out, "{name}: {}", sci(*r));
            }
            let _ = writeln!(out, "composability: {}", sci(report.composability));
            Ok(verdict(out, report.passed() && !pts.is_empty()))
        }
        QuotientOp::Cotangent {
            action,
            points,
            search,
        } => {
            let d = stack(ws, action, search, cli)?;
            let e = equivariant_cotangent(&d)?;
            for g in 0..d.group().order() {
                let _ = writeln!(out, "lift {g} {}", e.lift(g));
            }
            cocycle(cli, &e, *points, search, out)
        }
        QuotientOp::FibreProduct {
            left,
            right,
            search,
        } => {
            let g = stack_map(ws, left, search, cli)?;
            let h = stack_map(ws, right, search, cli)?;
            let w = stack_fibre_product(&g, &h)?;
            let _ = writeln!(out, "group order {}", w.group.order());
            let _ = writeln!(out, "components {}", w.components.len());
            let mut total = 0;
            for c in &w.components {
                let r = &c.fibre.manifold.ring;
                let params = search.params(r.arity(), cli.seed)?;
                let n = find_r_points(r, &params)?.len();
                total += n;
                let _ = writeln!(out, "tag {} points {n} ring {r}", c.tag);
            }
            let _ = writeln!(out, "points {total}");
            Ok(0)
        }
    }
}

fn stack_map(
    ws: &Workspace,
    name: &str,
    search: &Search,
    cli: &Cli,
) -> std::result::Result<StackMap, Failure> {
    let Item::StackMap {
        source,
        target,
        map,
        hom,
    } = item(ws, name, "stackmap")?
    else {
        unreachable!()
    };
    let s = stack(ws, source, search, cli)?;
    let t = stack(ws, target, search, cli)?;
    let Item::Map { map: m, .. } = item(ws, map, "map")? else {
        unreachable!()
    };
    let params = search.params(s.ring().arity(), cli.seed)?;
    Ok(StackMap::new(
        &s,
        &t,
        m.clone(),
        hom.clone(),
        &params,
        cli.tol,
    )?)
}

fn verdict(out: &mut String, passed: bool) -> i32 {
    let _ = writeln!(out, "{}", if passed { "PASS" } else { "FAIL" });
    if passed {
        0
    } else {
        1
    }
}

fn cocycle(
    cli: &Cli,
    e: &EquivariantModule,
    points: usize,
    search: &Search,
    out: &mut String,
) -> Run {
    let params = search.params(e.desc().ring().arity(), cli.seed)?;
    let pts = sample_points(e.desc().ring(), &params, points)?;
    let report = equivariant_module_check(e, &pts, cli.tol)?;
    let _ = writeln!(
        out,
        "points {} pairs {}",
        report.checked_points, report.pairs
    );
    let _ = writeln!(out, "max residual {}", sci(report.max_residual));
    if let (false, Some((g, d, p))) = (report.passed(), &report.worst) {
        let _ = writeln!(out, "worst pair ({g}, {d}) at {}", point_text(p));
    }
    Ok(verdict(out, report.passed() && !pts.is_empty()))
}

fn check(cli: &Cli, ws: &Workspace, op: &CheckOp, out: &mut String) -> Run {
    match op {
        CheckOp::PushoutCotangent {
            fibre,
            points,
            at,
            search,
        } => {
            let Item::Fibre { fibre: fp, .. } = item(ws, fibre, "fibre")? else {
                unreachable!()
            };
            let r = &fp.manifold.ring;
            let pts: Vec<RPoint> = match at {
                Some(text) => {
                    let coords = coordinates(text)?;
                    match is_r_point(r, &coords, cli.tol)?.point() {
                        Some(p) => vec![p],
                        None => {
                            return Err(Failure(format!(
                                "{} is not an R-point of {r}",
                                point_text(&coords)
                            )))
                        }
                    }
                }
                None => sample_points(r, &search.params(r.arity(), cli.seed)?, *points)?,
            };
            let report = sequence_check(&fp.cotangent_sequence()?, &pts, cli.tol)?;
            let n = report.points.len();
            let exact = report.exact_count();
            for p in report.points.iter().filter(|p| !p.exact || !p.is_complex) {
                let _ = writeln!(
                    out,
                    "at {}: dims {:?} ranks {:?} complex residual {}",
                    point_text(&p.coords),
                    p.dims,
                    p.ranks,
                    sci(p.complex_residual)
                );
            }
            let ok = n > 0 && report.all_exact() && report.all_complex();
            let _ = writeln!(
                out,
                "{} at {exact}/{n} points",
                if ok { "EXACT" } else { "NOT EXACT" }
            );
            Ok(if ok { 0 } else { 1 })
        }
        CheckOp::Morphism {
            morphism,
            points,
            search,
        } => {
            let Item::Mor { morphism: phi, .. } = item(ws, morphism, "mor")? else {
                unreachable!()
            };
            let params = search.params(phi.target().arity(), cli.seed)?;
            let report = morphism_check(phi, *points, &params, cli.tol)?;
            let _ = writeln!(
                out,
                "points {} max residual {}",
                report.checked_points,
                sci(report.max_residual)
            );
            match report.verdict {
                Verdict::Pass => Ok(verdict(out, true)),
                Verdict::Fail => Ok(verdict(out, false)),
                Verdict::Inconclusive => {
                    let _ = writeln!(out, "INCONCLUSIVE");
                    Ok(1)
                }
            }
        }
        CheckOp::Regular {
            manifold,
            points,
            search,
        } => {
            let Item::Manifold { manifold: m, .. } = item(ws, manifold, "manifold")? else {
                unreachable!()
            };
            let params = search.params(m.arity(), cli.seed)?;
            let pts = sample_points(&m.ring, &params, *points)?;
            let report = regular_value_check(m, &pts)?;
            let _ = writeln!(
                out,
                "points {} failures {}",
                report.checked_points,
                report.failures.len()
            );
            for f in &report.failures {
                let _ = writeln!(out, "rank drop at {}", point_text(f));
            }
            Ok(verdict(out, report.passed() && !pts.is_empty()))
        }
        CheckOp::Cocycle {
            module,
            points,
            search,
        } => {
            let Item::Equivariant {
                action,
                module: base,
                lifts,
            } = item(ws, module, "equivariant")?
            else {
                unreachable!()
            };
            let d = stack(ws, action, search, cli)?;
            let Item::Module { module: m, .. } = item(ws, base, "module")? else {
                unreachable!()
            };
            let e = EquivariantModule::new(&d, m, lifts.clone())?;
            cocycle(cli, &e, *points, search, out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(num(-0.0), "0.000000000");
        assert_eq!(num(-1e-12), "0.000000000");
        assert_eq!(num(-0.5), "-0.500000000");
        assert_eq!(num(1.0), "1.000000000");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["cinf", "frobnicate"]).code, 2);
        assert_eq!(run(["cinf", "points", "S1"]).code, 2);
        assert_eq!(run(["cinf", "parse", "/nonexistent/file.ws"]).code, 2);
        assert_eq!(run(["cinf", "--help"]).code, 0);
    }
}
