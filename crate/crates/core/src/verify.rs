//! Theorem verification sweeps: for every point of a parameter grid, build
//! the graph, evaluate the closed form, run the exact solver and compare.
//!
//! Grids come from the checked-in manifest `grids.toml` (see [`Manifest`]),
//! or from any TOML table with the same layout.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::constructions as c;
use crate::distance::{diameter, Distance, DistanceMatrix};
use crate::error::{invalid, Error, Result};
use crate::expr::parse_graph;
use crate::formulas::{self as f, JoinInputs, Predicted, Prediction};
use crate::gp::{gp_auto_seeded, gp_exact, is_general_position, GpResult, Method};
use crate::graph::{Graph, VertexSet};
use crate::invariants::{self, InvariantResult};
use crate::search::{Budget, Status};

/// Registered theorem ids, in the order `--all` runs them.
pub const THEOREMS: [&str; 10] = [
    "thm2.2", "thm2.3", "thm2.4", "thm3.1", "thm3.2", "thm4.1", "prop4.2", "thm4.3", "thm4.4", "ekr",
];

const MANIFEST: &str = include_str!("../grids.toml");

pub type Params = BTreeMap<String, Value>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    WithinBound,
    Mismatch,
    Timeout,
    NotApplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::WithinBound => "within-bound",
            Verdict::Mismatch => "mismatch",
            Verdict::Timeout => "timeout",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}

/// What the solver side of a report measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Gp,
    Alpha,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Computed {
    pub quantity: Quantity,
    #[serde(flatten)]
    pub result: GpResult,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem_id: String,
    pub params: Params,
    pub predicted: Option<Predicted>,
    pub computed: Option<Computed>,
    pub verdict: Verdict,
    #[serde(rename = "ms", serialize_with = "ser_ms")]
    pub elapsed: Duration,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn ser_ms<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

/// Ordered list of parameter points.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Grid {
    pub points: Vec<Params>,
}

impl Grid {
    /// Parses a grid from TOML text such as `n = [4, 5, 6]` or
    /// `points = [{ n = 8, k = 3 }]`.
    pub fn parse(text: &str) -> Result<Grid> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Parse {
            offset: e.span().map_or(0, |s| s.start),
            message: e.message().to_string(),
        })?;
        Grid::from_table(&table)
    }

    fn from_table(table: &toml::Table) -> Result<Grid> {
        if let Some(points) = table.get("points") {
            if table.len() > 1 {
                return Err(invalid("a grid with 'points' cannot also have axes"));
            }
            let arr = points
                .as_array()
                .ok_or_else(|| invalid("'points' must be an array of tables"))?;
            let points = arr
                .iter()
                .map(|p| match p {
                    toml::Value::Table(t) => t.iter().map(|(k, v)| Ok((k.clone(), to_json(v)?))).collect(),
                    _ => Err(invalid("'points' must be an array of tables")),
                })
                .collect::<Result<Vec<Params>>>()?;
            return Ok(Grid { points });
        }
        let mut points = vec![Params::new()];
        for (axis, values) in table {
            let values = values
                .as_array()
                .ok_or_else(|| invalid(format!("grid axis '{axis}' must be an array")))?;
            let values = values.iter().map(to_json).collect::<Result<Vec<_>>>()?;
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.insert(axis.clone(), v.clone());
                        q
                    })
                })
                .collect();
        }
        if table.is_empty() {
            points.clear();
        }
        Ok(Grid { points })
    }
}

fn to_json(v: &toml::Value) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| invalid(format!("unsupported grid value: {e}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Quick,
    Stretch,
}

impl Suite {
    fn key(self) -> &'static str {
        match self {
            Suite::Quick => "quick",
            Suite::Stretch => "stretch",
        }
    }
}

/// Theorem id → quick and stretch grids.
#[derive(Clone, Debug)]
pub struct Manifest {
    grids: BTreeMap<String, (Grid, Grid)>,
}

impl Manifest {
    /// The manifest compiled into the crate from `grids.toml`.
    pub fn builtin() -> Manifest {
        Manifest::parse(MANIFEST).expect("checked-in manifest parses")
    }

    pub fn parse(text: &str) -> Result<Manifest> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Parse {
            offset: e.span().map_or(0, |s| s.start),
            message: e.message().to_string(),
        })?;
        let mut grids = BTreeMap::new();
        for (id, entry) in &table {
            check_theorem(id)?;
            let entry = entry
                .as_table()
                .ok_or_else(|| invalid(format!("manifest entry '{id}' must be a table")))?;
            let suite = |s: Suite| -> Result<Grid> {
                match entry.get(s.key()) {
                    Some(toml::Value::Table(t)) => Grid::from_table(t),
                    Some(_) => Err(invalid(format!("'{id}.{}' must be a table", s.key()))),
                    None => Ok(Grid::default()),
                }
            };
            grids.insert(id.clone(), (suite(Suite::Quick)?, suite(Suite::Stretch)?));
        }
        Ok(Manifest { grids })
    }

    pub fn grid(&self, theorem_id: &str, suite: Suite) -> Result<&Grid> {
        check_theorem(theorem_id)?;
        let (quick, stretch) = self
            .grids
            .get(theorem_id)
            .ok_or_else(|| invalid(format!("no grid declared for '{theorem_id}'")))?;
        Ok(match suite {
            Suite::Quick => quick,
            Suite::Stretch => stretch,
        })
    }
}

fn check_theorem(id: &str) -> Result<()> {
    if THEOREMS.contains(&id) {
        Ok(())
    } else {
        Err(invalid(format!(
            "unknown theorem id '{id}' (known: {})",
            THEOREMS.join(", ")
        )))
    }
}

/// One validated grid point.
enum Point {
    N(usize),
    NK(usize, usize),
    Ns(Vec<usize>),
    G(Graph),
    GH(Graph, Graph),
}

fn get<'a>(p: &'a Params, key: &str) -> Result<&'a Value> {
    p.get(key)
        .ok_or_else(|| invalid(format!("grid point '{}' lacks '{key}'", params_cell(p))))
}

fn get_usize(p: &Params, key: &str) -> Result<usize> {
    get(p, key)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| invalid(format!("'{key}' must be a non-negative integer")))
}

fn get_graph(p: &Params, key: &str) -> Result<Graph> {
    let src = get(p, key)?
        .as_str()
        .ok_or_else(|| invalid(format!("'{key}' must be a graph expression string")))?;
    parse_graph(src)
}

fn check_keys(p: &Params, keys: &[&str]) -> Result<()> {
    match p.keys().find(|k| !keys.contains(&k.as_str())) {
        Some(k) => Err(invalid(format!(
            "unexpected grid parameter '{k}' (expected {})",
            keys.join(", ")
        ))),
        None => Ok(()),
    }
}

fn parse_point(id: &str, p: &Params) -> Result<Point> {
    match id {
        "thm2.2" | "thm2.4" | "thm4.4" => {
            check_keys(p, &["n"])?;
            Ok(Point::N(get_usize(p, "n")?))
        }
        "thm2.3" | "ekr" => {
            check_keys(p, &["n", "k"])?;
            let (n, k) = (get_usize(p, "n")?, get_usize(p, "k")?);
            // keep the Kneser constructor's limits from turning into panics later
            if n > 128 || k > n {
                return Err(invalid(format!("kneser({n},{k}) is out of range")));
            }
            Ok(Point::NK(n, k))
        }
        "thm3.2" => {
            check_keys(p, &["ns"])?;
            let ns = get(p, "ns")?
                .as_array()
                .and_then(|a| {
                    a.iter()
                        .map(|v| v.as_u64().map(|x| x as usize))
                        .collect::<Option<Vec<_>>>()
                })
                .ok_or_else(|| invalid("'ns' must be an array of integers"))?;
            Ok(Point::Ns(ns))
        }
        "thm4.1" => {
            check_keys(p, &["g"])?;
            Ok(Point::G(get_graph(p, "g")?))
        }
        "thm3.1" | "prop4.2" | "thm4.3" => {
            check_keys(p, &["g", "h"])?;
            Ok(Point::GH(get_graph(p, "g")?, get_graph(p, "h")?))
        }
        _ => Err(invalid(format!("unknown theorem id '{id}'"))),
    }
}

/// Runs every point of `grid` for one theorem, one point at a time.
///
/// Fails before solving anything if the id is unknown or a point is
/// malformed. `budget` applies to each solver call separately.
pub fn run_verify(theorem_id: &str, grid: &Grid, budget: Budget) -> Result<Vec<TheoremReport>> {
    let points = prepare(theorem_id, grid)?;
    Ok(points
        .into_iter()
        .map(|(p, pt)| run_point(theorem_id, p, pt, budget))
        .collect())
}

/// [`run_verify`] with the grid points spread over the rayon thread pool.
/// Reports stay in grid order.
pub fn run_verify_parallel(theorem_id: &str, grid: &Grid, budget: Budget) -> Result<Vec<TheoremReport>> {
    let points = prepare(theorem_id, grid)?;
    Ok(points
        .into_par_iter()
        .map(|(p, pt)| run_point(theorem_id, p, pt, budget))
        .collect())
}

fn prepare(theorem_id: &str, grid: &Grid) -> Result<Vec<(Params, Point)>> {
    check_theorem(theorem_id)?;
    grid.points
        .iter()
        .map(|p| parse_point(theorem_id, p).map(|pt| (p.clone(), pt)))
        .collect()
}

/// The solver-independent part of a report plus the measured result.
struct Outcome {
    predicted: Option<Predicted>,
    computed: Option<Computed>,
    verdict: Verdict,
    note: Option<String>,
}

impl Outcome {
    fn not_applicable(reason: Option<String>) -> Outcome {
        Outcome {
            predicted: None,
            computed: None,
            verdict: Verdict::NotApplicable,
            note: reason,
        }
    }

    fn judged(predicted: Predicted, r: GpResult, quantity: Quantity) -> Outcome {
        let verdict = judge(predicted, r.value as u64, r.status);
        let mut out = Outcome {
            predicted: Some(predicted),
            computed: None,
            verdict,
            note: None,
        };
        if let Some(cc) = &r.cross_check {
            if cc.status == Status::Exact && r.status == Status::Exact && !cc.agrees {
                out.fail(format!("max(omega, eta) = {} disagrees with rho", cc.omega.max(cc.eta)));
            }
        }
        out.computed = Some(Computed { quantity, result: r });
        out
    }

    fn fail(&mut self, note: String) {
        self.verdict = Verdict::Mismatch;
        self.note = Some(match self.note.take() {
            Some(prev) => format!("{prev}; {note}"),
            None => note,
        });
    }

    fn timeout(&mut self, note: String) {
        if self.verdict != Verdict::Mismatch {
            self.verdict = Verdict::Timeout;
            self.note.get_or_insert(note);
        }
    }

    /// Records a mismatch unless `w` is a general position set of `g` with
    /// `size` members (when given).
    fn check_witness(&mut self, g: &Graph, w: &VertexSet, size: Option<usize>) {
        let ok = is_general_position(&DistanceMatrix::new(g), w).unwrap_or(false);
        if !ok {
            self.fail("predicted witness is not in general position".into());
        } else if let Some(s) = size.filter(|&s| s != w.len()) {
            self.fail(format!("predicted witness has {} vertices, expected {s}", w.len()));
        }
    }
}

/// Exact predictions need an exact solver value; for intervals the solver's
/// incumbent is a lower bound on gp, so reaching the lower end settles the
/// claim even without a proof of optimality.
fn judge(predicted: Predicted, value: u64, status: Status) -> Verdict {
    let exact = status == Status::Exact;
    match predicted {
        Predicted::Exact(p) if exact => {
            if value == p {
                Verdict::Match
            } else {
                Verdict::Mismatch
            }
        }
        Predicted::Exact(p) => {
            if value > p {
                Verdict::Mismatch
            } else {
                Verdict::Timeout
            }
        }
        Predicted::Interval { lower, upper } => {
            if upper.is_some_and(|u| value > u) {
                Verdict::Mismatch
            } else if value >= lower {
                Verdict::WithinBound
            } else if exact {
                Verdict::Mismatch
            } else {
                Verdict::Timeout
            }
        }
    }
}

fn run_point(id: &str, params: Params, point: Point, budget: Budget) -> TheoremReport {
    let start = Instant::now();
    let out = match evaluate(id, point, budget) {
        Ok(o) => o,
        Err(e) => Outcome {
            predicted: None,
            computed: None,
            verdict: Verdict::Mismatch,
            note: Some(e.to_string()),
        },
    };
    TheoremReport {
        theorem_id: id.to_string(),
        params,
        predicted: out.predicted,
        computed: out.computed,
        verdict: out.verdict,
        elapsed: start.elapsed(),
        note: out.note,
    }
}

/// Compares a Kneser-type prediction with the solver, seeded by the
/// predicted witness.
fn check_formula(g: &Graph, pred: Prediction, budget: Budget) -> Result<Outcome> {
    let Some(value) = pred.value_or_interval.filter(|_| pred.applicable) else {
        return Ok(Outcome::not_applicable(pred.reason));
    };
    let witness = pred.witness.as_ref();
    let seed = witness.filter(|w| is_general_position(&DistanceMatrix::new(g), w).unwrap_or(false));
    let r = gp_auto_seeded(g, budget, seed)?;
    let mut out = Outcome::judged(value, r, Quantity::Gp);
    if let Some(w) = witness {
        let size = value.is_exact().then_some(value.lower() as usize);
        out.check_witness(g, w, size);
    }
    Ok(out)
}

fn exact_value(r: &InvariantResult, what: &str, out_note: &mut Vec<String>) -> usize {
    if r.status != Status::Exact {
        out_note.push(format!("{what} not exact"));
    }
    r.value
}

fn evaluate(id: &str, point: Point, budget: Budget) -> Result<Outcome> {
    match (id, point) {
        ("thm2.2", Point::N(n)) => {
            let pred = f::gp_kneser2(n);
            if !pred.applicable {
                return Ok(Outcome::not_applicable(pred.reason));
            }
            check_formula(&c::kneser(n, 2)?, pred, budget)
        }
        ("thm2.4", Point::N(n)) => {
            let pred = f::gp_kneser3(n);
            if !pred.applicable {
                return Ok(Outcome::not_applicable(pred.reason));
            }
            check_formula(&c::kneser(n, 3)?, pred, budget)
        }
        ("thm2.3", Point::NK(n, k)) => {
            let pred = f::kneser_condition(n, k);
            if !pred.applicable {
                return Ok(Outcome::not_applicable(pred.reason));
            }
            check_formula(&c::kneser(n, k)?, pred, budget)
        }
        ("thm4.4", Point::N(n)) => {
            let pred = f::gp_line_complete(n);
            if !pred.applicable {
                return Ok(Outcome::not_applicable(pred.reason));
            }
            check_formula(&c::line_graph(&c::complete(n)?), pred, budget)
        }
        ("thm3.2", Point::Ns(ns)) => {
            let pred = f::hamming_lower(&ns);
            if !pred.applicable {
                return Ok(Outcome::not_applicable(pred.reason));
            }
            check_formula(&c::hamming(&ns)?, pred, budget)
        }
        ("ekr", Point::NK(n, k)) => {
            let pred = f::ekr_bound(n, k);
            let Some(value) = pred.value_or_interval.filter(|_| pred.applicable) else {
                return Ok(Outcome::not_applicable(pred.reason));
            };
            let g = c::kneser(n, k)?;
            let a = invariants::alpha(&g, budget);
            let r = GpResult {
                value: a.value,
                witness: a.witness,
                status: a.status,
                nodes_explored: a.nodes_explored,
                elapsed: a.elapsed,
                method: Method::Exact,
                cross_check: None,
            };
            let mut out = Outcome::judged(value, r, Quantity::Alpha);
            if let Some(w) = &pred.witness {
                if !g.is_independent(w.as_slice()) || w.len() as u64 != value.lower() {
                    out.fail("star is not an independent set of the predicted size".into());
                }
            }
            Ok(out)
        }
        ("thm3.1", Point::GH(g, h)) => cartesian(&g, &h, budget),
        ("thm4.1", Point::G(g)) => diameter_two(&g, budget),
        ("prop4.2", Point::GH(g, h)) => join(&g, &h, budget),
        ("thm4.3", Point::GH(g, h)) => corona(&g, &h, budget),
        _ => unreachable!("points are validated against their theorem"),
    }
}

fn cartesian(g: &Graph, h: &Graph, budget: Budget) -> Result<Outcome> {
    if !g.is_connected() || !h.is_connected() || g.n() == 0 || h.n() == 0 {
        return Ok(Outcome::not_applicable(Some("factors must be connected".into())));
    }
    let rg = gp_exact(g, budget);
    let rh = gp_exact(h, budget);
    let pred = f::gp_cartesian_lower(rg.value, rh.value, g.n(), h.n());
    let value = pred.value_or_interval.expect("always applicable");
    let prod = c::cartesian_product(g, h);
    let r = gp_exact(&prod, budget);
    let mut out = Outcome::judged(value, r, Quantity::Gp);
    if rg.status != Status::Exact || rh.status != Status::Exact {
        out.timeout("factor gp not exact".into());
    }
    let anchor_g = rg.witness.iter().next();
    let anchor_h = rh.witness.iter().next();
    if let (Some(ag), Some(ah)) = (anchor_g, anchor_h) {
        let w = f::cartesian_witness(g, &rg.witness, h, &rh.witness, ag, ah)?;
        out.check_witness(&prod, &w, Some(value.lower() as usize));
    }
    Ok(out)
}

fn diameter_two(g: &Graph, budget: Budget) -> Result<Outcome> {
    let diam = diameter(g);
    if diam != Distance::Finite(2) {
        return Ok(Outcome::not_applicable(Some(format!("diameter is {diam}, not 2"))));
    }
    let mut pending = Vec::new();
    let om = exact_value(&invariants::omega(g, budget), "omega", &mut pending);
    let et = exact_value(&invariants::eta(g, budget), "eta", &mut pending);
    let rho = exact_value(&invariants::rho(g, budget), "rho", &mut pending);
    let pred = f::gp_diameter_two(om, et, rho);
    let value = pred.value_or_interval.expect("always applicable");
    let r = gp_exact(g, budget);
    let mut out = Outcome::judged(value, r, Quantity::Gp);
    if !pending.is_empty() {
        out.timeout(pending.join(", "));
    } else if rho != om.max(et) {
        out.fail(format!("rho = {rho} differs from max(omega, eta) = {}", om.max(et)));
    }
    Ok(out)
}

fn join(g: &Graph, h: &Graph, budget: Budget) -> Result<Outcome> {
    if g.n() == 0 || h.n() == 0 {
        return Ok(Outcome::not_applicable(Some("factors must be nonempty".into())));
    }
    let mut pending = Vec::new();
    let mut inv = |f: fn(&Graph, Budget) -> InvariantResult, x: &Graph, what: &str| {
        exact_value(&f(x, budget), what, &mut pending)
    };
    let x = JoinInputs {
        omega_g: inv(invariants::omega, g, "omega(G)"),
        omega_h: inv(invariants::omega, h, "omega(H)"),
        eta_g: inv(invariants::eta, g, "eta(G)"),
        eta_h: inv(invariants::eta, h, "eta(H)"),
        rho_g: inv(invariants::rho, g, "rho(G)"),
        rho_h: inv(invariants::rho, h, "rho(H)"),
        both_complete: g.is_complete() && h.is_complete(),
        n_g: g.n(),
        n_h: h.n(),
    };
    let pred = f::gp_join(x);
    let value = pred.value_or_interval.expect("always applicable");
    let joined = c::join(g, h);
    let r = gp_exact(&joined, budget);
    let mut out = Outcome::judged(value, r, Quantity::Gp);
    if !pending.is_empty() {
        out.timeout(pending.join(", "));
    } else if let Some(alt) = pred.alternate_form.filter(|&a| a != value.lower()) {
        out.fail(format!("eta form {alt} differs from rho form {}", value.lower()));
    }
    if let Some(w) = &pred.witness {
        out.check_witness(&joined, w, Some(value.lower() as usize));
    }
    Ok(out)
}

fn corona(g: &Graph, h: &Graph, budget: Budget) -> Result<Outcome> {
    let rho = invariants::rho(h, budget);
    let pred = f::gp_corona(g.n(), rho.value);
    let Some(value) = pred.value_or_interval.filter(|_| pred.applicable) else {
        return Ok(Outcome::not_applicable(pred.reason));
    };
    let cor = c::corona(g, h)?;
    let r = gp_exact(&cor, budget);
    let mut out = Outcome::judged(value, r, Quantity::Gp);
    if rho.status != Status::Exact {
        out.timeout("rho(H) not exact".into());
    }
    let w = f::corona_witness(g.n(), h, &rho.witness)?;
    out.check_witness(&cor, &w, Some(value.lower() as usize));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    JsonLines,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "json-lines" | "jsonl" => Ok(TableFormat::JsonLines),
            other => Err(invalid(format!("unknown table format '{other}'"))),
        }
    }
}

pub const CSV_HEADER: [&str; 7] = ["theorem", "params", "predicted", "computed", "status", "verdict", "ms"];

fn params_cell(p: &Params) -> String {
    p.iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// Renders reports in the given order, one row or JSON object per line.
pub fn emit_table(reports: &[TheoremReport], format: TableFormat) -> String {
    match format {
        TableFormat::JsonLines => reports
            .iter()
            .map(|r| serde_json::to_string(r).expect("reports serialize") + "\n")
            .collect(),
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).expect("in-memory write");
            for r in reports {
                let computed = r.computed.as_ref();
                w.write_record([
                    r.theorem_id.clone(),
                    params_cell(&r.params),
                    r.predicted.map(|p| p.to_string()).unwrap_or_default(),
                    computed.map(|c| c.result.value.to_string()).unwrap_or_default(),
                    computed
                        .map(|c| c.result.status.as_str().to_string())
                        .unwrap_or_default(),
                    r.verdict.as_str().to_string(),
                    r.elapsed.as_millis().to_string(),
                ])
                .expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
        }
    }
}

/// 0 when nothing failed, 1 on any mismatch, 3 when `strict` and some point
/// timed out.
pub fn exit_code(reports: &[TheoremReport], strict: bool) -> i32 {
    if reports.iter().any(|r| r.verdict == Verdict::Mismatch) {
        1
    } else if strict && reports.iter().any(|r| r.verdict == Verdict::Timeout) {
        3
    } else {
        0
    }
}
