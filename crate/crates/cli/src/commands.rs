use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use recolle_core::algebra::{build_algebra, cartan_matrix, fingerprint, opposite, AlgRef, QuiverPresentation};
use recolle_core::exactla::Field;
use recolle_core::fdmod::{projective_module, quotient_module};
use recolle_core::homology::{default_depth, gldim, tor_dim, GlDim};
use recolle_core::kbproj::{arrow_complex, hom_dim, ProjComplex};
use recolle_core::ladder::{ladder_heights, nakayama, simplicity_report, vertex_subsets, LadderError, SearchBounds};
use recolle_core::oracle::{bar_tor, hom_bruteforce, path_count, OracleError, OracleReport, DEFAULT_LIMIT};
use recolle_core::recollement::{build_recollement, restriction_report, stratifying_status, StratStatus};
use recolle_core::search::{enumerate_exceptional, jh_holds, jh_summary, stratification_trees, to_dot, SearchCaps, SearchError, DEFAULT_BUDGET};
use recolle_core::tri::TriBool;

use crate::literal::parse_complex;
use crate::render;

pub struct RunConfig {
    pub depth: Option<usize>,
    pub max_len: usize,
    pub max_mult: usize,
    pub field: Option<Field>,
    pub seed: u64,
    pub steps: usize,
    pub budget: Option<u128>,
}

#[derive(Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// some verdict stayed Unknown, or a budget or depth was hit
    Incomplete,
    Violation(String),
}

pub struct Report {
    pub json: Value,
    pub text: String,
    pub dot: Option<String>,
    pub status: Status,
}

impl Report {
    fn new(json: Value, text: String) -> Report {
        Report { json, text, dot: None, status: Status::Ok }
    }

    fn incomplete_if(mut self, cond: bool) -> Report {
        if cond && self.status == Status::Ok {
            self.status = Status::Incomplete;
        }
        self
    }
}

/// Input rejected: bad JSON, a bad literal, or a failed precondition.
#[derive(Debug)]
pub struct InputError(pub String);

type Res = Result<Report, InputError>;

pub fn load(q: &QuiverPresentation, cfg: &RunConfig) -> Result<AlgRef, InputError> {
    let q = match cfg.field {
        Some(f) => q.clone().with_field(f),
        None => q.clone(),
    };
    build_algebra(&q).map(Arc::new).map_err(|e| InputError(e.to_string()))
}

fn depth(a: &AlgRef, cfg: &RunConfig) -> usize {
    cfg.depth.unwrap_or_else(|| default_depth(a))
}

fn labels(a: &AlgRef, e: &[usize]) -> Vec<String> {
    e.iter().map(|&v| a.vertex_label(v).to_string()).collect()
}

pub fn cmd_analyze(q: &QuiverPresentation, cfg: &RunConfig) -> Res {
    let a = load(q, cfg)?;
    let d = depth(&a, cfg);
    let gl = gldim(&a, d);
    let fp = fingerprint(&a);
    let mut text = format!("field {}, dim {}, {} vertices\n", render::field_name(a.field()), a.dim(), a.num_vertices());
    let mut projectives = Vec::new();
    for v in 0..a.num_vertices() {
        let p = projective_module(&a, v);
        let rows = p.radical_filtration();
        let pic = render::layers(&a, &rows);
        text.push_str(&format!("P{} (dim {}):\n", a.vertex_label(v), p.dim()));
        for row in &pic {
            text.push_str(&format!("    {row}\n"));
        }
        projectives.push(json!({"vertex": a.vertex_label(v), "dim": p.dim(), "layers": rows}));
    }
    let cartan = cartan_matrix(&a);
    text.push_str(&format!("cartan {:?}\ngldim {:?}\nfingerprint {}\n", cartan, gl, fp.summary()));
    let json = json!({
        "command": "analyze",
        "field": a.field(),
        "dim": a.dim(),
        "vertices": labels(&a, &(0..a.num_vertices()).collect::<Vec<_>>()),
        "basis": a.labels(),
        "cartan": cartan,
        "projectives": projectives,
        "gldim": gl,
        "depth": d,
        "fingerprint": fp,
    });
    Ok(Report::new(json, text).incomplete_if(gl == GlDim::Unknown))
}

pub fn cmd_recollements(q: &QuiverPresentation, cfg: &RunConfig) -> Res {
    let a = load(q, cfg)?;
    let d = depth(&a, cfg);
    let rows: Vec<(Value, String, Option<String>, bool)> = vertex_subsets(a.num_vertices())
        .par_iter()
        .map(|e| {
            let head = format!("e={:<8}", render::vertex_set(&a, e));
            let status = match stratifying_status(&a, e, d) {
                Ok(s) => s,
                Err(err) => return (json!({"e": labels(&a, e), "error": err.to_string()}), format!("{head} {err}\n"), None, false),
            };
            let kind = match &status {
                StratStatus::Certified { .. } => "Certified",
                StratStatus::Refuted { .. } => "Refuted",
                StratStatus::Unknown { .. } => "Unknown",
            };
            if !status.is_certified() {
                let unknown = matches!(status, StratStatus::Unknown { .. });
                return (json!({"e": labels(&a, e), "stratifying": status}), format!("{head} {kind}\n"), None, unknown);
            }
            let rec = match build_recollement(&a, e, d) {
                Ok(r) => r,
                Err(err) => {
                    let msg = format!("built recollement failed on a certified idempotent: {err}");
                    return (json!({"e": labels(&a, e), "error": msg}), format!("{head} {msg}\n"), Some(msg), false);
                }
            };
            let (ra, rb, rc) = rec.ranks();
            let rr = restriction_report(&rec, d);
            let ladder = ladder_heights(&rec, cfg.steps, d);
            let mut violation = None;
            if ra != rb + rc {
                violation = Some(format!("rank additivity fails for e={e:?}"));
            } else if !rr.is_consistent() {
                violation = Some(format!("restriction flags inconsistent for e={e:?}"));
            }
            let steps = |s: &[recolle_core::ladder::LadderStep]| s.iter().map(|x| x.verdict.short()).collect::<Vec<_>>().join(",");
            let text = format!(
                "{head} {kind}  B: {}  C: {}\n{:14}D⁻ {}  D^b(Mod) {}  D^b(mod) {}  K^b(proj) {}  ranks {}={}+{}\n{:14}ladder up [{}] down [{}] height ≥ {}{}\n",
                fingerprint(&rec.b).summary(),
                fingerprint(&rec.c).summary(),
                "",
                render::mark(&rr.dminus),
                render::mark(&rr.db_mod_big),
                render::mark(&rr.dbmod),
                render::mark(&rr.kbproj),
                ra,
                rb,
                rc,
                "",
                steps(&ladder.up_steps),
                steps(&ladder.down_steps),
                ladder.height_lower_bound,
                match (ladder.complete_up.as_option(), ladder.complete_down.as_option()) {
                    (Some(true), Some(true)) => ", complete",
                    (Some(false), Some(false)) => ", unbounded",
                    _ => "",
                },
            );
            let json = json!({
                "e": labels(&a, e),
                "stratifying": status,
                "b": fingerprint(&rec.b),
                "c": fingerprint(&rec.c),
                "ranks": [ra, rb, rc],
                "restriction": rr,
                "ladder": ladder,
            });
            // side evidence such as j_*(C) may stay open once the flags are decided
            let unknown = [&rr.dminus, &rr.db_mod_big, &rr.dbmod, &rr.kbproj, &ladder.complete_up, &ladder.complete_down].iter().any(|t| t.is_unknown());
            (json, text, violation, unknown)
        })
        .collect();
    let simplicity = simplicity_report(&a, SearchBounds { depth: d, ladder_steps: cfg.steps });
    let mut text = String::new();
    for (_, t, _, _) in &rows {
        text.push_str(t);
    }
    text.push_str(&format!(
        "simplicity: D(Mod) {}  D⁻(Mod) {}  K^b(proj)/D^b {}\n",
        simplicity.d_mod.short(),
        simplicity.d_minus.short(),
        simplicity.kbproj_db.short()
    ));
    let violation = rows.iter().find_map(|(_, _, v, _)| v.clone());
    let unknown = rows.iter().any(|r| r.3);
    let entries: Vec<Value> = rows.into_iter().map(|(j, _, _, _)| j).collect();
    let json = json!({"command": "recollements", "depth": d, "recollements": entries, "simplicity": simplicity});
    let mut r = Report::new(json, text).incomplete_if(unknown);
    if let Some(v) = violation {
        r.status = Status::Violation(v);
    }
    Ok(r)
}

pub fn cmd_stratify(q: &QuiverPresentation, cfg: &RunConfig, recursion_limit: usize) -> Res {
    let a = load(q, cfg)?;
    let d = depth(&a, cfg);
    let trees = match stratification_trees(&a, d, recursion_limit) {
        Ok(t) => t,
        Err(e @ SearchError::RecursionLimit(_)) => {
            let json = json!({"command": "stratify", "error": e.to_string()});
            return Ok(Report::new(json, format!("{e}\n")).incomplete_if(true));
        }
        Err(e) => return Err(InputError(e.to_string())),
    };
    let verdict = jh_summary(&trees);
    let holds = jh_holds(&verdict);
    let mut text = format!("{} stratification tree(s)\n", trees.len());
    for (k, t) in trees.iter().enumerate() {
        let f: Vec<String> = t.factors().iter().map(|x| x.to_string()).collect();
        text.push_str(&format!("tree {k}: {}\n", f.join(" | ")));
    }
    text.push_str(&format!("Jordan–Hölder: {}\n", match &holds {
        TriBool::True(_) => "holds",
        TriBool::False(_) => "fails",
        TriBool::Unknown(_) => "inconclusive",
    }));
    let ranks_ok = trees.iter().all(|t| t.root.ranks_add_up());
    let json = json!({"command": "stratify", "depth": d, "trees": trees, "jordan_holder": verdict, "ranks_add_up": ranks_ok});
    let mut r = Report::new(json, text).incomplete_if(holds.is_unknown());
    r.dot = Some(to_dot(&trees));
    if !ranks_ok {
        r.status = Status::Violation("rank additivity fails in a stratification tree".into());
    }
    Ok(r)
}

fn search_field(a: &AlgRef, cfg: &RunConfig) -> Field {
    match (cfg.field, a.field()) {
        (Some(f), _) => f,
        (None, Field::Prime(p)) => Field::Prime(p),
        (None, Field::Rationals) => Field::Prime(2),
    }
}

pub fn cmd_exceptional(q: &QuiverPresentation, cfg: &RunConfig) -> Res {
    let a = build_algebra(q).map(Arc::new).map_err(|e| InputError(e.to_string()))?;
    let field = search_field(&a, cfg);
    let mut caps = SearchCaps::new(cfg.max_len, cfg.max_mult);
    caps.budget = cfg.budget.unwrap_or(DEFAULT_BUDGET);
    match enumerate_exceptional(&a, field, caps, cfg.seed) {
        Ok(cat) => {
            let mut text = format!(
                "{} exceptional indecomposable(s) over {} (caps len {}, mult {}; {} differentials enumerated)\n",
                cat.entries.len(),
                render::field_name(field),
                caps.max_len,
                caps.max_mult,
                cat.enumerated
            );
            for (k, e) in cat.entries.iter().enumerate() {
                text.push_str(&format!("[{k}] End: {}\n{}", e.end.summary(), render::complex(&e.complex)));
            }
            Ok(Report::new(json!({"command": "exceptional", "catalog": cat}), text))
        }
        Err(e @ SearchError::CapTooLarge { .. }) => {
            let json = json!({"command": "exceptional", "error": e.to_string(), "caps": caps});
            Ok(Report::new(json, format!("{e}\n")).incomplete_if(true))
        }
        Err(e) => Err(InputError(e.to_string())),
    }
}

pub fn cmd_hom(q: &QuiverPresentation, cfg: &RunConfig, x: &str, y: &str, n: Option<i64>) -> Res {
    let a = load(q, cfg)?;
    let d = depth(&a, cfg);
    let cx = parse_complex(&a, x, d).map_err(|e| InputError(e.0))?;
    let cy = parse_complex(&a, y, d).map_err(|e| InputError(e.0))?;
    let range: Vec<i64> = match n {
        Some(n) => vec![n],
        None if cx.is_zero() || cy.is_zero() => Vec::new(),
        None => (cy.lo - cx.hi()..=cy.hi() - cx.lo).collect(),
    };
    let dims: Vec<Value> = range.iter().map(|&n| json!({"n": n, "dim": hom_dim(&cx, &cy, n)})).collect();
    let mut text = String::new();
    for v in &dims {
        text.push_str(&format!("dim Hom(X, Y[{}]) = {}\n", v["n"], v["dim"]));
    }
    if dims.is_empty() {
        text.push_str("all Hom spaces vanish\n");
    }
    Ok(Report::new(json!({"command": "hom", "x": cx, "y": cy, "dims": dims}), text))
}

pub fn cmd_nakayama(q: &QuiverPresentation, cfg: &RunConfig, x: &str) -> Res {
    let a = load(q, cfg)?;
    let d = depth(&a, cfg);
    let cx = parse_complex(&a, x, d).map_err(|e| InputError(e.0))?;
    match nakayama(&cx, d) {
        Ok(nu) => {
            let text = format!("X:\n{}ν(X):\n{}", render::complex(&cx), render::complex(&nu));
            Ok(Report::new(json!({"command": "nakayama", "x": cx, "nakayama": nu}), text))
        }
        Err(e @ LadderError::DepthExceeded(_)) => {
            let json = json!({"command": "nakayama", "error": e.to_string()});
            Ok(Report::new(json, format!("{e}\n")).incomplete_if(true))
        }
        Err(e) => Err(InputError(e.to_string())),
    }
}

/// Panel of small complexes over a finite field: stalk projectives and
/// two-term complexes on basis elements of the radical.
pub fn oracle_panel(a: &AlgRef) -> Vec<ProjComplex> {
    let mut panel: Vec<ProjComplex> = (0..a.num_vertices()).map(|v| ProjComplex::stalk(a, &[v], 0)).collect();
    for &b in a.radical_basis() {
        let (v, u) = a.tag(b);
        panel.push(arrow_complex(a, u, v, a.basis_vector(b), -1));
    }
    panel
}

pub fn cmd_oracle_check(q: &QuiverPresentation, cfg: &RunConfig) -> Res {
    let a = load(q, cfg)?;
    let d = depth(&a, cfg);
    let limit = cfg.budget.unwrap_or(DEFAULT_LIMIT);
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    match path_count(q) {
        Ok(n) => reports.push(OracleReport::new("dim", "path algebra", n, a.dim())),
        Err(e @ OracleError::NonMonomial(_)) => skipped.push(format!("path_count: {e}")),
        Err(e) => skipped.push(format!("path_count: {e}")),
    }
    let op: AlgRef = Arc::new(opposite(&a));
    for e in vertex_subsets(a.num_vertices()) {
        let (m, n) = (quotient_module(&a, &e), quotient_module(&op, &e));
        for i in 0..=4 {
            match tor_dim(&m, &n, i, d) {
                Some(t) => reports.push(OracleReport::new("tor", format!("Tor_{i}(A/AeA, A/AeA), e={}", render::vertex_set(&a, &e)), bar_tor(&m, &n, i), t)),
                None => skipped.push(format!("tor_dim undecided at i={i}")),
            }
        }
    }
    let field = search_field(&a, cfg);
    let fa: AlgRef = Arc::new(if a.field() == field { (*a).clone() } else { a.reduce_to_field(field).map_err(|e| InputError(e.to_string()))? });
    let panel = oracle_panel(&fa);
    let homs: Vec<Result<OracleReport, String>> = panel
        .par_iter()
        .enumerate()
        .flat_map(|(i, x)| panel.iter().enumerate().map(move |(j, y)| (i, x, j, y)).collect::<Vec<_>>())
        .flat_map(|(i, x, j, y)| {
            (-2..=2)
                .map(|n| match hom_bruteforce(x, y, n, limit) {
                    Ok(b) => Ok(OracleReport::new("hom", format!("Hom(X{i}, X{j}[{n}])"), b, hom_dim(x, y, n))),
                    Err(e) => Err(format!("Hom(X{i}, X{j}[{n}]): {e}")),
                })
                .collect::<Vec<_>>()
        })
        .collect();
    for h in homs {
        match h {
            Ok(r) => reports.push(r),
            Err(s) => skipped.push(s),
        }
    }
    let bad: Vec<&OracleReport> = reports.iter().filter(|r| !r.agree).collect();
    let mut text = format!("{} comparisons, {} disagreements, {} skipped\n", reports.len(), bad.len(), skipped.len());
    for r in &bad {
        text.push_str(&format!("DISAGREE {} {}: oracle {} main {}\n", r.target, r.instance, r.oracle, r.main));
    }
    let violation = (!bad.is_empty()).then(|| format!("{} oracle disagreement(s)", bad.len()));
    let json = json!({"command": "oracle-check", "field": field, "reports": reports, "skipped": skipped});
    let mut r = Report::new(json, text);
    if let Some(v) = violation {
        r.status = Status::Violation(v);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use recolle_core::fixtures;

    fn cfg() -> RunConfig {
        RunConfig { depth: None, max_len: 2, max_mult: 2, field: None, seed: 0, steps: 4, budget: None }
    }

    #[test]
    fn field_override_and_search_field() {
        let q = fixtures::dual_numbers();
        let a = load(&q, &cfg()).unwrap();
        assert_eq!(search_field(&a, &cfg()), Field::Prime(2));
        assert_eq!(depth(&a, &cfg()), default_depth(&a));
        let c = RunConfig { field: Some(Field::Prime(3)), ..cfg() };
        let a = load(&q, &c).unwrap();
        assert_eq!(a.field(), Field::Prime(3));
        assert_eq!(search_field(&a, &cfg()), Field::Prime(3));
    }

    #[test]
    fn statuses() {
        let r = cmd_analyze(&fixtures::kxy(), &cfg()).unwrap();
        assert_eq!(r.status, Status::Incomplete);
        let r = cmd_hom(&fixtures::ladder_three(), &cfg(), "P1", "P2", None).unwrap();
        assert_eq!(r.status, Status::Ok);
        assert!(cmd_nakayama(&fixtures::ladder_three(), &cfg(), "P1").is_err());
    }
}
