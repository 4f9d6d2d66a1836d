//! Batch runner: a JSON list of cases, each running a set of checks, merged
//! into one ledger of pass/fail rows.

use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{self, DiagramType};
use crate::error::{Error, Result};
use crate::invariants::{generating_invariants, InvariantKind};
use crate::lie::{parse_functional, Eigen, Functional, JordanData, LieAlgebra};
use crate::limits;
use crate::pbw::{PBWElement, UAlgebra};
use crate::poisson;
use crate::quantise;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Commute,
    Mf,
    Graded,
    Independence,
    Degrees,
    Kostant,
    Limit,
    Gt,
    Centraliser,
    Diagram,
}

impl Check {
    pub fn theorem(self) -> &'static str {
        match self {
            Check::Commute => "quantum-shift-commutativity",
            Check::Mf => "mf-poisson-commutativity",
            Check::Graded => "graded-image-equality",
            Check::Independence => "free-generation-count",
            Check::Degrees => "top-component-degree-law",
            Check::Kostant => "kostant-regularity-criterion",
            Check::Limit => "vinberg-limit-nilpotent",
            Check::Gt => "gelfand-tsetlin-chain",
            Check::Centraliser => "centraliser-quantisation",
            Check::Diagram => "generator-skew-diagram",
        }
    }

    fn key(self) -> &'static str {
        match self {
            Check::Commute => "commute",
            Check::Mf => "mf",
            Check::Graded => "graded",
            Check::Independence => "independence",
            Check::Degrees => "degrees",
            Check::Kostant => "kostant",
            Check::Limit => "limit",
            Check::Gt => "gt",
            Check::Centraliser => "centraliser",
            Check::Diagram => "diagram",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corruption {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub delta: Scalar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GtCase {
    #[serde(rename = "type")]
    pub kind: String,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramCase {
    #[serde(rename = "type")]
    pub kind: DiagramType,
    pub jordan: serde_json::Value,
    /// Expected JSON, compared byte for byte.
    #[serde(default)]
    pub expect: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    pub name: String,
    #[serde(default)]
    pub algebra: Option<String>,
    /// Functional shorthand or JSON, see [`parse_functional`].
    #[serde(default)]
    pub mu: Option<serde_json::Value>,
    #[serde(default)]
    pub gamma: Option<serde_json::Value>,
    /// `ν` for centraliser checks: `{"values": [...]}` in stabiliser
    /// coordinates; random integer values when absent.
    #[serde(default)]
    pub nu: Option<serde_json::Value>,
    #[serde(default)]
    pub kind: Option<InvariantKind>,
    #[serde(default)]
    pub max_degree: Option<usize>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub checks: Vec<Check>,
    #[serde(default)]
    pub corrupt: Option<Corruption>,
    #[serde(default)]
    pub gt: Option<GtCase>,
    #[serde(default)]
    pub diagram: Option<DiagramCase>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatteryConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub cases: Vec<CaseConfig>,
}

impl BatteryConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(Self::default());
        }
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("malformed config: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub case: String,
    pub check: String,
    pub theorem: String,
    pub status: Status,
    pub detail: String,
    pub millis: u128,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Ledger {
    pub rows: Vec<LedgerRow>,
}

impl Ledger {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status == Status::Pass)
    }

    pub fn count(&self, s: Status) -> usize {
        self.rows.iter().filter(|r| r.status == s).count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rows": self.rows,
            "passed": self.count(Status::Pass),
            "failed": self.count(Status::Fail) + self.count(Status::Error),
            "skipped": self.count(Status::Skipped),
        })
    }

    pub fn to_table(&self) -> String {
        let w_case = self.rows.iter().map(|r| r.case.len()).max().unwrap_or(4).max(4);
        let w_check = self.rows.iter().map(|r| r.check.len()).max().unwrap_or(5).max(5);
        let mut s = String::new();
        let _ = writeln!(s, "{:<w_case$}  {:<w_check$}  {:<7}  {:>8}  detail", "case", "check", "status", "ms");
        for r in &self.rows {
            let status = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Error => "ERROR",
                Status::Skipped => "SKIP",
            };
            let _ = writeln!(s, "{:<w_case$}  {:<w_check$}  {:<7}  {:>8}  {}", r.case, r.check, status, r.millis, r.detail);
        }
        let _ = writeln!(
            s,
            "{} passed, {} failed, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail) + self.count(Status::Error),
            self.count(Status::Skipped)
        );
        s
    }
}

fn name_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a, so case seeds do not depend on case order
    name.bytes().fold(0xcbf2_9ce4_8422_2325 ^ seed, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn value_text(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Replaces symbolic eigenvalues by distinct integers, keeping `±` pairs.
pub fn numeric_jordan(data: &JordanData) -> Result<JordanData> {
    let mut names: Vec<String> = Vec::new();
    let mut groups = data.0.clone();
    for g in &mut groups {
        if let Eigen::Sym { name, negated } = &g.ev {
            let i = names.iter().position(|n| n == name).unwrap_or_else(|| {
                names.push(name.clone());
                names.len() - 1
            });
            let v = Scalar::from_int(1000 + 7 * i as i64);
            g.ev = Eigen::Num(if *negated { -v } else { v });
        }
    }
    for (i, g) in groups.iter().enumerate() {
        if groups[..i].iter().any(|h| h.ev == g.ev) {
            return Err(Error::InvalidJordanData("eigenvalue collision after substitution".into()));
        }
    }
    Ok(JordanData(groups))
}

type Outcome = Result<(bool, String)>;

struct Ctx<'a> {
    case: &'a CaseConfig,
    g: Option<LieAlgebra>,
    seed: u64,
}

impl Ctx<'_> {
    fn alg(&self) -> Result<&LieAlgebra> {
        self.g.as_ref().ok_or_else(|| Error::Precondition("case has no algebra".into()))
    }

    fn functional(&self, v: &Option<serde_json::Value>, what: &str, salt: u64) -> Result<Functional> {
        let v = v.as_ref().ok_or_else(|| Error::Precondition(format!("case needs {what}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ salt);
        parse_functional(self.alg()?, &value_text(v), &mut rng)
    }

    fn kind(&self) -> Result<InvariantKind> {
        Ok(self.case.kind.unwrap_or_else(|| self.g.as_ref().map(quantise::default_kind).unwrap_or(InvariantKind::Det)))
    }

    fn trials(&self) -> usize {
        self.case.trials.unwrap_or(3)
    }
}

fn check_commute(c: &Ctx) -> Outcome {
    let g = c.alg()?;
    let mu = c.functional(&c.case.mu, "mu", 1)?;
    let u = UAlgebra::of(g);
    let gens = quantise::a_mu_generators(&u, &mu, c.kind()?)?;
    let rep = quantise::check_commutative(&quantise::labelled(&gens))?;
    // elements of the stabiliser of μ commute with every generator
    let stab = g.stabiliser(&mu);
    let mut central_failures = 0;
    for v in &stab.rows {
        let x = PBWElement::linear(&u, v);
        for gen in &gens {
            if !x.commutator(&gen.quantum)?.is_zero() {
                central_failures += 1;
            }
        }
    }
    let ok = rep.passed() && central_failures == 0;
    let mut detail = format!("{} generators, {} pairs, {} stabiliser directions", gens.len(), rep.pairs_checked, stab.dim());
    if !ok {
        detail.push_str(&format!("; {} noncommuting pairs, {} stabiliser failures", rep.failures.len(), central_failures));
    }
    Ok((ok, detail))
}

fn check_mf(c: &Ctx) -> Outcome {
    let g = c.alg()?;
    let mu = c.functional(&c.case.mu, "mu", 1)?;
    let invs = generating_invariants(g, c.kind()?)?;
    let fam: Vec<_> = poisson::mf_family(g, &invs, &mu)?.into_iter().map(|s| s.poly).collect();
    let rep = poisson::check_poisson_commutative(g, &fam)?;
    Ok((rep.passed(), format!("{} shifts, {} pairs, {} failures", fam.len(), rep.pairs_checked, rep.failures.len())))
}

fn check_graded(c: &Ctx) -> Outcome {
    let g = c.alg()?;
    let mu = c.functional(&c.case.mu, "mu", 1)?;
    let d = c.case.max_degree.unwrap_or(3);
    let u = UAlgebra::of(g);
    let gens = quantise::a_mu_generators(&u, &mu, c.kind()?)?;
    let rep = quantise::graded_image_check(&gens, d)?;
    let dims: Vec<String> = rep.degrees.iter().map(|x| format!("{}:{}/{}", x.degree, x.dim_gr, x.dim_mf)).collect();
    Ok((rep.passed(), format!("degree≤{d}, {} products, gr/mf dims {}", rep.products, dims.join(" "))))
}

fn check_independence(c: &Ctx) -> Outcome {
    let g = c.alg()?;
    let gamma = c.functional(&c.case.gamma, "gamma", 2)?;
    let invs = generating_invariants(g, c.kind()?)?;
    let fam: Vec<_> = poisson::mf_family(g, &invs, &gamma)?.into_iter().map(|s| s.poly).collect();
    let expected = diagram::expected_generator_count(g, &gamma)?;
    let witness = poisson::independence_witness(&fam, c.trials(), c.seed)?;
    Ok((
        fam.len() == expected && witness == expected,
        format!("{} nonzero shifts, expected {expected}, witness {witness}", fam.len()),
    ))
}

fn check_degrees(c: &Ctx) -> Outcome {
    let g = c.alg()?;
    let gamma = c.functional(&c.case.gamma, "gamma", 2)?;
    let invs = generating_invariants(g, c.kind()?)?;
    let rep = poisson::degrees_top(g, &invs, &gamma, c.seed)?;
    let stab = g.stabiliser(&gamma);
    let mut inside = true;
    let mut invariant = true;
    for h in &invs {
        let (_, top) = poisson::gamma_top(h, &gamma)?;
        inside &= poisson::lies_in_subalgebra(&top, &stab)?;
        invariant &= poisson::is_invariant_under(g, &stab, &top)?;
    }
    let ok = rep.sum as usize == rep.b_q_gamma && inside && invariant;
    Ok((
        ok,
        format!(
            "degrees {:?}, sum {}, b(g_γ) {}, in S(g_γ) {inside}, g_γ-invariant {invariant}",
            rep.degrees, rep.sum, rep.b_q_gamma
        ),
    ))
}

fn check_kostant(c: &Ctx) -> Outcome {
    let g = c.alg()?;
    let x = c.functional(&c.case.mu, "mu", 1)?;
    let invs = generating_invariants(g, c.kind()?)?;
    let k = poisson::kostant_pointwise_check(g, &invs, &x)?;
    Ok((
        k.equivalence_holds && k.differentials_in_stabiliser,
        format!("rank d_x {} of {}, dim g_x {}", k.differential_rank, invs.len(), k.stabiliser_dim),
    ))
}

fn check_limit(c: &Ctx) -> Outcome {
    let g = c.alg()?;
    let gamma = c.functional(&c.case.gamma, "gamma", 2)?;
    let mu = c.functional(&c.case.mu, "mu", 1)?;
    let invs = generating_invariants(g, c.kind()?)?;
    let lim = limits::vinberg_limit_family(g, &gamma, &mu, &invs)?;
    let u = UAlgebra::of(g);
    let quantum = limits::quantised_limit_family(&u, &lim)?;
    let comm = quantise::check_commutative(&quantum)?;
    let witness = poisson::independence_witness(&lim.family, c.trials(), c.seed)?;
    let b = g.b(c.seed);
    let bad = lim.entries.iter().filter(|e| !(e.matches && e.routes_agree)).count();
    Ok((
        lim.passed() && comm.passed() && witness == b,
        format!("{} members, {bad} mismatches, {} noncommuting pairs, witness {witness}, b(g) {b}", lim.family.len(), comm.failures.len()),
    ))
}

fn check_gt(c: &Ctx) -> Outcome {
    let spec = c.case.gt.as_ref().ok_or_else(|| Error::Precondition("case needs gt".into()))?;
    let (fam, b) = match spec.kind.as_str() {
        "gl" => (limits::gt_gl(spec.n)?, spec.n * (spec.n + 1) / 2),
        "sp" => (limits::gt_sp(spec.n)?, spec.n * (spec.n + 1)),
        other => return Err(Error::Parse(format!("unknown gt type {other:?}"))),
    };
    let comm = quantise::check_commutative(&fam.elements)?;
    let witness = poisson::independence_witness(&fam.symbols, c.trials(), c.seed)?;
    let mut ok = comm.passed() && witness == b;
    let mut detail = format!("{} elements, {} noncommuting pairs, witness {witness}, b {b}", fam.elements.len(), comm.failures.len());
    if spec.kind == "sp" && spec.n == 2 {
        let target = limits::sp4_det_difference(&fam.algebra)?;
        let present = fam.elements.iter().any(|(_, e)| *e == target);
        ok &= present;
        detail.push_str(&format!(", det difference present {present}"));
    }
    Ok((ok, detail))
}

fn check_centraliser(c: &Ctx) -> Outcome {
    let g = c.alg()?;
    let gamma = c.functional(&c.case.gamma, "gamma", 2)?;
    let invs = generating_invariants(g, c.kind()?)?;
    let q = g.restrict(&g.stabiliser(&gamma))?;
    let dim_q = q.alg.dim();
    let nus: Vec<Functional> = match &c.case.nu {
        Some(v) => {
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
            vec![parse_functional(&q.alg, &value_text(v), &mut rng)?]
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed ^ 3);
            (0..c.trials())
                .map(|_| Functional {
                    values: (0..dim_q).map(|_| Scalar::from_int(rng.gen_range(-10..=10))).collect(),
                    matrix: None,
                })
                .collect()
        }
    };
    let mut failures = 0;
    let mut sizes = Vec::new();
    for nu in &nus {
        let fam = quantise::centraliser_quantisation(g, &gamma, &invs, nu)?;
        let rep = quantise::check_commutative(&fam.elements)?;
        failures += rep.failures.len();
        sizes.push(fam.elements.len());
    }
    Ok((failures == 0, format!("dim g_γ {dim_q}, {} ν, family sizes {sizes:?}, {failures} noncommuting pairs", nus.len())))
}

fn check_diagram(c: &Ctx) -> Outcome {
    let spec = c.case.diagram.as_ref().ok_or_else(|| Error::Precondition("case needs diagram".into()))?;
    let data = JordanData::from_json_str(&value_text(&spec.jordan))?;
    let set = diagram::generator_set_from_jordan(spec.kind, &data)?;
    let json = set.to_json_string();
    let mut ok = true;
    let mut detail = format!("{} cells, excluded {:?}", set.cells.len(), set.excluded);
    if let Some(expect) = &spec.expect {
        let same = *expect == json;
        ok &= same;
        detail.push_str(&format!(", golden match {same}"));
    }
    // brute-force count from the stabiliser of a numeric realisation
    let g = match spec.kind {
        DiagramType::A => LieAlgebra::gl(data.size()),
        DiagramType::C => LieAlgebra::sp(data.size()),
    };
    let mu = g.jordan_to_functional(&numeric_jordan(&data)?)?;
    let expected = diagram::expected_generator_count(&g, &mu)?;
    ok &= expected == set.cells.len();
    detail.push_str(&format!(", stabiliser count {expected}"));
    Ok((ok, detail))
}

fn run_check(check: Check, c: &Ctx) -> Outcome {
    match check {
        Check::Commute => check_commute(c),
        Check::Mf => check_mf(c),
        Check::Graded => check_graded(c),
        Check::Independence => check_independence(c),
        Check::Degrees => check_degrees(c),
        Check::Kostant => check_kostant(c),
        Check::Limit => check_limit(c),
        Check::Gt => check_gt(c),
        Check::Centraliser => check_centraliser(c),
        Check::Diagram => check_diagram(c),
    }
}

fn row(case: &str, check: &str, theorem: &str, status: Status, detail: String, millis: u128) -> LedgerRow {
    LedgerRow { case: case.into(), check: check.into(), theorem: theorem.into(), status, detail, millis }
}

/// Structure check first; if it fails the remaining checks of the case
/// are skipped. Errors inside a check are recorded, not propagated.
pub fn run_case(case: &CaseConfig, seed: u64) -> Vec<LedgerRow> {
    let seed = name_seed(seed, &case.name);
    let mut rows = Vec::new();
    let mut g = None;
    if let Some(name) = &case.algebra {
        let t = Instant::now();
        let parsed = LieAlgebra::parse(name).map(|a| match &case.corrupt {
            Some(k) => a.with_corrupted_constant(k.i, k.j, k.k, k.delta.clone()),
            None => a,
        });
        let (status, detail) = match &parsed {
            Err(e) => (Status::Error, e.to_string()),
            Ok(a) => match a.check_structure() {
                Ok(()) => (Status::Pass, format!("{} structure constants consistent", a.name())),
                Err(e) => (Status::Fail, e),
            },
        };
        rows.push(row(&case.name, "structure", "jacobi-identity", status, detail, t.elapsed().as_millis()));
        if status != Status::Pass {
            for ch in &case.checks {
                rows.push(row(&case.name, ch.key(), ch.theorem(), Status::Skipped, "structure check failed".into(), 0));
            }
            return rows;
        }
        g = parsed.ok();
    }
    let ctx = Ctx { case, g, seed };
    for &ch in &case.checks {
        let t = Instant::now();
        let (status, detail) = match run_check(ch, &ctx) {
            Ok((true, d)) => (Status::Pass, d),
            Ok((false, d)) => (Status::Fail, d),
            Err(e) => (Status::Error, e.to_string()),
        };
        rows.push(row(&case.name, ch.key(), ch.theorem(), status, detail, t.elapsed().as_millis()));
    }
    rows
}

/// Runs all cases concurrently; rows keep the configuration order.
pub fn battery(config: &BatteryConfig) -> Ledger {
    let per_case: Vec<Vec<LedgerRow>> = config.cases.par_iter().map(|c| run_case(c, config.seed)).collect();
    Ledger { rows: per_case.into_iter().flatten().collect() }
}

/// Jordan data of the sp_10 example with `λ` symbolic.
pub const SP10_JORDAN: &str = r#"[{"ev":"0","sizes":[1,1]},{"ev":"l","sizes":[2,1,1]},{"ev":"-l","sizes":[2,1,1]}]"#;

/// Expected diagram JSON for [`SP10_JORDAN`].
pub const SP10_GOLDEN: &str = r#"{"Pi":[5,3,2],"Pi_gamma":[4,4,2],"r":{"2":1,"4":1,"6":2,"8":2,"10":3},"sigma":[2,1,1,0,0],"cells":[[10,7],[10,6],[10,5],[10,4],[10,3],[10,2],[10,1],[10,0],[8,6],[8,5],[8,4],[8,3],[8,2],[8,1],[8,0],[6,4],[6,3],[6,2],[6,1],[6,0],[4,3],[4,2],[4,1],[4,0],[2,1],[2,0]],"excluded":[[10,9],[10,8],[8,7],[6,5]]}"#;

fn case(name: &str, algebra: Option<&str>, checks: &[Check]) -> CaseConfig {
    CaseConfig {
        name: name.into(),
        algebra: algebra.map(String::from),
        mu: None,
        gamma: None,
        nu: None,
        kind: None,
        max_degree: None,
        trials: None,
        checks: checks.to_vec(),
        corrupt: None,
        gt: None,
        diagram: None,
    }
}

fn s(x: &str) -> Option<serde_json::Value> {
    Some(serde_json::Value::String(x.into()))
}

/// The standard battery run by `verify-all` without a config file.
pub fn default_battery() -> BatteryConfig {
    let mut cases = Vec::new();
    for (alg, mus) in [
        ("gl2", vec!["diag:1,2", "nilpotent:2", "scalar:3", "zero"]),
        ("gl3", vec!["diag:1,2,3", "nilpotent:2,1", "nilpotent:3", "scalar:2", "zero"]),
    ] {
        for mu in mus {
            for kind in [InvariantKind::Det, InvariantKind::Per] {
                let mut c = case(&format!("{alg}/{mu}/{kind:?}").to_lowercase(), Some(alg), &[Check::Commute, Check::Mf]);
                c.mu = s(mu);
                c.kind = Some(kind);
                if alg == "gl2" && kind == InvariantKind::Det {
                    c.checks.push(Check::Graded);
                    c.max_degree = Some(4);
                }
                cases.push(c);
            }
        }
    }
    for mu in ["regular", "nilpotent:2,2", "zero"] {
        let mut c = case(&format!("sp4/{mu}"), Some("sp4"), &[Check::Commute, Check::Mf]);
        c.mu = s(mu);
        if mu.starts_with("nilpotent") {
            c.checks.push(Check::Graded);
            c.max_degree = Some(4);
        }
        cases.push(c);
    }
    for (alg, mu) in [("o3", "regular"), ("o5", "regular"), ("o5", "nilpotent:3,1,1"), ("o4", "regular"), ("o4", "nilpotent:3,1")] {
        let mut c = case(&format!("{alg}/{mu}"), Some(alg), &[Check::Commute]);
        c.mu = s(mu);
        cases.push(c);
    }
    for (alg, types) in [
        ("gl2", vec!["2", "1,1"]),
        ("gl3", vec!["3", "2,1", "1,1,1"]),
        ("gl4", vec!["4", "3,1", "2,2", "2,1,1", "1,1,1,1"]),
        ("sp4", vec!["4", "2,2", "2,1,1", "1,1,1,1"]),
    ] {
        for t in types {
            let mut c = case(&format!("{alg}/gamma {t}"), Some(alg), &[Check::Independence, Check::Degrees]);
            c.gamma = s(&format!("nilpotent:{t}"));
            cases.push(c);
        }
    }
    for (alg, mu, types) in [("gl2", "random", vec!["2"]), ("gl3", "random", vec!["3", "2,1"])] {
        for t in types {
            let mut c = case(&format!("{alg}/limit {t}"), Some(alg), &[Check::Limit]);
            c.gamma = s(&format!("nilpotent:{t}"));
            c.mu = s(mu);
            cases.push(c);
        }
    }
    for (kind, n) in [("gl", 3), ("sp", 2)] {
        let mut c = case(&format!("gt/{kind}{n}"), None, &[Check::Gt]);
        c.gt = Some(GtCase { kind: kind.into(), n });
        cases.push(c);
    }
    let mut c = case("gl3/centraliser 2,1", Some("gl3"), &[Check::Centraliser]);
    c.gamma = s("nilpotent:2,1");
    c.trials = Some(3);
    cases.push(c);
    for mu in ["regular", "nilpotent:3", "zero"] {
        let mut c = case(&format!("gl3/kostant {mu}"), Some("gl3"), &[Check::Kostant]);
        c.mu = s(mu);
        cases.push(c);
    }
    let mut c = case("sp10/diagram", None, &[Check::Diagram]);
    c.diagram = Some(DiagramCase {
        kind: DiagramType::C,
        jordan: serde_json::from_str(SP10_JORDAN).unwrap(),
        expect: Some(SP10_GOLDEN.into()),
    });
    cases.push(c);
    BatteryConfig { seed: 0, cases }
}
