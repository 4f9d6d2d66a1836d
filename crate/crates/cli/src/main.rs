use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use shiftarg_core::diagram::{self, DiagramType};
use shiftarg_core::invariants::{self, InvariantKind, MatrixFunction};
use shiftarg_core::lie::parse_functional;
use shiftarg_core::pbw::UAlgebra;
use shiftarg_core::verifier::{self, BatteryConfig};
use shiftarg_core::{limits, poisson, quantise, Error, Functional, JordanData, LieAlgebra, Scalar};

#[derive(Parser)]
#[command(name = "shiftarg", version, about = "Exact checks for shift-of-argument subalgebras of classical Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Seed for every randomised step
    #[arg(long, env = "SHIFTARG_SEED", default_value_t = 0, global = true)]
    seed: u64,
    /// Random sample points for rank and index estimates
    #[arg(long, default_value_t = 3, global = true)]
    trials: usize,
    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (defaults to the number of cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Det,
    Per,
}

impl From<Kind> for InvariantKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Det => InvariantKind::Det,
            Kind::Per => InvariantKind::Per,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum QuantizeCheck {
    Commute,
    Graded,
    Independence,
    Centraliser,
}

#[derive(Clone, Copy, ValueEnum)]
enum GtType {
    Gl,
    Sp,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagType {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "C", alias = "c")]
    C,
}

#[derive(Clone, Copy, ValueEnum)]
enum Function {
    Det,
    Per,
    Pf,
}

#[derive(Subcommand)]
enum Command {
    /// Basis, structure check, index and stabilisers
    Algebra {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        mu: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Classical shift family of μ and its Poisson commutativity
    Mf {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        mu: String,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[command(flatten)]
        common: Common,
    },
    /// Quantum shift family of μ in U(g)
    Quantize {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        mu: Option<String>,
        /// Nilpotent γ for the centraliser check
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long, value_enum, default_value = "commute")]
        check: QuantizeCheck,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Gelfand–Tsetlin chain subalgebra
    Gt {
        #[arg(long = "type", value_enum)]
        kind: GtType,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Limit of the shift family along γ + uμ as u → 0
    Limit {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        mu: String,
        #[arg(long, value_enum)]
        kind: Option<Kind>,
        #[command(flatten)]
        common: Common,
    },
    /// Skew diagram of free generators for Jordan data
    Diagram {
        #[arg(long = "type", value_enum)]
        kind: DiagType,
        #[arg(long)]
        jordan: String,
        #[command(flatten)]
        common: Common,
    },
    /// Coefficients of f(μ + F z⁻¹) in powers of z⁻¹
    Shift {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        mu: String,
        #[arg(long, value_enum, default_value = "det")]
        function: Function,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run a battery of checks from a JSON config (the standard one if omitted)
    VerifyAll {
        #[arg(long)]
        config: Option<std::path::PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Algebra { common, .. }
            | Command::Mf { common, .. }
            | Command::Quantize { common, .. }
            | Command::Gt { common, .. }
            | Command::Limit { common, .. }
            | Command::Diagram { common, .. }
            | Command::Shift { common, .. }
            | Command::VerifyAll { common, .. } => common,
        }
    }
}

/// A finished run: whether every check passed, and what to print.
struct Report {
    ok: bool,
    json: serde_json::Value,
    text: String,
}

fn functional(g: &LieAlgebra, spec: &str, seed: u64) -> Result<Functional, Error> {
    parse_functional(g, spec, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn kind_for(g: &LieAlgebra, k: Option<Kind>) -> InvariantKind {
    k.map(Into::into).unwrap_or_else(|| quantise::default_kind(g))
}

fn run(cmd: &Command) -> Result<Report, Error> {
    let c = cmd.common();
    match cmd {
        Command::Algebra { algebra, mu, .. } => {
            let g = LieAlgebra::parse(algebra)?;
            let structure = g.check_structure();
            let index = g.index_estimate(c.trials, c.seed);
            let stab = match mu {
                Some(m) => Some(g.stabiliser(&functional(&g, m, c.seed)?).dim()),
                None => None,
            };
            let mut text = format!("{g}\nbasis: {}\nrank: {:?}\nindex (sampled): {index}\n", g.basis().join(" "), g.rank());
            match &structure {
                Ok(()) => text.push_str("structure constants: antisymmetric, Jacobi holds\n"),
                Err(e) => text.push_str(&format!("structure constants: {e}\n")),
            }
            if let Some(s) = stab {
                text.push_str(&format!("stabiliser dimension: {s}\n"));
            }
            Ok(Report {
                ok: structure.is_ok(),
                json: json!({
                    "algebra": g.name(), "dim": g.dim(), "basis": g.basis(), "rank": g.rank(),
                    "index": index, "jacobi": structure.is_ok(), "stabiliser_dim": stab,
                }),
                text,
            })
        }
        Command::Mf { algebra, mu, kind, .. } => {
            let g = LieAlgebra::parse(algebra)?;
            let mu = functional(&g, mu, c.seed)?;
            let invs = invariants::generating_invariants(&g, kind_for(&g, *kind))?;
            let fam = poisson::mf_family(&g, &invs, &mu)?;
            let polys: Vec<_> = fam.iter().map(|s| s.poly.clone()).collect();
            let rep = poisson::check_poisson_commutative(&g, &polys)?;
            let witness = poisson::independence_witness(&polys, c.trials, c.seed)?;
            let mut text = String::new();
            for s in &fam {
                text.push_str(&format!("H{}_({}) = {}\n", s.invariant + 1, s.k, s.poly));
            }
            text.push_str(&format!(
                "{} shifts, {} pairs checked, {} failures, independence witness {witness}\n",
                fam.len(),
                rep.pairs_checked,
                rep.failures.len()
            ));
            Ok(Report {
                ok: rep.passed(),
                json: json!({
                    "shifts": fam.iter().map(|s| json!({"invariant": s.invariant, "k": s.k, "poly": s.poly.to_json()})).collect::<Vec<_>>(),
                    "check": rep, "independence_witness": witness,
                }),
                text,
            })
        }
        Command::Quantize { algebra, mu, gamma, check, kind, max_degree, .. } => {
            let g = LieAlgebra::parse(algebra)?;
            let kind = kind_for(&g, *kind);
            if let QuantizeCheck::Centraliser = check {
                let gamma = gamma.as_ref().ok_or_else(|| Error::Precondition("--gamma is required".into()))?;
                let gamma = functional(&g, gamma, c.seed)?;
                let invs = invariants::generating_invariants(&g, kind)?;
                let dim_q = g.stabiliser(&gamma).dim();
                let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
                let mut failures = 0;
                let mut rows = Vec::new();
                for _ in 0..c.trials {
                    use rand::Rng;
                    let nu = Functional {
                        values: (0..dim_q).map(|_| Scalar::from_int(rng.gen_range(-10..=10))).collect(),
                        matrix: None,
                    };
                    let fam = quantise::centraliser_quantisation(&g, &gamma, &invs, &nu)?;
                    let rep = quantise::check_commutative(&fam.elements)?;
                    failures += rep.failures.len();
                    rows.push(json!({"nu": nu.values, "elements": fam.elements.len(), "failures": rep.failures}));
                }
                return Ok(Report {
                    ok: failures == 0,
                    text: format!("dim g_γ = {dim_q}; {} random ν; {failures} noncommuting pairs\n", c.trials),
                    json: json!({"dim_q": dim_q, "trials": rows}),
                });
            }
            let mu = mu.as_ref().ok_or_else(|| Error::Precondition("--mu is required".into()))?;
            let mu = functional(&g, mu, c.seed)?;
            let u = UAlgebra::of(&g);
            let gens = quantise::a_mu_generators(&u, &mu, kind)?;
            match check {
                QuantizeCheck::Commute => {
                    let rep = quantise::check_commutative(&quantise::labelled(&gens))?;
                    let mut text = String::new();
                    for gen in &gens {
                        text.push_str(&format!("{}: {} terms, degree {}\n", gen.label, gen.quantum.num_terms(), gen.quantum.degree().unwrap_or(0)));
                    }
                    for f in &rep.failures {
                        text.push_str(&format!("noncommuting: {f}\n"));
                    }
                    text.push_str(&format!("{} generators, {} pairs, {} failures\n", gens.len(), rep.pairs_checked, rep.failures.len()));
                    Ok(Report { ok: rep.passed(), json: json!({"generators": gens.iter().map(|x| &x.label).collect::<Vec<_>>(), "check": rep}), text })
                }
                QuantizeCheck::Graded => {
                    let rep = quantise::graded_image_check(&gens, *max_degree)?;
                    let mut text = String::new();
                    for d in &rep.degrees {
                        text.push_str(&format!("degree {}: dim gr {} dim MF {} {}\n", d.degree, d.dim_gr, d.dim_mf, if d.equal { "equal" } else { "DIFFERENT" }));
                    }
                    Ok(Report { ok: rep.passed(), json: serde_json::to_value(&rep).unwrap(), text })
                }
                QuantizeCheck::Independence => {
                    let polys: Vec<_> = gens.iter().map(|x| x.classical.clone()).collect();
                    let witness = poisson::independence_witness(&polys, c.trials, c.seed)?;
                    let expected = diagram::expected_generator_count(&g, &mu)?;
                    Ok(Report {
                        ok: witness == expected,
                        text: format!("{} generators, independence witness {witness}, expected {expected}\n", gens.len()),
                        json: json!({"generators": gens.len(), "witness": witness, "expected": expected}),
                    })
                }
                QuantizeCheck::Centraliser => unreachable!(),
            }
        }
        Command::Gt { kind, n, verify, .. } => {
            let (fam, b) = match kind {
                GtType::Gl => (limits::gt_gl(*n)?, n * (n + 1) / 2),
                GtType::Sp => (limits::gt_sp(*n)?, n * (n + 1)),
            };
            let mut text = String::new();
            for (label, e) in &fam.elements {
                text.push_str(&format!("{label} = {e}\n"));
            }
            let mut out = json!({"elements": fam.elements.iter().map(|(l, e)| json!({"label": l, "element": e.to_json()})).collect::<Vec<_>>()});
            let mut ok = true;
            if matches!(kind, GtType::Sp) && *n == 2 {
                let target = limits::sp4_det_difference(&fam.algebra)?;
                let present = fam.elements.iter().find(|(_, e)| *e == target).map(|(l, _)| l.clone());
                text.push_str(&format!("Det(F_234) - Det(F_123) = {target}\n  found as {}\n", present.as_deref().unwrap_or("NOTHING")));
                ok &= present.is_some();
                out["det_difference"] = json!({"element": target.to_json(), "label": present});
            }
            if *verify {
                let rep = quantise::check_commutative(&fam.elements)?;
                let witness = poisson::independence_witness(&fam.symbols, c.trials, c.seed)?;
                text.push_str(&format!("{} pairs, {} failures, independence witness {witness} (b = {b})\n", rep.pairs_checked, rep.failures.len()));
                ok &= rep.passed() && witness == b;
                out["check"] = serde_json::to_value(&rep).unwrap();
                out["witness"] = json!(witness);
                out["b"] = json!(b);
            }
            Ok(Report { ok, json: out, text })
        }
        Command::Limit { algebra, gamma, mu, kind, .. } => {
            let g = LieAlgebra::parse(algebra)?;
            let gamma = functional(&g, gamma, c.seed)?;
            let mu = functional(&g, mu, c.seed ^ 1)?;
            let invs = invariants::generating_invariants(&g, kind_for(&g, *kind))?;
            let lim = limits::vinberg_limit_family(&g, &gamma, &mu, &invs)?;
            let quantum = limits::quantised_limit_family(&UAlgebra::of(&g), &lim)?;
            let rep = quantise::check_commutative(&quantum)?;
            let witness = poisson::independence_witness(&lim.family, c.trials, c.seed)?;
            let b = g.b(c.seed);
            let mut text = String::new();
            for (e, p) in lim.entries.iter().zip(&lim.family) {
                text.push_str(&format!(
                    "H{} k={} split={} u^{} {:?} {}: {p}\n",
                    e.invariant + 1,
                    e.k,
                    e.split,
                    e.lowest_power,
                    e.case,
                    if e.matches && e.routes_agree { "ok" } else { "MISMATCH" }
                ));
            }
            text.push_str(&format!("{} failures in commutation, independence witness {witness} (b = {b})\n", rep.failures.len()));
            Ok(Report {
                ok: lim.passed() && rep.passed() && witness == b,
                json: json!({"entries": lim.entries, "check": rep, "witness": witness, "b": b}),
                text,
            })
        }
        Command::Diagram { kind, jordan, .. } => {
            let data = JordanData::from_json_str(jordan)?;
            let kind = match kind {
                DiagType::A => DiagramType::A,
                DiagType::C => DiagramType::C,
            };
            let set = diagram::generator_set_from_jordan(kind, &data)?;
            let text = set.to_json_string() + "\n";
            Ok(Report { ok: true, json: serde_json::to_value(&set).unwrap(), text })
        }
        Command::Shift { algebra, mu, function, m, .. } => {
            let g = LieAlgebra::parse(algebra)?;
            let mu = functional(&g, mu, c.seed)?;
            let f = match function {
                Function::Det => MatrixFunction::Det,
                Function::Per => MatrixFunction::Per,
                Function::Pf => MatrixFunction::Pf,
            };
            let coeffs = invariants::shift_poly(&g, &mu, f, *m)?;
            let mut text = String::new();
            for (k, p) in coeffs.iter().enumerate() {
                text.push_str(&format!("c_{k} = {p}\n"));
            }
            Ok(Report { ok: true, json: json!({"coefficients": coeffs.iter().map(|p| p.to_json()).collect::<Vec<_>>()}), text })
        }
        Command::VerifyAll { config, .. } => {
            let mut cfg = match config {
                Some(path) => {
                    let s = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                    BatteryConfig::from_json_str(&s)?
                }
                None => verifier::default_battery(),
            };
            if c.seed != 0 {
                cfg.seed = c.seed;
            }
            let ledger = verifier::battery(&cfg);
            Ok(Report { ok: ledger.passed(), json: ledger.to_json(), text: ledger.to_table() })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let common = cli.command.common().clone();
    if let Some(j) = common.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli.command) {
        Ok(r) => {
            if common.json {
                println!("{}", serde_json::to_string_pretty(&r.json).unwrap());
            } else {
                print!("{}", r.text);
            }
            ExitCode::from(if r.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
