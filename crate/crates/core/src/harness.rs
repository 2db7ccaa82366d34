//! Campaign runner and report types behind the command-line tool.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{self, CatalogEntry, EntryReport, Variant};
use crate::checker::{check_invariance, Witness};
use crate::detsys::{determining_system, DeterminingSystem};
use crate::error::{Error, Result};
use crate::expr::{Atom, Expr};
use crate::jet::VectorField;
use crate::model::{ManifoldKind, RdSystem};
use crate::reduction::{self, ExampleParams, Grid, Profile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Symbolic,
    Instance,
    Both,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "symbolic" => Ok(Mode::Symbolic),
            "instance" => Ok(Mode::Instance),
            "both" => Ok(Mode::Both),
            _ => Err(Error::Config(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignConfig {
    /// Empty means every table.
    pub tables: Vec<u32>,
    pub case: Option<u32>,
    pub seeds: Vec<u64>,
    pub mode: Mode,
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mode != Mode::Symbolic && self.seeds.is_empty() {
            return Err(Error::Config("instance mode needs at least one seed".into()));
        }
        if self.case.is_some() && self.tables.len() != 1 {
            return Err(Error::Config("--case needs exactly one --table".into()));
        }
        Ok(())
    }
}

/// One operator under one manifold kind.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub table: u32,
    pub case: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub operator: String,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pivot: Option<String>,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub mismatches: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub records: Vec<Record>,
    pub mismatches: Vec<String>,
    pub summary: Summary,
}

impl Report {
    pub fn new(records: Vec<Record>, mismatches: Vec<String>) -> Report {
        let passed = records.iter().filter(|r| r.verdict == "pass").count();
        let summary = Summary {
            total: records.len(),
            passed,
            failed: records.len() - passed,
            mismatches: mismatches.len(),
        };
        Report {
            records,
            mismatches,
            summary,
        }
    }

    /// Drop timing fields, so reports compare byte for byte.
    pub fn without_timings(mut self) -> Report {
        for r in &mut self.records {
            r.elapsed_ms = None;
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            let mut line = format!("T{} case {}", r.table, r.case);
            if let Some(v) = &r.variant {
                line.push_str(&format!(" [{v}]"));
            }
            match r.seed {
                Some(seed) => line.push_str(&format!(" seed {seed}")),
                None => line.push_str(" symbolic"),
            }
            line.push_str(&format!("  {}  {}", r.operator, r.kind));
            if let Some(p) = &r.pivot {
                line.push_str(&format!("({p})"));
            }
            line.push_str(&format!("  {}", r.verdict));
            if let Some(ms) = r.elapsed_ms {
                line.push_str(&format!("  {ms:.1} ms"));
            }
            s.push_str(&line);
            s.push('\n');
        }
        for m in &self.mismatches {
            s.push_str(&format!("MISMATCH {m}\n"));
        }
        s.push_str(&format!(
            "total {}  passed {}  failed {}  mismatches {}\n",
            self.summary.total, self.summary.passed, self.summary.failed, self.summary.mismatches
        ));
        s
    }
}

struct Job {
    entry: CatalogEntry,
    variant: Option<Variant>,
    seed: Option<u64>,
}

fn jobs(config: &CampaignConfig) -> Result<Vec<Job>> {
    let entries: Vec<CatalogEntry> = if config.tables.is_empty() {
        catalog::entries()
    } else {
        let mut v = Vec::new();
        for &t in &config.tables {
            match config.case {
                Some(c) => v.push(catalog::entry(t, c)?),
                None => v.extend(catalog::table(t)?),
            }
        }
        v
    };
    let mut seeds: Vec<Option<u64>> = Vec::new();
    if matches!(config.mode, Mode::Symbolic | Mode::Both) {
        seeds.push(None);
    }
    if matches!(config.mode, Mode::Instance | Mode::Both) {
        seeds.extend(config.seeds.iter().copied().map(Some));
    }
    let mut out = Vec::new();
    for e in entries {
        let mut variants: Vec<Option<Variant>> = vec![None];
        variants.extend(e.variants.iter().cloned().map(Some));
        for v in variants {
            for &seed in &seeds {
                out.push(Job {
                    entry: e.clone(),
                    variant: v.clone(),
                    seed,
                });
            }
        }
    }
    Ok(out)
}

fn run_job(job: &Job) -> Result<(EntryReport, f64)> {
    let start = Instant::now();
    let assign = match job.seed {
        Some(s) => job.entry.sample_params(s, job.variant.as_ref())?,
        None => BTreeMap::new(),
    };
    let report = catalog::verify_entry(&job.entry, &assign, job.variant.as_ref())?;
    Ok((report, start.elapsed().as_secs_f64() * 1e3))
}

/// Verify catalog rows. Jobs run in parallel; the report keeps job order.
pub fn run_verify(config: &CampaignConfig, timings: bool) -> Result<Report> {
    config.validate()?;
    let jobs = jobs(config)?;
    let results: Vec<Result<(EntryReport, f64)>> = jobs.par_iter().map(run_job).collect();
    let mut records = Vec::new();
    let mut mismatches = Vec::new();
    for (job, res) in jobs.iter().zip(results) {
        let (rep, ms) = res?;
        let per = ms / rep.records.len().max(1) as f64;
        let tag = match (&rep.variant, job.seed) {
            (Some(v), Some(s)) => format!("T{} case {} [{v}] seed {s}", rep.table, rep.case),
            (Some(v), None) => format!("T{} case {} [{v}]", rep.table, rep.case),
            (None, Some(s)) => format!("T{} case {} seed {s}", rep.table, rep.case),
            (None, None) => format!("T{} case {}", rep.table, rep.case),
        };
        for m in &rep.mismatches {
            mismatches.push(format!("{tag}: {m}"));
        }
        for r in rep.records {
            records.push(Record {
                table: rep.table,
                case: rep.case,
                variant: rep.variant.clone(),
                mode: if job.seed.is_some() { "instance" } else { "symbolic" },
                seed: job.seed,
                operator: r.operator,
                kind: r.kind,
                pivot: r.pivot,
                verdict: if r.passed { "pass" } else { "fail" },
                witness: r.witness,
                elapsed_ms: timings.then_some((per * 1e3).round() / 1e3),
            });
        }
    }
    Ok(Report::new(records, mismatches))
}

fn kind_name(k: ManifoldKind) -> &'static str {
    match k {
        ManifoldKind::Lie => "lie",
        ManifoldKind::FirstType(_) => "first-type",
        ManifoldKind::NonClassical => "non-classical",
    }
}

/// Every verdict for one user-supplied operator.
pub fn run_check(sys: &RdSystem, q: &VectorField, label: &str) -> Result<Report> {
    let mut kinds = vec![ManifoldKind::Lie];
    if !q.xi0.is_zero() {
        kinds.extend(crate::expr::Dep::ALL.map(ManifoldKind::FirstType));
        kinds.push(ManifoldKind::NonClassical);
    }
    let mut records = Vec::new();
    for k in kinds {
        let v = check_invariance(sys, q, k)?;
        records.push(Record {
            table: 0,
            case: 0,
            variant: None,
            mode: "symbolic",
            seed: None,
            operator: label.to_string(),
            kind: kind_name(k).to_string(),
            pivot: match k {
                ManifoldKind::FirstType(p) => Some(p.to_string()),
                _ => None,
            },
            verdict: if v.passed { "pass" } else { "fail" },
            witness: v.witness,
            elapsed_ms: None,
        });
    }
    Ok(Report::new(records, Vec::new()))
}

/// Set `lambda2` and `lambda3` equal to `lambda1`.
pub fn equalize_diffusivities(sys: &RdSystem) -> Result<RdSystem> {
    RdSystem::new([sys.lambda[0].clone(), sys.lambda[0].clone(), sys.lambda[0].clone()], sys.c.clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetgenReport {
    pub manifold: ManifoldKind,
    pub raw_count: usize,
    pub equations: Vec<String>,
}

impl DetgenReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.equations {
            s.push_str(e);
            s.push_str(" = 0\n");
        }
        s
    }
}

pub fn run_detgen(sys: &RdSystem, kind: ManifoldKind) -> Result<(DeterminingSystem, DetgenReport)> {
    let d = determining_system(sys, kind)?;
    let rep = DetgenReport {
        manifold: kind,
        raw_count: d.raw.len(),
        equations: d.sorted(),
    };
    Ok((d, rep))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residuals {
    pub symbolic_zero: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_zero: Option<bool>,
    pub numeric_max: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReduceReport {
    pub params: BTreeMap<String, String>,
    pub operator: String,
    pub ansatz: [String; 3],
    pub reduced: [String; 3],
    pub kappa: String,
    pub kappa_prime: String,
    pub branch: Option<reduction::Branch>,
    pub profile: Profile,
    pub solution: [String; 3],
    pub grid: Grid,
    pub residuals: Residuals,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_flipped_numeric_max: Option<[f64; 3]>,
    pub kappa_flipped_numeric_max: [f64; 3],
    pub tolerance: f64,
    pub passed: bool,
}

pub const NUMERIC_TOLERANCE: f64 = 1e-9;

fn max3(r: &[f64; 3]) -> f64 {
    r.iter().copied().fold(0.0, f64::max)
}

fn residuals(sol: &reduction::ExactSolution, grid: &Grid) -> Result<Residuals> {
    Ok(Residuals {
        symbolic_zero: sol.symbolic_residual()?.iter().all(Expr::is_zero),
        closed_form_zero: sol.closed_form_residual()?.map(|r| r.iter().all(Expr::is_zero)),
        numeric_max: reduction::residual_numeric(sol, grid)?,
    })
}

/// The full reduction pipeline on concrete parameters.
pub fn run_reduce(p: &ExampleParams, grid: &Grid, profile: Profile) -> Result<ReduceReport> {
    let ans = reduction::build_ansatz(p)?;
    let reduced = reduction::reduce(p, &ans)?;
    let sol = reduction::exact_solution(p, profile)?;
    let res = residuals(&sol, grid)?;
    let alpha_flipped = if p.alpha.is_zero() {
        None
    } else {
        Some(reduction::residual_numeric(&sol.with_alpha_flipped()?, grid)?)
    };
    let kappa_flipped = reduction::residual_numeric(&sol.with_kappa_flipped()?, grid)?;
    let passed = res.symbolic_zero && res.closed_form_zero != Some(false) && max3(&res.numeric_max) <= NUMERIC_TOLERANCE;
    let s = |e: &Expr| e.to_string();
    Ok(ReduceReport {
        params: p.entries().into_iter().map(|(k, v)| (k, v.to_string())).collect(),
        operator: p.operator()?.to_string(),
        ansatz: [s(&ans.u), s(&ans.v), s(&ans.w)],
        reduced: reduced.equations.each_ref().map(|e| format!("{e} = 0")),
        kappa: s(&sol.kappa),
        kappa_prime: s(&sol.kappa_prime),
        branch: sol.branch,
        profile,
        solution: [s(&sol.u), s(&sol.v), s(&sol.w)],
        grid: *grid,
        residuals: res,
        alpha_flipped_numeric_max: alpha_flipped,
        kappa_flipped_numeric_max: kappa_flipped,
        tolerance: NUMERIC_TOLERANCE,
        passed,
    })
}

impl ReduceReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("operator: {}\n", self.operator));
        for (n, a) in ["u", "v", "w"].iter().zip(&self.ansatz) {
            s.push_str(&format!("ansatz {n} = {a}\n"));
        }
        for r in &self.reduced {
            s.push_str(&format!("reduced: {r}\n"));
        }
        s.push_str(&format!("kappa = {}, kappa' = {}\n", self.kappa, self.kappa_prime));
        for (n, a) in ["u", "v", "w"].iter().zip(&self.solution) {
            s.push_str(&format!("solution {n} = {a}\n"));
        }
        s.push_str(&format!("symbolic residual zero: {}\n", self.residuals.symbolic_zero));
        if let Some(c) = self.residuals.closed_form_zero {
            s.push_str(&format!("closed-form residual zero: {c}\n"));
        }
        s.push_str(&format!(
            "numeric max residual on {}x{} grid: {:e}\n",
            self.grid.nt,
            self.grid.nx,
            max3(&self.residuals.numeric_max)
        ));
        if let Some(r) = &self.alpha_flipped_numeric_max {
            s.push_str(&format!("alpha flipped: {:e}\n", max3(r)));
        }
        s.push_str(&format!("kappa flipped: {:e}\n", max3(&self.kappa_flipped_numeric_max)));
        s.push_str(if self.passed { "PASS\n" } else { "FAIL\n" });
        s
    }
}

/// Numeric residual table of the exact solution.
pub fn run_residual(p: &ExampleParams, grid: &Grid, profile: Profile) -> Result<[f64; 3]> {
    let sol = reduction::exact_solution(p, profile)?;
    reduction::residual_numeric(&sol, grid)
}

/// Parse `xi0; xi1; eta1; eta2; eta3` in the expression grammar.
pub fn parse_operator(text: &str) -> Result<VectorField> {
    let parts: Vec<&str> = text.split(';').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(Error::Config(format!(
            "an operator needs five `;`-separated coefficients, got {}",
            parts.len()
        )));
    }
    VectorField::parse(parts[0], parts[1], [parts[2], parts[3], parts[4]])
}

/// Replace parameters by values in an operator (used with `--set`).
pub fn bind_params(q: &VectorField, values: &BTreeMap<String, Expr>) -> Result<VectorField> {
    let b: BTreeMap<Atom, Expr> = values.iter().map(|(k, v)| (Atom::param(k), v.clone())).collect();
    q.substitute(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(tables: &[u32], case: Option<u32>, seeds: &[u64], mode: Mode) -> CampaignConfig {
        CampaignConfig {
            tables: tables.to_vec(),
            case,
            seeds: seeds.to_vec(),
            mode,
        }
    }

    #[test]
    fn table1_symbolic_campaign() {
        let r = run_verify(&cfg(&[1], None, &[], Mode::Symbolic), false).unwrap();
        assert!(r.mismatches.is_empty());
        let lie: Vec<&Record> = r.records.iter().filter(|x| x.kind == "lie").collect();
        assert!(lie.iter().all(|x| x.verdict == "pass"));
        let cases: std::collections::BTreeSet<u32> = lie.iter().map(|x| x.case).collect();
        assert_eq!(cases.len(), 8);
        assert_eq!(r.summary.total, r.records.len());
        assert_eq!(r.summary.passed + r.summary.failed, r.summary.total);
    }

    #[test]
    fn case4_with_seed() {
        let r = run_verify(&cfg(&[2], Some(4), &[7], Mode::Instance), false).unwrap();
        assert!(r.mismatches.is_empty());
        let ops: std::collections::BTreeSet<&str> = r.records.iter().map(|x| x.operator.as_str()).collect();
        assert_eq!(ops.len(), 6);
        for op in ops {
            let of = |k: &'static str| r.records.iter().filter(move |x| x.operator == op && x.kind == k);
            assert!(of("lie").all(|x| x.verdict == "fail" && x.witness.is_some()));
            assert!(of("first-type").any(|x| x.verdict == "pass"));
        }
    }

    #[test]
    fn unknown_table() {
        assert!(matches!(
            run_verify(&cfg(&[3], None, &[], Mode::Symbolic), false),
            Err(Error::CaseNotFound { .. })
        ));
        assert!(run_verify(&cfg(&[2], None, &[], Mode::Instance), false).is_err());
    }

    #[test]
    fn reports_are_reproducible() {
        let c = cfg(&[2], Some(9), &[1, 2], Mode::Both);
        let a = run_verify(&c, false).unwrap().to_json();
        let b = run_verify(&c, false).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn reduce_defaults() {
        let r = run_reduce(&ExampleParams::default_numeric(), &Grid::unit(11, 11), Profile::Even).unwrap();
        assert!(r.passed);
        assert!(r.kappa_flipped_numeric_max.iter().any(|x| *x > 1e-3));
        let tiny = run_reduce(&ExampleParams::default_numeric(), &Grid::unit(2, 2), Profile::Even).unwrap();
        assert!(tiny.passed);
    }

    #[test]
    fn reduce_rejects_equal_rates() {
        let mut p = ExampleParams::default_numeric();
        p.a[0] = p.a[1].clone();
        match run_reduce(&p, &Grid::unit(3, 3), Profile::Even) {
            Err(Error::Degenerate(m)) => assert!(m.contains("a1 != a2")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn operator_text() {
        let q = parse_operator("1; 0; u; -u; 0").unwrap();
        assert_eq!(q.eta[1], "-u".parse().unwrap());
        assert!(parse_operator("1; 0").is_err());
    }
}
