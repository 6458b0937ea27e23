//! Run configuration, suite orchestration, JSON reports and CSV curves.

use crate::boundstate::{
    blaschke_pair_demo, ccr_demo, crossterm_positivity, estimate_c, extension_symbol_zeros, konrady_cross_term,
    positivity_check, random_two_particle, weak_commutator_report, xstarx_residual, ystary_residual,
    BlaschkePairReport, BoundStatePair, CcrReport, CommutatorReport, ConstantEstimate, FactorizationResidual,
    GaussianVector, KonradyCrossTerm, PeriodicBlaschke, PositivityReport, ThirdStripBlaschke,
};
use crate::fock::{annihilate, create, project_pn, ClosedWave, SLattice, WaveFunction};
use crate::hardy::{
    blaschke_point, build_symbol, cauchy_shift_residual, delta_power, factorize, p_dot, AnalyticFamilyMember,
    ClosedForm, HardyElement, Side, StripFunction,
};
use crate::smatrix::{
    bound_state_prefactor, check_axioms, check_inequality_k, curve_inequality_k, curve_re_shift_third,
    make_scattering, max_modulus_sixth, min_real_shifted, AxiomReport, BlaschkeFactor, InequalityK, RapidityGrid,
    ResidueR, ScatteringFunction,
};
use anyhow::{anyhow, Context};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Instant, SystemTime, UNIX_EPOCH};
use thiserror::Error;

pub const SCHEMA_VERSION: &str = "1";
pub const CURVE_RE_SHIFT_THIRD: &str = "re_S_shift_third";
pub const CURVE_INEQ_K: &str = "ineqK_vs_epsilon";
pub const CURVE_IDS: [&str; 2] = [CURVE_RE_SHIFT_THIRD, CURVE_INEQ_K];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldIssue {
    pub field: String,
    pub message: String,
}

fn issue_list(issues: &[FieldIssue]) -> String {
    issues.iter().map(|i| format!("{}: {}", i.field, i.message)).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("invalid config: {}", issue_list(.0))]
    ConfigInvalid(Vec<FieldIssue>),
    #[error("unknown curve {0:?}")]
    UnknownCurve(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, ReportError>;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlaschkeSpec {
    pub zero: C64,
    #[serde(default = "one")]
    pub phase: C64,
}

/// Analytic family member for one side of the bound-state pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Gaussian { mu: f64, sigma: f64 },
    WedgeExpSech { a: [f64; 2], beta: f64 },
    Custom { a: [f64; 2], beta: f64, zeros: Vec<C64> },
}

impl FamilySpec {
    pub fn member(&self, side: Side) -> crate::hardy::Result<AnalyticFamilyMember> {
        match self {
            FamilySpec::Gaussian { mu, sigma } => AnalyticFamilyMember::gaussian(side, *mu, *sigma),
            FamilySpec::WedgeExpSech { a, beta } => AnalyticFamilyMember::wedge_exp_sech(side, *a, *beta),
            FamilySpec::Custom { a, beta, zeros } => AnalyticFamilyMember::custom(side, *a, *beta, zeros.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PairSpec {
    pub xi: FamilySpec,
    pub eta: FamilySpec,
}

impl Default for PairSpec {
    fn default() -> Self {
        PairSpec {
            xi: FamilySpec::Gaussian { mu: 0.2, sigma: 1.5 },
            eta: FamilySpec::Gaussian { mu: -0.1, sigma: 1.4 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub axioms: f64,
    pub value_at_zero: f64,
    pub shift_third: f64,
    pub sixth_modulus: f64,
    pub inequality_k: f64,
    pub residue: f64,
    pub pole_location: f64,
    pub cauchy_shift: f64,
    pub semigroup: f64,
    pub factorize: f64,
    pub symbol: f64,
    pub fock: f64,
    pub commutator_one: f64,
    pub commutator_two: f64,
    pub positivity: f64,
    pub xstarx: f64,
    pub crossterm: f64,
    pub ccr: f64,
    pub blaschke_pair: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            axioms: 1e-8,
            value_at_zero: 1e-10,
            shift_third: 1e-10,
            sixth_modulus: 1e-10,
            inequality_k: 1e-8,
            residue: 1e-8,
            pole_location: 1e-9,
            cauchy_shift: 1e-8,
            semigroup: 1e-10,
            factorize: 1e-6,
            symbol: 1e-6,
            fock: 1e-10,
            commutator_one: 1e-6,
            commutator_two: 1e-5,
            positivity: 1e-8,
            xstarx: 1e-8,
            crossterm: 1e-8,
            ccr: 1e-8,
            blaschke_pair: 1e-8,
        }
    }
}

impl Tolerances {
    fn named(&self) -> [(&'static str, f64); 19] {
        [
            ("axioms", self.axioms),
            ("value_at_zero", self.value_at_zero),
            ("shift_third", self.shift_third),
            ("sixth_modulus", self.sixth_modulus),
            ("inequality_k", self.inequality_k),
            ("residue", self.residue),
            ("pole_location", self.pole_location),
            ("cauchy_shift", self.cauchy_shift),
            ("semigroup", self.semigroup),
            ("factorize", self.factorize),
            ("symbol", self.symbol),
            ("fock", self.fock),
            ("commutator_one", self.commutator_one),
            ("commutator_two", self.commutator_two),
            ("positivity", self.positivity),
            ("xstarx", self.xstarx),
            ("crossterm", self.crossterm),
            ("ccr", self.ccr),
            ("blaschke_pair", self.blaschke_pair),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Suites {
    pub smatrix: bool,
    pub epsilon_scan: bool,
    pub hardy: bool,
    pub fock: bool,
    pub boundstate: bool,
    pub counterexamples: bool,
}

impl Default for Suites {
    fn default() -> Self {
        Suites::all()
    }
}

impl Suites {
    pub fn all() -> Self {
        Suites { smatrix: true, epsilon_scan: true, hardy: true, fock: true, boundstate: true, counterexamples: true }
    }

    pub fn none() -> Self {
        Suites {
            smatrix: false,
            epsilon_scan: false,
            hardy: false,
            fock: false,
            boundstate: false,
            counterexamples: false,
        }
    }

    pub fn any(&self) -> bool {
        self.smatrix || self.epsilon_scan || self.hardy || self.fock || self.boundstate || self.counterexamples
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    pub report: Option<PathBuf>,
    pub curves_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSpec {
    pub epsilons: Vec<f64>,
    /// ε samples of the inequality curve.
    pub curve_points: usize,
}

impl Default for ScanSpec {
    fn default() -> Self {
        let edge = PI / 6.0 - 1e-3;
        ScanSpec { epsilons: vec![0.0, 0.1, -0.1, 0.4, -0.4, edge, -edge], curve_points: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub epsilon: f64,
    pub blaschke: Vec<BlaschkeSpec>,
    pub grid: RapidityGrid,
    /// Grid of the multi-particle quadratures.
    pub quadrature_grid: RapidityGrid,
    pub tolerances: Tolerances,
    pub suites: Suites,
    pub output: OutputPaths,
    pub seed: u64,
    pub scan: ScanSpec,
    pub pair: PairSpec,
    /// Highest particle number of the commutator and positivity checks.
    pub max_level: usize,
    /// Random draws per sampled check.
    pub draws: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            epsilon: 0.0,
            blaschke: Vec::new(),
            grid: RapidityGrid::default(),
            quadrature_grid: RapidityGrid { theta_max: 8.0, n_points: 128 },
            tolerances: Tolerances::default(),
            suites: Suites::default(),
            output: OutputPaths::default(),
            seed: 0,
            scan: ScanSpec::default(),
            pair: PairSpec::default(),
            max_level: 2,
            draws: 10,
        }
    }
}

fn check_epsilon(field: &str, e: f64, issues: &mut Vec<FieldIssue>) {
    if !(e.is_finite() && e.abs() < PI / 6.0) {
        issues.push(FieldIssue { field: field.into(), message: format!("{e} is outside (-π/6, π/6)") });
    }
}

fn check_grid(field: &str, g: &RapidityGrid, issues: &mut Vec<FieldIssue>) {
    if RapidityGrid::new(g.theta_max, g.n_points).is_err() {
        issues.push(FieldIssue {
            field: field.into(),
            message: format!("needs theta_max > 0 and a power-of-two n_points >= 64, got {g:?}"),
        });
    }
}

impl RunConfig {
    /// Parses JSON and validates; every problem is reported with its field path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            ReportError::ConfigInvalid(vec![FieldIssue { field, message: e.into_inner().to_string() }])
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let mut issues = Vec::new();
        check_epsilon("epsilon", self.epsilon, &mut issues);
        for (k, b) in self.blaschke.iter().enumerate() {
            if !(b.zero.im > 0.0 && b.zero.im < PI && b.zero.re.is_finite()) {
                issues.push(FieldIssue {
                    field: format!("blaschke[{k}].zero"),
                    message: format!("{} is not in the physical strip", b.zero),
                });
            }
            if !((b.phase.norm() - 1.0).abs() < 1e-12) {
                issues.push(FieldIssue {
                    field: format!("blaschke[{k}].phase"),
                    message: format!("{} is not unimodular", b.phase),
                });
            }
        }
        check_grid("grid", &self.grid, &mut issues);
        check_grid("quadrature_grid", &self.quadrature_grid, &mut issues);
        for (name, v) in self.tolerances.named() {
            if !(v.is_finite() && v > 0.0) {
                issues.push(FieldIssue { field: format!("tolerances.{name}"), message: format!("{v} must be positive") });
            }
        }
        if !self.suites.any() {
            issues.push(FieldIssue { field: "suites".into(), message: "no suite selected".into() });
        }
        for (k, e) in self.scan.epsilons.iter().enumerate() {
            check_epsilon(&format!("scan.epsilons[{k}]"), *e, &mut issues);
        }
        if self.scan.curve_points < 2 {
            issues.push(FieldIssue { field: "scan.curve_points".into(), message: "needs at least 2 points".into() });
        }
        if !(1..=2).contains(&self.max_level) {
            issues.push(FieldIssue { field: "max_level".into(), message: format!("{} is not 1 or 2", self.max_level) });
        }
        if !(1..=100).contains(&self.draws) {
            issues.push(FieldIssue { field: "draws".into(), message: format!("{} is not in 1..=100", self.draws) });
        }
        for (field, spec, side) in [("pair.xi", &self.pair.xi, Side::Left), ("pair.eta", &self.pair.eta, Side::Right)] {
            if let Err(e) = spec.member(side) {
                issues.push(FieldIssue { field: field.into(), message: e.to_string() });
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(ReportError::ConfigInvalid(issues))
        }
    }

    fn blaschke_factors(&self) -> Vec<BlaschkeFactor> {
        self.blaschke.iter().map(|b| BlaschkeFactor { zero: b.zero, phase: b.phase }).collect()
    }

    fn scattering(&self, epsilon: f64) -> anyhow::Result<ScatteringFunction> {
        Ok(make_scattering(epsilon, self.blaschke_factors())?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub suite: String,
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
    pub mandatory: bool,
}

struct Checks {
    suite: &'static str,
    list: Vec<CheckOutcome>,
}

impl Checks {
    fn new(suite: &'static str) -> Self {
        Checks { suite, list: Vec::new() }
    }

    fn push(&mut self, name: impl Into<String>, value: f64, threshold: f64, pass: bool, mandatory: bool) {
        self.list.push(CheckOutcome { suite: self.suite.into(), name: name.into(), value, threshold, pass, mandatory });
    }

    /// value < threshold
    fn below(&mut self, name: impl Into<String>, value: f64, threshold: f64) {
        self.push(name, value, threshold, value < threshold, true);
    }

    /// value ≥ threshold
    fn at_least(&mut self, name: impl Into<String>, value: f64, threshold: f64) {
        self.push(name, value, threshold, value >= threshold, true);
    }

    fn flag(&mut self, name: impl Into<String>, ok: bool) {
        self.push(name, if ok { 1.0 } else { 0.0 }, 1.0, ok, true);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub columns: [String; 2],
    pub points: Vec<[f64; 2]>,
}

impl Curve {
    fn new(x: &str, y: &str, points: Vec<(f64, f64)>) -> Self {
        Curve { columns: [x.into(), y.into()], points: points.into_iter().map(|(a, b)| [a, b]).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmatrixSection {
    pub axioms: AxiomReport,
    pub residue: Option<ResidueR>,
    pub kappa: Option<f64>,
    pub kappa_norm: Option<f64>,
    pub value_at_zero: C64,
    /// (min over θ of Re S(θ + πi/3), argmin)
    pub min_re_shift_third: (f64, f64),
    /// (max over θ of |S(θ + πi/6)|, argmax)
    pub max_modulus_sixth: (f64, f64),
    pub inequality_k: InequalityK,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonScanEntry {
    pub epsilon: f64,
    pub axioms_pass: bool,
    pub residue: Option<ResidueR>,
    pub poles: Vec<C64>,
    pub zeros: Vec<C64>,
    pub kappa_norm: Option<f64>,
    pub min_re_shift_third: f64,
    pub max_modulus_sixth: f64,
    pub inequality_k: InequalityK,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizeSummary {
    pub label: String,
    pub expected_zeros: Vec<C64>,
    pub zeros: Vec<C64>,
    pub reconstruction_residual: f64,
    pub singular_inner_flag: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolSummary {
    pub side: Side,
    pub member: AnalyticFamilyMember,
    pub unimodularity: f64,
    pub consistency: f64,
    pub blaschke_zeros: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardySection {
    pub cauchy_shift: Vec<f64>,
    pub semigroup: f64,
    pub factorize: Vec<FactorizeSummary>,
    pub symbols: Vec<SymbolSummary>,
    /// sup |η₀(U(a)η̲) − e^{−ia·p}η₀(η̲)| on the unimodular line.
    pub covariance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockSection {
    pub projector_idempotency: Vec<f64>,
    pub s_symmetry: Vec<f64>,
    pub creation_adjointness: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSummary {
    pub prefactor: f64,
    pub residue: C64,
    pub xi0_consistency: f64,
    pub eta0_consistency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundStateSection {
    pub pair: PairSummary,
    pub commutator: Vec<CommutatorReport>,
    pub constant: ConstantEstimate,
    pub positivity: Vec<PositivityReport>,
    pub xstarx: Vec<FactorizationResidual>,
    pub ystary: Vec<FactorizationResidual>,
    pub crossterm: Vec<f64>,
    pub konrady: Vec<KonradyCrossTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionEntry {
    pub a: f64,
    pub f_zeros: Vec<C64>,
    pub zero_count: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleSection {
    pub ccr: Vec<CcrReport>,
    pub extension_symbol_zeros: Vec<ExtensionEntry>,
    pub blaschke_pair: BlaschkePairReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteFailure {
    pub suite: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteTiming {
    pub suite: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: String,
    pub tool_version: String,
    /// Unix seconds; excluded from determinism comparisons.
    pub generated_at: u64,
    pub config: RunConfig,
    pub smatrix: Option<SmatrixSection>,
    pub epsilon_scan: Option<Vec<EpsilonScanEntry>>,
    pub hardy: Option<HardySection>,
    pub fock: Option<FockSection>,
    pub boundstate: Option<BoundStateSection>,
    pub counterexamples: Option<CounterexampleSection>,
    pub curves: BTreeMap<String, Curve>,
    pub checks: Vec<CheckOutcome>,
    pub failures: Vec<SuiteFailure>,
    pub timings: Vec<SuiteTiming>,
}

impl VerificationReport {
    pub fn empty(config: RunConfig) -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            generated_at: 0,
            config,
            smatrix: None,
            epsilon_scan: None,
            hardy: None,
            fock: None,
            boundstate: None,
            counterexamples: None,
            curves: BTreeMap::new(),
            checks: Vec::new(),
            failures: Vec::new(),
            timings: Vec::new(),
        }
    }

    pub fn failed_checks(&self) -> Vec<&CheckOutcome> {
        self.checks.iter().filter(|c| c.mandatory && !c.pass).collect()
    }

    /// No suite errored and every mandatory check passed.
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.failed_checks().is_empty()
    }

    /// Copy with the timestamp and wall-clock fields zeroed.
    pub fn without_timestamps(&self) -> Self {
        let mut r = self.clone();
        r.generated_at = 0;
        r.timings.iter_mut().for_each(|t| t.seconds = 0.0);
        r
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn smatrix_suite(config: &RunConfig, report: &mut VerificationReport, checks: &mut Checks) -> anyhow::Result<()> {
    let tol = &config.tolerances;
    let s = config.scattering(config.epsilon)?;
    let axioms = check_axioms(&s, &config.grid, tol.axioms);
    for e in &axioms.entries {
        checks.push(format!("axiom {}", e.name), e.max_residual, tol.axioms, e.pass, e.name.starts_with('S'));
    }
    let value_at_zero = s.eval(C64::new(0.0, 0.0))?;
    checks.below("S(0) = -1", (value_at_zero + 1.0).norm(), tol.value_at_zero);
    let residue = crate::smatrix::residue_r(&s).ok();
    let min_shift = min_real_shifted(&s, &config.grid, PI / 3.0);
    checks.at_least("min Re S(θ+πi/3)", min_shift.0, -tol.shift_third);
    let max_sixth = max_modulus_sixth(&s, &config.grid);
    checks.below("max |S(θ+πi/6)| - 1", max_sixth.0 - 1.0, tol.sixth_modulus);
    let ineq = check_inequality_k(&s, &config.grid, tol.inequality_k)?;
    checks.push("inequality K (informational)", ineq.min_value, -tol.inequality_k, ineq.pass, false);
    report.curves.insert(
        CURVE_RE_SHIFT_THIRD.into(),
        Curve::new("theta", "re_S_shift_third", curve_re_shift_third(&s, &config.grid)),
    );
    report.smatrix = Some(SmatrixSection {
        kappa: axioms.kappa,
        kappa_norm: axioms.kappa_norm,
        axioms,
        residue,
        value_at_zero,
        min_re_shift_third: min_shift,
        max_modulus_sixth: max_sixth,
        inequality_k: ineq,
    });
    Ok(())
}

fn epsilon_scan_suite(config: &RunConfig, report: &mut VerificationReport, checks: &mut Checks) -> anyhow::Result<()> {
    let tol = &config.tolerances;
    let mut entries = Vec::new();
    for &e in &config.scan.epsilons {
        let s = config.scattering(e)?;
        let axioms = check_axioms(&s, &config.grid, tol.axioms);
        checks.flag(format!("ε={e}: axioms"), axioms.all_pass());
        let residue = crate::smatrix::residue_r(&s)?;
        checks.below(format!("ε={e}: Re R/|R|"), residue.value.re.abs() / residue.modulus, tol.residue);
        checks.at_least(format!("ε={e}: Im R"), residue.value.im, f64::MIN_POSITIVE);
        checks.below(
            format!("ε={e}: contour vs limit R"),
            (residue.contour - residue.limit).norm() / residue.modulus,
            tol.residue,
        );
        let targets = [C64::new(0.0, PI / 3.0), C64::new(0.0, 2.0 * PI / 3.0)];
        let located = axioms.poles.len() == 2
            && targets.iter().all(|t| axioms.poles.iter().any(|p| (p - t).norm() < tol.pole_location));
        checks.flag(format!("ε={e}: two poles at πi/3, 2πi/3"), located);
        let min_shift = min_real_shifted(&s, &config.grid, PI / 3.0).0;
        checks.at_least(format!("ε={e}: min Re S(θ+πi/3)"), min_shift, -tol.shift_third);
        let max_sixth = max_modulus_sixth(&s, &config.grid).0;
        checks.below(format!("ε={e}: max |S(θ+πi/6)| - 1"), max_sixth - 1.0, tol.sixth_modulus);
        let ineq = check_inequality_k(&s, &config.grid, tol.inequality_k)?;
        checks.push(format!("ε={e}: inequality K (informational)"), ineq.min_value, -tol.inequality_k, ineq.pass, false);
        entries.push(EpsilonScanEntry {
            epsilon: e,
            axioms_pass: axioms.all_pass(),
            residue: Some(residue),
            poles: axioms.poles,
            zeros: axioms.zeros,
            kappa_norm: axioms.kappa_norm,
            min_re_shift_third: min_shift,
            max_modulus_sixth: max_sixth,
            inequality_k: ineq,
        });
    }
    report.curves.insert(
        CURVE_INEQ_K.into(),
        Curve::new(
            "epsilon",
            "min_re_S_sixth_S_minus",
            curve_inequality_k(&config.blaschke_factors(), &config.grid, config.scan.curve_points),
        ),
    );
    report.epsilon_scan = Some(entries);
    Ok(())
}

fn gaussian(c: f64, w: f64, p: f64) -> ClosedForm {
    Arc::new(move |z: C64| (-(z - c) * (z - c) / (2.0 * w * w) + C64::new(0.0, p) * z).exp())
}

/// B(ζ)·e^{ip(ζ)·a}, evaluated through its logarithm.
struct ExpBlaschke {
    a: [f64; 2],
    zeros: Vec<C64>,
    strip: (f64, f64),
}

impl StripFunction for ExpBlaschke {
    fn eval(&self, z: C64) -> C64 {
        self.log_eval(z).exp()
    }
    fn log_eval(&self, z: C64) -> C64 {
        let b = blaschke_point(&self.zeros, &[], self.strip, z).unwrap_or(C64::new(0.0, 0.0));
        b.ln() + C64::new(0.0, 1.0) * p_dot(z, self.a)
    }
}

/// Product of Blaschke points and a closed-form profile.
struct Profiled {
    zeros: Vec<C64>,
    strip: (f64, f64),
    profile: ClosedForm,
}

impl StripFunction for Profiled {
    fn eval(&self, z: C64) -> C64 {
        blaschke_point(&self.zeros, &[], self.strip, z).unwrap_or(C64::new(0.0, 0.0)) * (self.profile)(z)
    }
}

fn symbol_members(side: Side) -> anyhow::Result<Vec<AnalyticFamilyMember>> {
    let left = vec![
        AnalyticFamilyMember::wedge_exp_sech(Side::Left, [0.0, -0.3], 0.5)?,
        AnalyticFamilyMember::wedge_exp_sech(Side::Left, [0.1, -0.4], 0.7)?,
        AnalyticFamilyMember::gaussian(Side::Left, 0.3, 0.8)?,
        AnalyticFamilyMember::gaussian(Side::Left, -0.5, 1.2)?,
        AnalyticFamilyMember::custom(Side::Left, [0.0, -0.2], 0.6, vec![C64::new(0.4, 0.42 * PI)])?,
    ];
    Ok(match side {
        Side::Left => left,
        Side::Right => left.iter().map(|m| m.mirror()).collect(),
    })
}

fn hardy_suite(config: &RunConfig, report: &mut VerificationReport, checks: &mut Checks) -> anyhow::Result<()> {
    let tol = &config.tolerances;
    let grid = config.grid;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x4841_5244);
    let band = (-PI / 2.0, 0.0);
    let mut cauchy = Vec::new();
    for _ in 0..config.draws {
        let phi = gaussian(rng.gen_range(-2.0..2.0), rng.gen_range(0.6..1.2), 0.0);
        let psi = gaussian(rng.gen_range(-2.0..2.0), rng.gen_range(0.6..1.2), 0.0);
        let phi = HardyElement::from_fn(move |z| phi(z), band, grid)?;
        let psi = HardyElement::from_fn(move |z| psi(z), band, grid)?;
        cauchy.push(cauchy_shift_residual(&phi, &psi, PI / 3.0)?);
    }
    let worst = cauchy.iter().cloned().fold(0.0, f64::max);
    checks.below("Cauchy shift residual", worst, tol.cauchy_shift);

    let g = gaussian(0.3, 0.9, 0.0);
    let psi = HardyElement::from_fn(move |z| g(z), (-1.0, 0.0), grid)?;
    let two = delta_power(&delta_power(&psi, 0.3)?, 0.5)?;
    let once = delta_power(&psi, 0.8)?;
    let semigroup = two.values().iter().zip(once.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    checks.below("Δ semigroup law", semigroup, tol.semigroup);

    let fgrid = RapidityGrid { theta_max: 8.0, n_points: 1024 };
    let strip = (-2.0 * PI / 3.0, -PI / 3.0);
    let a = [0.1, 0.3];
    let zero = C64::new(0.4, -0.45 * PI);
    let (z1, z2) = (C64::new(-1.0, -0.4 * PI), C64::new(1.5, -0.6 * PI));
    let mid = C64::new(0.0, PI / 2.0);
    let inputs: Vec<(&str, Box<dyn StripFunction>, Vec<C64>)> = vec![
        ("constant", Box::new(|_z: C64| one()), vec![]),
        ("exponential", Box::new(ExpBlaschke { a, zeros: vec![], strip }), vec![]),
        ("zero x exponential", Box::new(ExpBlaschke { a, zeros: vec![zero], strip }), vec![zero]),
        (
            "two zeros x sech",
            Box::new(Profiled { zeros: vec![z1, z2], strip, profile: Arc::new(move |z: C64| one() / (z + mid).cosh()) }),
            vec![z1, z2],
        ),
        (
            "zero x gaussian",
            Box::new(Profiled {
                zeros: vec![zero],
                strip,
                profile: Arc::new(move |z: C64| (-(z + mid) * (z + mid) / 2.0).exp()),
            }),
            vec![zero],
        ),
    ];
    let mut summaries = Vec::new();
    for (label, f, expected) in inputs {
        let r = factorize(&*f, strip, &fgrid)?;
        let recovered = r.blaschke_zeros.len() == expected.len()
            && expected.iter().all(|z| r.blaschke_zeros.iter().any(|w| (w - z).norm() < 1e-8));
        checks.flag(format!("factorize {label}: zeros"), recovered);
        checks.below(format!("factorize {label}: reconstruction"), r.reconstruction_residual, tol.factorize);
        summaries.push(FactorizeSummary {
            label: label.into(),
            expected_zeros: expected,
            zeros: r.blaschke_zeros,
            reconstruction_residual: r.reconstruction_residual,
            singular_inner_flag: r.singular_inner_flag,
        });
    }

    let s = config.scattering(config.epsilon)?;
    let c = bound_state_prefactor(&s)?;
    let mut symbols = Vec::new();
    for side in [Side::Left, Side::Right] {
        for m in symbol_members(side)? {
            let sym = build_symbol(&m, c, &grid)?;
            let u = sym.unimodularity_deviation();
            let k = sym.consistency_residual();
            let label = format!("{side:?} {:?}", m.kind);
            checks.below(format!("symbol {label}: unimodularity"), u, tol.symbol);
            checks.below(format!("symbol {label}: consistency"), k, tol.symbol);
            symbols.push(SymbolSummary {
                side,
                member: m,
                unimodularity: u,
                consistency: k,
                blaschke_zeros: sym.blaschke_zeros.clone(),
            });
        }
    }
    let eta = AnalyticFamilyMember::wedge_exp_sech(Side::Right, [0.1, 0.3], 0.6)?;
    let t = [0.2, 0.5];
    let before = build_symbol(&eta, c, &grid)?.unimodular_line();
    let after = build_symbol(&eta.translate(t), c, &grid)?.unimodular_line();
    let covariance = grid
        .nodes()
        .iter()
        .enumerate()
        .map(|(j, &x)| (after[j] - before[j] * (C64::new(0.0, -1.0) * p_dot(C64::new(x, 0.0), t)).exp()).norm())
        .fold(0.0, f64::max);
    checks.below("outer covariance under translation", covariance, tol.symbol);

    report.hardy = Some(HardySection { cauchy_shift: cauchy, semigroup, factorize: summaries, symbols, covariance });
    Ok(())
}

fn random_wave(n: usize, grid: &RapidityGrid, rng: &mut ChaCha8Rng) -> anyhow::Result<WaveFunction> {
    let mut w = WaveFunction::zeros(n, grid)?;
    for v in w.amplitudes.iter_mut() {
        *v = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    w.s_symmetric = false;
    Ok(w)
}

fn fock_suite(config: &RunConfig, report: &mut VerificationReport, checks: &mut Checks) -> anyhow::Result<()> {
    let tol = config.tolerances.fock;
    let grid = RapidityGrid { theta_max: 6.0, n_points: 64 };
    let s = config.scattering(config.epsilon)?;
    let lat = SLattice::new(&s, &grid);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x464f_434b);
    let psi = random_wave(1, &grid, &mut rng)?.amplitudes;
    let mut section = FockSection { projector_idempotency: vec![], s_symmetry: vec![], creation_adjointness: vec![] };
    for n in 0..=2 {
        let w = random_wave(n, &grid, &mut rng)?;
        let p = project_pn(&lat, &w)?;
        let idem = project_pn(&lat, &p)?.max_abs_diff(&p)? / p.max_abs().max(1e-300);
        checks.below(format!("n={n}: P_n idempotent"), idem, tol);
        let sym = p.s_symmetry_deviation(&lat) / p.max_abs().max(1e-300);
        checks.below(format!("n={n}: S-symmetry"), sym, tol);
        let chi = project_pn(&lat, &random_wave(n + 1, &grid, &mut rng)?)?;
        let lhs = create(&lat, &psi, &p)?.inner(&chi)?;
        let rhs = p.inner(&annihilate(&lat, &psi, &chi)?)?;
        let adj = (lhs - rhs).norm() / (1.0 + lhs.norm());
        checks.below(format!("n={n}: z† adjoint to z"), adj, tol);
        section.projector_idempotency.push(idem);
        section.s_symmetry.push(sym);
        section.creation_adjointness.push(adj);
    }
    report.fock = Some(section);
    Ok(())
}

fn one_particle(f: ClosedForm) -> anyhow::Result<ClosedWave> {
    Ok(ClosedWave::new(1, Arc::new(move |z: &[C64]| f(z[0])))?)
}

fn draw_gaussian(rng: &mut ChaCha8Rng) -> ClosedForm {
    gaussian(rng.gen_range(-0.8..0.8), rng.gen_range(0.8..1.1), rng.gen_range(-0.3..0.3))
}

/// Test vectors with components at levels n − 1 and n.
fn level_vectors(s: &ScatteringFunction, n: usize, rng: &mut ChaCha8Rng) -> anyhow::Result<Vec<ClosedWave>> {
    Ok(match n {
        1 => vec![ClosedWave::vacuum(C64::new(0.7, 0.2)), one_particle(draw_gaussian(rng))?],
        _ => {
            let a = one_particle(draw_gaussian(rng))?;
            let b = ClosedWave::symmetrized_product(s, vec![draw_gaussian(rng), draw_gaussian(rng)], true)?;
            vec![a, b]
        }
    })
}

fn boundstate_suite(config: &RunConfig, report: &mut VerificationReport, checks: &mut Checks) -> anyhow::Result<()> {
    let tol = &config.tolerances;
    let s = config.scattering(config.epsilon)?;
    let xi = config.pair.xi.member(Side::Left)?;
    let eta = config.pair.eta.member(Side::Right)?;
    let pair = BoundStatePair::new(&s, xi, eta, &config.grid)?;
    let summary = PairSummary {
        prefactor: pair.prefactor,
        residue: pair.residue,
        xi0_consistency: pair.xi0.consistency_residual(),
        eta0_consistency: pair.eta0.consistency_residual(),
    };
    let quad = config.quadrature_grid;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x424f_554e);

    let mut commutator = Vec::new();
    for n in 1..=config.max_level {
        let phi = level_vectors(&s, n, &mut rng)?;
        let psi = level_vectors(&s, n, &mut rng)?;
        let rep = weak_commutator_report(&pair, &phi, &psi, n, &quad)?;
        let bound = if n == 1 { tol.commutator_one } else { tol.commutator_two };
        checks.below(format!("n={n}: weak commutator total (relative)"), rep.relative_residual, bound);
        let r = &rep.residuals;
        for (name, v) in [
            ("[χ,z′] + [z,χ′]", r.chi_zprime_vs_z_chiprime),
            ("[z†,χ′] + [χ,z′†]", r.zdag_chiprime_vs_chi_zprimedag),
            ("[φ,φ′] direct vs closed", r.phiphi_direct_vs_closed),
            ("χχ′ diagonal vs [φ,φ′]", r.diag_vs_phiphi),
            ("χχ′ off-diagonal", r.offdiag),
        ] {
            checks.below(format!("n={n}: {name} (relative)"), v / rep.scale.max(1e-300), bound);
        }
        checks.flag(format!("n={n}: total within summed residuals"), rep.bound_holds());
        commutator.push(rep);
    }

    let constant = estimate_c(&pair, config.seed)?;
    let mut positivity = Vec::new();
    for k in 0..config.draws {
        for n in 1..=config.max_level {
            let w = if n == 1 { one_particle(draw_gaussian(&mut rng))? } else { random_two_particle(&s, &mut rng)? };
            let r = positivity_check(&pair, &w, &constant, &quad)?;
            checks.at_least(format!("draw {k}, n={n}: positivity margin"), r.margin, -tol.positivity);
            let second = r.chi_norm <= r.sum_norm * (1.0 + 1e-12) && r.chi_prime_norm <= r.sum_norm * (1.0 + 1e-12);
            checks.flag(format!("draw {k}, n={n}: second estimate"), second);
            positivity.push(r);
        }
    }

    let mut xstarx = Vec::new();
    let mut ystary = Vec::new();
    for k in 0..config.draws {
        let (phi, psi) = (draw_gaussian(&mut rng), draw_gaussian(&mut rng));
        let x = xstarx_residual(&pair, &*phi, &*psi)?;
        let y = ystary_residual(&pair, &*phi, &*psi)?;
        checks.below(format!("pair {k}: X*X factorization"), x.residual, tol.xstarx);
        checks.below(format!("pair {k}: Y*Y factorization"), y.residual, tol.xstarx);
        xstarx.push(x);
        ystary.push(y);
    }

    let s7 = check_axioms(&s, &config.grid, tol.axioms).entry("S7").map(|e| e.pass).unwrap_or(false);
    let cross_grid = RapidityGrid { theta_max: 8.0, n_points: 256 };
    let mut crossterm = Vec::new();
    let mut konrady = Vec::new();
    for k in 0..config.draws {
        let w = random_two_particle(&s, &mut rng)?;
        let v = crossterm_positivity(&s, &w, &cross_grid)?;
        checks.push(format!("draw {k}: cross term"), v, -tol.crossterm, v >= -tol.crossterm, s7);
        let kc = konrady_cross_term(&s, &w, &cross_grid)?;
        if let Some(val) = kc.value {
            checks.at_least(format!("draw {k}: Konrady cross term"), val, -tol.crossterm);
        }
        crossterm.push(v);
        konrady.push(kc);
    }

    report.boundstate = Some(BoundStateSection {
        pair: summary,
        commutator,
        constant,
        positivity,
        xstarx,
        ystary,
        crossterm,
        konrady,
    });
    Ok(())
}

fn counterexample_suite(config: &RunConfig, report: &mut VerificationReport, checks: &mut Checks) -> anyhow::Result<()> {
    let tol = &config.tolerances;
    let vectors = [
        GaussianVector { center: 0.0, width: 1.0, momentum: 0.0 },
        GaussianVector { center: 0.5, width: 0.8, momentum: 0.7 },
        GaussianVector { center: -0.7, width: 1.2, momentum: -0.4 },
    ];
    let weyl = ccr_demo(2.0, PI, &vectors)?;
    checks.below("CCR weak residual at s₁s₂ = 2π", weyl.weak_residual, tol.ccr);
    checks.flag("CCR phase mismatch at s₁s₂ = 2π is 0", weyl.phase_mismatch == 0.0);
    let off = ccr_demo(2.0, 1.0, &vectors)?;
    let expected = (C64::new(0.0, -2.0).exp() - 1.0).norm();
    checks.below("CCR phase mismatch at s₁s₂ = 2", (off.phase_mismatch - expected).abs(), 1e-15);

    let empty = ThirdStripBlaschke::new(vec![])?;
    let single = ThirdStripBlaschke::new(vec![C64::new(0.0, -PI / 6.0)])?;
    let tuned = 3.0 - 2.0 * 2f64.sqrt();
    let mut extension = Vec::new();
    for (a, f) in [(0.0, &empty), (tuned, &single)] {
        extension.push(ExtensionEntry { a, f_zeros: f.zeros.clone(), zero_count: extension_symbol_zeros(a, f)? });
    }
    checks.flag("extension symbol: a = 0, zero-free f has no zeros", extension[0].zero_count == 0);
    checks.flag("extension symbol: tuned configuration has zeros", extension[1].zero_count >= 1);

    let f1 = PeriodicBlaschke::new(vec![C64::new(0.4, -PI / 2.0)])?;
    let f2 = PeriodicBlaschke::new(vec![C64::new(-0.6, -PI / 2.0)])?;
    let generic: Vec<GaussianVector> = (0..5)
        .map(|k| GaussianVector { center: -1.0 + 0.5 * k as f64, width: 1.0 + 0.2 * k as f64, momentum: 0.0 })
        .collect();
    let pair = blaschke_pair_demo(&f1, &f2, &generic)?;
    checks.below("Blaschke pair: engineered residual (relative)", pair.relative_residual, tol.blaschke_pair);
    checks.flag("Blaschke pair: engineered vector in both domains", pair.engineered_guard == [true, true]);
    checks.flag("Blaschke pair: generic vectors leave a domain", pair.generic_guard.iter().all(|g| !(g[0] && g[1])));

    report.counterexamples = Some(CounterexampleSection { ccr: vec![weyl, off], extension_symbol_zeros: extension, blaschke_pair: pair });
    Ok(())
}

type SuiteFn = fn(&RunConfig, &mut VerificationReport, &mut Checks) -> anyhow::Result<()>;

/// Runs the selected suites in dependency order. A failing suite is recorded and the
/// run moves on to the next one.
pub fn run_suite(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let mut report = VerificationReport::empty(config.clone());
    report.generated_at = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let sel = config.suites;
    let plan: [(&'static str, bool, SuiteFn); 6] = [
        ("smatrix", sel.smatrix, smatrix_suite),
        ("epsilon_scan", sel.epsilon_scan, epsilon_scan_suite),
        ("hardy", sel.hardy, hardy_suite),
        ("fock", sel.fock, fock_suite),
        ("boundstate", sel.boundstate, boundstate_suite),
        ("counterexamples", sel.counterexamples, counterexample_suite),
    ];
    for (name, selected, run) in plan {
        if !selected {
            continue;
        }
        let start = Instant::now();
        let mut checks = Checks::new(name);
        if let Err(e) = run(config, &mut report, &mut checks) {
            report.failures.push(SuiteFailure { suite: name.into(), error: format!("{e:#}") });
        }
        report.checks.extend(checks.list);
        report.timings.push(SuiteTiming { suite: name.into(), seconds: start.elapsed().as_secs_f64() });
    }
    Ok(report)
}

/// Writes `<dir>/<which>.csv` with a header row and returns its path.
pub fn emit_curves(report: &VerificationReport, which: &str, dir: &Path) -> Result<PathBuf> {
    let curve = report.curves.get(which).ok_or_else(|| ReportError::UnknownCurve(which.into()))?;
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{which}.csv"));
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(&curve.columns)?;
    for [x, y] in &curve.points {
        w.write_record([format!("{x:e}"), format!("{y:e}")])?;
    }
    w.flush()?;
    Ok(path)
}

/// Emits every curve the report carries.
pub fn emit_all_curves(report: &VerificationReport, dir: &Path) -> Result<Vec<PathBuf>> {
    report.curves.keys().map(|k| emit_curves(report, k, dir)).collect()
}

/// Writes the report JSON, creating parent directories.
pub fn write_report(report: &VerificationReport, path: &Path) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, report.to_json()?).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Reads the curve points back from a CSV written by [`emit_curves`].
pub fn read_curve(path: &Path) -> anyhow::Result<Curve> {
    let mut r = csv::Reader::from_path(path)?;
    let h = r.headers()?.clone();
    if h.len() != 2 {
        return Err(anyhow!("expected two columns in {}", path.display()));
    }
    let mut points = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        points.push([rec[0].parse()?, rec[1].parse()?]);
    }
    Ok(Curve { columns: [h[0].to_string(), h[1].to_string()], points })
}
