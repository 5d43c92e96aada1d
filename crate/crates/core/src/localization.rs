//! Rule-driven induction over the discriminant stratification.
//!
//! Every fact the engine uses is produced by applying one named [`RuleId`] to
//! recorded inputs, and each application is appended to an [`InductionTrace`].
//! [`Engine::apply`] is a pure function of `(rule, params, inputs)`, so a trace
//! can be replayed step by step and compared with what it recorded.
//!
//! Only cohomological degrees are tracked: every module here lives in
//! codimension zero, and `t` (the hyperplane class) has degree zero.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::discriminant::{self, DiscriminantError};
use crate::poly::is_prime;
use crate::presentations::{
    catalog_ring, CatalogKey, CoefficientBase, Coefficients, GradedModule, Group, ModuleGenerator, PresentationError,
    Provenance, Space,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalizationError {
    #[error("rule {0} is disabled")]
    RuleDisabled(RuleId),
    #[error("gate fails: method inapplicable (f_{0} divides the annihilator chain times t)")]
    GateFails(u32),
    #[error("method inapplicable: {0}")]
    Inapplicable(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("out of validated scope: {0}")]
    OutOfScope(String),
    #[error("genus must be positive")]
    ZeroGenus,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("relations not established for g={g}, p={p}")]
    RelationsNotEstablished { g: u32, p: u64 },
    #[error("malformed step input for {rule}: {msg}")]
    Malformed { rule: RuleId, msg: String },
    #[error("replay mismatch at step {0}")]
    ReplayMismatch(usize),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Discriminant(#[from] DiscriminantError),
}

type Result<T> = std::result::Result<T, LocalizationError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    #[serde(rename = "R_UNIV")]
    Univ,
    #[serde(rename = "R_CODIM2")]
    Codim2,
    #[serde(rename = "R_ODDEVEN")]
    OddEven,
    #[serde(rename = "R_PUSH_EVEN")]
    PushEven,
    #[serde(rename = "R_PUSH_DIV")]
    PushDiv,
    #[serde(rename = "R_GATE")]
    Gate,
    #[serde(rename = "R_P1_FACTOR")]
    P1Factor,
    #[serde(rename = "R_BOUNDARY_SHIFT")]
    BoundaryShift,
    #[serde(rename = "R_DEGREE_BOUND")]
    DegreeBound,
    #[serde(rename = "R_TORSOR")]
    Torsor,
}

impl RuleId {
    pub const ALL: [RuleId; 10] = [
        RuleId::Univ,
        RuleId::Codim2,
        RuleId::OddEven,
        RuleId::PushEven,
        RuleId::PushDiv,
        RuleId::Gate,
        RuleId::P1Factor,
        RuleId::BoundaryShift,
        RuleId::DegreeBound,
        RuleId::Torsor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::Univ => "R_UNIV",
            RuleId::Codim2 => "R_CODIM2",
            RuleId::OddEven => "R_ODDEVEN",
            RuleId::PushEven => "R_PUSH_EVEN",
            RuleId::PushDiv => "R_PUSH_DIV",
            RuleId::Gate => "R_GATE",
            RuleId::P1Factor => "R_P1_FACTOR",
            RuleId::BoundaryShift => "R_BOUNDARY_SHIFT",
            RuleId::DegreeBound => "R_DEGREE_BOUND",
            RuleId::Torsor => "R_TORSOR",
        }
    }

    /// The mathematical statement the rule applies.
    pub fn anchor(self) -> &'static str {
        match self {
            RuleId::Univ => "a universal homeomorphism induces an isomorphism on Chow groups with mod-p coefficients",
            RuleId::Codim2 => "removing a closed subset of codimension two leaves A⁰ unchanged",
            RuleId::OddEven => {
                "A⁰(Δ_r) restricts isomorphically to A⁰(Δ_r ∖ Δ_{r+1}) when p divides r+1; \
                 otherwise it consists of pullbacks from the classifying space"
            }
            RuleId::PushEven => {
                "the class of Δ₁,ₙ is even and A(Pⁿ) is concentrated in degree zero, \
                 so the pushforward from Δ₁,ₙ vanishes mod 2"
            }
            RuleId::PushDiv => "A⁰(Δ₁,ₙ) is constant and the pushforward of 1 is the class of Δ₁,ₙ mod p",
            RuleId::Gate => {
                "the annihilator chain times t is not divisible by f_n, so the pushforward from Δ₁,ₙ vanishes"
            }
            RuleId::P1Factor => "pullback along X × P¹ → X is surjective on A⁰ with kernel generated by w₂",
            RuleId::BoundaryShift => {
                "classes lifted against the boundary map gain one cohomological degree; \
                 on Δ₁,₂ ≅ P¹ the bundle O(−1) pulls back to O(−1)², whose first Chern class is even"
            }
            RuleId::DegreeBound => "elements of A¹(Pⁿ ∖ Δ₂,ₙ) have degree at most one plus the top degree of A⁰(Δ₂,ₙ)",
            RuleId::Torsor => {
                "invariants of the G_m-torsor are the pullbacks plus lifts, one degree up, \
                 of the kernel of multiplication by t"
            }
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = LocalizationError;

    fn from_str(s: &str) -> Result<Self> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| LocalizationError::InvalidParameter(format!("unknown rule `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    GL2,
    PGL2,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::GL2 => "GL2",
            GroupKind::PGL2 => "PGL2",
        })
    }
}

impl FromStr for GroupKind {
    type Err = LocalizationError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GL2" => Ok(GroupKind::GL2),
            "PGL2" => Ok(GroupKind::PGL2),
            _ => Err(LocalizationError::InvalidParameter(format!("unknown group `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldMode {
    /// Algebraically closed base field.
    Closed,
    /// Arbitrary base field.
    General,
}

impl fmt::Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldMode::Closed => "closed",
            FieldMode::General => "general",
        })
    }
}

impl FromStr for FieldMode {
    type Err = LocalizationError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "closed" => Ok(FieldMode::Closed),
            "general" => Ok(FieldMode::General),
            _ => Err(LocalizationError::InvalidParameter(format!("unknown field mode `{s}`"))),
        }
    }
}

/// Parameters of one rule application. Unused fields are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepParams {
    pub group: GroupKind,
    pub p: u64,
    pub base: CoefficientBase,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub g: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<u32>,
    /// The space carries an extra `× P¹` factor.
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub p1: bool,
}

/// The statement a fact is about.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim {
    /// `A⁰(Δ₁,ₙ) → A¹(Pⁿ)` is zero.
    PushforwardZero { n: u32 },
    /// `∂(t·x) ≠ 0` on `Δ₁,ₙ ∖ Δ₂,ₙ`.
    BoundaryNonzero { n: u32, generator: String, p1: bool },
    /// `t·x ≠ 0` in `A¹(Pⁿ ∖ Δ₁,ₙ)`.
    ProductNonzero { n: u32, generator: String, p1: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub claim: Claim,
    pub holds: bool,
}

fn space_label(n: u32, p1: bool) -> String {
    if p1 {
        format!("(P{n}∖Δ1,{n})×P1")
    } else {
        format!("P{n}∖Δ1,{n}")
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (eq, ne) = ("=", "≠");
        let rel = if self.holds { ne } else { eq };
        match &self.claim {
            Claim::PushforwardZero { n } => {
                let verb = if self.holds { "vanishes" } else { "does not vanish" };
                write!(f, "pushforward A⁰(Δ1,{n}) → A¹(P{n}) {verb}")
            }
            Claim::BoundaryNonzero { n, generator, p1 } => {
                write!(f, "∂(t·{generator}) {rel} 0 on {}", space_label(*n, *p1))
            }
            Claim::ProductNonzero { n, generator, p1 } => {
                write!(f, "t·{generator} {rel} 0 on {}", space_label(*n, *p1))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Datum {
    Module(GradedModule),
    Fact(Fact),
}

impl Datum {
    /// One-line rendering used in trace listings.
    pub fn summary(&self) -> String {
        match self {
            Datum::Module(m) => module_summary(m),
            Datum::Fact(fact) => fact.to_string(),
        }
    }
}

fn module_summary(m: &GradedModule) -> String {
    let mut s = format!("⟨{}⟩", m.generators().iter().map(|g| g.name.as_str()).collect::<Vec<_>>().join(", "));
    if let Some(k) = &m.undetermined {
        s.push_str(&format!(" ⊕ {}[{}]", k.name, k.degree));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepInput {
    /// Index of the step that produced this input; `None` for catalog data.
    pub from: Option<usize>,
    pub datum: Datum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepStatus {
    Derived,
    /// Stored result, not derived by the engine.
    Reported,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: RuleId,
    pub params: StepParams,
    pub inputs: Vec<StepInput>,
    pub output: Datum,
    pub status: StepStatus,
}

impl TraceStep {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "rule": self.rule,
            "params": self.params,
            "anchor": self.rule.anchor(),
            "status": self.status,
            "result": self.output.summary(),
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductionTrace {
    pub steps: Vec<TraceStep>,
}

impl InductionTrace {
    /// Output module of the last module-producing step.
    pub fn output(&self) -> Option<&GradedModule> {
        self.steps.iter().rev().find_map(|s| match &s.output {
            Datum::Module(m) => Some(m),
            Datum::Fact(_) => None,
        })
    }

    /// Re-applies every step with the stock engine, checking that each input
    /// taken from an earlier step matches that step's recomputed output and
    /// that each recomputed output matches the record. Returns the final
    /// module.
    pub fn replay(&self) -> Result<GradedModule> {
        let engine = Engine::default();
        let mut outputs: Vec<Datum> = Vec::with_capacity(self.steps.len());
        for (i, step) in self.steps.iter().enumerate() {
            for input in &step.inputs {
                if let Some(k) = input.from {
                    if k >= i || outputs[k] != input.datum {
                        return Err(LocalizationError::ReplayMismatch(i));
                    }
                }
            }
            let data: Vec<Datum> = step.inputs.iter().map(|x| x.datum.clone()).collect();
            let out = engine.apply(step.rule, &step.params, &data)?;
            if out != step.output {
                return Err(LocalizationError::ReplayMismatch(i));
            }
            outputs.push(out);
        }
        self.output().cloned().ok_or(LocalizationError::ReplayMismatch(self.steps.len()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Justification {
    /// The product lands above the top degree of the module.
    DegreeBound,
    /// Both factors are pulled back from the projective complement, which has
    /// nothing in the product's degree.
    Pullback,
    /// `x² = {−1}·x`, and `−1` is a square over a closed field.
    SquareRoot,
    /// The product lands in a degree with generators; not determined.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "value", rename_all = "snake_case")]
pub enum ProductValue {
    Zero,
    /// One of the listed values; `"0"` stands for zero.
    Unknown {
        candidates: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductRelation {
    pub left: String,
    pub right: String,
    #[serde(flatten)]
    pub value: ProductValue,
    pub reason: Justification,
}

impl fmt::Display for ProductRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs =
            if self.left == self.right { format!("{}^2", self.left) } else { format!("{}·{}", self.left, self.right) };
        match &self.value {
            ProductValue::Zero => write!(f, "{lhs} = 0"),
            ProductValue::Unknown { candidates } => write!(f, "{lhs} ∈ {{{}}}", candidates.join(", ")),
        }
    }
}

/// Looks up the entry for `a·b` (in either order).
pub fn lookup<'a>(table: &'a [ProductRelation], a: &str, b: &str) -> Option<&'a ProductValue> {
    table.iter().find(|r| (r.left == a && r.right == b) || (r.left == b && r.right == a)).map(|r| &r.value)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantsReport {
    pub group: GroupKind,
    pub g: u32,
    pub p: u64,
    pub mode: FieldMode,
    pub module: GradedModule,
    pub relations: Vec<ProductRelation>,
    pub trace: InductionTrace,
}

impl InvariantsReport {
    pub fn to_json(&self) -> serde_json::Value {
        let generators: Vec<_> = self
            .module
            .generators()
            .iter()
            .map(|g| json!({"name": g.name, "degree": g.bidegree.degree, "provenance": g.provenance}))
            .collect();
        let undetermined = self.module.undetermined.as_ref().map(|k| json!({"name": k.name, "degree": k.degree}));
        json!({
            "group": self.group.to_string(),
            "g": self.g,
            "p": self.p,
            "mode": self.mode,
            "generators": generators,
            "undetermined": undetermined,
            "relations": self.relations,
            "trace": self.trace.steps.iter().map(TraceStep::to_json).collect::<Vec<_>>(),
        })
    }
}

type GateHook = Arc<dyn Fn(u32) -> std::result::Result<bool, DiscriminantError> + Send + Sync>;

/// Rule applier. The stock engine has every rule enabled and uses
/// [`discriminant::gate`]; tests can disable rules or replace the gate.
#[derive(Clone)]
pub struct Engine {
    disabled: BTreeSet<RuleId>,
    gate: GateHook,
}

impl Default for Engine {
    fn default() -> Self {
        Engine { disabled: BTreeSet::new(), gate: Arc::new(|i| Ok(discriminant::gate(i)?.kills)) }
    }
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine").field("disabled", &self.disabled).finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy)]
struct Ctx {
    group: GroupKind,
    p: u64,
    base: CoefficientBase,
}

impl Ctx {
    fn params(&self) -> StepParams {
        StepParams {
            group: self.group,
            p: self.p,
            base: self.base,
            n: None,
            r: None,
            g: None,
            generator: None,
            degree: None,
            p1: false,
        }
    }
}

fn ctx_of(params: &StepParams) -> Ctx {
    Ctx { group: params.group, p: params.p, base: params.base }
}

fn group_key(group: GroupKind) -> Group {
    match group {
        GroupKind::GL2 => Group::GLn(2),
        GroupKind::PGL2 => Group::PGL2,
    }
}

/// Generators of the classifying-space ring, as pullbacks. `codim_zero`
/// keeps only `A⁰`; otherwise classes of positive codimension (such as `τ`)
/// are kept too.
fn pullbacks_from_point(ctx: Ctx, codim_zero: bool) -> Result<GradedModule> {
    let entry = catalog_ring(CatalogKey::new(group_key(ctx.group), Space::Point, Coefficients::GaloisH(ctx.p)))?;
    let gens = entry
        .module
        .generators()
        .iter()
        .filter(|g| !codim_zero || g.bidegree.codim == 0)
        .map(|g| match g.provenance {
            Provenance::Unit => g.clone(),
            _ => ModuleGenerator {
                name: if g.name == "v2" { "w2".to_string() } else { g.name.clone() },
                provenance: Provenance::Pullback,
                ..g.clone()
            },
        })
        .collect();
    Ok(GradedModule::new(ctx.p, ctx.base, gens)?)
}

fn sorted(mut gens: Vec<ModuleGenerator>) -> Vec<ModuleGenerator> {
    gens.sort_by(|a, b| (a.bidegree.degree, a.provenance, &a.name).cmp(&(b.bidegree.degree, b.provenance, &b.name)));
    gens
}

fn max_degree(m: &GradedModule) -> u32 {
    m.generators().iter().map(|g| g.bidegree.degree).max().unwrap_or(0)
}

fn x_name(degree: u32) -> String {
    format!("x{degree}")
}

fn malformed(rule: RuleId, msg: &str) -> LocalizationError {
    LocalizationError::Malformed { rule, msg: msg.to_string() }
}

fn need<T>(rule: RuleId, v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| malformed(rule, &format!("missing {what}")))
}

fn module_at(rule: RuleId, inputs: &[Datum], i: usize) -> Result<&GradedModule> {
    match inputs.get(i) {
        Some(Datum::Module(m)) => Ok(m),
        _ => Err(malformed(rule, &format!("input {i} must be a module"))),
    }
}

fn fact_at(rule: RuleId, inputs: &[Datum], i: usize) -> Result<&Fact> {
    match inputs.get(i) {
        Some(Datum::Fact(f)) => Ok(f),
        _ => Err(malformed(rule, &format!("input {i} must be a fact"))),
    }
}

/// Stored general-field result for `p = 2`: the closed-field generators below
/// the top degree, plus an undetermined summand `K` in degree `g + 2`.
fn general_field_fixture(ctx: Ctx, g: u32) -> Result<GradedModule> {
    let mut gens = vec![ModuleGenerator::unit()];
    gens.extend((1..=g + 1).map(|d| ModuleGenerator::new(x_name(d), 0, d, Provenance::BoundaryLift)));
    if ctx.group == GroupKind::PGL2 {
        gens.push(ModuleGenerator::new("w2", 0, 2, Provenance::Pullback));
    }
    Ok(GradedModule::new(ctx.p, ctx.base, sorted(gens))?.with_undetermined("K", g + 2))
}

impl Engine {
    pub fn new() -> Self {
        Engine::default()
    }

    /// The engine refuses to apply `rule`.
    pub fn disable(mut self, rule: RuleId) -> Self {
        self.disabled.insert(rule);
        self
    }

    /// Replaces the gate verdict (`kills`) used by `R_GATE`.
    pub fn with_gate<F>(mut self, gate: F) -> Self
    where
        F: Fn(u32) -> std::result::Result<bool, DiscriminantError> + Send + Sync + 'static,
    {
        self.gate = Arc::new(gate);
        self
    }

    /// Applies a single rule. Pure in `(rule, params, inputs)` apart from the
    /// gate hook.
    pub fn apply(&self, rule: RuleId, params: &StepParams, inputs: &[Datum]) -> Result<Datum> {
        let ctx = ctx_of(params);
        let n = params.n;
        match rule {
            RuleId::Codim2 => Ok(Datum::Module(module_at(rule, inputs, 0)?.clone())),
            RuleId::Univ => match inputs.first() {
                Some(Datum::Module(m)) => Ok(Datum::Module(m.clone())),
                // a nonzero boundary already shows the lower product is nonzero
                Some(Datum::Fact(Fact { claim: Claim::ProductNonzero { .. }, holds }))
                | Some(Datum::Fact(Fact { claim: Claim::BoundaryNonzero { .. }, holds: holds @ true })) => {
                    let claim = Claim::BoundaryNonzero {
                        n: need(rule, n, "n")?,
                        generator: need(rule, params.generator.clone(), "generator")?,
                        p1: params.p1,
                    };
                    Ok(Datum::Fact(Fact { claim, holds: *holds }))
                }
                _ => Err(malformed(rule, "expects a module or a product fact")),
            },
            RuleId::OddEven => {
                let r = need(rule, params.r, "r")?;
                if discriminant::pushforward_scaling(r, ctx.p) == discriminant::ScalingVerdict::Iso {
                    Ok(Datum::Module(module_at(rule, inputs, 1)?.clone()))
                } else {
                    Ok(Datum::Module(module_at(rule, inputs, 0)?.clone()))
                }
            }
            RuleId::P1Factor => {
                let m = module_at(rule, inputs, 0)?;
                let line = catalog_ring(CatalogKey::new(Group::PGL2, Space::Pn(1), Coefficients::GaloisH(2)))?;
                let gens = m.generators().iter().filter(|g| !line.kernel.contains(&g.name)).cloned().collect();
                Ok(Datum::Module(GradedModule::new(m.characteristic, m.base, gens)?))
            }
            RuleId::PushEven => {
                let n = need(rule, n, "n")?;
                let ambient = module_at(rule, inputs, 0)?;
                let holds = ctx.p == 2
                    && discriminant::delta1_divisible_by(n / 2, 2)?
                    && ambient.generators().iter().all(|g| g.bidegree.degree == 0);
                if !holds {
                    return Err(LocalizationError::Inapplicable(format!(
                        "pushforward from Δ1,{n} is not shown to vanish by parity"
                    )));
                }
                Ok(Datum::Fact(Fact { claim: Claim::PushforwardZero { n }, holds }))
            }
            RuleId::PushDiv => {
                let n = need(rule, n, "n")?;
                if !module_at(rule, inputs, 0)?.is_trivial() {
                    return Err(malformed(rule, "A⁰(Δ1,n) must be constant"));
                }
                let holds = discriminant::delta1_divisible_by(n / 2, ctx.p)?;
                Ok(Datum::Fact(Fact { claim: Claim::PushforwardZero { n }, holds }))
            }
            RuleId::Gate => {
                let n = need(rule, n, "n")?;
                if !(self.gate)(n)? {
                    return Err(LocalizationError::GateFails(n));
                }
                Ok(Datum::Fact(Fact { claim: Claim::PushforwardZero { n }, holds: true }))
            }
            RuleId::BoundaryShift => {
                let n = need(rule, n, "n")?;
                if let Some(generator) = params.generator.clone() {
                    // base case: ∂(t·x1) on P² ∖ Δ1,2 is c1(O(−1)²) = 2·c1(O(−1))
                    if n != 2 || ctx.p != 2 {
                        return Err(LocalizationError::Inapplicable(
                            "the square argument needs n = 2 and p = 2".to_string(),
                        ));
                    }
                    let claim = Claim::BoundaryNonzero { n, generator, p1: params.p1 };
                    return Ok(Datum::Fact(Fact { claim, holds: false }));
                }
                let ambient = module_at(rule, inputs, 0)?;
                let source = module_at(rule, inputs, 1)?;
                let push = fact_at(rule, inputs, 2)?;
                if push.claim != (Claim::PushforwardZero { n }) {
                    return Err(malformed(rule, "input 2 must be the pushforward fact for this n"));
                }
                let mut gens = ambient.generators().to_vec();
                if push.holds {
                    for g in source.generators() {
                        let d = g.bidegree.degree + 1;
                        let name = if ctx.p == 2 { x_name(d) } else { "alpha".to_string() };
                        gens.push(ModuleGenerator::new(name, 0, d, Provenance::BoundaryLift));
                    }
                } else if !source.is_trivial() {
                    return Err(LocalizationError::Inapplicable(format!(
                        "pushforward from Δ1,{n} is nonzero on a non-constant module"
                    )));
                }
                Ok(Datum::Module(GradedModule::new(ctx.p, ctx.base, sorted(gens))?))
            }
            RuleId::DegreeBound => {
                let n = need(rule, n, "n")?;
                let d = need(rule, params.degree, "degree")?;
                let generator = need(rule, params.generator.clone(), "generator")?;
                let boundary = fact_at(rule, inputs, 0)?;
                if boundary.holds || !matches!(boundary.claim, Claim::BoundaryNonzero { .. }) {
                    return Err(malformed(rule, "input 0 must be a vanishing boundary"));
                }
                let bounding = module_at(rule, inputs, 1)?;
                // for n = 2 there is no Δ2 to remove: the bound is A¹(P²) itself
                let bound = if n == 2 { max_degree(bounding) } else { 1 + max_degree(bounding) };
                if d <= bound {
                    return Err(LocalizationError::Inapplicable(format!(
                        "degree bound {bound} does not exclude t·{generator} in degree {d}"
                    )));
                }
                let claim = Claim::ProductNonzero { n, generator, p1: params.p1 };
                Ok(Datum::Fact(Fact { claim, holds: false }))
            }
            RuleId::Torsor => {
                if let Some(g) = params.g.filter(|_| inputs.is_empty()) {
                    return Ok(Datum::Module(general_field_fixture(ctx, g)?));
                }
                if let Some(generator) = params.generator.clone() {
                    // 1, t, …, tⁿ are a basis of A(Pⁿ) over the point ring, and
                    // A¹(Pⁿ) injects into A¹(Pⁿ ∖ Δ1,n) once the pushforward vanishes
                    let n = need(rule, n, "n")?;
                    let claim = Claim::ProductNonzero { n, generator, p1: params.p1 };
                    return Ok(Datum::Fact(Fact { claim, holds: n >= 1 }));
                }
                let m = module_at(rule, inputs, 0)?;
                let mut gens = m.generators().to_vec();
                for (i, g) in m.generators().iter().enumerate() {
                    let fact = fact_at(rule, inputs, i + 1)?;
                    match &fact.claim {
                        Claim::ProductNonzero { generator, .. } if *generator == g.name => {}
                        Claim::BoundaryNonzero { generator, .. } if *generator == g.name && fact.holds => {}
                        _ => return Err(malformed(rule, "one product fact per generator, in order")),
                    }
                    if !fact.holds {
                        let d = g.bidegree.degree + 1;
                        gens.push(ModuleGenerator::new(x_name(d), 0, d, Provenance::TorsorKernel));
                    }
                }
                Ok(Datum::Module(GradedModule::new(m.characteristic, m.base, sorted(gens))?))
            }
        }
    }

    fn step(
        &self,
        trace: &mut InductionTrace,
        rule: RuleId,
        params: StepParams,
        inputs: Vec<StepInput>,
    ) -> Result<usize> {
        if self.disabled.contains(&rule) {
            return Err(LocalizationError::RuleDisabled(rule));
        }
        let data: Vec<Datum> = inputs.iter().map(|x| x.datum.clone()).collect();
        let output = self.apply(rule, &params, &data)?;
        trace.steps.push(TraceStep { rule, params, inputs, output, status: StepStatus::Derived });
        Ok(trace.steps.len() - 1)
    }

    fn from_step(trace: &InductionTrace, i: usize) -> StepInput {
        StepInput { from: Some(i), datum: trace.steps[i].output.clone() }
    }

    fn external(m: GradedModule) -> StepInput {
        StepInput { from: None, datum: Datum::Module(m) }
    }

    fn module_of(trace: &InductionTrace, i: usize) -> &GradedModule {
        match &trace.steps[i].output {
            Datum::Module(m) => m,
            Datum::Fact(_) => unreachable!("step {i} produces a module"),
        }
    }

    fn fact_of(trace: &InductionTrace, i: usize) -> &Fact {
        match &trace.steps[i].output {
            Datum::Fact(f) => f,
            Datum::Module(_) => unreachable!("step {i} produces a fact"),
        }
    }

    /// `A⁰` of the classifying space, optionally with the `× P¹` factor
    /// applied (recorded as an `R_P1_FACTOR` step).
    fn point_module(
        &self,
        ctx: Ctx,
        codim_zero: bool,
        p1: bool,
        n: u32,
        trace: &mut InductionTrace,
    ) -> Result<StepInput> {
        let m = pullbacks_from_point(ctx, codim_zero)?;
        if !p1 {
            return Ok(Engine::external(m));
        }
        let params = StepParams { n: Some(n), ..ctx.params() };
        let i = self.step(trace, RuleId::P1Factor, params, vec![Engine::external(m)])?;
        Ok(Engine::from_step(trace, i))
    }

    /// `A⁰(Pⁿ ∖ Δ₁,ₙ)`; returns the index of the step producing it.
    fn projective(&self, ctx: Ctx, n: u32, trace: &mut InductionTrace) -> Result<usize> {
        let ambient = pullbacks_from_point(ctx, true)?;
        let at = |r: Option<u32>| StepParams { n: Some(n), r, ..ctx.params() };
        if ctx.p != 2 {
            let delta = self.step(trace, RuleId::OddEven, at(Some(1)), vec![Engine::external(ambient.clone())])?;
            let push = self.step(trace, RuleId::PushDiv, at(None), vec![Engine::from_step(trace, delta)])?;
            let inputs =
                vec![Engine::external(ambient), Engine::from_step(trace, delta), Engine::from_step(trace, push)];
            return self.step(trace, RuleId::BoundaryShift, at(None), inputs);
        }
        let source = if n == 2 {
            // Δ1,2 is universally homeomorphic to P¹
            let line = match ctx.group {
                GroupKind::GL2 => Engine::external(ambient.clone()),
                GroupKind::PGL2 => self.point_module(ctx, true, true, 1, trace)?,
            };
            self.step(trace, RuleId::Univ, at(Some(1)), vec![line])?
        } else {
            let mut lower = self.projective(ctx, n - 2, trace)?;
            if ctx.group == GroupKind::PGL2 {
                let params = StepParams { n: Some(n - 2), ..ctx.params() };
                lower = self.step(trace, RuleId::P1Factor, params, vec![Engine::from_step(trace, lower)])?;
            }
            let open = self.step(trace, RuleId::Univ, at(Some(1)), vec![Engine::from_step(trace, lower)])?;
            let inputs = vec![Engine::external(ambient.clone()), Engine::from_step(trace, open)];
            let iso = self.step(trace, RuleId::OddEven, at(Some(1)), inputs)?;
            self.step(trace, RuleId::Codim2, at(Some(1)), vec![Engine::from_step(trace, iso)])?
        };
        let push = match ctx.group {
            GroupKind::GL2 => self.step(trace, RuleId::PushEven, at(None), vec![Engine::external(ambient.clone())])?,
            GroupKind::PGL2 => self.step(trace, RuleId::Gate, at(None), Vec::new())?,
        };
        let inputs = vec![Engine::external(ambient), Engine::from_step(trace, source), Engine::from_step(trace, push)];
        self.step(trace, RuleId::BoundaryShift, at(None), inputs)
    }

    /// Decides whether `t·gen` vanishes on `Pⁿ ∖ Δ₁,ₙ` (times `P¹` if `p1`).
    /// Returns the verdict and the index of the step that records it.
    fn product_nonzero(
        &self,
        ctx: Ctx,
        n: u32,
        gen: &ModuleGenerator,
        p1: bool,
        trace: &mut InductionTrace,
    ) -> Result<(bool, usize)> {
        let params = StepParams { n: Some(n), generator: Some(gen.name.clone()), p1, ..ctx.params() };
        match gen.provenance {
            Provenance::Unit | Provenance::Pullback => {
                let i = self.step(trace, RuleId::Torsor, params, Vec::new())?;
                Ok((Engine::fact_of(trace, i).holds, i))
            }
            Provenance::BoundaryLift => {
                let d = gen.bidegree.degree;
                let boundary = if n == 2 {
                    self.step(trace, RuleId::BoundaryShift, params.clone(), Vec::new())?
                } else {
                    // ∂(t·x_d) is the pushforward of t·x_{d−1} one level down
                    let lower = if d == 1 {
                        ModuleGenerator::unit()
                    } else {
                        ModuleGenerator::new(x_name(d - 1), 0, d - 1, Provenance::BoundaryLift)
                    };
                    let lower_p1 = ctx.group == GroupKind::PGL2;
                    let (_, j) = self.product_nonzero(ctx, n - 2, &lower, lower_p1, trace)?;
                    self.step(trace, RuleId::Univ, params.clone(), vec![Engine::from_step(trace, j)])?
                };
                if Engine::fact_of(trace, boundary).holds {
                    return Ok((true, boundary));
                }
                let bounding = if n == 2 {
                    self.point_module(ctx, false, p1, n, trace)?
                } else {
                    let point = self.point_module(ctx, true, p1, n, trace)?;
                    let r2 = StepParams { n: Some(n), r: Some(2), p1, ..ctx.params() };
                    let i = self.step(trace, RuleId::OddEven, r2, vec![point])?;
                    Engine::from_step(trace, i)
                };
                let bound_params = StepParams { degree: Some(d), ..params };
                let i = self.step(
                    trace,
                    RuleId::DegreeBound,
                    bound_params,
                    vec![Engine::from_step(trace, boundary), bounding],
                )?;
                Ok((Engine::fact_of(trace, i).holds, i))
            }
            Provenance::TorsorKernel | Provenance::Catalog => {
                Err(LocalizationError::Inapplicable(format!("no product rule for generator {}", gen.name)))
            }
        }
    }

    fn check_projective(group: GroupKind, p: u64, n: u32) -> Result<()> {
        if !is_prime(p) {
            return Err(LocalizationError::NotPrime(p));
        }
        if n < 2 || n % 2 == 1 {
            return Err(LocalizationError::InvalidParameter(format!("{group} requires an even degree n ≥ 2, got {n}")));
        }
        Ok(())
    }

    /// `A⁰_G(Pⁿ ∖ Δ₁,ₙ)` over an algebraically closed field.
    pub fn invariants_projective(&self, group: GroupKind, p: u64, n: u32) -> Result<(GradedModule, InductionTrace)> {
        self.projective_with_base(group, p, n, CoefficientBase::Trivial)
    }

    fn projective_with_base(
        &self,
        group: GroupKind,
        p: u64,
        n: u32,
        base: CoefficientBase,
    ) -> Result<(GradedModule, InductionTrace)> {
        Engine::check_projective(group, p, n)?;
        let mut trace = InductionTrace::default();
        let i = self.projective(Ctx { group, p, base }, n, &mut trace)?;
        Ok((Engine::module_of(&trace, i).clone(), trace))
    }

    /// Extends `A⁰_G(P^{2g+2} ∖ Δ₁)` along the `G_m`-torsor by the kernel of
    /// multiplication by `t`.
    pub fn torsor_extension(&self, group: GroupKind, p: u64, g: u32) -> Result<InvariantsReport> {
        self.torsor_with_base(group, p, g, CoefficientBase::Trivial, FieldMode::Closed)
    }

    fn torsor_with_base(
        &self,
        group: GroupKind,
        p: u64,
        g: u32,
        base: CoefficientBase,
        mode: FieldMode,
    ) -> Result<InvariantsReport> {
        let supported = match group {
            GroupKind::GL2 => g >= 2 && g.is_multiple_of(2),
            GroupKind::PGL2 => g == 3,
        };
        if !supported {
            return Err(LocalizationError::OutOfScope(format!("torsor extension for {group} with g = {g}")));
        }
        let n = 2 * g + 2;
        Engine::check_projective(group, p, n)?;
        let ctx = Ctx { group, p, base };
        let mut trace = InductionTrace::default();
        let proj = self.projective(ctx, n, &mut trace)?;
        let module = Engine::module_of(&trace, proj).clone();
        let mut inputs = vec![Engine::from_step(&trace, proj)];
        for gen in module.generators() {
            let (_, i) = self.product_nonzero(ctx, n, gen, false, &mut trace)?;
            inputs.push(Engine::from_step(&trace, i));
        }
        let params = StepParams { n: Some(n), ..ctx.params() };
        let out = self.step(&mut trace, RuleId::Torsor, params, inputs)?;
        let module = Engine::module_of(&trace, out).clone();
        Ok(InvariantsReport { group, g, p, mode, module, relations: Vec::new(), trace })
    }

    /// Cohomological invariants of the stack of hyperelliptic curves of genus `g`.
    pub fn invariants_hg(&self, g: u32, p: u64, mode: FieldMode) -> Result<InvariantsReport> {
        if !is_prime(p) {
            return Err(LocalizationError::NotPrime(p));
        }
        if g == 0 {
            return Err(LocalizationError::ZeroGenus);
        }
        if g % 2 == 1 && g != 3 {
            return Err(LocalizationError::OutOfScope(format!("odd genus {g}; only g = 3 is covered")));
        }
        let group = if g.is_multiple_of(2) { GroupKind::GL2 } else { GroupKind::PGL2 };
        match mode {
            FieldMode::Closed => {
                let mut report = self.torsor_extension(group, p, g)?;
                if (g, p) == (2, 2) {
                    report.relations = self.product_relations(g, p)?;
                }
                Ok(report)
            }
            FieldMode::General if p != 2 => self.torsor_with_base(group, p, g, CoefficientBase::Opaque, mode),
            FieldMode::General if g <= 3 => {
                let ctx = Ctx { group, p, base: CoefficientBase::Opaque };
                let params = StepParams { g: Some(g), n: Some(2 * g + 2), ..ctx.params() };
                let output = self.apply(RuleId::Torsor, &params, &[])?;
                let Datum::Module(module) = output.clone() else { unreachable!("fixture is a module") };
                let step = TraceStep {
                    rule: RuleId::Torsor,
                    params,
                    inputs: Vec::new(),
                    output,
                    status: StepStatus::Reported,
                };
                let trace = InductionTrace { steps: vec![step] };
                Ok(InvariantsReport { group, g, p, mode, module, relations: Vec::new(), trace })
            }
            FieldMode::General => Err(LocalizationError::OutOfScope(format!(
                "general field with p = 2 is only covered for g ∈ {{2, 3}}, got g = {g}"
            ))),
        }
    }

    /// Products of generators for `(g, p) = (2, 2)` over a closed field.
    pub fn product_relations(&self, g: u32, p: u64) -> Result<Vec<ProductRelation>> {
        if (g, p) != (2, 2) {
            return Err(LocalizationError::RelationsNotEstablished { g, p });
        }
        let full = self.torsor_extension(GroupKind::GL2, p, g)?.module;
        let (proj, _) = self.invariants_projective(GroupKind::GL2, p, 2 * g + 2)?;
        let top = max_degree(&full);
        let proj_top = max_degree(&proj);
        let gens: Vec<&ModuleGenerator> =
            full.generators().iter().filter(|x| x.provenance != Provenance::Unit).collect();
        let mut table = Vec::new();
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i..] {
                let d = a.bidegree.degree + b.bidegree.degree;
                let pulled = proj.generator(&a.name).is_some() && proj.generator(&b.name).is_some();
                let (value, reason) = if d > top {
                    (ProductValue::Zero, Justification::DegreeBound)
                } else if pulled && d > proj_top {
                    (ProductValue::Zero, Justification::Pullback)
                } else if a.name == b.name && a.bidegree.degree == 1 {
                    (ProductValue::Zero, Justification::SquareRoot)
                } else {
                    let mut candidates = vec!["0".to_string()];
                    let source = if pulled { &proj } else { &full };
                    candidates
                        .extend(source.generators().iter().filter(|x| x.bidegree.degree == d).map(|x| x.name.clone()));
                    (ProductValue::Unknown { candidates }, Justification::Undetermined)
                };
                table.push(ProductRelation { left: a.name.clone(), right: b.name.clone(), value, reason });
            }
        }
        Ok(table)
    }
}

pub fn invariants_projective(group: GroupKind, p: u64, n: u32) -> Result<(GradedModule, InductionTrace)> {
    Engine::default().invariants_projective(group, p, n)
}

pub fn torsor_extension(group: GroupKind, p: u64, g: u32) -> Result<InvariantsReport> {
    Engine::default().torsor_extension(group, p, g)
}

pub fn invariants_hg(g: u32, p: u64, mode: FieldMode) -> Result<InvariantsReport> {
    Engine::default().invariants_hg(g, p, mode)
}

pub fn product_relations(g: u32, p: u64) -> Result<Vec<ProductRelation>> {
    Engine::default().product_relations(g, p)
}
