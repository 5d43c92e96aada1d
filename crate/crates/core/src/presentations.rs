//! Finitely presented bigraded algebras, graded modules over them, and a
//! catalog of stored presentations for classifying spaces and projective
//! spaces.
//!
//! A relation is either monic in one variable (reduced by long division) or a
//! torsion relation `n·x = 0` on a single variable. Normal forms are unique for
//! every catalog entry.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::chern::{self, ChernError};
use crate::discriminant::{self, DiscriminantError};
use crate::poly::{is_prime, pretty_symbol, BiDegree, Notation, PolyError, PolyRing, Polynomial, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("unreducible presentation: relation {0} is neither monic nor torsion")]
    Unreducible(String),
    #[error("relation {0} is not homogeneous")]
    Inhomogeneous(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("not in catalog: {0}")]
    NotInCatalog(String),
    #[error("cannot parse catalog key `{0}`")]
    BadKey(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error(transparent)]
    Discriminant(#[from] DiscriminantError),
}

/// The graded coefficient ring `H(k)` a presentation is tensored with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoefficientBase {
    /// Algebraically closed field: the coefficients sit in degree 0 only.
    Trivial,
    /// Arbitrary field: a formal graded symbol algebra with no relations.
    Opaque,
}

impl fmt::Display for CoefficientBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoefficientBase::Trivial => "trivial",
            CoefficientBase::Opaque => "opaque",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    /// `poly = 0`, reduced by monic division in variable `var`.
    Monic { poly: Polynomial, var: usize },
    /// `order · x_var = 0`.
    Torsion { var: usize, order: u64 },
    /// Any other polynomial relation. Such presentations cannot be reduced.
    General(Polynomial),
}

impl Relation {
    /// A polynomial relation, classified as monic in `var` when possible.
    pub fn polynomial(poly: Polynomial, var: &str) -> Result<Relation, PresentationError> {
        let v = poly.ring().index_of(var).ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        if poly.is_monic_in(v) {
            Ok(Relation::Monic { poly, var: v })
        } else {
            Ok(Relation::General(poly))
        }
    }

    fn render(&self, ring: &PolyRing, notation: Notation) -> String {
        match (self, notation) {
            (Relation::Monic { poly, .. } | Relation::General(poly), _) => poly.display(notation).to_string(),
            (Relation::Torsion { var, order }, Notation::Ascii) => format!("{}*{}", order, ring.variables()[*var].name),
            (Relation::Torsion { var, order }, Notation::Unicode) => {
                format!("{}{}", order, pretty_symbol(&ring.variables()[*var].name))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraPresentation {
    ring: Arc<PolyRing>,
    relations: Vec<Relation>,
    base: CoefficientBase,
}

impl AlgebraPresentation {
    pub fn new(
        ring: Arc<PolyRing>,
        relations: Vec<Relation>,
        base: CoefficientBase,
    ) -> Result<Self, PresentationError> {
        for rel in &relations {
            match rel {
                Relation::Monic { poly, .. } | Relation::General(poly) if **poly.ring() != *ring => {
                    return Err(PolyError::IncompatibleRings.into());
                }
                Relation::Torsion { var, .. } if *var >= ring.nvars() => {
                    return Err(PolyError::UnknownVariable(format!("#{var}")).into());
                }
                _ => {}
            }
        }
        Ok(AlgebraPresentation { ring, relations, base })
    }

    /// The polynomial ring with no relations.
    pub fn free(ring: Arc<PolyRing>, base: CoefficientBase) -> Self {
        AlgebraPresentation { ring, relations: Vec::new(), base }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn characteristic(&self) -> u64 {
        self.ring.characteristic()
    }

    pub fn variables(&self) -> &[Variable] {
        self.ring.variables()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn base(&self) -> CoefficientBase {
        self.base
    }

    pub fn with_base(mut self, base: CoefficientBase) -> Self {
        self.base = base;
        self
    }

    /// Variable of the first monic relation.
    pub fn reduction_variable(&self) -> Option<&Variable> {
        self.relations.iter().find_map(|r| match r {
            Relation::Monic { var, .. } => Some(&self.ring.variables()[*var]),
            _ => None,
        })
    }

    /// Relations rendered as ASCII strings.
    pub fn relation_strings(&self) -> Vec<String> {
        self.render_relations(Notation::Ascii)
    }

    pub fn render_relations(&self, notation: Notation) -> Vec<String> {
        self.relations.iter().map(|r| r.render(&self.ring, notation)).collect()
    }

    /// Parses a polynomial over this presentation's ring.
    pub fn parse(&self, input: &str) -> Result<Polynomial, PresentationError> {
        Ok(Polynomial::parse(&self.ring, input)?)
    }

    /// Checks that every relation is homogeneous and reducible.
    pub fn validate(&self) -> Result<(), PresentationError> {
        for rel in &self.relations {
            match rel {
                Relation::Monic { poly, var } => {
                    if poly.bidegree().bidegree().is_none() {
                        return Err(PresentationError::Inhomogeneous(poly.to_ascii()));
                    }
                    if !poly.is_monic_in(*var) {
                        return Err(PresentationError::Unreducible(poly.to_ascii()));
                    }
                }
                Relation::Torsion { .. } => {}
                Relation::General(poly) => return Err(PresentationError::Unreducible(poly.to_ascii())),
            }
        }
        Ok(())
    }

    /// Remainder of `a` under all monic relations, with torsion applied to the
    /// coefficients; repeated until nothing changes.
    pub fn normal_form(&self, a: &Polynomial) -> Result<Polynomial, PresentationError> {
        if **a.ring() != *self.ring {
            return Err(PolyError::IncompatibleRings.into());
        }
        self.validate()?;
        let mut cur = a.clone();
        loop {
            let mut next = cur.clone();
            for rel in &self.relations {
                next = match rel {
                    Relation::Monic { poly, var } => next.div_rem_monic(poly, *var)?.1,
                    Relation::Torsion { var, order } => self.apply_torsion(&next, *var, *order),
                    Relation::General(_) => unreachable!("rejected by validate"),
                };
            }
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
    }

    pub fn is_zero_in(&self, a: &Polynomial) -> Result<bool, PresentationError> {
        Ok(self.normal_form(a)?.is_zero())
    }

    fn apply_torsion(&self, a: &Polynomial, var: usize, order: u64) -> Polynomial {
        let p = self.ring.characteristic();
        if p != 0 && order.is_multiple_of(p) {
            return a.clone();
        }
        let modulus = BigInt::from(order);
        let mut out = self.ring.zero();
        for (exps, c) in a.terms() {
            let c = if exps[var] == 0 {
                c.clone()
            } else if p == 0 {
                c.mod_floor(&modulus)
            } else {
                // order is a unit mod p, so the variable itself vanishes
                continue;
            };
            out = &out + &self.ring.monomial(exps, c);
        }
        out
    }
}

/// Where a module generator comes from. The order breaks ties between
/// generators of equal degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// The unit `1`.
    Unit,
    /// Lifted against a boundary map; degree is the source degree plus one.
    BoundaryLift,
    /// Generated by the kernel of multiplication by the torsor class.
    TorsorKernel,
    /// Pulled back from the classifying space of the group.
    Pullback,
    /// Stored data of a catalog presentation.
    Catalog,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleGenerator {
    pub name: String,
    pub bidegree: BiDegree,
    /// Annihilating integer, e.g. `Some(2)` for `2·τ = 0`.
    pub torsion: Option<u64>,
    pub provenance: Provenance,
}

impl ModuleGenerator {
    pub fn new(name: impl Into<String>, codim: u32, degree: u32, provenance: Provenance) -> Self {
        ModuleGenerator { name: name.into(), bidegree: BiDegree::new(codim, degree), torsion: None, provenance }
    }

    pub fn unit() -> Self {
        ModuleGenerator::new("1", 0, 0, Provenance::Unit)
    }

    pub fn with_torsion(mut self, order: u64) -> Self {
        self.torsion = Some(order);
        self
    }
}

/// A summand known only up to containment, e.g. a submodule of `H(k)[4]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndeterminedSummand {
    pub name: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedModule {
    pub characteristic: u64,
    pub base: CoefficientBase,
    generators: Vec<ModuleGenerator>,
    pub undetermined: Option<UndeterminedSummand>,
}

impl GradedModule {
    pub fn new(
        characteristic: u64,
        base: CoefficientBase,
        generators: Vec<ModuleGenerator>,
    ) -> Result<Self, PresentationError> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.name.as_str()) {
                return Err(PresentationError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(GradedModule { characteristic, base, generators, undetermined: None })
    }

    /// The module generated by `1` alone.
    pub fn constants(characteristic: u64, base: CoefficientBase) -> Self {
        GradedModule { characteristic, base, generators: vec![ModuleGenerator::unit()], undetermined: None }
    }

    pub fn generators(&self) -> &[ModuleGenerator] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&ModuleGenerator> {
        self.generators.iter().find(|g| g.name == name)
    }

    pub fn with_undetermined(mut self, name: impl Into<String>, degree: u32) -> Self {
        self.undetermined = Some(UndeterminedSummand { name: name.into(), degree });
        self
    }

    /// Cohomological degrees of the generators, in listing order.
    pub fn degrees(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.bidegree.degree).collect()
    }

    /// No torsion generators and no undetermined summand.
    pub fn is_free(&self) -> bool {
        self.undetermined.is_none() && self.generators.iter().all(|g| g.torsion.is_none())
    }

    /// Only the unit generator.
    pub fn is_trivial(&self) -> bool {
        self.undetermined.is_none() && self.generators.len() == 1 && self.generators[0].provenance == Provenance::Unit
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    GLn(u32),
    SLn(u32),
    Mu(u64),
    O2,
    O3,
    SO3,
    PGL2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    Point,
    /// `Pⁿ`; `Pn(1)` is the projective line.
    Pn(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficients {
    MilnorK,
    GaloisH(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CatalogKey {
    pub group: Group,
    pub space: Space,
    pub coefficients: Coefficients,
}

impl CatalogKey {
    pub fn new(group: Group, space: Space, coefficients: Coefficients) -> Self {
        CatalogKey { group, space, coefficients }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::GLn(n) => write!(f, "GLn:{n}"),
            Group::SLn(n) => write!(f, "SLn:{n}"),
            Group::Mu(q) => write!(f, "mu:{q}"),
            Group::O2 => f.write_str("O2"),
            Group::O3 => f.write_str("O3"),
            Group::SO3 => f.write_str("SO3"),
            Group::PGL2 => f.write_str("PGL2"),
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Point => f.write_str("point"),
            Space::Pn(n) => write!(f, "P{n}"),
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::MilnorK => f.write_str("K"),
            Coefficients::GaloisH(p) => write!(f, "H{p}"),
        }
    }
}

impl fmt::Display for CatalogKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} on {} with {}", self.group, self.space, self.coefficients)
    }
}

fn parse_index<T: FromStr>(s: &str, whole: &str) -> Result<T, PresentationError> {
    s.parse().map_err(|_| PresentationError::BadKey(whole.to_string()))
}

impl FromStr for Group {
    type Err = PresentationError;

    /// `GLn:3`, `SLn:2`, `mu:3`, `O2`, `O3`, `SO3`, `PGL2` (case-insensitive).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        match lower.split_once(':') {
            Some(("gln", n)) => Ok(Group::GLn(parse_index(n, s)?)),
            Some(("sln", n)) => Ok(Group::SLn(parse_index(n, s)?)),
            Some(("mu", q)) => Ok(Group::Mu(parse_index(q, s)?)),
            Some(_) => Err(PresentationError::BadKey(s.to_string())),
            None => match lower.as_str() {
                "o2" => Ok(Group::O2),
                "o3" => Ok(Group::O3),
                "so3" => Ok(Group::SO3),
                "pgl2" => Ok(Group::PGL2),
                _ => Err(PresentationError::BadKey(s.to_string())),
            },
        }
    }
}

impl FromStr for Space {
    type Err = PresentationError;

    /// `point`, `P1`, `P8`, `Pn:8`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        if lower == "point" || lower == "pt" {
            return Ok(Space::Point);
        }
        let n = lower
            .strip_prefix("pn:")
            .or_else(|| lower.strip_prefix('p'))
            .ok_or_else(|| PresentationError::BadKey(s.to_string()))?;
        Ok(Space::Pn(parse_index(n, s)?))
    }
}

impl FromStr for Coefficients {
    type Err = PresentationError;

    /// `K` for Milnor K-theory, `H<p>` for Galois cohomology mod `p`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        if lower == "k" {
            return Ok(Coefficients::MilnorK);
        }
        let p = lower.strip_prefix('h').ok_or_else(|| PresentationError::BadKey(s.to_string()))?;
        Ok(Coefficients::GaloisH(parse_index(p, s)?))
    }
}

/// A stored presentation: the algebra, the module over it, and (for restricted
/// entries) the names of the classes killed by pullback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub key: CatalogKey,
    pub algebra: AlgebraPresentation,
    pub module: GradedModule,
    pub kernel: Vec<String>,
}

impl CatalogEntry {
    pub fn to_json(&self) -> serde_json::Value {
        let variables: Vec<_> = self
            .algebra
            .variables()
            .iter()
            .map(|v| json!({"name": v.name, "codim": v.weight.codim, "degree": v.weight.degree}))
            .collect();
        let generators: Vec<_> = self
            .module
            .generators()
            .iter()
            .map(|g| {
                json!({
                    "name": g.name,
                    "codim": g.bidegree.codim,
                    "degree": g.bidegree.degree,
                    "torsion": g.torsion,
                })
            })
            .collect();
        json!({
            "key": self.key.to_string(),
            "characteristic": self.algebra.characteristic(),
            "base": self.algebra.base(),
            "variables": variables,
            "relations": self.algebra.relation_strings(),
            "generators": generators,
            "kernel": self.kernel,
        })
    }
}

fn not_in_catalog(key: &CatalogKey) -> PresentationError {
    PresentationError::NotInCatalog(key.to_string())
}

fn chern_vars(range: std::ops::RangeInclusive<u32>) -> Vec<Variable> {
    range.map(|j| Variable::new(format!("c{j}"), j, 0)).collect()
}

/// Characteristic of the coefficient ring, or `None` if `p` is not prime.
fn coefficient_characteristic(c: Coefficients) -> Option<u64> {
    match c {
        Coefficients::MilnorK => Some(0),
        Coefficients::GaloisH(p) if is_prime(p) => Some(p),
        Coefficients::GaloisH(_) => None,
    }
}

fn torsion_on(ring: &Arc<PolyRing>, names: &[&str], order: u64) -> Vec<Relation> {
    names.iter().map(|n| Relation::Torsion { var: ring.index_of(n).expect("registered variable"), order }).collect()
}

/// Ring `𝔽₂[t, c2, c3]` shared by every `PGL₂` projective-space entry.
pub fn pgl2_projective_ring() -> &'static Arc<PolyRing> {
    discriminant::gate_ring()
}

/// Looks up a stored presentation. Every relation is checked to be homogeneous
/// and reducible before it is returned.
pub fn catalog_ring(key: CatalogKey) -> Result<CatalogEntry, PresentationError> {
    let entry = build_entry(key)?;
    entry.algebra.validate()?;
    Ok(entry)
}

fn build_entry(key: CatalogKey) -> Result<CatalogEntry, PresentationError> {
    let ch = coefficient_characteristic(key.coefficients).ok_or_else(|| not_in_catalog(&key))?;
    let base = CoefficientBase::Opaque;
    let unit = || vec![ModuleGenerator::unit()];
    let plain = |algebra: AlgebraPresentation, gens: Vec<ModuleGenerator>| -> Result<CatalogEntry, PresentationError> {
        let module = GradedModule::new(algebra.characteristic(), base, gens)?;
        Ok(CatalogEntry { key, algebra, module, kernel: Vec::new() })
    };
    use Coefficients::*;
    use Group::*;
    match (key.group, key.space, key.coefficients) {
        (GLn(n), Space::Point, _) if n >= 1 => {
            let ring = PolyRing::new(ch, chern_vars(1..=n))?;
            plain(AlgebraPresentation::free(ring, base), unit())
        }
        (SLn(n), Space::Point, _) if n >= 1 => {
            let ring = PolyRing::new(ch, chern_vars(2..=n))?;
            plain(AlgebraPresentation::free(ring, base), unit())
        }
        (GLn(2), Space::Pn(n), _) if n >= 1 => {
            let relation = gl2_projective_relation(n, ch)?;
            let ring = relation.ring().clone();
            let algebra = AlgebraPresentation::new(ring, vec![Relation::polynomial(relation, "t")?], base)?;
            plain(algebra, unit())
        }
        (Mu(q), Space::Point, MilnorK) if q >= 2 => {
            let ring = PolyRing::new(0, vec![Variable::new("xi", 1, 0)])?;
            let rels = torsion_on(&ring, &["xi"], q);
            plain(AlgebraPresentation::new(ring, rels, base)?, unit())
        }
        (Mu(q), Space::Point, GaloisH(p)) if q == p => {
            let ring = PolyRing::new(p, vec![Variable::new("t", 0, 1), Variable::new("xi", 1, 0)])?;
            plain(AlgebraPresentation::free(ring, base), unit())
        }
        (Mu(q), Space::Point, GaloisH(p)) if q >= 2 && q % p != 0 => {
            let ring = PolyRing::new(p, Vec::new())?;
            plain(AlgebraPresentation::free(ring, base), unit())
        }
        (O2, Space::Point, MilnorK) => {
            let ring = PolyRing::new(0, chern_vars(1..=2))?;
            let rels = torsion_on(&ring, &["c1"], 2);
            let tau = ModuleGenerator::new("tau11", 1, 1, Provenance::Catalog).with_torsion(2);
            plain(AlgebraPresentation::new(ring, rels, base)?, vec![ModuleGenerator::unit(), tau])
        }
        (O3, Space::Point, MilnorK) => {
            let ring = PolyRing::new(0, chern_vars(1..=3))?;
            let rels = torsion_on(&ring, &["c1", "c3"], 2);
            let gens = vec![
                ModuleGenerator::unit(),
                ModuleGenerator::new("tau11", 1, 1, Provenance::Catalog).with_torsion(2),
                ModuleGenerator::new("tau12", 1, 2, Provenance::Catalog).with_torsion(2),
            ];
            plain(AlgebraPresentation::new(ring, rels, base)?, gens)
        }
        (O2, Space::Point, GaloisH(2)) | (O3, Space::Point, GaloisH(2)) => {
            let n = if key.group == O2 { 2 } else { 3 };
            let ring = PolyRing::new(2, chern_vars(1..=n))?;
            let mut gens = unit();
            gens.extend((1..=n).map(|j| ModuleGenerator::new(format!("w{j}"), 0, j, Provenance::Catalog)));
            gens.push(ModuleGenerator::new("tau11", 1, 1, Provenance::Catalog).with_torsion(2));
            plain(AlgebraPresentation::free(ring, base), gens)
        }
        (SO3, Space::Point, GaloisH(2)) => {
            let ring = PolyRing::new(2, chern_vars(2..=3))?;
            let gens = vec![
                ModuleGenerator::unit(),
                ModuleGenerator::new("w2", 0, 2, Provenance::Catalog),
                ModuleGenerator::new("tau11", 1, 1, Provenance::Catalog).with_torsion(2),
            ];
            plain(AlgebraPresentation::free(ring, base), gens)
        }
        (SO3, Space::Point, GaloisH(p)) | (PGL2, Space::Point, GaloisH(p)) if p != 2 => {
            let ring = PolyRing::new(p, chern_vars(2..=3))?;
            let rels = torsion_on(&ring, &["c3"], 2);
            plain(AlgebraPresentation::new(ring, rels, base)?, unit())
        }
        (PGL2, Space::Point, GaloisH(2)) => {
            let ring = PolyRing::new(2, chern_vars(2..=3))?;
            plain(AlgebraPresentation::free(ring, base), pgl2_generators())
        }
        (PGL2, Space::Pn(1), GaloisH(2)) => {
            let ring = pgl2_projective_ring().clone();
            let rels = vec![
                Relation::polynomial(Polynomial::parse(&ring, "t^2 + c2")?, "t")?,
                Relation::polynomial(Polynomial::parse(&ring, "c3")?, "c3")?,
            ];
            let algebra = AlgebraPresentation::new(ring, rels, base)?;
            let module = GradedModule::new(2, base, unit())?;
            let kernel = ["w2", "c3", "tau"].map(String::from).to_vec();
            Ok(CatalogEntry { key, algebra, module, kernel })
        }
        (PGL2, Space::Pn(n), GaloisH(2)) if n % 2 == 0 => {
            let ring = pgl2_projective_ring().clone();
            let f = discriminant::f_poly(n)?;
            let algebra = AlgebraPresentation::new(ring, vec![Relation::polynomial(f, "t")?], base)?;
            plain(algebra, pgl2_generators())
        }
        _ => Err(not_in_catalog(&key)),
    }
}

fn pgl2_generators() -> Vec<ModuleGenerator> {
    vec![
        ModuleGenerator::unit(),
        ModuleGenerator::new("v2", 0, 2, Provenance::Catalog),
        ModuleGenerator::new("tau", 1, 1, Provenance::Catalog).with_torsion(2),
    ]
}

/// Degree-`(n+1)` relation of `A_{GL₂}(Pⁿ)` in `[t, l1, l2]`: the projective
/// relation of `Sym^n(F^∨)` twisted by `det^{n/2−1}` (no twist for odd `n`).
pub fn gl2_projective_relation(n: u32, characteristic: u64) -> Result<Polynomial, PresentationError> {
    let twist = if n.is_multiple_of(2) { i64::from(n / 2) - 1 } else { 0 };
    let bundle = chern::twist_by_det(&chern::sym_chern(n)?.dual(), twist);
    let rel = chern::projective_relation(&bundle, &Variable::new("t", 1, 0))?;
    let ring = PolyRing::new(0, vec![Variable::new("t", 1, 0), Variable::new("l1", 1, 0), Variable::new("l2", 2, 0)])?;
    let renamed = rel.rename_into(&ring, &[0, 1, 2])?;
    Ok(if characteristic == 0 { renamed } else { renamed.reduce_mod(characteristic)? })
}

/// Every key the catalog answers for, with projective spaces up to `max_n`.
pub fn catalog_keys(max_n: u32) -> Vec<CatalogKey> {
    use Coefficients::*;
    use Group::*;
    let mut keys = Vec::new();
    let coeffs = [MilnorK, GaloisH(2), GaloisH(3), GaloisH(5)];
    for c in coeffs {
        for n in 1..=4 {
            keys.push(CatalogKey::new(GLn(n), Space::Point, c));
            keys.push(CatalogKey::new(SLn(n), Space::Point, c));
        }
        for q in [2, 3, 5] {
            keys.push(CatalogKey::new(Mu(q), Space::Point, c));
        }
        for n in 1..=max_n {
            keys.push(CatalogKey::new(GLn(2), Space::Pn(n), c));
        }
    }
    keys.push(CatalogKey::new(O2, Space::Point, MilnorK));
    keys.push(CatalogKey::new(O3, Space::Point, MilnorK));
    keys.push(CatalogKey::new(O2, Space::Point, GaloisH(2)));
    keys.push(CatalogKey::new(O3, Space::Point, GaloisH(2)));
    for p in [2, 3, 5] {
        keys.push(CatalogKey::new(SO3, Space::Point, GaloisH(p)));
        keys.push(CatalogKey::new(PGL2, Space::Point, GaloisH(p)));
    }
    keys.push(CatalogKey::new(PGL2, Space::Pn(1), GaloisH(2)));
    for n in (2..=max_n).step_by(2) {
        keys.push(CatalogKey::new(PGL2, Space::Pn(n), GaloisH(2)));
    }
    keys.retain(|k| build_entry(*k).is_ok());
    keys
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn key(g: &str, s: &str, c: &str) -> CatalogKey {
        CatalogKey::new(g.parse().unwrap(), s.parse().unwrap(), c.parse().unwrap())
    }

    fn entry(g: &str, s: &str, c: &str) -> CatalogEntry {
        catalog_ring(key(g, s, c)).unwrap()
    }

    fn weights(e: &CatalogEntry) -> Vec<(String, u32, u32)> {
        e.algebra.variables().iter().map(|v| (v.name.clone(), v.weight.codim, v.weight.degree)).collect()
    }

    #[test]
    fn normal_form_modulo_cubic() {
        let ring = pgl2_projective_ring().clone();
        let f2 = Polynomial::parse(&ring, "t^3 + c2 t + c3").unwrap();
        let r = AlgebraPresentation::new(ring, vec![Relation::polynomial(f2, "t").unwrap()], CoefficientBase::Trivial)
            .unwrap();
        assert_eq!(r.normal_form(&r.parse("t^3").unwrap()).unwrap(), r.parse("c2 t + c3").unwrap());
    }

    #[test]
    fn projective_eight_space() {
        let e = entry("PGL2", "P8", "H2");
        let f8 = discriminant::f_poly(8).unwrap();
        assert!(e.algebra.normal_form(&f8).unwrap().is_zero());
        let c3 = e.algebra.parse("c3").unwrap();
        assert_eq!(e.algebra.normal_form(&c3).unwrap(), c3);
        assert!(!e.algebra.is_zero_in(&c3).unwrap());
        assert!(e.algebra.is_zero_in(&e.algebra.ring().zero()).unwrap());
    }

    #[test]
    fn projective_line() {
        let e = entry("PGL2", "P1", "H2");
        assert!(e.algebra.is_zero_in(&e.algebra.parse("c3").unwrap()).unwrap());
        assert!(e.algebra.is_zero_in(&e.algebra.parse("t^2 + c2").unwrap()).unwrap());
        assert_eq!(e.algebra.relation_strings()[0], "t^2 + c2");
        assert_eq!(e.kernel, vec!["w2", "c3", "tau"]);
    }

    #[test]
    fn non_monic_relation_is_unreducible() {
        let ring = pgl2_projective_ring().clone();
        let rel = Relation::polynomial(Polynomial::parse(&ring, "c2 t").unwrap(), "t").unwrap();
        let r = AlgebraPresentation::new(ring, vec![rel], CoefficientBase::Trivial).unwrap();
        let err = r.normal_form(&r.parse("t").unwrap()).unwrap_err();
        assert!(err.to_string().starts_with("unreducible presentation"));
    }

    #[test]
    fn general_linear_point() {
        let e = entry("GLn:2", "point", "K");
        assert_eq!(e.algebra.characteristic(), 0);
        assert_eq!(weights(&e), vec![("c1".into(), 1, 0), ("c2".into(), 2, 0)]);
        assert!(e.algebra.relations().is_empty());
        let e = entry("SLn:3", "point", "H3");
        assert_eq!(weights(&e), vec![("c2".into(), 2, 0), ("c3".into(), 3, 0)]);
    }

    #[test]
    fn roots_of_unity() {
        let e = entry("mu:3", "point", "H3");
        assert_eq!(weights(&e), vec![("t".into(), 0, 1), ("xi".into(), 1, 0)]);
        assert!(e.algebra.relations().is_empty());
        let e = entry("mu:3", "point", "H2");
        assert!(e.algebra.variables().is_empty());
        let e = entry("mu:4", "point", "K");
        let r = &e.algebra;
        assert_eq!(r.normal_form(&r.parse("5xi^2 + 7").unwrap()).unwrap(), r.parse("xi^2 + 7").unwrap());
        assert!(catalog_ring(key("mu:4", "point", "H2")).is_err());
    }

    #[test]
    fn orthogonal_groups() {
        let e = entry("O2", "point", "K");
        let tau = e.module.generator("tau11").unwrap();
        assert_eq!((tau.bidegree, tau.torsion), (BiDegree::new(1, 1), Some(2)));
        let r = &e.algebra;
        assert_eq!(r.normal_form(&r.parse("3c1 + 3c2").unwrap()).unwrap(), r.parse("c1 + 3c2").unwrap());
        let e = entry("O3", "point", "K");
        assert_eq!(e.module.generator("tau12").unwrap().bidegree, BiDegree::new(1, 2));
        let r = &e.algebra;
        assert_eq!(r.normal_form(&r.parse("2c1 c2 + 2c2 + 4c3").unwrap()).unwrap(), r.parse("2c2").unwrap());
    }

    #[test]
    fn special_orthogonal_splits_off_sign() {
        let o3 = entry("O3", "point", "H2");
        let so3 = entry("SO3", "point", "H2");
        let split: Vec<_> =
            o3.module.generators().iter().filter(|g| g.name != "w1" && g.name != "w3").cloned().collect();
        assert_eq!(split, so3.module.generators());
        let vars: Vec<_> = o3.algebra.variables().iter().filter(|v| v.name != "c1").cloned().collect();
        assert_eq!(vars, so3.algebra.variables());
        assert_eq!(so3.module.generator("tau11").unwrap().torsion, Some(2));
    }

    #[test]
    fn odd_prime_kills_c3() {
        let e = entry("PGL2", "point", "H3");
        let r = &e.algebra;
        assert!(r.is_zero_in(&r.parse("c3 c2").unwrap()).unwrap());
        assert!(!r.is_zero_in(&r.parse("c2").unwrap()).unwrap());
    }

    #[test]
    fn gl2_relation_degree() {
        for n in 1..=12 {
            let e = catalog_ring(CatalogKey::new(Group::GLn(2), Space::Pn(n), Coefficients::MilnorK)).unwrap();
            let Relation::Monic { poly, var } = &e.algebra.relations()[0] else { panic!("monic expected") };
            assert_eq!(poly.bidegree().bidegree(), Some(BiDegree::new(n + 1, 0)));
            assert_eq!(poly.degree_in(*var), Some(n + 1));
        }
    }

    #[test]
    fn unknown_keys() {
        for (g, s, c) in [("PGL2", "P3", "H2"), ("O2", "point", "H3"), ("SO3", "point", "K"), ("GLn:3", "P2", "K")] {
            let err = catalog_ring(key(g, s, c)).unwrap_err();
            assert!(err.to_string().starts_with("not in catalog"), "{err}");
        }
        assert!(catalog_ring(CatalogKey::new(Group::GLn(2), Space::Point, Coefficients::GaloisH(4))).is_err());
        assert!("Foo".parse::<Group>().is_err());
        assert!("Q3".parse::<Space>().is_err());
    }

    #[test]
    fn every_key_validates() {
        let keys = catalog_keys(12);
        assert!(keys.len() > 40);
        for k in keys {
            let e = catalog_ring(k).unwrap();
            for rel in e.algebra.relations() {
                if let Relation::Monic { poly, var } = rel {
                    assert!(poly.is_monic_in(*var));
                    assert!(poly.bidegree().bidegree().is_some());
                }
            }
        }
    }

    #[test]
    fn json_schema() {
        let v = entry("SO3", "point", "H2").to_json();
        assert_eq!(v["characteristic"], 2);
        assert_eq!(v["variables"][0], json!({"name": "c2", "codim": 2, "degree": 0}));
        assert_eq!(v["generators"][2], json!({"name": "tau11", "codim": 1, "degree": 1, "torsion": 2}));
        assert_eq!(v["generators"][0]["torsion"], serde_json::Value::Null);
    }

    fn arb_pgl2_element() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(((0u32..12, 0u32..4, 0u32..4), 0i64..2), 0..8).prop_map(|terms| {
            let ring = pgl2_projective_ring();
            terms.into_iter().fold(ring.zero(), |acc, ((a, b, c), k)| acc + ring.monomial(&[a, b, c], k))
        })
    }

    proptest! {
        #[test]
        fn normal_form_idempotent_and_additive(a in arb_pgl2_element(), b in arb_pgl2_element(), n in 1u32..6) {
            let r = catalog_ring(CatalogKey::new(Group::PGL2, Space::Pn(2 * n), Coefficients::GaloisH(2))).unwrap().algebra;
            let na = r.normal_form(&a).unwrap();
            prop_assert_eq!(r.normal_form(&na).unwrap(), na.clone());
            let nb = r.normal_form(&b).unwrap();
            prop_assert_eq!(r.normal_form(&(&a + &b)).unwrap(), r.normal_form(&(&na + &nb)).unwrap());
        }
    }
}
