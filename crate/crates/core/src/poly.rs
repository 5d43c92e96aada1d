//! Exact sparse multivariate polynomials over ℤ and 𝔽_p with bigraded variables.
//!
//! A [`PolyRing`] is a registry of [`Variable`]s (each carrying a [`BiDegree`]
//! weight) together with a coefficient characteristic. Polynomials hold an
//! `Arc` to their ring; arithmetic between polynomials of different rings is an
//! error ("incompatible rings").
//!
//! Multiplication is commutative. For odd `p` the product on Chow groups with
//! coefficients is graded-commutative in the cohomological degree; nothing in
//! this crate multiplies two odd-degree classes for odd `p`, so no signs are
//! tracked.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("incompatible rings")]
    IncompatibleRings,
    #[error("non-monic divisor")]
    NonMonicDivisor,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("characteristic {0} is neither 0 nor a prime")]
    BadCharacteristic(u64),
    #[error("operation requires characteristic 0")]
    NeedsCharacteristicZero,
    #[error("{0} does not divide every coefficient")]
    InexactScalarDivision(BigInt),
    #[error("wrong number of substitution images: expected {expected}, got {got}")]
    SubstitutionArity { expected: usize, got: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Grading by (Chow codimension, cohomological degree).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BiDegree {
    pub codim: u32,
    pub degree: u32,
}

impl BiDegree {
    pub const ZERO: BiDegree = BiDegree { codim: 0, degree: 0 };

    pub const fn new(codim: u32, degree: u32) -> Self {
        BiDegree { codim, degree }
    }

    fn scaled(self, k: u32) -> Self {
        BiDegree::new(self.codim * k, self.degree * k)
    }
}

impl Add for BiDegree {
    type Output = BiDegree;
    fn add(self, rhs: BiDegree) -> BiDegree {
        BiDegree::new(self.codim + rhs.codim, self.degree + rhs.degree)
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.codim, self.degree)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    /// ASCII identifier, e.g. `t`, `c2`, `l1`, `tau11`.
    pub name: String,
    pub weight: BiDegree,
}

impl Variable {
    pub fn new(name: impl Into<String>, codim: u32, degree: u32) -> Self {
        Variable { name: name.into(), weight: BiDegree::new(codim, degree) }
    }
}

/// Variable registry plus coefficient characteristic (0 or a prime).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    characteristic: u64,
    vars: Vec<Variable>,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PolyRing {
    pub fn new(characteristic: u64, vars: Vec<Variable>) -> Result<Arc<Self>, PolyError> {
        if characteristic != 0 && !is_prime(characteristic) {
            return Err(PolyError::BadCharacteristic(characteristic));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(PolyError::DuplicateVariable(v.name.clone()));
            }
        }
        Ok(Arc::new(PolyRing { characteristic, vars }))
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// The same registry over another characteristic.
    pub fn with_characteristic(&self, characteristic: u64) -> Result<Arc<Self>, PolyError> {
        PolyRing::new(characteristic, self.vars.clone())
    }

    pub fn zero(self: &Arc<Self>) -> Polynomial {
        Polynomial { ring: Arc::clone(self), terms: BTreeMap::new() }
    }

    pub fn one(self: &Arc<Self>) -> Polynomial {
        self.constant(BigInt::one())
    }

    pub fn constant(self: &Arc<Self>, c: impl Into<BigInt>) -> Polynomial {
        let mut p = self.zero();
        p.insert_term(self.unit_monomial(), c.into());
        p
    }

    pub fn var(self: &Arc<Self>, name: &str) -> Result<Polynomial, PolyError> {
        let i = self.index_of(name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(self.var_at(i))
    }

    pub fn var_at(self: &Arc<Self>, index: usize) -> Polynomial {
        let mut exps = vec![0; self.nvars()];
        exps[index] = 1;
        self.monomial(&exps, BigInt::one())
    }

    /// `coeff · Π vars[i]^exps[i]`.
    pub fn monomial(self: &Arc<Self>, exps: &[u32], coeff: impl Into<BigInt>) -> Polynomial {
        assert_eq!(exps.len(), self.nvars(), "exponent vector length");
        let mut p = self.zero();
        p.insert_term(self.make_monomial(exps.to_vec()), coeff.into());
        p
    }

    fn unit_monomial(&self) -> Monomial {
        self.make_monomial(vec![0; self.nvars()])
    }

    fn make_monomial(&self, exps: Vec<u32>) -> Monomial {
        let weight = exps.iter().zip(&self.vars).fold(BiDegree::ZERO, |acc, (&e, v)| acc + v.weight.scaled(e));
        Monomial { weight, exps: exps.into_boxed_slice() }
    }

    fn normalize(&self, c: BigInt) -> BigInt {
        if self.characteristic == 0 {
            c
        } else {
            c.mod_floor(&BigInt::from(self.characteristic))
        }
    }
}

/// Exponent vector with its cached weight. The derived order (weight, then
/// exponents lexicographically in registration order) is the monomial order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Monomial {
    weight: BiDegree,
    exps: Box<[u32]>,
}

/// Outcome of [`Polynomial::bidegree`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(BiDegree),
    Inhomogeneous,
}

impl Homogeneity {
    pub fn bidegree(self) -> Option<BiDegree> {
        match self {
            Homogeneity::Homogeneous(d) => Some(d),
            _ => None,
        }
    }
}

#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Polynomial {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.exps.iter().all(|&e| e == 0) && c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms as (exponent vector, coefficient), highest monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().rev().map(|(m, c)| (&*m.exps, c))
    }

    /// Coefficient of the monomial with the given exponents.
    pub fn coefficient(&self, exps: &[u32]) -> BigInt {
        self.terms.iter().find(|(m, _)| &*m.exps == exps).map(|(_, c)| c.clone()).unwrap_or_default()
    }

    fn insert_term(&mut self, m: Monomial, c: BigInt) {
        let c = self.ring.normalize(c);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = self.ring.normalize(o.get() + c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn compatible(&self, other: &Polynomial) -> Result<(), PolyError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::IncompatibleRings)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.compatible(other)?;
        let mut out = self.ring.zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let exps: Vec<u32> = ma.exps.iter().zip(mb.exps.iter()).map(|(a, b)| a + b).collect();
                let m = Monomial { weight: ma.weight + mb.weight, exps: exps.into_boxed_slice() };
                out.insert_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    fn neg_ref(&self) -> Polynomial {
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            out.insert_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> Polynomial {
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            out.insert_term(m.clone(), c * k);
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides every coefficient by `k`; errors unless each division is exact.
    pub fn div_exact_scalar(&self, k: &BigInt) -> Result<Polynomial, PolyError> {
        if self.ring.characteristic != 0 {
            return Err(PolyError::NeedsCharacteristicZero);
        }
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(k);
            if !r.is_zero() {
                return Err(PolyError::InexactScalarDivision(k.clone()));
            }
            out.insert_term(m.clone(), q);
        }
        Ok(out)
    }

    pub fn bidegree(&self) -> Homogeneity {
        let mut weights = self.terms.keys().map(|m| m.weight);
        match weights.next() {
            None => Homogeneity::Zero,
            Some(w) if weights.all(|x| x == w) => Homogeneity::Homogeneous(w),
            Some(_) => Homogeneity::Inhomogeneous,
        }
    }

    /// Largest exponent of `var`; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exps[var]).max()
    }

    /// The coefficient of `var^k` when viewed as a polynomial in `var`.
    pub fn coefficient_in(&self, var: usize, k: u32) -> Polynomial {
        let mut out = self.ring.zero();
        for (m, c) in self.terms.iter().filter(|(m, _)| m.exps[var] == k) {
            let mut exps = m.exps.to_vec();
            exps[var] = 0;
            out.insert_term(self.ring.make_monomial(exps), c.clone());
        }
        out
    }

    /// Is `self` monic when viewed as a polynomial in `var`?
    pub fn is_monic_in(&self, var: usize) -> bool {
        match self.degree_in(var) {
            Some(d) => self.coefficient_in(var, d).is_one(),
            None => false,
        }
    }

    fn shift_in(&self, var: usize, k: u32) -> Polynomial {
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            let mut exps = m.exps.to_vec();
            exps[var] += k;
            out.insert_term(self.ring.make_monomial(exps), c.clone());
        }
        out
    }

    /// Long division by a divisor that is monic in `var`: returns `(q, r)` with
    /// `self = q·d + r` and `deg_var(r) < deg_var(d)`.
    pub fn div_rem_monic(&self, d: &Polynomial, var: usize) -> Result<(Polynomial, Polynomial), PolyError> {
        self.compatible(d)?;
        if d.is_zero() {
            return Err(PolyError::ZeroDivisor);
        }
        if !d.is_monic_in(var) {
            return Err(PolyError::NonMonicDivisor);
        }
        let n = d.degree_in(var).unwrap_or(0);
        let mut q = self.ring.zero();
        let mut r = self.clone();
        while let Some(m) = r.degree_in(var) {
            if m < n {
                break;
            }
            let lead = r.coefficient_in(var, m).shift_in(var, m - n);
            r = &r - &(&lead * d);
            q = &q + &lead;
        }
        Ok((q, r))
    }

    /// `true` iff `d` divides `self` exactly (zero remainder under monic division).
    pub fn is_divisible_by(&self, d: &Polynomial, var: usize) -> Result<bool, PolyError> {
        Ok(self.div_rem_monic(d, var)?.1.is_zero())
    }

    /// Image in the same registry over characteristic `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Polynomial, PolyError> {
        if self.ring.characteristic != 0 {
            return Err(PolyError::NeedsCharacteristicZero);
        }
        let ring = self.ring.with_characteristic(p)?;
        let mut out = ring.zero();
        for (m, c) in &self.terms {
            out.insert_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Evaluates each variable `i` at `images[i]`, all living in `target`.
    pub fn substitute(&self, target: &Arc<PolyRing>, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if images.len() != self.ring.nvars() {
            return Err(PolyError::SubstitutionArity { expected: self.ring.nvars(), got: images.len() });
        }
        if images.iter().any(|p| !same_ring(p.ring(), target)) {
            return Err(PolyError::IncompatibleRings);
        }
        let mut out = target.zero();
        for (m, c) in &self.terms {
            let mut term = target.constant(c.clone());
            for (img, &e) in images.iter().zip(m.exps.iter()) {
                if e > 0 {
                    term = &term * &img.pow(e);
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Re-expresses `self` in `target`, sending variable `i` to variable `mapping[i]`.
    pub fn rename_into(&self, target: &Arc<PolyRing>, mapping: &[usize]) -> Result<Polynomial, PolyError> {
        let images: Vec<Polynomial> = mapping.iter().map(|&j| target.var_at(j)).collect();
        self.substitute(target, &images)
    }

    pub fn display(&self, notation: Notation) -> PolyDisplay<'_> {
        PolyDisplay { poly: self, notation }
    }

    /// Canonical ASCII rendering, e.g. `10*t + 30*l1`.
    pub fn to_ascii(&self) -> String {
        self.display(Notation::Ascii).to_string()
    }

    /// Parses ASCII input such as `t^3 + c2*t + c3` or `2(t + l1)^2`.
    /// Juxtaposition multiplies.
    pub fn parse(ring: &Arc<PolyRing>, input: &str) -> Result<Polynomial, PolyError> {
        Parser { ring, src: input.as_bytes(), pos: 0 }.parse()
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.to_ascii())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display(Notation::Unicode).fmt(f)
    }
}

// Operator impls panic on incompatible rings; use the `checked_*` methods
// when mixing polynomials of unknown provenance.
macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs).expect("polynomials from incompatible rings")
            }
        }
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.neg_ref()
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.neg_ref()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Notation {
    /// `10t + 30λ₁`, factors joined by `·`.
    #[default]
    Unicode,
    /// `10*t + 30*l1`.
    Ascii,
}

/// Unicode rendering of an ASCII symbol name: `l1` → `λ₁`, `tau11` → `τ₁,₁`.
pub fn pretty_symbol(name: &str) -> String {
    const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (stem, digits) = name.split_at(split);
    if stem.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return name.to_string();
    }
    let stem = match stem {
        "l" | "lambda" => "λ",
        "tau" => "τ",
        "xi" => "ξ",
        "alpha" => "α",
        "beta" => "β",
        other => other,
    };
    let subs: Vec<String> = digits.chars().map(|c| SUB[c.to_digit(10).unwrap() as usize].to_string()).collect();
    // double-indexed symbols such as τ₁,₁
    let joined = if stem == "τ" && subs.len() == 2 { subs.join(",") } else { subs.concat() };
    format!("{stem}{joined}")
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    notation: Notation,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.poly;
        if p.is_zero() {
            return f.write_str("0");
        }
        let (times, name): (&str, fn(&str) -> String) = match self.notation {
            Notation::Ascii => ("*", |s| s.to_string()),
            Notation::Unicode => ("·", pretty_symbol),
        };
        for (k, (m, c)) in p.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let factors: Vec<String> = m
                .exps
                .iter()
                .zip(p.ring.variables())
                .filter(|(&e, _)| e > 0)
                .map(|(&e, v)| if e == 1 { name(&v.name) } else { format!("{}^{}", name(&v.name), e) })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs}")?;
                if self.notation == Notation::Ascii {
                    f.write_str(times)?;
                }
            }
            f.write_str(&factors.join(times))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Polynomial, PolyError> {
        let p = self.sum()?;
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(p)
    }

    fn sum(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.product()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.product()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            match digits.parse::<u32>() {
                Ok(e) => Ok(base.pow(e)),
                Err(_) => self.err("expected a non-negative exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if self.peek() != Some(b')') {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("0");
                let n: BigInt =
                    digits.parse().map_err(|_| PolyError::Parse { pos: start, msg: "bad integer".into() })?;
                Ok(self.ring.constant(n))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                self.ring.var(ident)
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Small integer helper used across the crate.
pub(crate) fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pgl2_ring() -> Arc<PolyRing> {
        PolyRing::new(2, vec![Variable::new("t", 1, 0), Variable::new("c2", 2, 0), Variable::new("c3", 3, 0)]).unwrap()
    }

    fn p(ring: &Arc<PolyRing>, s: &str) -> Polynomial {
        Polynomial::parse(ring, s).unwrap()
    }

    #[test]
    fn characteristic_two_cancellation() {
        let r = pgl2_ring();
        let t = r.var("t").unwrap();
        assert!((&t + &t).is_zero());
    }

    #[test]
    fn distributivity_mod_two() {
        let r = pgl2_ring();
        assert_eq!(p(&r, "t") * p(&r, "t^3 + c2*t + c3"), p(&r, "t^4 + c2*t^2 + c3*t"));
    }

    #[test]
    fn scalar_class_at_three() {
        let r = PolyRing::new(0, vec![Variable::new("t", 1, 0), Variable::new("l1", 1, 0)]).unwrap();
        let i = 3i64;
        let class = p(&r, &format!("{}*t + {}*l1", 2 * (2 * i - 1), 2 * i * (2 * i - 1)));
        let prod = &class * &r.one();
        assert_eq!(prod.to_ascii(), "10*t + 30*l1");
        assert_eq!(prod.to_string(), "10t + 30λ₁");
    }

    #[test]
    fn incompatible_rings_rejected() {
        let a = pgl2_ring();
        let b = a.with_characteristic(0).unwrap();
        let err = a.one().checked_add(&b.one()).unwrap_err();
        assert_eq!(err, PolyError::IncompatibleRings);
        assert_eq!(err.to_string(), "incompatible rings");
        assert!(a.one().checked_mul(&b.one()).is_err());
    }

    #[test]
    fn bidegrees() {
        let r = pgl2_ring();
        assert_eq!(p(&r, "c3").bidegree(), Homogeneity::Homogeneous(BiDegree::new(3, 0)));
        assert_eq!(p(&r, "t^3 + c2*t + c3").bidegree(), Homogeneity::Homogeneous(BiDegree::new(3, 0)));
        assert_eq!(p(&r, "t + c2").bidegree(), Homogeneity::Inhomogeneous);
        assert_eq!(r.zero().bidegree(), Homogeneity::Zero);
    }

    #[test]
    fn long_division_mod_two() {
        // t^5 = (t^2 + c2)(t^3 + c2 t + c3) + c3 t^2 + c2^2 t + c2 c3 over F_2,
        // checked by expanding the right-hand side by hand.
        let r = pgl2_ring();
        let t = r.index_of("t").unwrap();
        let (q, rem) = p(&r, "t^5").div_rem_monic(&p(&r, "t^3 + c2*t + c3"), t).unwrap();
        assert_eq!(q, p(&r, "t^2 + c2"));
        assert_eq!(rem, p(&r, "c3*t^2 + c2^2*t + c2*c3"));
        assert!(rem.degree_in(t).unwrap() < 3);
    }

    #[test]
    fn division_trivial_cases() {
        let r = pgl2_ring();
        let t = r.index_of("t").unwrap();
        let d = p(&r, "t^3 + c2*t + c3");
        let (q, rem) = p(&r, "c3").div_rem_monic(&d, t).unwrap();
        assert!(q.is_zero());
        assert_eq!(rem, p(&r, "c3"));
        let a = p(&r, "t^3 * (t^3 + c2*t + c3)^2");
        let (q, rem) = a.div_rem_monic(&a, t).unwrap();
        assert!(q.is_one() && rem.is_zero());
    }

    #[test]
    fn non_monic_divisor_rejected() {
        let r = PolyRing::new(0, vec![Variable::new("t", 1, 0), Variable::new("c2", 2, 0)]).unwrap();
        let t = r.index_of("t").unwrap();
        let err = p(&r, "t^4").div_rem_monic(&p(&r, "2*t^2 + c2"), t).unwrap_err();
        assert_eq!(err.to_string(), "non-monic divisor");
        let err = p(&r, "t^4").div_rem_monic(&p(&r, "c2*t^2 + 1"), t).unwrap_err();
        assert_eq!(err, PolyError::NonMonicDivisor);
    }

    #[test]
    fn exact_divisibility() {
        let r = pgl2_ring();
        let t = r.index_of("t").unwrap();
        let f4 = p(&r, "t^2*(t^3 + c2*t + c3)");
        let f8 = p(&r, "t^3*(t^3 + c2*t + c3)^2");
        let f6 = p(&r, "t*(t^3 + c2*t + c3)^2");
        let f2 = p(&r, "t^3 + c2*t + c3");
        let f10 = p(&r, "t^2*(t^3 + c2*t + c3)^3");
        let c3 = p(&r, "c3");
        let lhs = &(&c3.pow(2) * &f4) * &p(&r, "t*t");
        assert!(!lhs.is_divisible_by(&f8, t).unwrap());
        let rhs = &(&(&c3.pow(3) * &f6) * &f2) * &p(&r, "t");
        let (q, rem) = rhs.div_rem_monic(&f10, t).unwrap();
        assert!(rem.is_zero());
        assert_eq!(q, c3.pow(3));
        assert!(p(&r, "t").is_divisible_by(&p(&r, "t"), t).unwrap());
    }

    #[test]
    fn rendering_and_parsing() {
        let r = PolyRing::new(0, vec![Variable::new("t", 1, 0), Variable::new("c1", 1, 0), Variable::new("c2", 2, 0)])
            .unwrap();
        let f = p(&r, "t^3 + 3 c1 t^2 + (2c1^2 + 4c2) t + 4 c1 c2");
        assert_eq!(f.to_ascii(), "t^3 + 3*t^2*c1 + 2*t*c1^2 + 4*t*c2 + 4*c1*c2");
        assert_eq!(f.to_string(), "t^3 + 3t^2·c₁ + 2t·c₁^2 + 4t·c₂ + 4c₁·c₂");
        assert_eq!(p(&r, "-t + 1").to_ascii(), "-t + 1");
        assert_eq!(p(&r, &f.to_ascii()), f);
        assert!(Polynomial::parse(&r, "t +").is_err());
        assert!(matches!(Polynomial::parse(&r, "q"), Err(PolyError::UnknownVariable(_))));
    }

    #[test]
    fn pretty_symbols() {
        assert_eq!(pretty_symbol("l1"), "λ₁");
        assert_eq!(pretty_symbol("tau11"), "τ₁,₁");
        assert_eq!(pretty_symbol("tau"), "τ");
        assert_eq!(pretty_symbol("x10"), "x₁₀");
        assert_eq!(pretty_symbol("xi"), "ξ");
    }

    #[test]
    fn ring_construction_checks() {
        assert!(matches!(PolyRing::new(4, vec![]), Err(PolyError::BadCharacteristic(4))));
        let dup = PolyRing::new(0, vec![Variable::new("t", 1, 0), Variable::new("t", 1, 0)]);
        assert!(matches!(dup, Err(PolyError::DuplicateVariable(_))));
    }

    fn int_ring() -> Arc<PolyRing> {
        PolyRing::new(0, vec![Variable::new("t", 1, 0), Variable::new("c2", 2, 0), Variable::new("c3", 3, 0)]).unwrap()
    }

    fn arb_poly(ring: Arc<PolyRing>) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(((0u32..4, 0u32..3, 0u32..3), -20i64..20), 0..6).prop_map(move |terms| {
            terms.into_iter().fold(ring.zero(), |acc, ((a, b, c), k)| &acc + &ring.monomial(&[a, b, c], k))
        })
    }

    fn arb_homogeneous(ring: Arc<PolyRing>, codim: u32) -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec((0u32..=codim, 0u32..=codim / 2, -9i64..9), 1..5).prop_map(move |terms| {
            terms.into_iter().fold(ring.zero(), |acc, (a, b, k)| {
                let rest = codim.saturating_sub(a + 2 * b);
                if a + 2 * b > codim || !rest.is_multiple_of(3) {
                    acc
                } else {
                    &acc + &ring.monomial(&[a, b, rest / 3], k)
                }
            })
        })
    }

    proptest! {
        #[test]
        fn product_of_homogeneous_adds_bidegrees(
            a in arb_homogeneous(int_ring(), 4),
            b in arb_homogeneous(int_ring(), 5),
        ) {
            let prod = &a * &b;
            if let (Homogeneity::Homogeneous(da), Homogeneity::Homogeneous(db)) = (a.bidegree(), b.bidegree()) {
                prop_assert_eq!(prod.bidegree(), Homogeneity::Homogeneous(da + db));
            }
        }

        #[test]
        fn division_reconstructs(a in arb_poly(int_ring()), tail in arb_poly(int_ring()), n in 1u32..4) {
            let ring = int_ring();
            let t = 0;
            // monic divisor t^n + (lower-degree part of tail)
            let (_, low) = tail.div_rem_monic(&ring.monomial(&[n, 0, 0], 1), t).unwrap();
            let d = &ring.monomial(&[n, 0, 0], 1) + &low;
            let (q, r) = a.div_rem_monic(&d, t).unwrap();
            prop_assert_eq!(&(&q * &d) + &r, a);
            prop_assert!(r.degree_in(t).is_none_or(|k| k < n));
        }

        #[test]
        fn reduction_commutes_with_arithmetic(a in arb_poly(int_ring()), b in arb_poly(int_ring()), pi in 0usize..3) {
            let p = [2u64, 3, 5][pi];
            let lhs = (&a * &b).reduce_mod(p).unwrap();
            let rhs = &a.reduce_mod(p).unwrap() * &b.reduce_mod(p).unwrap();
            prop_assert_eq!(lhs, rhs);
            let lhs = (&a + &b).reduce_mod(p).unwrap();
            let rhs = &a.reduce_mod(p).unwrap() + &b.reduce_mod(p).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn ascii_rendering_round_trips(a in arb_poly(int_ring())) {
            let ring = int_ring();
            prop_assert_eq!(Polynomial::parse(&ring, &a.to_ascii()).unwrap(), a);
        }
    }
}
