//! Chern classes of symmetric powers of a rank-2 bundle `F`, their determinant
//! twists and duals, projective-bundle relations, and the diagonal class.
//!
//! Everything lives in the integral ring `ℤ[t, c1, c2]` returned by
//! [`base_ring`], where `c1`, `c2` are the Chern classes of `F` and `t` is the
//! hyperplane class of a projectivization. Chern roots are never materialized:
//! elementary symmetric functions of the roots are obtained from their power
//! sums by Newton's identities, with exact integer division.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use crate::poly::{BiDegree, Homogeneity, PolyError, PolyRing, Polynomial, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error("symmetric power exponent must be at least 1")]
    ZeroSymmetricPower,
    #[error("variable `{0}` is not registered with weight (1,0)")]
    BadHyperplaneVariable(String),
    #[error("c_{index} has the wrong bidegree (expected ({index},0))")]
    BadClass { index: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `ℤ[t, c1, c2]` with weights `t = (1,0)`, `c1 = (1,0)`, `c2 = (2,0)`.
pub fn base_ring() -> &'static Arc<PolyRing> {
    static RING: OnceLock<Arc<PolyRing>> = OnceLock::new();
    RING.get_or_init(|| {
        PolyRing::new(0, vec![Variable::new("t", 1, 0), Variable::new("c1", 1, 0), Variable::new("c2", 2, 0)])
            .expect("static ring")
    })
}

fn c1() -> Polynomial {
    base_ring().var_at(1)
}

fn c2() -> Polynomial {
    base_ring().var_at(2)
}

/// Total Chern class data `c_1, …, c_rank` of a bundle built from `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleClasses {
    classes: Vec<Polynomial>,
}

impl BundleClasses {
    pub fn new(classes: Vec<Polynomial>) -> Result<Self, ChernError> {
        for (k, c) in classes.iter().enumerate() {
            let j = k + 1;
            if !Arc::ptr_eq(c.ring(), base_ring()) && **c.ring() != **base_ring() {
                return Err(PolyError::IncompatibleRings.into());
            }
            match c.bidegree() {
                Homogeneity::Zero => {}
                Homogeneity::Homogeneous(d) if d == BiDegree::new(j as u32, 0) => {}
                _ => return Err(ChernError::BadClass { index: j }),
            }
        }
        Ok(BundleClasses { classes })
    }

    /// The trivial bundle of the given rank.
    pub fn trivial(rank: usize) -> Self {
        BundleClasses { classes: vec![base_ring().zero(); rank] }
    }

    /// `F` itself.
    pub fn base() -> Self {
        BundleClasses { classes: vec![c1(), c2()] }
    }

    pub fn rank(&self) -> usize {
        self.classes.len()
    }

    /// `c_1, …, c_rank`.
    pub fn classes(&self) -> &[Polynomial] {
        &self.classes
    }

    /// `c_j`, with `c_0 = 1` and `c_j = 0` above the rank.
    pub fn class(&self, j: usize) -> Polynomial {
        match j {
            0 => base_ring().one(),
            j if j <= self.rank() => self.classes[j - 1].clone(),
            _ => base_ring().zero(),
        }
    }

    /// Dual bundle: every root is negated, so `c_j ↦ (-1)^j c_j`.
    pub fn dual(&self) -> Self {
        let classes = self.classes.iter().enumerate().map(|(k, c)| if k % 2 == 0 { -c } else { c.clone() }).collect();
        BundleClasses { classes }
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Power sums `α^j + β^j` of the roots of `F`, for `j = 0..=max`.
fn root_power_sums(max: usize) -> Vec<Polynomial> {
    let ring = base_ring();
    let mut out = vec![ring.constant(2), c1()];
    while out.len() <= max {
        let j = out.len();
        let next = &(&c1() * &out[j - 1]) - &(&c2() * &out[j - 2]);
        out.push(next);
    }
    out.truncate(max + 1);
    out
}

/// Power sum `Σ_i (iα + (n-i)β)^k` rewritten in `c1, c2`.
fn symmetric_power_power_sum(n: u64, k: u64, root_sums: &[Polynomial]) -> Polynomial {
    let ring = base_ring();
    // coefficient of α^m β^(k-m)
    let coeff = |m: u64| -> BigInt {
        let s: BigInt = (0..=n).map(|i| BigInt::from(i).pow(m as u32) * BigInt::from(n - i).pow((k - m) as u32)).sum();
        binomial(k, m) * s
    };
    let mut acc = ring.zero();
    for m in 0..=k / 2 {
        let a = coeff(m);
        if a.is_zero() {
            continue;
        }
        let other = k - m;
        // α^m β^other + α^other β^m = c2^m (α^(other-m) + β^(other-m)); the middle term appears once
        let sym = if m == other { c2().pow(m as u32) } else { &c2().pow(m as u32) * &root_sums[(other - m) as usize] };
        acc = &acc + &sym.scale(&a);
    }
    acc
}

/// Chern classes of `Sym^n F`: the elementary symmetric functions of the roots
/// `{iα + (n-i)β : 0 ≤ i ≤ n}` expressed in `c1 = α+β`, `c2 = αβ`.
pub fn sym_chern(n: u32) -> Result<BundleClasses, ChernError> {
    if n == 0 {
        return Err(ChernError::ZeroSymmetricPower);
    }
    let n = n as u64;
    let rank = (n + 1) as usize;
    let roots = root_power_sums(rank);
    let power_sums: Vec<Polynomial> = (0..=rank as u64).map(|k| symmetric_power_power_sum(n, k, &roots)).collect();
    // Newton: j e_j = Σ_{i=1}^{j} (-1)^(i-1) e_{j-i} p_i
    let mut e = vec![base_ring().one()];
    for j in 1..=rank {
        let mut acc = base_ring().zero();
        for i in 1..=j {
            let term = &e[j - i] * &power_sums[i];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e.push(acc.div_exact_scalar(&BigInt::from(j))?);
    }
    BundleClasses::new(e.split_off(1))
}

/// Chern classes of `E ⊗ (det F)^k`: every root shifted by `k·c1`.
pub fn twist_by_det(e: &BundleClasses, k: i64) -> BundleClasses {
    let r = e.rank() as u64;
    let shift = c1().scale(&BigInt::from(k));
    let classes = (1..=r)
        .map(|j| {
            (0..=j).fold(base_ring().zero(), |acc, i| {
                let term = &e.class(i as usize) * &shift.pow((j - i) as u32);
                &acc + &term.scale(&binomial(r - i, j - i))
            })
        })
        .collect();
    BundleClasses { classes }
}

fn hyperplane_index(t: &Variable) -> Result<usize, ChernError> {
    base_ring()
        .index_of(&t.name)
        .filter(|&i| i == 0 && t.weight == BiDegree::new(1, 0))
        .ok_or_else(|| ChernError::BadHyperplaneVariable(t.name.clone()))
}

/// The relation `Σ_j c_j(E) t^(rank-j)` cutting out the Chow ring of `P(E)`.
pub fn projective_relation(e: &BundleClasses, t: &Variable) -> Result<Polynomial, ChernError> {
    let ti = hyperplane_index(t)?;
    let tv = base_ring().var_at(ti);
    let r = e.rank();
    Ok((0..=r).fold(base_ring().zero(), |acc, j| &acc + &(&e.class(j) * &tv.pow((r - j) as u32))))
}

/// Class `x1 + x2 + c1` of the diagonal in `P(F) ×_S P(F)`.
pub fn diagonal_class(c1: &Polynomial, x1: &Variable, x2: &Variable) -> Result<Polynomial, ChernError> {
    let ring = c1.ring();
    let mut sum = c1.clone();
    for x in [x1, x2] {
        let i = ring
            .index_of(&x.name)
            .filter(|&i| ring.variables()[i].weight == BiDegree::new(1, 0))
            .ok_or_else(|| ChernError::BadHyperplaneVariable(x.name.clone()))?;
        sum = &sum + &ring.var_at(i);
    }
    Ok(sum)
}
