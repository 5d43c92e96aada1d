//! The discriminant stratification of binary forms: the class of `Δ₁,₂ᵢ`, its
//! divisibility by primes, the pushforward scaling verdict on `Δ_r`, the `PGL₂`
//! relation polynomials `f_n` and the annihilator-chain gate.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::chern;
use crate::poly::{factorial, is_prime, PolyError, PolyRing, Polynomial, Variable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscriminantError {
    #[error("index must be positive")]
    ZeroIndex,
    #[error("undefined for odd n (got {0})")]
    OddIndex(u32),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("normalization failed")]
    NormalizationFailed,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The locus `Δ_{r,n}` of degree-`n` forms divisible by the square of a
/// degree-`r` form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct StratumId {
    pub r: u32,
    pub n: u32,
}

impl StratumId {
    pub fn new(r: u32, n: u32) -> Option<Self> {
        (r >= 1 && r <= n / 2).then_some(StratumId { r, n })
    }
}

/// `ℤ[t, l1]`, both of weight `(1,0)`.
pub fn class_ring() -> &'static Arc<PolyRing> {
    static RING: OnceLock<Arc<PolyRing>> = OnceLock::new();
    RING.get_or_init(|| {
        PolyRing::new(0, vec![Variable::new("t", 1, 0), Variable::new("l1", 1, 0)]).expect("valid ring")
    })
}

/// `𝔽₂[t, c2, c3]` with weights `(1,0)`, `(2,0)`, `(3,0)`.
pub fn gate_ring() -> &'static Arc<PolyRing> {
    static RING: OnceLock<Arc<PolyRing>> = OnceLock::new();
    RING.get_or_init(|| {
        PolyRing::new(2, vec![Variable::new("t", 1, 0), Variable::new("c2", 2, 0), Variable::new("c3", 3, 0)])
            .expect("valid ring")
    })
}

/// `ℤ[t, l1, x1, x2]`: the two hyperplane classes of `P¹ × P¹` over the base.
fn diagram_ring() -> &'static Arc<PolyRing> {
    static RING: OnceLock<Arc<PolyRing>> = OnceLock::new();
    RING.get_or_init(|| {
        PolyRing::new(
            0,
            vec![
                Variable::new("t", 1, 0),
                Variable::new("l1", 1, 0),
                Variable::new("x1", 1, 0),
                Variable::new("x2", 1, 0),
            ],
        )
        .expect("valid ring")
    })
}

/// Class of `Δ₁,₂ᵢ` before normalization: the diagonal `x1 + x2 + l1` in
/// `(P¹)^{2i}` pushed along the symmetrization `(P¹)^{2i} → P^{2i}`, which
/// sends each `x_j` to `(2i−1)!·t` and multiplies base classes by its degree
/// `(2i)!`.
fn delta1_pushforward(i: u32) -> Result<Polynomial, DiscriminantError> {
    let ring = diagram_ring();
    let l1 = ring.var_at(1);
    let diag = chern::diagonal_class(&l1, &ring.variables()[2], &ring.variables()[3])
        .map_err(|_| DiscriminantError::NormalizationFailed)?;
    let target = class_ring();
    let hyperplane = factorial(u64::from(2 * i - 1));
    let degree = factorial(u64::from(2 * i));
    let mut out = target.zero();
    for (exps, c) in diag.terms() {
        let image = match exps {
            [0, 1, 0, 0] => target.var_at(1).scale(&degree),
            [0, 0, 1, 0] | [0, 0, 0, 1] => target.var_at(0).scale(&hyperplane),
            _ => return Err(DiscriminantError::NormalizationFailed),
        };
        out = &out + &image.scale(c);
    }
    Ok(out)
}

/// `[Δ₁,₂ᵢ] = 2(2i−1)·t + 2i(2i−1)·λ₁` in `ℤ[t, l1]`, obtained by dividing
/// the pushforward of the diagonal by `(2i−2)!`.
pub fn delta1_class(i: u32) -> Result<Polynomial, DiscriminantError> {
    if i == 0 {
        return Err(DiscriminantError::ZeroIndex);
    }
    delta1_pushforward(i)?
        .div_exact_scalar(&factorial(u64::from(2 * i - 2)))
        .map_err(|_| DiscriminantError::NormalizationFailed)
}

/// Both coefficients of `[Δ₁,₂ᵢ]` vanish mod `p`.
pub fn delta1_divisible_by(i: u32, p: u64) -> Result<bool, DiscriminantError> {
    if !is_prime(p) {
        return Err(DiscriminantError::NotPrime(p));
    }
    Ok(delta1_class(i)?.reduce_mod(p)?.is_zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingVerdict {
    /// Restriction `A⁰(Δ_{r,n}) → A⁰(Δ_r ∖ Δ_{r+1})` is an isomorphism.
    Iso,
    /// `A⁰(Δ_{r,n})` consists of constants only.
    Zero,
}

/// The map `Δ_r × P^{n−2r} → Δ_r` has degree `r + 1`; the verdict is `Iso`
/// exactly when `p` divides it.
pub fn pushforward_scaling(r: u32, p: u64) -> ScalingVerdict {
    if (u64::from(r) + 1) % p == 0 {
        ScalingVerdict::Iso
    } else {
        ScalingVerdict::Zero
    }
}

fn cubic() -> Polynomial {
    Polynomial::parse(gate_ring(), "t^3 + c2 t + c3").expect("valid polynomial")
}

/// `f_n` over `𝔽₂[t, c2, c3]`: `t^{(n+4)/4}·q^{n/4}` if `4 | n`, else
/// `t^{(n−2)/4}·q^{(n+2)/4}`, with `q = t³ + c2·t + c3`.
pub fn f_poly(n: u32) -> Result<Polynomial, DiscriminantError> {
    if n % 2 == 1 {
        return Err(DiscriminantError::OddIndex(n));
    }
    let t = gate_ring().var_at(0);
    Ok(if n.is_multiple_of(4) {
        &t.pow((n + 4) / 4) * &cubic().pow(n / 4)
    } else {
        &t.pow((n - 2) / 4) * &cubic().pow((n + 2) / 4)
    })
}

/// Factors `g_1, …, g_{i/2}` of the chain: `c3` for odd `r`, `f_{i−2r}` for
/// even `r`.
pub fn annihilator_factors(i: u32) -> Result<Vec<Polynomial>, DiscriminantError> {
    if i == 0 {
        return Err(DiscriminantError::ZeroIndex);
    }
    if i % 2 == 1 {
        return Err(DiscriminantError::OddIndex(i));
    }
    let c3 = gate_ring().var_at(2);
    (1..=i / 2).map(|r| if r % 2 == 1 { Ok(c3.clone()) } else { f_poly(i - 2 * r) }).collect()
}

/// Product of [`annihilator_factors`]: kills the image of the pushforward from
/// `Δ₁,ᵢ` in `A_{PGL₂}(Pⁱ)`.
pub fn annihilator_chain(i: u32) -> Result<Polynomial, DiscriminantError> {
    Ok(annihilator_factors(i)?.iter().fold(gate_ring().one(), |acc, g| &acc * g))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateVerdict {
    pub i: u32,
    pub chain: Polynomial,
    pub relation: Polynomial,
    /// `chain · t` is not divisible by `f_i`, so the pushforward vanishes.
    pub kills: bool,
    /// Quotient when divisible, remainder otherwise.
    pub witness: Polynomial,
}

impl GateVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "i": self.i,
            "chain": self.chain.to_ascii(),
            "f_i": self.relation.to_ascii(),
            "kills": self.kills,
            "witness": self.witness.to_ascii(),
        })
    }
}

/// Tests whether `annihilator_chain(i)·t` is divisible by `f_i`.
pub fn gate(i: u32) -> Result<GateVerdict, DiscriminantError> {
    let chain = annihilator_chain(i)?;
    let relation = f_poly(i)?;
    let probe = &chain * &gate_ring().var_at(0);
    let (q, r) = probe.div_rem_monic(&relation, 0)?;
    let kills = !r.is_zero();
    let witness = if kills { r } else { q };
    Ok(GateVerdict { i, chain, relation, kills, witness })
}

/// `c3` pulls back to zero on `Pⁱ` exactly for odd `i`.
pub fn c3_vanishes_on(i: u32) -> bool {
    i % 2 == 1
}

/// Degree of the pushforward `Δ_r × P^{n−2r} → Δ_r` as an integer.
pub fn stratum_map_degree(stratum: StratumId) -> BigInt {
    BigInt::from(stratum.r + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(s: &str) -> Polynomial {
        Polynomial::parse(class_ring(), s).unwrap()
    }

    fn gp(s: &str) -> Polynomial {
        Polynomial::parse(gate_ring(), s).unwrap()
    }

    #[test]
    fn class_examples() {
        assert_eq!(delta1_class(3).unwrap(), cls("10t + 30l1"));
        assert_eq!(delta1_class(2).unwrap(), cls("6t + 12l1"));
        assert_eq!(delta1_class(1).unwrap(), cls("2t + 2l1"));
        assert_eq!(delta1_class(0), Err(DiscriminantError::ZeroIndex));
    }

    #[test]
    fn pre_normalized_form() {
        // 2·5!·t + 6!·λ₁ at i = 3
        assert_eq!(delta1_pushforward(3).unwrap(), cls("240t + 720l1"));
        for i in 1..=20u32 {
            let pre = delta1_pushforward(i).unwrap();
            assert!(pre.div_exact_scalar(&factorial(u64::from(2 * i - 2))).is_ok());
        }
    }

    #[test]
    fn divisibility() {
        assert!(delta1_divisible_by(3, 2).unwrap());
        assert!(delta1_divisible_by(3, 5).unwrap());
        assert!(!delta1_divisible_by(3, 3).unwrap());
        assert_eq!(delta1_divisible_by(3, 9), Err(DiscriminantError::NotPrime(9)));
        for i in 1..=20u32 {
            assert!(delta1_divisible_by(i, 2).unwrap());
            for p in [3u64, 5, 7, 11, 13] {
                assert_eq!(delta1_divisible_by(i, p).unwrap(), u64::from(2 * i - 1) % p == 0, "i={i} p={p}");
            }
        }
    }

    #[test]
    fn scaling() {
        assert_eq!(pushforward_scaling(1, 2), ScalingVerdict::Iso);
        assert_eq!(pushforward_scaling(1, 3), ScalingVerdict::Zero);
        assert_eq!(pushforward_scaling(2, 3), ScalingVerdict::Iso);
        assert_eq!(stratum_map_degree(StratumId::new(2, 6).unwrap()), BigInt::from(3));
        assert!(StratumId::new(4, 6).is_none());
    }

    #[test]
    fn relation_polynomials() {
        assert_eq!(f_poly(0).unwrap(), gp("t"));
        assert_eq!(f_poly(2).unwrap(), gp("t^3 + c2 t + c3"));
        assert_eq!(f_poly(4).unwrap(), gp("t^2 (t^3 + c2 t + c3)"));
        assert_eq!(f_poly(6).unwrap(), gp("t (t^3 + c2 t + c3)^2"));
        assert!(f_poly(3).unwrap_err().to_string().contains("undefined for odd n"));
        for n in (0..=20).step_by(2) {
            let f = f_poly(n).unwrap();
            assert_eq!(f.bidegree().bidegree().map(|d| d.codim), Some(n + 1));
            assert!(f.is_monic_in(0));
            assert_eq!(f.degree_in(0), Some(n + 1));
        }
    }

    #[test]
    fn chains() {
        assert_eq!(annihilator_chain(2).unwrap(), gp("c3"));
        let f = |n| f_poly(n).unwrap();
        assert_eq!(annihilator_chain(8).unwrap(), &(&gp("c3^2") * &f(4)) * &f(0));
        assert_eq!(annihilator_chain(10).unwrap(), &(&gp("c3^3") * &f(6)) * &f(2));
        assert!(annihilator_chain(5).is_err());
        for i in (2..=16).step_by(2) {
            let chain = annihilator_chain(i).unwrap();
            let expected: u32 =
                annihilator_factors(i).unwrap().iter().map(|g| g.bidegree().bidegree().unwrap().codim).sum();
            assert_eq!(chain.bidegree().bidegree().unwrap().codim, expected);
        }
    }

    #[test]
    fn chain_matches_compact_form() {
        // c3^{i/4} · f_{i−4} ⋯ f_4 · t, indices descending by 4
        for i in [4u32, 8, 12] {
            let mut compact = gp("c3").pow(i / 4);
            let mut k = i - 4;
            while k >= 4 {
                compact = &compact * &f_poly(k).unwrap();
                k -= 4;
            }
            compact = &compact * &gp("t");
            assert_eq!(annihilator_chain(i).unwrap(), compact, "i={i}");
        }
    }

    #[test]
    fn gate_boundary() {
        for i in [2, 4, 6, 8] {
            assert!(gate(i).unwrap().kills, "i={i}");
        }
        for i in [10, 12, 14, 16] {
            assert!(!gate(i).unwrap().kills, "i={i}");
        }
        assert_eq!(gate(10).unwrap().witness, gp("c3^3"));
        assert_eq!(gate(2).unwrap().witness, gp("c3 t"));
    }

    #[test]
    fn gate_json() {
        let v = gate(10).unwrap().to_json();
        assert_eq!(v["i"], 10);
        assert_eq!(v["kills"], false);
        assert_eq!(v["witness"], "c3^3");
    }

    #[test]
    fn c3_parity() {
        assert!(c3_vanishes_on(1));
        assert!(!c3_vanishes_on(8));
        assert!(c3_vanishes_on(7));
    }
}
