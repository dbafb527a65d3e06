//! Fedder-type F-purity tests at a point, compatibility of F-pure centers,
//! and ν-invariants approximating the F-pure threshold.
//!
//! Points are always the origin of a set of variables, so `m^[q]` is a
//! monomial ideal and membership in it is a truncation. Callers move other
//! points to the origin with [`at_point`].

use num_rational::Ratio;

use crate::arith::{FieldCtx, Monomial, MultiPoly};
use crate::error::{Error, Result};
use crate::groebner::{self, bracket_power, check_q, colon, GbOptions, Ideal, MonomialOrder};
use crate::Rational;

/// A Frobenius level `q = p^e`, `e >= 1`, within the global guard.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrobeniusLevel {
    field: FieldCtx,
    e: u32,
    q: u64,
}

impl FrobeniusLevel {
    pub fn new(field: FieldCtx, e: u32) -> Result<Self> {
        if e == 0 {
            return Err(Error::NotPowerOfP { q: 1, p: field.p() });
        }
        let q = field
            .p()
            .checked_pow(e)
            .filter(|&q| q <= groebner::Q_GUARD)
            .ok_or(Error::QGuard {
                q: field.p().saturating_pow(e),
                limit: groebner::Q_GUARD,
            })?;
        Ok(FrobeniusLevel { field, e, q })
    }

    pub fn from_q(field: FieldCtx, q: u64) -> Result<Self> {
        let e = check_q(field, q)?;
        Self::new(field, e)
    }

    pub fn field(&self) -> FieldCtx {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// The level `p^(n e)`.
    pub fn times(&self, n: u32) -> Result<Self> {
        let ne = self.e.checked_mul(n).ok_or(Error::ExponentOverflow)?;
        Self::new(self.field, ne)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FedderReport {
    pub q: u64,
    pub fpure: bool,
    /// A monomial of the test polynomial with every point-variable exponent
    /// at most `q - 1`.
    pub witness: Option<Monomial>,
    /// Canonical print of the test polynomial modulo `m^[q]`.
    pub test_poly_digest: String,
}

impl FedderReport {
    fn from_test_poly(q: u64, reduced: &MultiPoly) -> Self {
        let witness = reduced.leading_term().map(|t| t.mono.clone());
        FedderReport {
            q,
            fpure: witness.is_some(),
            witness,
            test_poly_digest: reduced.to_string(),
        }
    }
}

/// Moves `point` to the origin: `x_i -> x_i + point[i]`.
pub fn at_point(f: &MultiPoly, point: &[u64]) -> Result<MultiPoly> {
    f.translate(point)
}

fn check_vars(f: &MultiPoly, m_vars: &[usize]) -> Result<()> {
    match m_vars.iter().find(|&&i| i >= f.vars().len()) {
        Some(&i) => Err(Error::ArityMismatch {
            expected: f.vars().len(),
            got: i + 1,
        }),
        None => Ok(()),
    }
}

/// Fedder's criterion for the hypersurface `a = 0` at the origin of
/// `m_vars`: F-pure iff `a^(q-1) ∉ m^[q]`.
pub fn fpure_hypersurface(
    a: &MultiPoly,
    m_vars: &[usize],
    level: FrobeniusLevel,
) -> Result<FedderReport> {
    if a.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    check_vars(a, m_vars)?;
    let q = level.q();
    let reduced = a.pow_truncated(q - 1, m_vars, q)?;
    Ok(FedderReport::from_test_poly(q, &reduced))
}

/// Fedder's criterion for `R/I` at the origin of `m_vars`:
/// F-pure iff `(I^[q] : I) ⊄ m^[q]`.
pub fn fpure_general(
    ideal: &Ideal,
    m_vars: &[usize],
    level: FrobeniusLevel,
    opts: &GbOptions,
) -> Result<FedderReport> {
    let q = level.q();
    let bracket = bracket_power(ideal, q)?;
    let order = MonomialOrder::grevlex(ideal.vars().len());
    let colon_ideal = colon(&bracket, ideal, &order, opts)?;
    for g in colon_ideal.gens() {
        check_vars(g, m_vars)?;
        let reduced = g.truncate_mod_bracket(m_vars, q);
        if !reduced.is_zero() {
            return Ok(FedderReport::from_test_poly(q, &reduced));
        }
    }
    Ok(FedderReport {
        q,
        fpure: false,
        witness: None,
        test_poly_digest: "0".into(),
    })
}

/// Compatibility of the center `V(J)` with the map given by `f`:
/// `f * J ⊆ J^[q]` and `f ∉ J^[q]`.
pub fn center_test(
    f: &MultiPoly,
    j: &Ideal,
    level: FrobeniusLevel,
    opts: &GbOptions,
) -> Result<bool> {
    let q = level.q();
    if let Some(vars) = j.variable_generators() {
        // J^[q] is monomial: membership is truncation to zero
        if f.truncate_mod_bracket(&vars, q).is_zero() {
            return Ok(false);
        }
        for g in j.gens() {
            if !f.mul_truncated(g, &vars, q)?.is_zero() {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let bracket = bracket_power(j, q)?;
    let order = MonomialOrder::grevlex(j.vars().len());
    let bracket = groebner::buchberger(&bracket, &order, opts)?;
    if groebner::member(f, &bracket, opts)? {
        return Ok(false);
    }
    for g in j.gens() {
        if !groebner::member(&f.mul(g)?, &bracket, opts)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn in_maximal_ideal(f: &MultiPoly, m_vars: &[usize]) -> bool {
    f.terms()
        .iter()
        .all(|t| m_vars.iter().any(|&i| t.mono.exponents()[i] > 0))
}

/// `ν(q) = max{a >= 0 : f^a ∉ m^[q]}` for `f ∈ m`.
///
/// Uses the ladder `f^(2^k) mod m^[q]` and fixes the bits of `ν` from the
/// top down; membership in `m^[q]` is monotone in `a`, and
/// `f^(n(q-1)+1) ∈ m^[q]` bounds the search for `n` point variables.
pub fn nu(f: &MultiPoly, m_vars: &[usize], level: FrobeniusLevel) -> Result<u64> {
    check_vars(f, m_vars)?;
    if f.is_zero() || m_vars.is_empty() || !in_maximal_ideal(f, m_vars) {
        return Err(Error::NotInMaximalIdeal);
    }
    let q = level.q();
    let bound = m_vars.len() as u64 * (q - 1);
    let mut ladder = vec![f.truncate_mod_bracket(m_vars, q)];
    while (1u64 << ladder.len()) <= bound {
        let last = ladder.last().unwrap();
        let next = last.mul_truncated(last, m_vars, q)?;
        if next.is_zero() {
            break;
        }
        ladder.push(next);
    }
    let mut cur = MultiPoly::one(f.field(), f.vars());
    let mut a = 0u64;
    for (k, step) in ladder.iter().enumerate().rev() {
        let cand_a = a + (1u64 << k);
        if cand_a > bound {
            continue;
        }
        let cand = cur.mul_truncated(step, m_vars, q)?;
        if !cand.is_zero() {
            cur = cand;
            a = cand_a;
        }
    }
    Ok(a)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuEntry {
    pub e: u32,
    pub nu: u64,
    /// `ν(p^e) / p^e`.
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NuSequence {
    pub f_digest: String,
    /// Names of the variables generating the maximal ideal.
    pub point: Vec<String>,
    pub entries: Vec<NuEntry>,
}

impl NuSequence {
    /// `ν(p^(e+1)) >= p ν(p^e)` and nondecreasing `ν/q` along the sequence.
    pub fn check_invariants(&self, p: u64) -> bool {
        self.entries
            .windows(2)
            .all(|w| w[1].e == w[0].e + 1 && w[1].nu >= p * w[0].nu && w[1].ratio >= w[0].ratio)
    }

    /// The last estimate `ν(p^e)/p^e`, a lower bound for the threshold.
    pub fn estimate(&self) -> Option<Rational> {
        self.entries.last().map(|e| e.ratio)
    }
}

/// `ν(p^e)` for `e = 1..=e_max`.
pub fn fpt_estimate(f: &MultiPoly, m_vars: &[usize], e_max: u32) -> Result<NuSequence> {
    let field = f.field();
    FrobeniusLevel::new(field, e_max)?;
    let mut entries = Vec::with_capacity(e_max as usize);
    for e in 1..=e_max {
        let level = FrobeniusLevel::new(field, e)?;
        let v = nu(f, m_vars, level)?;
        entries.push(NuEntry {
            e,
            nu: v,
            ratio: Ratio::new(v as i64, level.q() as i64),
        });
    }
    Ok(NuSequence {
        f_digest: f.to_string(),
        point: m_vars
            .iter()
            .map(|&i| f.vars().name(i).to_string())
            .collect(),
        entries,
    })
}

/// Whether F-purity at `level` implies F-purity at `level^n` for this
/// hypersurface. Expected to hold always.
pub fn stability_check(
    a: &MultiPoly,
    m_vars: &[usize],
    level: FrobeniusLevel,
    n: u32,
) -> Result<bool> {
    let higher = level.times(n)?;
    if !fpure_hypersurface(a, m_vars, level)?.fpure {
        return Ok(true);
    }
    Ok(fpure_hypersurface(a, m_vars, higher)?.fpure)
}
