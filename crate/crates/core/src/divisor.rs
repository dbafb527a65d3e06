//! Q-divisors on the affine line over F_p, tame pullback along polynomial
//! maps between lines with its ramification correction, and the DVR
//! sub-F-purity coefficient test.
//!
//! Prime divisors are labelled by monic irreducible polynomials rather
//! than by points, so supports not defined over F_p (for example the
//! supersingular locus `t^2+4t+1` at p = 5) are still representable.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{CheckedAdd, CheckedMul, One, Zero};

use crate::arith::unipoly::{cmp_polys, CERTIFIED_DEGREE};
use crate::arith::{FieldCtx, UniPoly};
use crate::error::{Error, Result};
use crate::Rational;

/// A prime divisor of A^1: a monic polynomial, irreducible when
/// `certified`. Labels of degree above 3 are kept unverified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeLabel {
    poly: UniPoly,
    certified: bool,
}

impl PrimeLabel {
    /// Validates a label: monic of positive degree, and irreducible when
    /// its degree is small enough to certify.
    pub fn new(poly: UniPoly) -> Result<Self> {
        let deg = poly.degree().unwrap_or(0);
        if deg == 0 || !poly.is_monic() {
            return Err(Error::NotIrreducible(poly.display("t")));
        }
        if deg <= CERTIFIED_DEGREE {
            if !poly.is_irreducible() {
                return Err(Error::NotIrreducible(poly.display("t")));
            }
            return Ok(PrimeLabel {
                poly,
                certified: true,
            });
        }
        Ok(PrimeLabel {
            poly,
            certified: false,
        })
    }

    pub(crate) fn from_factor(poly: UniPoly, certified: bool) -> Self {
        PrimeLabel { poly, certified }
    }

    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    pub fn certified(&self) -> bool {
        self.certified
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    /// The F_p-point of a degree one label.
    pub fn rational_point(&self) -> Option<u64> {
        (self.degree() == 1).then(|| self.poly.field().neg(self.poly.coeff(0)))
    }
}

impl Ord for PrimeLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_polys(&self.poly, &other.poly).then(self.certified.cmp(&other.certified))
    }
}

impl PartialOrd for PrimeLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn checked_add(a: Rational, b: Rational) -> Result<Rational> {
    a.checked_add(&b).ok_or(Error::RationalOverflow)
}

fn checked_mul(a: Rational, b: Rational) -> Result<Rational> {
    a.checked_mul(&b).ok_or(Error::RationalOverflow)
}

/// A finite formal sum of prime divisors of A^1 with rational
/// coefficients; `var` is the coordinate name used for printing.
#[derive(Clone, PartialEq, Eq)]
pub struct QDivisor {
    field: FieldCtx,
    var: String,
    terms: BTreeMap<PrimeLabel, Rational>,
}

impl QDivisor {
    pub fn zero(field: FieldCtx, var: &str) -> Self {
        QDivisor {
            field,
            var: var.to_string(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        field: FieldCtx,
        var: &str,
        terms: Vec<(PrimeLabel, Rational)>,
    ) -> Result<Self> {
        let mut d = QDivisor::zero(field, var);
        for (label, c) in terms {
            if label.poly.field() != field {
                return Err(Error::ContextMismatch);
            }
            d.add_term(label, c)?;
        }
        Ok(d)
    }

    /// `scale * div(h)`; the leading coefficient of `h` is a unit and
    /// contributes nothing.
    pub fn of_poly(h: &UniPoly, scale: Rational, var: &str) -> Result<Self> {
        if h.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut d = QDivisor::zero(h.field(), var);
        let (_, factors) = h.factor();
        for (fac, mult) in factors {
            let c = checked_mul(scale, Rational::from_integer(mult as i64))?;
            d.add_term(PrimeLabel::from_factor(fac.poly, fac.certified), c)?;
        }
        Ok(d)
    }

    fn add_term(&mut self, label: PrimeLabel, c: Rational) -> Result<()> {
        let slot = self
            .terms
            .entry(label.clone())
            .or_insert_with(Rational::zero);
        *slot = checked_add(*slot, c)?;
        if slot.is_zero() {
            self.terms.remove(&label);
        }
        Ok(())
    }

    pub fn field(&self) -> FieldCtx {
        self.field
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PrimeLabel, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient at the prime labelled by `prime`, zero if absent.
    pub fn coeff_at(&self, prime: &UniPoly) -> Rational {
        self.terms
            .iter()
            .find(|(l, _)| &l.poly == prime)
            .map_or_else(Rational::zero, |(_, c)| *c)
    }

    pub fn support(&self) -> Vec<PrimeLabel> {
        self.terms.keys().cloned().collect()
    }

    /// F_p-rational points in the support, ascending.
    pub fn rational_support(&self) -> Vec<u64> {
        let mut pts: Vec<u64> = self
            .terms
            .keys()
            .filter_map(|l| l.rational_point())
            .collect();
        pts.sort_unstable();
        pts
    }

    /// `sum c_P deg(P)`.
    pub fn degree(&self) -> Result<Rational> {
        self.terms.iter().try_fold(Rational::zero(), |acc, (l, c)| {
            checked_add(
                acc,
                checked_mul(*c, Rational::from_integer(l.degree() as i64))?,
            )
        })
    }

    pub fn add(&self, other: &QDivisor) -> Result<QDivisor> {
        if self.field != other.field || self.var != other.var {
            return Err(Error::ContextMismatch);
        }
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), *c)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: Rational) -> Result<QDivisor> {
        let mut out = QDivisor::zero(self.field, &self.var);
        if c.is_zero() {
            return Ok(out);
        }
        for (l, v) in &self.terms {
            out.terms.insert(l.clone(), checked_mul(*v, c)?);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &QDivisor) -> Result<QDivisor> {
        self.add(&other.scale(-Rational::one())?)
    }

    /// Same divisor with the coordinate renamed.
    pub fn with_var(&self, var: &str) -> QDivisor {
        QDivisor {
            var: var.to_string(),
            ..self.clone()
        }
    }
}

impl fmt::Display for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(l, c)| format!("({})[{}]", c, l.poly.display(&self.var)))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for QDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QDivisor[F_{}]({})", self.field.p(), self)
    }
}

/// The map `s -> g(s)` between affine lines. Only separable maps are
/// accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseMap {
    g: UniPoly,
    var: String,
}

impl BaseMap {
    pub fn new(g: UniPoly, var: &str) -> Result<Self> {
        if g.degree().unwrap_or(0) == 0 {
            return Err(Error::ConstantMap);
        }
        if g.derivative().is_zero() {
            return Err(Error::Inseparable);
        }
        Ok(BaseMap {
            g,
            var: var.to_string(),
        })
    }

    pub fn poly(&self) -> &UniPoly {
        &self.g
    }

    /// Coordinate name on the source line.
    pub fn var(&self) -> &str {
        &self.var
    }
}

/// `f^* D`: each prime `π` pulls back to `div(π ∘ g)`, whose
/// multiplicities are the ramification indices.
pub fn pullback(d: &QDivisor, map: &BaseMap) -> Result<QDivisor> {
    if d.field != map.g.field() {
        return Err(Error::ContextMismatch);
    }
    let p = d.field.p();
    let mut out = QDivisor::zero(d.field, &map.var);
    for (label, c) in &d.terms {
        let composed = label.poly.compose(&map.g);
        let (_, factors) = composed.factor();
        for (fac, mult) in factors {
            if (mult as u64).is_multiple_of(p) {
                return Err(Error::WildRamification {
                    factor: fac.poly.display(&map.var),
                    mult,
                });
            }
            let coeff = checked_mul(*c, Rational::from_integer(mult as i64))?;
            out.add_term(PrimeLabel::from_factor(fac.poly, fac.certified), coeff)?;
        }
    }
    Ok(out)
}

/// `div(g')` on the source line.
pub fn ramification_divisor(map: &BaseMap) -> Result<QDivisor> {
    let dg = map.g.derivative();
    if dg.is_zero() {
        return Err(Error::Inseparable);
    }
    QDivisor::of_poly(&dg, Rational::one(), &map.var)
}

/// `f^* D - Ram_f`.
pub fn base_change_transform(d: &QDivisor, map: &BaseMap) -> Result<QDivisor> {
    pullback(d, map)?.sub(&ramification_divisor(map)?)
}

/// On a DVR, `(Spec A, λ Q)` is sub-F-pure exactly when `λ <= 1`.
pub fn dvr_subfpure_ok(coeff: Rational) -> bool {
    coeff <= Rational::one()
}
