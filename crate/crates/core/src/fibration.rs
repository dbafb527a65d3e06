//! One-parameter families of plane cubics `a(x, y, z, t) = 0` over the
//! `t`-line: fiberwise F-splitting (Fedder, Hasse invariant, point count),
//! the moduli divisor `(1/(q-1)) div(h)` with `h` the coefficient of
//! `(xyz)^(q-1)` in `a^(q-1)`, and scans over several primes.

use rayon::prelude::*;

use crate::arith::{parse_poly, FieldCtx, MultiPoly, UniPoly, VarCtx};
use crate::divisor::QDivisor;
use crate::error::{Error, Result};
use crate::fedder::{fpure_hypersurface, FrobeniusLevel};
use crate::groebner::{groebner_basis, GbOptions, Ideal, MonomialOrder};
use crate::Rational;

/// Variable names of every family, in this order.
pub const FAMILY_VARS: &str = "x,y,z,t";
/// The elliptic cone `zy^2 - x(x-z)(x-tz)`.
pub const CONE: &str = "z*y^2 - x*(x-z)*(x-t*z)";
/// Largest `q` accepted by [`cone_h_poly`] for `e >= 2`.
pub const H_POLY_Q_GUARD: u64 = 27;

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const T: usize = 3;

/// `y^2 = f(x)` data of a family at `z = 1`: `a = c y^2 - g(x)`, with `c`
/// and the coefficients of `g` polynomials in `t`.
#[derive(Debug, Clone)]
struct Weierstrass {
    c: MultiPoly,
    g: [MultiPoly; 4],
}

impl Weierstrass {
    fn of(a: &MultiPoly) -> Result<Self> {
        let affine = a.specialize(Z, 1);
        for term in affine.terms() {
            let e = term.mono.exponents();
            let ok = match e[Y] {
                0 => e[X] <= 3,
                2 => e[X] == 0,
                _ => false,
            };
            if !ok {
                return Err(Error::NotWeierstrass(format!(
                    "term {} is not of the form c*y^2 or x^k",
                    term.mono.display_in(a.vars())
                )));
            }
        }
        let c = affine.coeff_of(&[(Y, 2)]);
        let r = affine.coeff_of(&[(Y, 0)]);
        let g = [0u32, 1, 2, 3].map(|k| r.coeff_of(&[(X, k)]).neg());
        Ok(Weierstrass { c, g })
    }

    /// `f_λ = g(x, λ) / c(λ)`.
    fn at(&self, lambda: u64) -> Result<UniPoly> {
        let field = self.c.field();
        let mut point = [0u64; 4];
        point[T] = lambda;
        let c = self.c.eval(&point)?;
        let coeffs = self
            .g
            .iter()
            .map(|g| g.eval(&point))
            .collect::<Result<Vec<_>>>()?;
        let g = UniPoly::new(field, coeffs);
        if c == 0 || g.degree() != Some(3) {
            return Err(Error::DegenerateFiber(lambda));
        }
        let f = g.scale(field.inv(c));
        if !f.is_squarefree() {
            return Err(Error::DegenerateFiber(lambda));
        }
        Ok(f)
    }

    /// Discriminant of `g` as a polynomial in `t`.
    fn discriminant(&self) -> Result<MultiPoly> {
        let [d, c, b, a] = &self.g;
        let k = |n: i64| MultiPoly::constant(a.field(), a.vars(), a.field().from_i64(n));
        let prod = |fs: &[&MultiPoly]| -> Result<MultiPoly> {
            fs.iter()
                .try_fold(MultiPoly::one(a.field(), a.vars()), |acc, f| acc.mul(f))
        };
        // 18abcd - 4b^3 d + b^2 c^2 - 4ac^3 - 27a^2 d^2
        let terms = [
            k(18).mul(&prod(&[a, b, c, d])?)?,
            k(-4).mul(&prod(&[b, b, b, d])?)?,
            prod(&[b, b, c, c])?,
            k(-4).mul(&prod(&[a, c, c, c])?)?,
            k(-27).mul(&prod(&[a, a, d, d])?)?,
        ];
        terms
            .iter()
            .try_fold(MultiPoly::zero(a.field(), a.vars()), |acc, t| acc.add(t))
    }
}

/// A family of plane cubics in `x, y, z` parametrised by `t`.
#[derive(Debug, Clone)]
pub struct CubicFamily {
    a: MultiPoly,
}

impl CubicFamily {
    pub fn vars() -> VarCtx {
        VarCtx::parse_list(FAMILY_VARS).expect("static variable list")
    }

    /// The elliptic cone over F_p.
    pub fn cone(field: FieldCtx) -> Self {
        CubicFamily {
            a: parse_poly(CONE, &Self::vars(), field).expect("static expression"),
        }
    }

    /// Accepts any polynomial in (a subset of) `x, y, z, t` that is
    /// homogeneous of degree 3 in `x, y, z`.
    pub fn from_poly(a: &MultiPoly) -> Result<Self> {
        let a = a.embed(&Self::vars())?;
        if a.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let cubic = a.terms().iter().all(|t| {
            let e = t.mono.exponents();
            e[X] + e[Y] + e[Z] == 3
        });
        if !cubic {
            return Err(Error::NotWeierstrass(
                "not homogeneous of degree 3 in x,y,z".into(),
            ));
        }
        Ok(CubicFamily { a })
    }

    pub fn parse(expr: &str, field: FieldCtx) -> Result<Self> {
        Self::from_poly(&parse_poly(expr, &Self::vars(), field)?)
    }

    pub fn field(&self) -> FieldCtx {
        self.a.field()
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.a
    }

    /// The fiber `a(x, y, z, λ)`.
    pub fn fiber(&self, lambda: u64) -> MultiPoly {
        self.a.specialize(T, lambda)
    }

    /// `f_λ` with the fiber at `z = 1` equal to `c (y^2 - f_λ(x))`.
    pub fn affine_form(&self, lambda: u64) -> Result<UniPoly> {
        Weierstrass::of(&self.a)?.at(self.field().reduce(lambda))
    }
}

/// Coefficient of `x^(p-1)` in `f_λ^((p-1)/2)`.
pub fn hasse_value(family: &CubicFamily, lambda: u64) -> Result<u64> {
    let p = family.field().p();
    if p == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let f = family.affine_form(lambda)?;
    Ok(f.pow((p - 1) / 2).coeff((p - 1) as usize))
}

/// `#E_λ(F_p) = 1 + Σ_x (1 + χ(f_λ(x)))`.
pub fn point_count(family: &CubicFamily, lambda: u64) -> Result<u64> {
    let field = family.field();
    if field.p() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let f = family.affine_form(lambda)?;
    let affine: i64 = (0..field.p()).map(|x| 1 + field.legendre(f.eval(x))).sum();
    Ok(1 + affine as u64)
}

fn binomial_mod(field: FieldCtx, n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| {
        let num = field.mul(acc, field.reduce(n - i));
        field.mul(num, field.inv(field.reduce(i + 1)))
    })
}

/// `Σ_i binom(m, i)^2 λ^i` with `m = (p-1)/2`.
pub fn legendre_hasse_poly(field: FieldCtx) -> Result<UniPoly> {
    let p = field.p();
    if p == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let m = (p - 1) / 2;
    let coeffs = (0..=m)
        .map(|i| {
            let b = binomial_mod(field, m, i);
            field.mul(b, b)
        })
        .collect();
    Ok(UniPoly::new(field, coeffs))
}

/// Coefficient of `(xyz)^(q-1)` in `a^(q-1)`, a polynomial in `t`.
pub fn cone_h_poly(family: &CubicFamily, level: FrobeniusLevel) -> Result<UniPoly> {
    if level.field() != family.field() {
        return Err(Error::ContextMismatch);
    }
    let q = level.q();
    if level.e() >= 2 && q > H_POLY_Q_GUARD {
        return Err(Error::QGuard {
            q,
            limit: H_POLY_Q_GUARD,
        });
    }
    let xyz = [X, Y, Z];
    let top = (q - 1) as u32;
    let power = family.a.pow_truncated(q - 1, &xyz, q)?;
    let h = power.coeff_of(&[(X, top), (Y, top), (Z, top)]);
    h.to_univariate(T)
        .ok_or_else(|| Error::Internal("h involves x, y or z".into()))
}

/// `Δ_W = (1/(q-1)) div(h)` on the `t`-line.
pub fn assemble_moduli_divisor(family: &CubicFamily, level: FrobeniusLevel) -> Result<QDivisor> {
    let h = cone_h_poly(family, level)?;
    moduli_divisor_of(&h, level)
}

fn moduli_divisor_of(h: &UniPoly, level: FrobeniusLevel) -> Result<QDivisor> {
    if h.is_zero() {
        return Err(Error::GenericFiberNotSplit);
    }
    QDivisor::of_poly(h, Rational::new(1, (level.q() - 1) as i64), "t")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberReport {
    pub lambda: u64,
    /// The fiber is not a smooth Weierstrass cubic.
    pub degenerate: bool,
    /// `h(λ)` at `q = p`.
    pub h_value: u64,
    /// `None` for degenerate fibers, p = 2 or non-Weierstrass families.
    pub hasse_value: Option<u64>,
    /// Only for p >= 5 and nondegenerate fibers.
    pub point_count: Option<u64>,
    /// Fedder's criterion for the cone over the fiber at the origin.
    pub is_split: bool,
}

impl FiberReport {
    /// `is_split ⟺ hasse ≠ 0 ⟺ #E ≠ p + 1`, over whatever is present.
    pub fn consistent(&self, p: u64) -> bool {
        let by_h = self.h_value != 0;
        let by_hasse = self.hasse_value.map_or(self.is_split, |v| v != 0);
        let by_count = self.point_count.map_or(self.is_split, |n| n != p + 1);
        self.is_split == by_h && by_h == by_hasse && by_hasse == by_count
    }
}

fn fiber_report(family: &CubicFamily, h: &UniPoly, lambda: u64) -> Result<FiberReport> {
    let field = family.field();
    let p = field.p();
    let level = FrobeniusLevel::new(field, 1)?;
    let is_split = fpure_hypersurface(&family.fiber(lambda), &[X, Y, Z], level)?.fpure;
    let (degenerate, hasse, count) = match family.affine_form(lambda) {
        Ok(_) if p == 2 => (false, None, None),
        Ok(_) => {
            let count = if p >= 5 {
                Some(point_count(family, lambda)?)
            } else {
                None
            };
            (false, Some(hasse_value(family, lambda)?), count)
        }
        Err(Error::DegenerateFiber(_)) => (true, None, None),
        Err(Error::NotWeierstrass(_)) => (false, None, None),
        Err(e) => return Err(e),
    };
    Ok(FiberReport {
        lambda,
        degenerate,
        h_value: h.eval(lambda),
        hasse_value: hasse,
        point_count: count,
        is_split,
    })
}

/// One report per `λ ∈ F_p`, ascending.
pub fn scan_fibers(family: &CubicFamily) -> Result<Vec<FiberReport>> {
    let field = family.field();
    let h = cone_h_poly(family, FrobeniusLevel::new(field, 1)?)?;
    (0..field.p())
        .into_par_iter()
        .map(|lambda| fiber_report(family, &h, lambda))
        .collect()
}

/// Whether the fiber at `λ` is reduced, i.e. its singular locus is finite
/// in each standard affine chart.
pub fn fiber_is_reduced(family: &CubicFamily, lambda: u64, opts: &GbOptions) -> Result<bool> {
    let fiber = family.fiber(lambda);
    let charts = [(Z, [X, Y]), (X, [Y, Z]), (Y, [X, Z])];
    for (dehom, [u, v]) in charts {
        let g = fiber.specialize(dehom, 1);
        let plane = VarCtx::new(&[family.a.vars().name(u), family.a.vars().name(v)])?;
        let gens = [g.clone(), g.derivative(u), g.derivative(v)]
            .iter()
            .map(|h| h.embed(&plane))
            .collect::<Result<Vec<_>>>()?;
        let ideal = Ideal::new(family.field(), &plane, gens)?;
        let basis = groebner_basis(&ideal, &MonomialOrder::grevlex(2), opts)?;
        let pure_power = |i: usize| {
            basis.iter().any(|b| {
                b.leading_term().is_some_and(|t| {
                    let e = t.mono.exponents();
                    e.iter().enumerate().all(|(j, &k)| j == i || k == 0)
                })
            })
        };
        if !(pure_power(0) && pure_power(1)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-prime result of [`char_scan`].
#[derive(Debug, Clone)]
pub struct CharScanRow {
    pub p: u64,
    pub h: UniPoly,
    pub divisor: QDivisor,
    /// F_p-points of the support, ascending.
    pub rational_support: Vec<u64>,
    /// `λ0 mod p`.
    pub lambda0: u64,
    pub lambda0_in_support: bool,
    pub lambda0_degenerate: bool,
    pub lambda0_hasse: Option<u64>,
    /// Only for p >= 5.
    pub lambda0_point_count: Option<u64>,
}

fn scan_prime(expr: &str, p: u64, lambda0: i64) -> Result<CharScanRow> {
    let field = FieldCtx::new(p)?;
    if p == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let family = CubicFamily::parse(expr, field).map_err(|e| match e {
        Error::ZeroPolynomial => Error::DegenerateReduction {
            p,
            reason: "family vanishes".into(),
        },
        e => e,
    })?;
    let w = Weierstrass::of(&family.a)?;
    if !w.c.is_constant() || w.c.is_zero() || !w.g[3].is_constant() || w.g[3].is_zero() {
        return Err(Error::DegenerateReduction {
            p,
            reason: "leading coefficients vanish or depend on t".into(),
        });
    }
    if w.discriminant()?.is_zero() {
        return Err(Error::DegenerateReduction {
            p,
            reason: "discriminant vanishes".into(),
        });
    }
    let level = FrobeniusLevel::new(field, 1)?;
    let h = cone_h_poly(&family, level)?;
    let divisor = moduli_divisor_of(&h, level).map_err(|e| match e {
        Error::GenericFiberNotSplit => Error::DegenerateReduction {
            p,
            reason: "generic fiber not F-split".into(),
        },
        e => e,
    })?;
    let lambda = field.from_i64(lambda0);
    let (degenerate, hasse, count) = match family.affine_form(lambda) {
        Ok(_) => (
            false,
            Some(hasse_value(&family, lambda)?),
            if p >= 5 {
                Some(point_count(&family, lambda)?)
            } else {
                None
            },
        ),
        Err(Error::DegenerateFiber(_)) => (true, None, None),
        Err(e) => return Err(e),
    };
    Ok(CharScanRow {
        p,
        rational_support: divisor.rational_support(),
        lambda0: lambda,
        lambda0_in_support: h.eval(lambda) == 0,
        lambda0_degenerate: degenerate,
        lambda0_hasse: hasse,
        lambda0_point_count: count,
        h,
        divisor,
    })
}

/// Reduces the integer family `expr` modulo each prime and assembles its
/// moduli divisor; rows are sorted by p.
pub fn char_scan(expr: &str, primes: &[u64], lambda0: i64) -> Result<Vec<CharScanRow>> {
    let mut primes = primes.to_vec();
    primes.sort_unstable();
    primes.dedup();
    primes
        .into_par_iter()
        .map(|p| scan_prime(expr, p, lambda0))
        .collect()
}
