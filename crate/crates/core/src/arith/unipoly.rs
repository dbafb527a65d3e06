//! Dense univariate polynomials over F_p: Euclid, squarefree decomposition
//! in characteristic p, and factorization into irreducibles of degree <= 3.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::field::FieldCtx;
use crate::error::{Error, Result};

/// Largest degree for which factors are certified irreducible.
pub const CERTIFIED_DEGREE: usize = 3;

/// Coefficients low to high, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: FieldCtx,
    coeffs: Vec<u64>,
}

impl UniPoly {
    pub fn new(field: FieldCtx, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| field.reduce(c)).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn from_i64(field: FieldCtx, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: FieldCtx) -> Self {
        UniPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: FieldCtx, c: u64) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one(field: FieldCtx) -> Self {
        Self::constant(field, 1)
    }

    /// The polynomial `t`.
    pub fn x(field: FieldCtx) -> Self {
        Self::new(field, vec![0, 1])
    }

    pub fn field(&self) -> FieldCtx {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading_coeff()))
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff() == 1
    }

    pub fn scale(&self, c: u64) -> UniPoly {
        let f = self.field;
        UniPoly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            f,
            (0..n)
                .map(|i| f.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            f,
            (0..n)
                .map(|i| f.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field);
        }
        let f = self.field;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UniPoly::new(f, out)
    }

    pub fn pow(&self, mut n: u64) -> UniPoly {
        let mut acc = UniPoly::one(self.field);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    /// Quotient and remainder; panics when dividing by zero.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let f = self.field;
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv_lead = f.inv(divisor.leading_coeff());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(f), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(rem[k + dd], inv_lead);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(rem[k + j], f.mul(c, d));
            }
        }
        rem.truncate(dd);
        (UniPoly::new(f, quot), UniPoly::new(f, rem))
    }

    pub fn rem(&self, divisor: &UniPoly) -> UniPoly {
        self.div_rem(divisor).1
    }

    /// Exact quotient; `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        other.rem(self).is_zero()
    }

    pub fn derivative(&self) -> UniPoly {
        let f = self.field;
        UniPoly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.reduce(i as u64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self(inner(s))`.
    pub fn compose(&self, inner: &UniPoly) -> UniPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(UniPoly::zero(self.field), |acc, &c| {
                acc.mul(inner).add(&UniPoly::constant(self.field, c))
            })
    }

    /// `self^e mod modulus` for a possibly huge exponent.
    pub fn pow_mod(&self, mut e: u128, modulus: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::one(self.field).rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// Divides every exponent by p. Coefficients are Frobenius-fixed, so the
    /// result is the p-th root.
    pub fn pth_root(&self) -> Result<UniPoly> {
        let p = self.field.p() as usize;
        let mut out = Vec::with_capacity(self.coeffs.len() / p + 1);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 && i % p != 0 {
                return Err(Error::NotPthPower {
                    exp: i,
                    p: self.field.p(),
                });
            }
            if i % p == 0 {
                out.push(c);
            }
        }
        Ok(UniPoly::new(self.field, out))
    }

    /// Squarefree decomposition of a nonzero polynomial: monic pairwise
    /// coprime factors with multiplicities, product equal to `self.monic()`.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let mut c = uni_gcd(&f, &f.derivative());
        let mut w = f.div_exact(&c).expect("gcd divides");
        let mut i = 1u32;
        while !w.is_one() {
            let y = uni_gcd(&w, &c);
            let z = w.div_exact(&y).expect("gcd divides");
            if !z.is_one() {
                out.push((z, i));
            }
            i += 1;
            c = c.div_exact(&y).expect("gcd divides");
            w = y;
        }
        if !c.is_one() {
            let root = c.pth_root().expect("remaining cofactor is a p-th power");
            let p = self.field.p() as u32;
            for (g, m) in root.squarefree_decomposition() {
                out.push((g, m * p));
            }
        }
        out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| cmp_polys(&a.0, &b.0)));
        out
    }

    /// Monic radical; zero stays zero and nonzero constants map to 1.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.squarefree_decomposition()
            .iter()
            .fold(UniPoly::one(self.field), |acc, (g, _)| acc.mul(g))
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.squarefree_decomposition().iter().all(|(_, m)| *m == 1)
    }

    /// Roots in F_p, ascending.
    pub fn roots(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .factor()
            .1
            .into_iter()
            .filter(|(g, _)| g.poly.degree() == Some(1))
            .map(|(g, _)| self.field.neg(g.poly.coeff(0)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Rabin-style irreducibility test, exact for every degree.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic();
        let x = UniPoly::x(self.field);
        let p = self.field.p() as u128;
        let frob = |g: &UniPoly| g.pow_mod(p, &f);
        let mut powers = vec![x.clone()];
        for _ in 0..n {
            let next = frob(powers.last().unwrap());
            powers.push(next);
        }
        if powers[n] != x.rem(&f) {
            return false;
        }
        for r in prime_divisors(n) {
            let g = uni_gcd(&powers[n / r].sub(&x), &f);
            if !g.is_one() {
                return false;
            }
        }
        true
    }

    /// Factors into a leading coefficient and monic factors with
    /// multiplicities. Irreducible factors of degree <= 3 are split off and
    /// certified; any remaining cofactor (all of whose irreducible factors
    /// have degree >= 4) is returned as one uncertified factor.
    pub fn factor(&self) -> (u64, Vec<(Factor, u32)>) {
        let lead = self.leading_coeff();
        let mut out = Vec::new();
        for (g, m) in self.squarefree_decomposition() {
            for fac in distinct_degree_split(&g) {
                out.push((fac, m));
            }
        }
        out.sort_by(|a, b| cmp_polys(&a.0.poly, &b.0.poly));
        (lead, out)
    }

    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (i, c) {
                (0, _) => c.to_string(),
                (_, 1) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        parts.join("+")
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly[F_{}]({})", self.field.p(), self.display("t"))
    }
}

/// Total order on polynomials: degree first, then coefficients from the top.
pub fn cmp_polys(a: &UniPoly, b: &UniPoly) -> Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.iter().rev().cmp(b.coeffs.iter().rev()))
}

/// A monic factor; `certified` when proven irreducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub poly: UniPoly,
    pub certified: bool,
}

/// Monic gcd by Euclid. `gcd(0, 0) = 0`.
pub fn uni_gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    a.monic()
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a monic squarefree polynomial into its irreducible factors of
/// degree <= CERTIFIED_DEGREE plus an uncertified remainder.
fn distinct_degree_split(g: &UniPoly) -> Vec<Factor> {
    let field = g.field();
    let x = UniPoly::x(field);
    let p = field.p() as u128;
    let mut rest = g.clone();
    let mut frob = x.clone();
    let mut out = Vec::new();
    for d in 1..=CERTIFIED_DEGREE {
        if rest.degree().unwrap_or(0) < d {
            break;
        }
        if rest.degree() == Some(d) && d <= 3 && rest.is_irreducible() {
            out.push(Factor {
                poly: rest.clone(),
                certified: true,
            });
            rest = UniPoly::one(field);
            break;
        }
        frob = frob.rem(&rest).pow_mod(p, &rest);
        let part = uni_gcd(&frob.sub(&x), &rest);
        if !part.is_one() {
            rest = rest.div_exact(&part).expect("gcd divides");
            for poly in equal_degree_split(&part, d) {
                out.push(Factor {
                    poly,
                    certified: true,
                });
            }
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(Factor {
            poly: rest,
            certified: false,
        });
    }
    out
}

/// Cantor-Zassenhaus: splits a product of distinct irreducibles of degree
/// `d` into its factors. Deterministic via a fixed seed.
fn equal_degree_split(g: &UniPoly, d: usize) -> Vec<UniPoly> {
    let n = g.degree().unwrap_or(0);
    if n == d {
        return vec![g.clone()];
    }
    let field = g.field();
    let p = field.p();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ (n as u64) << 8 ^ d as u64);
    loop {
        let a = UniPoly::new(field, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // absolute trace of F_{2^d} down to F_2
            let mut term = a.rem(g);
            let mut acc = term.clone();
            for _ in 1..d {
                term = term.mul(&term).rem(g);
                acc = acc.add(&term);
            }
            acc
        } else {
            let e = ((p as u128).pow(d as u32) - 1) / 2;
            a.pow_mod(e, g).sub(&UniPoly::one(field))
        };
        let h = uni_gcd(&b, g);
        let hd = h.degree().unwrap_or(0);
        if hd > 0 && hd < n {
            let other = g.div_exact(&h).expect("gcd divides");
            let mut out = equal_degree_split(&h, d);
            out.extend(equal_degree_split(&other, d));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldCtx {
        FieldCtx::new(p).unwrap()
    }

    fn up(p: u64, c: &[i64]) -> UniPoly {
        UniPoly::from_i64(f(p), c)
    }

    #[test]
    fn gcd_example() {
        // gcd(t^2-1, t-1) over F_5
        assert_eq!(
            uni_gcd(&up(5, &[-1, 0, 1]), &up(5, &[-1, 1])),
            up(5, &[-1, 1])
        );
        assert!(uni_gcd(&UniPoly::zero(f(5)), &UniPoly::zero(f(5))).is_zero());
    }

    #[test]
    fn squarefree_of_cube_in_char_three() {
        // (t+1)^3 = t^3 + 1 over F_3, derivative vanishes
        let cube = up(3, &[1, 1]).pow(3);
        assert_eq!(cube, up(3, &[1, 0, 0, 1]));
        assert!(cube.derivative().is_zero());
        assert_eq!(cube.squarefree_part(), up(3, &[1, 1]));
        assert_eq!(cube.squarefree_decomposition(), vec![(up(3, &[1, 1]), 3)]);
    }

    #[test]
    fn pth_root_examples() {
        assert_eq!(up(3, &[2, 0, 0, 1]).pth_root().unwrap(), up(3, &[2, 1]));
        assert_eq!(
            up(3, &[0, 1, 0, 1]).pth_root().unwrap_err(),
            Error::NotPthPower { exp: 1, p: 3 }
        );
    }

    #[test]
    fn decomposition_with_mixed_multiplicities() {
        // t^2 (t+1)^3 (t+2)^4 over F_3
        let g = up(3, &[0, 1])
            .pow(2)
            .mul(&up(3, &[1, 1]).pow(3))
            .mul(&up(3, &[2, 1]).pow(4));
        let dec = g.squarefree_decomposition();
        assert_eq!(
            dec,
            vec![
                (up(3, &[0, 1]), 2),
                (up(3, &[1, 1]), 3),
                (up(3, &[2, 1]), 4)
            ]
        );
        let back = dec
            .iter()
            .fold(UniPoly::one(f(3)), |acc, (h, m)| acc.mul(&h.pow(*m as u64)));
        assert_eq!(back, g);
    }

    #[test]
    fn factor_certifies_small_degrees() {
        // (t^2 + 4t + 1) is irreducible over F_5; times (t+3)^2 times a quartic
        let quad = up(5, &[1, 4, 1]);
        assert!(quad.is_irreducible());
        let lin = up(5, &[3, 1]);
        let g = quad.mul(&lin.pow(2)).scale(2);
        let (lead, facs) = g.factor();
        assert_eq!(lead, 2);
        assert_eq!(
            facs,
            vec![
                (
                    Factor {
                        poly: lin.clone(),
                        certified: true
                    },
                    2
                ),
                (
                    Factor {
                        poly: quad.clone(),
                        certified: true
                    },
                    1
                )
            ]
        );
        assert_eq!(g.roots(), vec![2]);
    }

    #[test]
    fn splits_products_of_equal_degree() {
        for p in [2u64, 3, 7] {
            let a = up(p, &[0, 1]);
            let b = up(p, &[1, 1]);
            let (_, facs) = a.mul(&b).factor();
            assert_eq!(facs.len(), 2, "p = {p}");
        }
        // t^4 - 1 over F_5 splits completely
        assert_eq!(up(5, &[-1, 0, 0, 0, 1]).roots(), vec![1, 2, 3, 4]);
        // x^8 + x^4 + x^3 + x + 1 is irreducible over F_2: kept uncertified
        let aes = up(2, &[1, 1, 0, 1, 1, 0, 0, 0, 1]);
        assert!(aes.is_irreducible());
        let (_, facs) = aes.factor();
        assert_eq!(facs.len(), 1);
        assert!(!facs[0].0.certified);
    }

    #[test]
    fn compose_and_display() {
        let pi = up(3, &[1, 1]);
        let g = up(3, &[1, 1]);
        assert_eq!(pi.compose(&g), up(3, &[2, 1]));
        assert_eq!(up(5, &[1, 4, 1]).display("t"), "t^2+4*t+1");
        assert_eq!(UniPoly::zero(f(5)).display("t"), "0");
        assert_eq!(up(5, &[3]).display("t"), "3");
    }
}
