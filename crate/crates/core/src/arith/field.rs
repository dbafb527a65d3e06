//! Prime fields F_p with p < 2^31.

use crate::error::{Error, Result};

/// The prime field F_p. Elements are plain `u64` values kept in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldCtx {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldCtx {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldCtx { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, v: u64) -> u64 {
        v % self.p
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }

    /// Quadratic character: 0 on 0, 1 on nonzero squares, -1 otherwise.
    pub fn legendre(&self, a: u64) -> i64 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.p == 2 {
            return 1;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }

    /// Returns `Some(e)` when `q = p^e` with `e >= 1`.
    pub fn log_p(&self, q: u64) -> Option<u32> {
        if q < self.p {
            return None;
        }
        let mut e = 0;
        let mut v = q;
        while v.is_multiple_of(self.p) {
            v /= self.p;
            e += 1;
        }
        (v == 1).then_some(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_bounds() {
        assert!(FieldCtx::new(2).is_ok());
        assert!(FieldCtx::new(2147483647).is_ok());
        assert_eq!(FieldCtx::new(1), Err(Error::NotPrime(1)));
        assert_eq!(FieldCtx::new(9), Err(Error::NotPrime(9)));
        assert!(FieldCtx::new(1 << 31).is_err());
    }

    #[test]
    fn inverse_and_character() {
        let f = FieldCtx::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        let squares: Vec<i64> = (0..7).map(|a| f.legendre(a)).collect();
        assert_eq!(squares, vec![0, 1, 1, -1, 1, -1, -1]);
        assert_eq!(f.from_i64(-1), 6);
    }

    #[test]
    fn log_p_detects_powers() {
        let f = FieldCtx::new(3).unwrap();
        assert_eq!(f.log_p(3), Some(1));
        assert_eq!(f.log_p(27), Some(3));
        assert_eq!(f.log_p(1), None);
        assert_eq!(f.log_p(12), None);
    }
}
