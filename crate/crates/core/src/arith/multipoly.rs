//! Sparse multivariate polynomials over F_p in a named variable context.
//!
//! Terms are stored in descending graded reverse lexicographic order with
//! no zero coefficients and no repeated monomials, so structural equality
//! is mathematical equality.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::arith::field::FieldCtx;
use crate::arith::unipoly::UniPoly;
use crate::error::{Error, Result};

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Ordered list of variable names; the order fixes exponent positions.
#[derive(Clone)]
pub struct VarCtx {
    names: Arc<[String]>,
}

impl VarCtx {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::EmptyVarCtx);
        }
        let mut seen = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref().trim();
            if !is_identifier(n) {
                return Err(Error::InvalidVarName(n.to_string()));
            }
            if seen.iter().any(|s: &String| s == n) {
                return Err(Error::DuplicateVar(n.to_string()));
            }
            seen.push(n.to_string());
        }
        Ok(VarCtx { names: seen.into() })
    }

    /// Parses a comma separated list such as `x,y,z,t`.
    pub fn parse_list(list: &str) -> Result<Self> {
        let names: Vec<&str> = list.split(',').map(str::trim).collect();
        Self::new(&names)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn indices<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|n| {
                self.index_of(n.as_ref().trim())
                    .ok_or_else(|| Error::UnknownVariable(n.as_ref().trim().to_string()))
            })
            .collect()
    }

    /// A copy of this context with one extra variable appended, named
    /// `base`, `base_1`, ... whichever is free.
    pub fn with_fresh(&self, base: &str) -> (VarCtx, usize) {
        let mut name = base.to_string();
        let mut k = 0;
        while self.index_of(&name).is_some() {
            k += 1;
            name = format!("{base}_{k}");
        }
        let mut names: Vec<String> = self.names.to_vec();
        names.push(name);
        let idx = names.len() - 1;
        (
            VarCtx {
                names: names.into(),
            },
            idx,
        )
    }
}

impl PartialEq for VarCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.names, &other.names) || self.names == other.names
    }
}

impl Eq for VarCtx {}

impl fmt::Debug for VarCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarCtx({})", self.names.join(","))
    }
}

/// Exponent vector, one `u32` per variable of the context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn var(n: usize, i: usize, e: u32) -> Self {
        let mut v = vec![0; n];
        v[i] = e;
        Monomial(v)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    /// Product; exponents are assumed to stay below 2^32.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn grevlex_cmp(&self, other: &Monomial) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                // smaller exponent in the last differing variable wins
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }

    pub fn display_in(&self, vars: &VarCtx) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    vars.name(i).to_string()
                } else {
                    format!("{}^{}", vars.name(i), e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: u64,
    pub mono: Monomial,
}

/// Canonical sparse polynomial over F_p.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: FieldCtx,
    vars: VarCtx,
    terms: Vec<Term>,
}

impl MultiPoly {
    pub fn zero(field: FieldCtx, vars: &VarCtx) -> Self {
        MultiPoly {
            field,
            vars: vars.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(field: FieldCtx, vars: &VarCtx, c: u64) -> Self {
        let c = field.reduce(c);
        let terms = if c == 0 {
            Vec::new()
        } else {
            vec![Term {
                coeff: c,
                mono: Monomial::one(vars.len()),
            }]
        };
        MultiPoly {
            field,
            vars: vars.clone(),
            terms,
        }
    }

    pub fn one(field: FieldCtx, vars: &VarCtx) -> Self {
        Self::constant(field, vars, 1)
    }

    pub fn var(field: FieldCtx, vars: &VarCtx, i: usize) -> Self {
        Self::monomial(field, vars, 1, Monomial::var(vars.len(), i, 1))
    }

    pub fn monomial(field: FieldCtx, vars: &VarCtx, coeff: u64, mono: Monomial) -> Self {
        assert_eq!(mono.arity(), vars.len());
        Self::from_terms(field, vars, vec![(coeff, mono)])
    }

    /// Builds a canonical polynomial from arbitrary (coefficient, monomial)
    /// pairs: duplicates are combined and zeros dropped.
    pub fn from_terms(field: FieldCtx, vars: &VarCtx, raw: Vec<(u64, Monomial)>) -> Self {
        let mut acc: HashMap<Monomial, u64> = HashMap::with_capacity(raw.len());
        for (c, m) in raw {
            debug_assert_eq!(m.arity(), vars.len());
            let c = field.reduce(c);
            if c == 0 {
                continue;
            }
            let slot = acc.entry(m).or_insert(0);
            *slot = field.add(*slot, c);
        }
        Self::from_map(field, vars, acc)
    }

    fn from_map(field: FieldCtx, vars: &VarCtx, acc: HashMap<Monomial, u64>) -> Self {
        let mut terms: Vec<Term> = acc
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(mono, coeff)| Term { coeff, mono })
            .collect();
        terms.sort_unstable_by(|a, b| b.mono.grevlex_cmp(&a.mono));
        MultiPoly {
            field,
            vars: vars.clone(),
            terms,
        }
    }

    /// Wraps terms already sorted in descending grevlex order with nonzero,
    /// reduced coefficients.
    pub(crate) fn from_sorted_terms(field: FieldCtx, vars: &VarCtx, terms: Vec<Term>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| w[0].mono.grevlex_cmp(&w[1].mono) == Ordering::Greater));
        MultiPoly {
            field,
            vars: vars.clone(),
            terms,
        }
    }

    pub fn field(&self) -> FieldCtx {
        self.field
    }

    pub fn vars(&self) -> &VarCtx {
        &self.vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.mono.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.iter().map(|t| t.mono.degree()).max()
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn coefficient(&self, mono: &Monomial) -> u64 {
        self.terms
            .iter()
            .find(|t| &t.mono == mono)
            .map_or(0, |t| t.coeff)
    }

    pub fn constant_term(&self) -> u64 {
        self.coefficient(&Monomial::one(self.vars.len()))
    }

    fn same_ctx(&self, other: &MultiPoly) -> Result<()> {
        if self.field != other.field || self.vars != other.vars {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_ctx(other)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_ctx(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &MultiPoly, negate: bool) -> MultiPoly {
        let f = self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let oc = |c: u64| if negate { f.neg(c) } else { c };
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.mono.grevlex_cmp(&b.mono) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term {
                        coeff: oc(b.coeff),
                        mono: b.mono.clone(),
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(a.coeff, oc(b.coeff));
                    if c != 0 {
                        out.push(Term {
                            coeff: c,
                            mono: a.mono.clone(),
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|t| Term {
            coeff: oc(t.coeff),
            mono: t.mono.clone(),
        }));
        MultiPoly::from_sorted_terms(f, &self.vars, out)
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(self.field.neg(1))
    }

    pub fn scale(&self, c: u64) -> MultiPoly {
        let c = self.field.reduce(c);
        if c == 0 {
            return MultiPoly::zero(self.field, &self.vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: self.field.mul(t.coeff, c),
                mono: t.mono.clone(),
            })
            .collect();
        MultiPoly::from_sorted_terms(self.field, &self.vars, terms)
    }

    /// Multiplies by `c * mono`.
    pub fn mul_term(&self, c: u64, mono: &Monomial) -> MultiPoly {
        let c = self.field.reduce(c);
        if c == 0 {
            return MultiPoly::zero(self.field, &self.vars);
        }
        // multiplying by a monomial preserves any monomial order
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                coeff: self.field.mul(t.coeff, c),
                mono: t.mono.mul(mono),
            })
            .collect();
        MultiPoly::from_sorted_terms(self.field, &self.vars, terms)
    }

    fn max_exponents(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.vars.len()];
        for t in &self.terms {
            for (o, e) in out.iter_mut().zip(t.mono.exponents()) {
                *o = (*o).max(*e);
            }
        }
        out
    }

    fn check_product_bounds(&self, other: &MultiPoly) -> Result<()> {
        let a = self.max_exponents();
        let b = other.max_exponents();
        for (x, y) in a.iter().zip(&b) {
            x.checked_add(*y).ok_or(Error::ExponentOverflow)?;
        }
        Ok(())
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_ctx(other)?;
        self.check_product_bounds(other)?;
        Ok(self.mul_filtered(other, |_| true))
    }

    /// Product with every term having some `vars` exponent `>= q` discarded,
    /// i.e. the product computed modulo the monomial ideal (x_i^q : i in vars).
    pub fn mul_truncated(&self, other: &MultiPoly, vars: &[usize], q: u64) -> Result<MultiPoly> {
        self.same_ctx(other)?;
        self.check_product_bounds(other)?;
        Ok(self.mul_filtered(other, |m| {
            vars.iter().all(|&i| (m.exponents()[i] as u64) < q)
        }))
    }

    fn mul_filtered(&self, other: &MultiPoly, keep: impl Fn(&Monomial) -> bool) -> MultiPoly {
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero(f, &self.vars);
        }
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.terms.len() == 1 {
            let t = &small.terms[0];
            let mut out = large.mul_term(t.coeff, &t.mono);
            out.terms.retain(|t| keep(&t.mono));
            return out;
        }
        let mut acc: HashMap<Monomial, u64> =
            HashMap::with_capacity(small.terms.len() * large.terms.len() / 2 + 1);
        for a in &small.terms {
            for b in &large.terms {
                let m = a.mono.mul(&b.mono);
                if !keep(&m) {
                    continue;
                }
                let slot = acc.entry(m).or_insert(0);
                *slot = f.add(*slot, f.mul(a.coeff, b.coeff));
            }
        }
        MultiPoly::from_map(f, &self.vars, acc)
    }

    /// Replaces every exponent `e` by `e * factor`. For `factor = p^k` this is
    /// the `p^k`-th power map, since F_p coefficients are Frobenius-fixed.
    fn frobenius(&self, factor: u64) -> Result<MultiPoly> {
        let factor = u32::try_from(factor).map_err(|_| Error::ExponentOverflow)?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let exps = t
                    .mono
                    .exponents()
                    .iter()
                    .map(|e| e.checked_mul(factor))
                    .collect::<Option<Vec<_>>>()
                    .ok_or(Error::ExponentOverflow)?;
                Ok(Term {
                    coeff: t.coeff,
                    mono: Monomial(exps),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiPoly::from_sorted_terms(self.field, &self.vars, terms))
    }

    fn check_pow_bounds(&self, n: u64) -> Result<()> {
        for e in self.max_exponents() {
            (e as u64)
                .checked_mul(n)
                .filter(|&v| v <= u32::MAX as u64)
                .ok_or(Error::ExponentOverflow)?;
        }
        Ok(())
    }

    /// `self^n`. The `p`-power part of `n` is applied by exponent scaling,
    /// the rest by binary exponentiation.
    pub fn pow(&self, n: u64) -> Result<MultiPoly> {
        self.check_pow_bounds(n)?;
        let (m, pk) = split_p_power(n, self.field.p());
        let base = self.pow_binary(m, &|a, b| a.mul_filtered(b, |_| true));
        if pk == 1 {
            Ok(base)
        } else {
            base.frobenius(pk)
        }
    }

    /// `self^n` modulo (x_i^q : i in vars).
    pub fn pow_truncated(&self, n: u64, vars: &[usize], q: u64) -> Result<MultiPoly> {
        self.check_pow_bounds(n)?;
        let keep = |m: &Monomial| vars.iter().all(|&i| (m.exponents()[i] as u64) < q);
        let (m, pk) = split_p_power(n, self.field.p());
        let base = self
            .truncate_mod_bracket(vars, q)
            .pow_binary(m, &|a, b| a.mul_filtered(b, keep));
        if pk == 1 {
            Ok(base)
        } else {
            Ok(base
                .truncate_mod_bracket(vars, q.div_ceil(pk))
                .frobenius(pk)?
                .truncate_mod_bracket(vars, q))
        }
    }

    fn pow_binary(
        &self,
        mut n: u64,
        mul: &dyn Fn(&MultiPoly, &MultiPoly) -> MultiPoly,
    ) -> MultiPoly {
        let mut acc = MultiPoly::one(self.field, &self.vars);
        let mut base = self.clone();
        let mut first = true;
        while n > 0 {
            if n & 1 == 1 {
                acc = if first {
                    base.clone()
                } else {
                    mul(&acc, &base)
                };
                first = false;
            }
            n >>= 1;
            if n > 0 {
                base = mul(&base, &base);
            }
        }
        acc
    }

    /// Terms whose exponents on the listed variables match `partial` exactly,
    /// with those exponents removed.
    pub fn coeff_of(&self, partial: &[(usize, u32)]) -> MultiPoly {
        let terms: Vec<(u64, Monomial)> = self
            .terms
            .iter()
            .filter(|t| partial.iter().all(|&(i, e)| t.mono.exponents()[i] == e))
            .map(|t| {
                let mut exps = t.mono.exponents().to_vec();
                for &(i, _) in partial {
                    exps[i] = 0;
                }
                (t.coeff, Monomial(exps))
            })
            .collect();
        MultiPoly::from_terms(self.field, &self.vars, terms)
    }

    /// Drops every term with some listed-variable exponent `>= q`.
    pub fn truncate_mod_bracket(&self, vars: &[usize], q: u64) -> MultiPoly {
        let terms = self
            .terms
            .iter()
            .filter(|t| vars.iter().all(|&i| (t.mono.exponents()[i] as u64) < q))
            .cloned()
            .collect();
        MultiPoly::from_sorted_terms(self.field, &self.vars, terms)
    }

    pub fn eval(&self, point: &[u64]) -> Result<u64> {
        if point.len() != self.vars.len() {
            return Err(Error::ArityMismatch {
                expected: self.vars.len(),
                got: point.len(),
            });
        }
        let f = self.field;
        let mut acc = 0;
        for t in &self.terms {
            let mut v = t.coeff;
            for (x, &e) in point.iter().zip(t.mono.exponents()) {
                if e > 0 {
                    v = f.mul(v, f.pow(*x, e as u64));
                }
            }
            acc = f.add(acc, v);
        }
        Ok(acc)
    }

    /// Substitutes `images[i]` for the i-th variable. All images must share
    /// one target context.
    pub fn substitute(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        if images.len() != self.vars.len() {
            return Err(Error::ArityMismatch {
                expected: self.vars.len(),
                got: images.len(),
            });
        }
        let target = images[0].vars.clone();
        if images
            .iter()
            .any(|g| g.vars != target || g.field != self.field)
        {
            return Err(Error::ContextMismatch);
        }
        let mut powers: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|g| vec![MultiPoly::one(self.field, &target), g.clone()])
            .collect();
        let mut out = MultiPoly::zero(self.field, &target);
        for t in &self.terms {
            let mut v = MultiPoly::constant(self.field, &target, t.coeff);
            for (i, &e) in t.mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&images[i])?;
                    powers[i].push(next);
                }
                v = v.mul(&powers[i][e as usize])?;
            }
            out = out.add(&v)?;
        }
        Ok(out)
    }

    /// Applies `x_i -> x_i + shift[i]`.
    pub fn translate(&self, shift: &[u64]) -> Result<MultiPoly> {
        if shift.len() != self.vars.len() {
            return Err(Error::ArityMismatch {
                expected: self.vars.len(),
                got: shift.len(),
            });
        }
        if shift.iter().all(|&c| self.field.reduce(c) == 0) {
            return Ok(self.clone());
        }
        let images: Vec<MultiPoly> = (0..self.vars.len())
            .map(|i| {
                MultiPoly::var(self.field, &self.vars, i)
                    .add(&MultiPoly::constant(self.field, &self.vars, shift[i]))
                    .expect("same context")
            })
            .collect();
        self.substitute(&images)
    }

    /// Sets variable `i` to the constant `value`, keeping the context.
    pub fn specialize(&self, i: usize, value: u64) -> MultiPoly {
        let f = self.field;
        let raw = self
            .terms
            .iter()
            .map(|t| {
                let mut exps = t.mono.exponents().to_vec();
                let e = std::mem::take(&mut exps[i]);
                (f.mul(t.coeff, f.pow(value, e as u64)), Monomial(exps))
            })
            .collect();
        MultiPoly::from_terms(f, &self.vars, raw)
    }

    pub fn derivative(&self, i: usize) -> MultiPoly {
        let f = self.field;
        let raw = self
            .terms
            .iter()
            .filter(|t| t.mono.exponents()[i] > 0)
            .map(|t| {
                let mut exps = t.mono.exponents().to_vec();
                let e = exps[i];
                exps[i] -= 1;
                (f.mul(t.coeff, f.reduce(e as u64)), Monomial(exps))
            })
            .collect();
        MultiPoly::from_terms(f, &self.vars, raw)
    }

    /// Indices of variables occurring in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.iter().any(|t| t.mono.exponents()[i] > 0))
            .collect()
    }

    /// Re-expresses this polynomial in `target`, mapping variables by name.
    pub fn embed(&self, target: &VarCtx) -> Result<MultiPoly> {
        let map: Vec<Option<usize>> = self
            .vars
            .names()
            .iter()
            .map(|n| target.index_of(n))
            .collect();
        let mut raw = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in t.mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j =
                    map[i].ok_or_else(|| Error::UnknownVariable(self.vars.name(i).to_string()))?;
                exps[j] = e;
            }
            raw.push((t.coeff, Monomial(exps)));
        }
        Ok(MultiPoly::from_terms(self.field, target, raw))
    }

    /// The univariate polynomial in variable `i`, if no other variable occurs.
    pub fn to_univariate(&self, i: usize) -> Option<UniPoly> {
        let mut coeffs = Vec::new();
        for t in &self.terms {
            let exps = t.mono.exponents();
            if exps.iter().enumerate().any(|(j, &e)| j != i && e > 0) {
                return None;
            }
            let d = exps[i] as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, 0);
            }
            coeffs[d] = t.coeff;
        }
        Some(UniPoly::new(self.field, coeffs))
    }

    pub fn from_univariate(u: &UniPoly, vars: &VarCtx, i: usize) -> MultiPoly {
        let raw = u
            .coeffs()
            .iter()
            .enumerate()
            .map(|(d, &c)| (c, Monomial::var(vars.len(), i, d as u32)))
            .collect();
        MultiPoly::from_terms(u.field(), vars, raw)
    }

    /// Divides out the leading coefficient.
    pub fn monic(&self) -> MultiPoly {
        match self.terms.first() {
            Some(t) => self.scale(self.field.inv(t.coeff)),
            None => self.clone(),
        }
    }
}

/// Splits `n = m * p^k` with `p` not dividing `m`; returns `(m, p^k)`.
fn split_p_power(mut n: u64, p: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let mut pk = 1;
    while n.is_multiple_of(p) {
        n /= p;
        pk *= p;
    }
    (n, pk)
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str("+")?;
            }
            if t.mono.is_one() {
                write!(f, "{}", t.coeff)?;
            } else if t.coeff == 1 {
                f.write_str(&t.mono.display_in(&self.vars))?;
            } else {
                write!(f, "{}*{}", t.coeff, t.mono.display_in(&self.vars))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[F_{}]({})", self.field.p(), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse::parse_poly;

    fn ctx(p: u64, names: &str) -> (FieldCtx, VarCtx) {
        (
            FieldCtx::new(p).unwrap(),
            VarCtx::parse_list(names).unwrap(),
        )
    }

    fn poly(text: &str, f: FieldCtx, v: &VarCtx) -> MultiPoly {
        parse_poly(text, v, f).unwrap()
    }

    #[test]
    fn var_ctx_validation() {
        assert!(VarCtx::parse_list("x,y").is_ok());
        assert_eq!(
            VarCtx::parse_list("x,x").unwrap_err(),
            Error::DuplicateVar("x".into())
        );
        assert_eq!(
            VarCtx::parse_list("x,1y").unwrap_err(),
            Error::InvalidVarName("1y".into())
        );
        let v = VarCtx::parse_list("w,w_1").unwrap();
        let (ext, i) = v.with_fresh("w");
        assert_eq!(ext.name(i), "w_2");
    }

    #[test]
    fn grevlex_order() {
        // x > y > z; degree first, then reverse lexicographic tie break
        let xy = Monomial(vec![1, 1, 0]);
        let xz = Monomial(vec![1, 0, 1]);
        let y2 = Monomial(vec![0, 2, 0]);
        assert_eq!(xy.grevlex_cmp(&xz), Ordering::Greater);
        assert_eq!(y2.grevlex_cmp(&xz), Ordering::Greater);
        assert_eq!(Monomial(vec![3, 0, 0]).grevlex_cmp(&xy), Ordering::Greater);
    }

    #[test]
    fn multiplication_examples() {
        let (f, v) = ctx(5, "x,y");
        let p = poly("(x+y)*(x-y)", f, &v);
        assert_eq!(p.to_string(), "x^2+4*y^2");
        let z = MultiPoly::zero(f, &v);
        assert!(p.mul(&z).unwrap().is_zero());
        let (f2, v2) = ctx(2, "x,y");
        let s = poly("x+y", f2, &v2);
        assert_eq!(s.mul(&s).unwrap().to_string(), "x^2+y^2");
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let (f, v) = ctx(5, "x,y");
        let (_, w) = ctx(5, "x,z");
        let a = MultiPoly::var(f, &v, 0);
        let b = MultiPoly::var(f, &w, 0);
        assert_eq!(a.mul(&b).unwrap_err(), Error::ContextMismatch);
        let g = MultiPoly::var(FieldCtx::new(7).unwrap(), &v, 0);
        assert_eq!(a.add(&g).unwrap_err(), Error::ContextMismatch);
    }

    #[test]
    fn powers() {
        let (f, v) = ctx(3, "x,y");
        let s = poly("x+y", f, &v);
        assert_eq!(s.pow(3).unwrap().to_string(), "x^3+y^3");
        assert_eq!(s.pow(0).unwrap().to_string(), "1");
        let big = MultiPoly::monomial(f, &v, 1, Monomial(vec![u32::MAX / 2, 0]));
        assert_eq!(big.pow(3).unwrap_err(), Error::ExponentOverflow);
    }

    #[test]
    fn cone_square_coefficient() {
        // naive term-by-term expansion of a*a, read off the x^2y^2z^2 part
        let (f, v) = ctx(3, "x,y,z,t");
        let a = poly("z*y^2 - x*(x-z)*(x-t*z)", f, &v);
        let mut raw = Vec::new();
        for s in a.terms() {
            for u in a.terms() {
                raw.push((f.mul(s.coeff, u.coeff), s.mono.mul(&u.mono)));
            }
        }
        let naive = MultiPoly::from_terms(f, &v, raw);
        let sq = a.pow(2).unwrap();
        assert_eq!(sq, naive);
        let h = sq.coeff_of(&[(0, 2), (1, 2), (2, 2)]);
        assert_eq!(h.to_string(), "2*t+2");
    }

    #[test]
    fn coeff_of_examples() {
        let (f, v) = ctx(5, "x,y");
        let y = MultiPoly::var(f, &v, 1);
        assert_eq!(y.coeff_of(&[(0, 0)]), y);
        let x = MultiPoly::var(f, &v, 0);
        assert!(x.coeff_of(&[(0, 5)]).is_zero());
    }

    #[test]
    fn truncation() {
        let (f, v) = ctx(3, "x,y");
        let p = poly("x^3*y + x*y", f, &v);
        assert_eq!(p.truncate_mod_bracket(&[0], 3).to_string(), "x*y");
        assert!(MultiPoly::zero(f, &v)
            .truncate_mod_bracket(&[0], 3)
            .is_zero());
    }

    #[test]
    fn truncated_power_matches_full_power() {
        let (f, v) = ctx(3, "x,y,z,t");
        let a = poly("z*y^2 - x*(x-z)*(x-t*z)", f, &v);
        for n in [2u64, 3, 6, 8] {
            let full = a.pow(n).unwrap().truncate_mod_bracket(&[0, 1, 2], 9);
            let trunc = a.pow_truncated(n, &[0, 1, 2], 9).unwrap();
            assert_eq!(full, trunc, "n = {n}");
        }
    }

    #[test]
    fn evaluation() {
        let (f, v) = ctx(3, "t");
        assert_eq!(poly("t+1", f, &v).eval(&[2]).unwrap(), 0);
        let (f5, v5) = ctx(5, "t");
        assert_eq!(poly("t^2+4*t+1", f5, &v5).eval(&[2]).unwrap(), 3);
        assert_eq!(poly("7", f5, &v5).eval(&[4]).unwrap(), 2);
        assert_eq!(
            poly("t", f5, &v5).eval(&[1, 2]).unwrap_err(),
            Error::ArityMismatch {
                expected: 1,
                got: 2
            }
        );
    }

    #[test]
    fn translation_round_trip() {
        let (f, v) = ctx(3, "x,y,z,t");
        let a = poly("z*y^2 - x*(x-z)*(x-t*z)", f, &v);
        let shifted = a.translate(&[0, 0, 0, 1]).unwrap();
        let back = shifted.translate(&[0, 0, 0, 2]).unwrap();
        assert_eq!(back, a);
        assert_eq!(a.translate(&[0, 0, 0, 0]).unwrap(), a);
    }

    #[test]
    fn derivative_and_specialize() {
        let (f, v) = ctx(3, "x,t");
        let p = poly("x^3 + t*x^2", f, &v);
        assert_eq!(p.derivative(0).to_string(), "2*x*t");
        assert_eq!(p.specialize(1, 2).to_string(), "x^3+2*x^2");
    }
}
