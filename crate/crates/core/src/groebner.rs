//! Ideal arithmetic over F_p[x_1..x_n]: Buchberger bases, normal forms,
//! intersections and colon ideals, Frobenius bracket powers, and the
//! complete-intersection colon `J^[q] : J = J^[q] + (g_e)`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::arith::{FieldCtx, Monomial, MultiPoly, Term, VarCtx};
use crate::error::{Error, Result};

/// Largest Frobenius power `q = p^e` the crate will work with.
pub const Q_GUARD: u64 = 1 << 20;

pub const DEFAULT_DEGREE_CAP: u64 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Grevlex,
    Lex,
}

/// A monomial order together with a variable priority list; `perm[0]` is
/// the largest variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    perm: Vec<usize>,
}

impl MonomialOrder {
    pub fn grevlex(n: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::Grevlex,
            perm: (0..n).collect(),
        }
    }

    pub fn lex(n: usize) -> Self {
        MonomialOrder {
            kind: OrderKind::Lex,
            perm: (0..n).collect(),
        }
    }

    pub fn with_perm(kind: OrderKind, perm: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &i in &perm {
            if i >= perm.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Internal(format!(
                    "variable permutation {perm:?} is not a bijection"
                )));
            }
        }
        Ok(MonomialOrder { kind, perm })
    }

    /// Lex order with the listed variables first, remaining ones after in
    /// context order.
    pub fn elimination(n: usize, first: &[usize]) -> Result<Self> {
        let mut perm = first.to_vec();
        perm.extend((0..n).filter(|i| !first.contains(i)));
        Self::with_perm(OrderKind::Lex, perm)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn arity(&self) -> usize {
        self.perm.len()
    }

    pub fn tag(&self) -> &'static str {
        match self.kind {
            OrderKind::Grevlex => "grevlex",
            OrderKind::Lex => "lex",
        }
    }

    fn is_identity_grevlex(&self) -> bool {
        self.kind == OrderKind::Grevlex && self.perm.iter().enumerate().all(|(k, &i)| k == i)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (a.exponents(), b.exponents());
        match self.kind {
            OrderKind::Lex => {
                for &i in &self.perm {
                    match ea[i].cmp(&eb[i]) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            }
            OrderKind::Grevlex => {
                match a.degree().cmp(&b.degree()) {
                    Ordering::Equal => {}
                    ord => return ord,
                }
                for &i in self.perm.iter().rev() {
                    if ea[i] != eb[i] {
                        return eb[i].cmp(&ea[i]);
                    }
                }
                Ordering::Equal
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbOptions {
    /// Largest allowed total degree of an S-pair lcm.
    pub degree_cap: u64,
}

impl Default for GbOptions {
    fn default() -> Self {
        GbOptions {
            degree_cap: DEFAULT_DEGREE_CAP,
        }
    }
}

// ---------------------------------------------------------------------------
// Order-aware term lists

/// Terms sorted descending in some `MonomialOrder`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct OPoly(Vec<Term>);

impl OPoly {
    fn from_multi(f: &MultiPoly, order: &MonomialOrder) -> Self {
        let mut terms = f.terms().to_vec();
        if !order.is_identity_grevlex() {
            terms.sort_unstable_by(|a, b| order.cmp(&b.mono, &a.mono));
        }
        OPoly(terms)
    }

    fn to_multi(&self, field: FieldCtx, vars: &VarCtx) -> MultiPoly {
        MultiPoly::from_terms(
            field,
            vars,
            self.0.iter().map(|t| (t.coeff, t.mono.clone())).collect(),
        )
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn lt(&self) -> &Term {
        &self.0[0]
    }

    fn monic(&self, field: FieldCtx) -> (OPoly, u64) {
        let inv = field.inv(self.lt().coeff);
        (self.scale(field, inv), inv)
    }

    fn scale(&self, field: FieldCtx, c: u64) -> OPoly {
        OPoly(
            self.0
                .iter()
                .map(|t| Term {
                    coeff: field.mul(t.coeff, c),
                    mono: t.mono.clone(),
                })
                .filter(|t| t.coeff != 0)
                .collect(),
        )
    }

    /// `self - c * m * g`.
    fn sub_mul(
        &self,
        field: FieldCtx,
        order: &MonomialOrder,
        c: u64,
        m: &Monomial,
        g: &OPoly,
    ) -> OPoly {
        let mut out = Vec::with_capacity(self.0.len() + g.0.len());
        let mut rhs = g.0.iter().map(|t| Term {
            coeff: field.neg(field.mul(c, t.coeff)),
            mono: t.mono.mul(m),
        });
        let mut lhs = self.0.iter().cloned();
        let (mut a, mut b) = (lhs.next(), rhs.next());
        loop {
            match (a.take(), b.take()) {
                (None, None) => break,
                (Some(x), None) => {
                    out.push(x);
                    out.extend(lhs.by_ref());
                    break;
                }
                (None, Some(y)) => {
                    if y.coeff != 0 {
                        out.push(y);
                    }
                    out.extend(rhs.by_ref().filter(|t| t.coeff != 0));
                    break;
                }
                (Some(x), Some(y)) => match order.cmp(&x.mono, &y.mono) {
                    Ordering::Greater => {
                        out.push(x);
                        a = lhs.next();
                        b = Some(y);
                    }
                    Ordering::Less => {
                        if y.coeff != 0 {
                            out.push(y);
                        }
                        a = Some(x);
                        b = rhs.next();
                    }
                    Ordering::Equal => {
                        let s = field.add(x.coeff, y.coeff);
                        if s != 0 {
                            out.push(Term {
                                coeff: s,
                                mono: x.mono,
                            });
                        }
                        a = lhs.next();
                        b = rhs.next();
                    }
                },
            }
        }
        OPoly(out)
    }

    fn add(&self, field: FieldCtx, order: &MonomialOrder, other: &OPoly) -> OPoly {
        self.sub_mul(
            field,
            order,
            field.neg(1),
            &Monomial::one(order.arity()),
            other,
        )
    }

    fn mul(&self, field: FieldCtx, order: &MonomialOrder, other: &OPoly) -> OPoly {
        let mut acc = OPoly(Vec::new());
        for t in &other.0 {
            acc = acc.sub_mul(field, order, field.neg(t.coeff), &t.mono, self);
        }
        acc
    }
}

/// A basis element with optional cofactors expressing it in terms of the
/// input generators.
#[derive(Debug, Clone)]
struct GbElem {
    poly: OPoly,
    cof: Option<Vec<OPoly>>,
}

struct Reducer<'a> {
    field: FieldCtx,
    order: &'a MonomialOrder,
}

impl Reducer<'_> {
    /// Full reduction of `f` by `basis`. When `quotients` is provided the
    /// multipliers of each basis element are accumulated into it.
    fn reduce(&self, f: &OPoly, basis: &[GbElem], mut quotients: Option<&mut Vec<OPoly>>) -> OPoly {
        let field = self.field;
        let mut p = f.clone();
        let mut rem = Vec::new();
        while !p.is_zero() {
            let lt = p.lt().clone();
            let hit = basis
                .iter()
                .position(|g| g.poly.lt().mono.divides(&lt.mono));
            match hit {
                Some(k) => {
                    let g = &basis[k].poly;
                    let c = field.mul(lt.coeff, field.inv(g.lt().coeff));
                    let m = g.lt().mono.quotient_of(&lt.mono);
                    p = p.sub_mul(field, self.order, c, &m, g);
                    if let Some(q) = quotients.as_deref_mut() {
                        let term = OPoly(vec![Term { coeff: c, mono: m }]);
                        q[k] = q[k].add(field, self.order, &term);
                    }
                }
                None => {
                    rem.push(lt);
                    p.0.remove(0);
                }
            }
        }
        OPoly(rem)
    }

    fn s_poly(&self, a: &GbElem, b: &GbElem) -> GbElem {
        let field = self.field;
        let (la, lb) = (a.poly.lt(), b.poly.lt());
        let l = la.mono.lcm(&lb.mono);
        let ma = la.mono.quotient_of(&l);
        let mb = lb.mono.quotient_of(&l);
        let ca = field.inv(la.coeff);
        let cb = field.inv(lb.coeff);
        let zero = OPoly(Vec::new());
        let sa = zero.sub_mul(field, self.order, field.neg(ca), &ma, &a.poly);
        let poly = sa.sub_mul(field, self.order, cb, &mb, &b.poly);
        let cof = match (&a.cof, &b.cof) {
            (Some(x), Some(y)) => Some(
                x.iter()
                    .zip(y)
                    .map(|(u, v)| {
                        zero.sub_mul(field, self.order, field.neg(ca), &ma, u)
                            .sub_mul(field, self.order, cb, &mb, v)
                    })
                    .collect(),
            ),
            _ => None,
        };
        GbElem { poly, cof }
    }

    /// `elem - sum q_k * basis_k`, given quotients from `reduce`.
    fn apply_quotients(
        &self,
        elem_cof: &[OPoly],
        quotients: &[OPoly],
        basis: &[GbElem],
    ) -> Vec<OPoly> {
        let mut out = elem_cof.to_vec();
        for (q, g) in quotients.iter().zip(basis) {
            if q.is_zero() {
                continue;
            }
            let gc = g.cof.as_ref().expect("tracked basis");
            for (o, c) in out.iter_mut().zip(gc) {
                let prod = q.mul(self.field, self.order, c);
                *o = o.sub_mul(
                    self.field,
                    self.order,
                    1,
                    &Monomial::one(self.order.arity()),
                    &prod,
                );
            }
        }
        out
    }
}

/// Buchberger's algorithm with the normal selection strategy and both
/// Buchberger criteria. Returns a reduced monic basis sorted by ascending
/// leading monomial.
fn buchberger_core(
    field: FieldCtx,
    gens: &[OPoly],
    order: &MonomialOrder,
    opts: &GbOptions,
    track: bool,
) -> Result<Vec<GbElem>> {
    let red = Reducer { field, order };
    let r = gens.len();
    let mut basis: Vec<GbElem> = Vec::new();
    let mut pairs: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();

    let unit = |k: usize| -> Vec<OPoly> {
        (0..r)
            .map(|j| {
                if j == k {
                    OPoly(vec![Term {
                        coeff: 1,
                        mono: Monomial::one(order.arity()),
                    }])
                } else {
                    OPoly(Vec::new())
                }
            })
            .collect()
    };

    let push =
        |basis: &mut Vec<GbElem>, pairs: &mut BTreeSet<(u64, usize, usize)>, elem: GbElem| {
            let (poly, inv) = elem.poly.monic(field);
            let cof = elem
                .cof
                .map(|c| c.iter().map(|x| x.scale(field, inv)).collect());
            let j = basis.len();
            for (i, g) in basis.iter().enumerate() {
                let d = g.poly.lt().mono.lcm(&poly.lt().mono).degree();
                pairs.insert((d, i, j));
            }
            basis.push(GbElem { poly, cof });
        };

    for (k, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let elem = GbElem {
            poly: g.clone(),
            cof: track.then(|| unit(k)),
        };
        push(&mut basis, &mut pairs, elem);
    }

    while let Some((deg, i, j)) = pairs.pop_first() {
        done.insert((i, j));
        let (li, lj) = (&basis[i].poly.lt().mono, &basis[j].poly.lt().mono);
        if li.is_coprime(lj) {
            continue;
        }
        let l = li.lcm(lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].poly.lt().mono.divides(&l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        if deg > opts.degree_cap {
            return Err(Error::DegreeCap {
                degree: deg,
                cap: opts.degree_cap,
            });
        }
        let s = red.s_poly(&basis[i], &basis[j]);
        let mut quots = track.then(|| vec![OPoly(Vec::new()); basis.len()]);
        let rem = red.reduce(&s.poly, &basis, quots.as_mut());
        if rem.is_zero() {
            continue;
        }
        let cof = match (&s.cof, &quots) {
            (Some(c), Some(q)) => Some(red.apply_quotients(c, q, &basis)),
            _ => None,
        };
        push(&mut basis, &mut pairs, GbElem { poly: rem, cof });
    }

    // minimalize
    let mut keep: Vec<GbElem> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let lt = &g.poly.lt().mono;
        let redundant = basis.iter().enumerate().any(|(m, h)| {
            m != k && h.poly.lt().mono.divides(lt) && (h.poly.lt().mono != *lt || m < k)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    // interreduce
    let mut reduced = Vec::with_capacity(keep.len());
    for k in 0..keep.len() {
        let others: Vec<GbElem> = keep
            .iter()
            .enumerate()
            .filter(|(m, _)| *m != k)
            .map(|(_, g)| g.clone())
            .collect();
        let g = &keep[k];
        let lt = g.poly.lt().clone();
        let tail = OPoly(g.poly.0[1..].to_vec());
        let mut quots = track.then(|| vec![OPoly(Vec::new()); others.len()]);
        let tail_red = red.reduce(&tail, &others, quots.as_mut());
        let mut terms = vec![lt];
        terms.extend(tail_red.0);
        let cof = match (&g.cof, &quots) {
            (Some(c), Some(q)) => Some(red.apply_quotients(c, q, &others)),
            _ => None,
        };
        reduced.push(GbElem {
            poly: OPoly(terms),
            cof,
        });
    }
    reduced.sort_by(|a, b| order.cmp(&a.poly.lt().mono, &b.poly.lt().mono));
    Ok(reduced)
}

// ---------------------------------------------------------------------------
// Ideals

#[derive(Clone, PartialEq, Eq)]
struct GbCache {
    order: MonomialOrder,
    basis: Vec<MultiPoly>,
}

/// An ideal given by generators, optionally carrying a reduced Gröbner
/// basis for one order.
#[derive(Clone)]
pub struct Ideal {
    field: FieldCtx,
    vars: VarCtx,
    gens: Vec<MultiPoly>,
    gb: Option<Arc<GbCache>>,
}

impl Ideal {
    pub fn new(field: FieldCtx, vars: &VarCtx, gens: Vec<MultiPoly>) -> Result<Self> {
        for g in &gens {
            if g.field() != field || g.vars() != vars {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(Ideal {
            field,
            vars: vars.clone(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            gb: None,
        })
    }

    /// Builds an ideal from nonempty generators sharing one context.
    pub fn from_gens(gens: Vec<MultiPoly>) -> Result<Self> {
        let first = gens.first().ok_or(Error::ZeroIdeal)?;
        let (field, vars) = (first.field(), first.vars().clone());
        Self::new(field, &vars, gens)
    }

    /// The ideal generated by the listed variables.
    pub fn of_vars(field: FieldCtx, vars: &VarCtx, idx: &[usize]) -> Self {
        let gens = idx
            .iter()
            .map(|&i| MultiPoly::var(field, vars, i))
            .collect();
        Ideal::new(field, vars, gens).expect("same context")
    }

    pub fn field(&self) -> FieldCtx {
        self.field
    }

    pub fn vars(&self) -> &VarCtx {
        &self.vars
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// The cached reduced basis and its order, if any.
    pub fn cached_basis(&self) -> Option<(&MonomialOrder, &[MultiPoly])> {
        self.gb.as_deref().map(|c| (&c.order, c.basis.as_slice()))
    }

    /// Indices of the generators when every generator is a distinct
    /// variable, in generator order.
    pub fn variable_generators(&self) -> Option<Vec<usize>> {
        let mut out = Vec::new();
        for g in &self.gens {
            if g.num_terms() != 1 {
                return None;
            }
            let t = g.leading_term()?;
            if t.coeff != 1 || t.mono.degree() != 1 {
                return None;
            }
            let i = t.mono.exponents().iter().position(|&e| e == 1)?;
            if out.contains(&i) {
                return None;
            }
            out.push(i);
        }
        Some(out)
    }

    fn check_poly(&self, f: &MultiPoly) -> Result<()> {
        if f.field() != self.field || f.vars() != &self.vars {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    fn basis_for(&self, order: &MonomialOrder, opts: &GbOptions) -> Result<Vec<MultiPoly>> {
        if let Some(c) = &self.gb {
            if &c.order == order {
                return Ok(c.basis.clone());
            }
        }
        groebner_basis(self, order, opts)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(self.field, &self.vars, gens)
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "Ideal({})", gens.join(", "))
    }
}

fn check_order(ideal: &Ideal, order: &MonomialOrder) -> Result<()> {
    if order.arity() != ideal.vars.len() {
        return Err(Error::ArityMismatch {
            expected: ideal.vars.len(),
            got: order.arity(),
        });
    }
    Ok(())
}

/// Reduced monic Gröbner basis of `ideal` for `order`.
pub fn groebner_basis(
    ideal: &Ideal,
    order: &MonomialOrder,
    opts: &GbOptions,
) -> Result<Vec<MultiPoly>> {
    check_order(ideal, order)?;
    let gens: Vec<OPoly> = ideal
        .gens
        .iter()
        .map(|g| OPoly::from_multi(g, order))
        .collect();
    let basis = buchberger_core(ideal.field, &gens, order, opts, false)?;
    Ok(basis
        .iter()
        .map(|g| g.poly.to_multi(ideal.field, &ideal.vars))
        .collect())
}

/// Returns `ideal` with its reduced Gröbner basis for `order` cached.
pub fn buchberger(ideal: &Ideal, order: &MonomialOrder, opts: &GbOptions) -> Result<Ideal> {
    let basis = groebner_basis(ideal, order, opts)?;
    let mut out = ideal.clone();
    out.gb = Some(Arc::new(GbCache {
        order: order.clone(),
        basis,
    }));
    Ok(out)
}

/// True when every S-polynomial of `basis` reduces to zero modulo `basis`.
pub fn verify_groebner(basis: &[MultiPoly], order: &MonomialOrder) -> bool {
    let Some(first) = basis.first() else {
        return true;
    };
    let field = first.field();
    let red = Reducer { field, order };
    let elems: Vec<GbElem> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| GbElem {
            poly: OPoly::from_multi(g, order),
            cof: None,
        })
        .collect();
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            let s = red.s_poly(&elems[i], &elems[j]);
            if !red.reduce(&s.poly, &elems, None).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Remainder of `f` on division by the reduced basis of `ideal` for `order`.
pub fn normal_form(
    f: &MultiPoly,
    ideal: &Ideal,
    order: &MonomialOrder,
    opts: &GbOptions,
) -> Result<MultiPoly> {
    ideal.check_poly(f)?;
    check_order(ideal, order)?;
    let basis = ideal.basis_for(order, opts)?;
    let elems: Vec<GbElem> = basis
        .iter()
        .map(|g| GbElem {
            poly: OPoly::from_multi(g, order),
            cof: None,
        })
        .collect();
    let red = Reducer {
        field: ideal.field,
        order,
    };
    Ok(red
        .reduce(&OPoly::from_multi(f, order), &elems, None)
        .to_multi(ideal.field, &ideal.vars))
}

pub fn member(f: &MultiPoly, ideal: &Ideal, opts: &GbOptions) -> Result<bool> {
    let order = MonomialOrder::grevlex(ideal.vars.len());
    Ok(normal_form(f, ideal, &order, opts)?.is_zero())
}

/// `a ⊆ b`, by membership of the generators of `a`.
pub fn ideal_contains(b: &Ideal, a: &Ideal, opts: &GbOptions) -> Result<bool> {
    let order = MonomialOrder::grevlex(b.vars.len());
    let b = if b.gb.as_deref().is_some_and(|c| c.order == order) {
        b.clone()
    } else {
        buchberger(b, &order, opts)?
    };
    for g in &a.gens {
        if !normal_form(g, &b, &order, opts)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equality of ideals by mutual generator membership.
pub fn ideals_equal(a: &Ideal, b: &Ideal, opts: &GbOptions) -> Result<bool> {
    Ok(ideal_contains(a, b, opts)? && ideal_contains(b, a, opts)?)
}

/// Checks that `q` is a power of p within the global guard.
pub fn check_q(field: FieldCtx, q: u64) -> Result<u32> {
    if q > Q_GUARD {
        return Err(Error::QGuard { q, limit: Q_GUARD });
    }
    field.log_p(q).ok_or(Error::NotPowerOfP { q, p: field.p() })
}

/// The Frobenius bracket power `I^[q] = (g^q : g in gens(I))`.
pub fn bracket_power(ideal: &Ideal, q: u64) -> Result<Ideal> {
    check_q(ideal.field, q)?;
    let gens = ideal
        .gens
        .iter()
        .map(|g| g.pow(q))
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(ideal.field, &ideal.vars, gens)
}

/// Multivariate exact division; `None` when `d` does not divide `f`.
pub fn divide_exact(f: &MultiPoly, d: &MultiPoly) -> Option<MultiPoly> {
    let order = MonomialOrder::grevlex(f.vars().len());
    let field = f.field();
    let red = Reducer {
        field,
        order: &order,
    };
    let elem = GbElem {
        poly: OPoly::from_multi(d, &order),
        cof: None,
    };
    if elem.poly.is_zero() {
        return None;
    }
    let mut q = vec![OPoly(Vec::new())];
    let rem = red.reduce(
        &OPoly::from_multi(f, &order),
        std::slice::from_ref(&elem),
        Some(&mut q),
    );
    rem.is_zero().then(|| q[0].to_multi(field, f.vars()))
}

/// `a ∩ b` via elimination of an auxiliary variable `w` from
/// `w*a + (1-w)*b`.
pub fn intersect(a: &Ideal, b: &Ideal, opts: &GbOptions) -> Result<Ideal> {
    if a.field != b.field || a.vars != b.vars {
        return Err(Error::ContextMismatch);
    }
    if a.is_zero() || b.is_zero() {
        return Ideal::new(a.field, &a.vars, Vec::new());
    }
    let (ext, w) = a.vars.with_fresh("w");
    let field = a.field;
    let wv = MultiPoly::var(field, &ext, w);
    let one_minus_w = MultiPoly::one(field, &ext).sub(&wv)?;
    let mut gens = Vec::new();
    for g in &a.gens {
        gens.push(g.embed(&ext)?.mul(&wv)?);
    }
    for g in &b.gens {
        gens.push(g.embed(&ext)?.mul(&one_minus_w)?);
    }
    let order = MonomialOrder::elimination(ext.len(), &[w])?;
    let big = Ideal::new(field, &ext, gens)?;
    let basis = groebner_basis(&big, &order, opts)?;
    let kept = basis
        .into_iter()
        .filter(|g| g.terms().iter().all(|t| t.mono.exponents()[w] == 0))
        .map(|g| g.embed(&a.vars))
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(field, &a.vars, kept)
}

/// `(I : f)` as `(I ∩ (f)) / f`.
pub fn colon_principal(ideal: &Ideal, f: &MultiPoly, opts: &GbOptions) -> Result<Ideal> {
    ideal.check_poly(f)?;
    if f.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let principal = Ideal::new(ideal.field, &ideal.vars, vec![f.clone()])?;
    let inter = intersect(ideal, &principal, opts)?;
    let gens = inter
        .gens
        .iter()
        .map(|g| {
            divide_exact(g, f)
                .ok_or_else(|| Error::Internal("intersection element not divisible by f".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(ideal.field, &ideal.vars, gens)
}

/// `(I : J) = {f : f J ⊆ I}`, returned with its reduced basis for `order`
/// as generators and cached.
pub fn colon(ideal: &Ideal, by: &Ideal, order: &MonomialOrder, opts: &GbOptions) -> Result<Ideal> {
    if ideal.field != by.field || ideal.vars != by.vars {
        return Err(Error::ContextMismatch);
    }
    if by.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let mut acc: Option<Ideal> = None;
    for g in &by.gens {
        let part = colon_principal(ideal, g, opts)?;
        acc = Some(match acc {
            None => part,
            Some(prev) => intersect(&prev, &part, opts)?,
        });
    }
    let result = acc.expect("nonempty generator list");
    let basis = groebner_basis(&result, order, opts)?;
    let mut out = Ideal::new(ideal.field, &ideal.vars, basis.clone())?;
    out.gb = Some(Arc::new(GbCache {
        order: order.clone(),
        basis,
    }));

    // I ⊆ (I : J) and (I : J)·J ⊆ I
    if !ideal_contains(&out, ideal, opts)? {
        return Err(Error::Internal("colon does not contain I".into()));
    }
    let ib = buchberger(ideal, &MonomialOrder::grevlex(ideal.vars.len()), opts)?;
    for c in out.gens() {
        for g in by.gens() {
            if !member(&c.mul(g)?, &ib, opts)? {
                return Err(Error::Internal("colon element fails f*J ⊆ I".into()));
            }
        }
    }
    Ok(out)
}

/// Output of the complete-intersection colon shortcut.
#[derive(Debug, Clone)]
pub struct CiColon {
    /// `J^[q] + (g_e)`.
    pub ideal: Ideal,
    /// `(g_1 ... g_r)^(q-1)`.
    pub g_e: MultiPoly,
    /// Whether the regular-sequence hypothesis was verified (distinct
    /// variable generators) rather than assumed.
    pub verified_ci: bool,
}

/// `J^[q] : J = J^[q] + ((g_1···g_r)^(q-1))` for a complete intersection
/// `J = (g_1, ..., g_r)`. The caller asserts the generators form a regular
/// sequence; this is checked only when they are distinct variables.
pub fn ci_colon_shortcut(j: &Ideal, q: u64) -> Result<CiColon> {
    check_q(j.field, q)?;
    if j.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let product = j
        .gens
        .iter()
        .try_fold(MultiPoly::one(j.field, &j.vars), |acc, g| acc.mul(g))?;
    let g_e = product.pow(q - 1)?;
    let bracket = bracket_power(j, q)?;
    let mut gens = bracket.gens.clone();
    gens.push(g_e.clone());
    Ok(CiColon {
        ideal: Ideal::new(j.field, &j.vars, gens)?,
        g_e,
        verified_ci: j.variable_generators().is_some(),
    })
}

/// Division of `f` by the ideal generated by `divisors`, returning
/// cofactors `c_i` with `f - sum c_i * divisors_i` equal to the (unique)
/// normal form, which is also returned.
pub fn cofactor_division(
    f: &MultiPoly,
    divisors: &[MultiPoly],
    opts: &GbOptions,
) -> Result<(Vec<MultiPoly>, MultiPoly)> {
    let field = f.field();
    let vars = f.vars().clone();
    for d in divisors {
        if d.field() != field || d.vars() != &vars {
            return Err(Error::ContextMismatch);
        }
    }
    let order = MonomialOrder::grevlex(vars.len());
    let gens: Vec<OPoly> = divisors
        .iter()
        .map(|g| OPoly::from_multi(g, &order))
        .collect();
    let basis = buchberger_core(field, &gens, &order, opts, true)?;
    let red = Reducer {
        field,
        order: &order,
    };
    let mut quots = vec![OPoly(Vec::new()); basis.len()];
    let rem = red.reduce(&OPoly::from_multi(f, &order), &basis, Some(&mut quots));
    let mut out = vec![OPoly(Vec::new()); divisors.len()];
    for (q, g) in quots.iter().zip(&basis) {
        if q.is_zero() {
            continue;
        }
        for (o, c) in out.iter_mut().zip(g.cof.as_ref().expect("tracked")) {
            *o = o.add(field, &order, &q.mul(field, &order, c));
        }
    }
    Ok((
        out.iter().map(|c| c.to_multi(field, &vars)).collect(),
        rem.to_multi(field, &vars),
    ))
}
