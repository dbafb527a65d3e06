//! F-different of a complete-intersection center.
//!
//! For a Fedder polynomial `f` compatible with `J = (g_1, ..., g_r)`, write
//! `f = h * g_e + g` with `g_e = (g_1 ··· g_r)^(q-1)` and `g ∈ J^[q]`. The
//! restriction of `h` to `Z = V(J)` gives the divisor
//! `(1/(q-1)) div_Z(h̄)`.

use num_traits::One;

use crate::arith::{Monomial, MultiPoly, UniPoly, VarCtx};
use crate::divisor::QDivisor;
use crate::error::{Error, Result};
use crate::fedder::{center_test, FrobeniusLevel};
use crate::groebner::{
    bracket_power, ci_colon_shortcut, cofactor_division, groebner_basis, normal_form, GbOptions,
    Ideal, MonomialOrder,
};
use crate::Rational;

/// A Fedder polynomial together with a center.
#[derive(Debug, Clone)]
pub struct CenterProblem {
    pub f: MultiPoly,
    pub center: Ideal,
}

impl CenterProblem {
    pub fn new(f: MultiPoly, center: Ideal) -> Result<Self> {
        if f.field() != center.field() || f.vars() != center.vars() {
            return Err(Error::ContextMismatch);
        }
        Ok(CenterProblem { f, center })
    }
}

/// Applies `x_i -> x_i + point[i]` to `f` and every generator of the center.
pub fn translate_center(problem: &CenterProblem, point: &[u64]) -> Result<CenterProblem> {
    let f = problem.f.translate(point)?;
    let gens = problem
        .center
        .gens()
        .iter()
        .map(|g| g.translate(point))
        .collect::<Result<Vec<_>>>()?;
    let center = Ideal::new(problem.center.field(), problem.center.vars(), gens)?;
    Ok(CenterProblem { f, center })
}

#[derive(Debug, Clone)]
pub struct FDifferentResult {
    pub level: FrobeniusLevel,
    /// Cofactor of `g_e`.
    pub h: MultiPoly,
    /// `h` reduced modulo `J`.
    pub h_bar: MultiPoly,
    /// Present when `h̄` is a constant or a polynomial in one coordinate
    /// of `Z`.
    pub divisor: Option<QDivisor>,
    /// `f - h g_e ∈ J^[q]`.
    pub compat_ok: bool,
    /// Outcome of the compatibility test `f J ⊆ J^[q]`, `f ∉ J^[q]`.
    pub center_ok: bool,
    /// Canonical print of the part of `f` not accounted for by `h g_e`
    /// modulo `J^[q]`; `"0"` when compatible.
    pub leftover_digest: String,
}

/// Runs the F-different pipeline for `f` along the complete intersection
/// `J`.
pub fn compute_fdifferent(
    f: &MultiPoly,
    j: &Ideal,
    level: FrobeniusLevel,
    opts: &GbOptions,
) -> Result<FDifferentResult> {
    if f.field() != j.field() || f.vars() != j.vars() || f.field() != level.field() {
        return Err(Error::ContextMismatch);
    }
    if j.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let center_ok = center_test(f, j, level, opts)?;
    let q = level.q();
    let scale = Rational::new(1, (q - 1) as i64);
    match j.variable_generators() {
        Some(center) => variable_center(f, &center, level, center_ok, scale),
        None => general_center(f, j, level, center_ok, scale, opts),
    }
}

fn variable_center(
    f: &MultiPoly,
    center: &[usize],
    level: FrobeniusLevel,
    center_ok: bool,
    scale: Rational,
) -> Result<FDifferentResult> {
    let q = level.q();
    let vars = f.vars();
    let trunc = f.truncate_mod_bracket(center, q);
    let top: Vec<(usize, u32)> = center.iter().map(|&i| (i, (q - 1) as u32)).collect();
    // coeff_of strips the center exponents, so h has no center variables
    // and h̄ = h.
    let h = trunc.coeff_of(&top);
    let g_e = MultiPoly::monomial(
        f.field(),
        vars,
        1,
        Monomial::from_exponents(
            (0..vars.len())
                .map(|i| {
                    if center.contains(&i) {
                        (q - 1) as u32
                    } else {
                        0
                    }
                })
                .collect(),
        ),
    );
    let leftover = trunc.sub(&h.mul(&g_e)?)?;
    if h.is_zero() {
        return Err(Error::ZeroHBar);
    }
    let residual: Vec<usize> = (0..vars.len()).filter(|i| !center.contains(i)).collect();
    let divisor = divisor_of(&h, &residual, scale)?;
    Ok(FDifferentResult {
        level,
        h: h.clone(),
        h_bar: h,
        divisor,
        compat_ok: leftover.is_zero(),
        center_ok,
        leftover_digest: leftover.to_string(),
    })
}

fn general_center(
    f: &MultiPoly,
    j: &Ideal,
    level: FrobeniusLevel,
    center_ok: bool,
    scale: Rational,
    opts: &GbOptions,
) -> Result<FDifferentResult> {
    let q = level.q();
    let ci = ci_colon_shortcut(j, q)?;
    let bracket = bracket_power(j, q)?;
    let mut divisors = vec![ci.g_e.clone()];
    divisors.extend(bracket.gens().iter().cloned());
    let (cofactors, rem) = cofactor_division(f, &divisors, opts)?;
    let h = cofactors[0].clone();
    let n = f.vars().len();
    let (h_bar, line) = match graph_coordinate(j, opts)? {
        Some((v, order)) => (normal_form(&h, j, &order, opts)?, Some(v)),
        None => (normal_form(&h, j, &MonomialOrder::grevlex(n), opts)?, None),
    };
    if h_bar.is_zero() {
        return Err(Error::ZeroHBar);
    }
    let divisor = match line {
        Some(v) => divisor_of(&h_bar, &[v], scale)?,
        None => divisor_of(&h_bar, &[], scale)?,
    };
    Ok(FDifferentResult {
        level,
        h,
        h_bar,
        divisor,
        compat_ok: rem.is_zero(),
        center_ok,
        leftover_digest: rem.to_string(),
    })
}

/// A variable `v` such that `Z = V(J)` is the graph of a map from the
/// `v`-line, i.e. the reduced lex basis with `v` last is
/// `{x_i - φ_i(v) : i != v}`. Returns `v` and that order.
fn graph_coordinate(j: &Ideal, opts: &GbOptions) -> Result<Option<(usize, MonomialOrder)>> {
    let n = j.vars().len();
    for v in (0..n).rev() {
        let others: Vec<usize> = (0..n).filter(|&i| i != v).collect();
        let order = MonomialOrder::elimination(n, &others)?;
        let basis = groebner_basis(j, &order, opts)?;
        if basis.len() != n - 1 {
            continue;
        }
        let mut leads: Vec<usize> = Vec::new();
        let graph = basis.iter().all(|g| {
            let Some(t) = leading_term_for(g, &order) else {
                return false;
            };
            let exps = t.exponents();
            let i = match exps.iter().position(|&e| e > 0) {
                Some(i) => i,
                None => return false,
            };
            let ok = i != v && t.degree() == 1 && !leads.contains(&i);
            leads.push(i);
            ok
        });
        if graph {
            return Ok(Some((v, order)));
        }
    }
    Ok(None)
}

fn leading_term_for(g: &MultiPoly, order: &MonomialOrder) -> Option<Monomial> {
    g.terms()
        .iter()
        .map(|t| &t.mono)
        .max_by(|a, b| order.cmp(a, b))
        .cloned()
}

/// `scale * div(h̄)` when `h̄` is constant or univariate in one of
/// `line_vars`.
fn divisor_of(h_bar: &MultiPoly, line_vars: &[usize], scale: Rational) -> Result<Option<QDivisor>> {
    let vars: &VarCtx = h_bar.vars();
    let support = h_bar.support_vars();
    let v = match support.as_slice() {
        [] => line_vars.first().copied(),
        [v] if line_vars.contains(v) => Some(*v),
        _ => return Ok(None),
    };
    let name = v.map_or("t", |v| vars.name(v));
    let uni = match v {
        Some(v) => h_bar
            .to_univariate(v)
            .expect("support is a single variable"),
        None => UniPoly::constant(h_bar.field(), h_bar.constant_term()),
    };
    QDivisor::of_poly(&uni, scale, name).map(Some)
}

/// Whether every coefficient lies in `(0, 1]`.
pub fn coefficients_in_unit_interval(d: &QDivisor) -> bool {
    d.terms()
        .all(|(_, c)| *c > Rational::from_integer(0) && *c <= Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_poly, FieldCtx};
    use crate::groebner::member;

    struct Ctx {
        f: FieldCtx,
        v: VarCtx,
    }

    impl Ctx {
        fn new(p: u64, names: &str) -> Self {
            Ctx {
                f: FieldCtx::new(p).unwrap(),
                v: VarCtx::parse_list(names).unwrap(),
            }
        }
        fn p(&self, s: &str) -> MultiPoly {
            parse_poly(s, &self.v, self.f).unwrap()
        }
        fn ideal(&self, gens: &[&str]) -> Ideal {
            Ideal::new(self.f, &self.v, gens.iter().map(|s| self.p(s)).collect()).unwrap()
        }
        fn level(&self, e: u32) -> FrobeniusLevel {
            FrobeniusLevel::new(self.f, e).unwrap()
        }
    }

    const CONE: &str = "z*y^2 - x*(x-z)*(x-t*z)";

    fn opts() -> GbOptions {
        GbOptions::default()
    }

    #[test]
    fn cone_at_three() {
        let c = Ctx::new(3, "x,y,z,t");
        let f = c.p(CONE).pow(2).unwrap();
        let r = compute_fdifferent(&f, &c.ideal(&["x", "y", "z"]), c.level(1), &opts()).unwrap();
        assert_eq!(r.h_bar.to_string(), "2*t+2");
        assert!(r.compat_ok && r.center_ok);
        let d = r.divisor.unwrap();
        assert_eq!(d.to_string(), "(1/2)[t+1]");
        assert!(coefficients_in_unit_interval(&d));
    }

    #[test]
    fn cone_level_two_matches_level_one() {
        let c = Ctx::new(3, "x,y,z,t");
        let a = c.p(CONE);
        let j = c.ideal(&["x", "y", "z"]);
        let d1 = compute_fdifferent(&a.pow(2).unwrap(), &j, c.level(1), &opts())
            .unwrap()
            .divisor
            .unwrap();
        let r2 = compute_fdifferent(&a.pow(8).unwrap(), &j, c.level(2), &opts()).unwrap();
        assert_eq!(r2.divisor.unwrap(), d1);
        let h = r2.h_bar.to_univariate(3).unwrap();
        assert!(UniPoly::from_i64(c.f, &[1, 1]).pow(4).divides(&h));
    }

    #[test]
    fn trivial_and_read_off() {
        let c = Ctx::new(3, "x,y,t");
        let j = c.ideal(&["x", "y"]);
        let r = compute_fdifferent(&c.p("x^2*y^2"), &j, c.level(1), &opts()).unwrap();
        assert_eq!(r.h_bar.to_string(), "1");
        assert!(r.divisor.unwrap().is_zero());
        let r = compute_fdifferent(&c.p("t*x^2*y^2"), &j, c.level(1), &opts()).unwrap();
        assert_eq!(r.divisor.unwrap().to_string(), "(1/2)[t]");
    }

    #[test]
    fn incompatible_leftover_is_reported() {
        let c = Ctx::new(3, "x,y,t");
        let j = c.ideal(&["x", "y"]);
        let r = compute_fdifferent(&c.p("x^2*y^2 + x"), &j, c.level(1), &opts()).unwrap();
        assert!(!r.compat_ok);
        assert!(!r.center_ok);
        assert_eq!(r.leftover_digest, "x");
        assert_eq!(
            compute_fdifferent(&c.p("x^3"), &j, c.level(1), &opts()).unwrap_err(),
            Error::ZeroHBar
        );
    }

    #[test]
    fn general_path_agrees_with_translation() {
        // center x = 1, y = 0 in F_5[x,y,t]; f = t (x-1)^4 y^4 + (x-1)^5
        let c = Ctx::new(5, "x,y,t");
        let j = c.ideal(&["x-1", "y"]);
        let f = c.p("t*(x-1)^4*y^4 + (t+2)*(x-1)^5");
        let general = compute_fdifferent(&f, &j, c.level(1), &opts()).unwrap();
        assert!(general.compat_ok);
        let shifted = translate_center(
            &CenterProblem::new(f.clone(), j.clone()).unwrap(),
            &[1, 0, 0],
        )
        .unwrap();
        assert!(shifted.center.variable_generators().is_some());
        let fast = compute_fdifferent(&shifted.f, &shifted.center, c.level(1), &opts()).unwrap();
        assert_eq!(general.h_bar, fast.h_bar);
        assert_eq!(general.divisor, fast.divisor);
        assert_eq!(fast.divisor.unwrap().to_string(), "(1/4)[t]");
        let bracket = bracket_power(&j, 5).unwrap();
        let g_e = ci_colon_shortcut(&j, 5).unwrap().g_e;
        assert!(member(
            &f.sub(&general.h.mul(&g_e).unwrap()).unwrap(),
            &bracket,
            &opts()
        )
        .unwrap());
    }

    #[test]
    fn general_path_on_a_curved_center() {
        // Z = {y = x^2} in F_3[x,y]: a graph over the x-line
        let c = Ctx::new(3, "x,y");
        let j = c.ideal(&["y - x^2"]);
        let g = c.p("y - x^2");
        let f = g.pow(2).unwrap().mul(&c.p("x + y")).unwrap();
        let r = compute_fdifferent(&f, &j, c.level(1), &opts()).unwrap();
        assert!(r.compat_ok);
        // h̄ = x + x^2 = x (x + 1)
        assert_eq!(r.h_bar.to_string(), "x^2+x");
        assert_eq!(r.divisor.unwrap().to_string(), "(1/2)[x] + (1/2)[x+1]");
    }

    #[test]
    fn unit_invariance() {
        let c = Ctx::new(5, "x,y,z,t");
        let f = c.p(CONE).pow(4).unwrap();
        let j = c.ideal(&["x", "y", "z"]);
        let r = compute_fdifferent(&f, &j, c.level(1), &opts()).unwrap();
        let s = compute_fdifferent(&f.scale(3), &j, c.level(1), &opts()).unwrap();
        assert_eq!(s.h_bar, r.h_bar.scale(3));
        assert_eq!(s.divisor, r.divisor);
    }

    #[test]
    fn translation_round_trip() {
        let c = Ctx::new(3, "x,y,z,t");
        let prob = CenterProblem::new(c.p(CONE), c.ideal(&["x", "y", "z"])).unwrap();
        let id = translate_center(&prob, &[0, 0, 0, 0]).unwrap();
        assert_eq!(id.f, prob.f);
        let there = translate_center(&prob, &[1, 2, 0, 1]).unwrap();
        let back = translate_center(&there, &[2, 1, 0, 2]).unwrap();
        assert_eq!(back.f, prob.f);
        assert_eq!(back.center.gens(), prob.center.gens());
        assert!(matches!(
            translate_center(&prob, &[1]),
            Err(Error::ArityMismatch { .. })
        ));
        // h at t = 1 equals h̄ of the translated problem at t = 0
        let lvl = c.level(1);
        let h = compute_fdifferent(&prob.f.pow(2).unwrap(), &prob.center, lvl, &opts())
            .unwrap()
            .h_bar;
        let moved = translate_center(
            &CenterProblem::new(prob.f.pow(2).unwrap(), prob.center.clone()).unwrap(),
            &[0, 0, 0, 1],
        )
        .unwrap();
        let hm = compute_fdifferent(&moved.f, &moved.center, lvl, &opts())
            .unwrap()
            .h_bar;
        assert_eq!(
            hm.eval(&[0, 0, 0, 0]).unwrap(),
            h.eval(&[0, 0, 0, 1]).unwrap()
        );
    }
}
