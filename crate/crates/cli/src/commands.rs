use std::collections::BTreeMap;

use serde_json::{json, Value};

use frobsplit_core::arith::{parse_poly, FieldCtx, MultiPoly, VarCtx};
use frobsplit_core::divisor::{
    base_change_transform, dvr_subfpure_ok, pullback, ramification_divisor, BaseMap, QDivisor,
};
use frobsplit_core::fdifferent::{compute_fdifferent, translate_center, CenterProblem};
use frobsplit_core::fedder::{
    at_point, center_test, fpt_estimate, fpure_general, fpure_hypersurface, FedderReport,
    FrobeniusLevel,
};
use frobsplit_core::fibration::{
    assemble_moduli_divisor, char_scan, cone_h_poly, hasse_value, legendre_hasse_poly, point_count,
    scan_fibers, CubicFamily,
};
use frobsplit_core::groebner::{GbOptions, Ideal};
use frobsplit_core::Error;

use crate::json::{self, error_kind, is_usage_error};
use crate::{
    CenterArgs, Command, DivisorCommand, DivisorCtx, FibrationCommand, InputArgs, LevelArgs,
    MapArgs,
};

pub enum Failure {
    Usage(String),
    Domain {
        kind: String,
        message: String,
        report: Option<Value>,
    },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if is_usage_error(&e) {
            Failure::Usage(e.to_string())
        } else {
            Failure::Domain {
                kind: error_kind(&e).to_string(),
                message: e.to_string(),
                report: None,
            }
        }
    }
}

type Outcome = Result<Value, Failure>;

/// Per-invocation state: options plus what the manifest records.
pub struct Session {
    pub opts: GbOptions,
    pub p: Option<u64>,
    pub e: Option<u32>,
    /// Input name to canonical text.
    pub inputs: BTreeMap<String, String>,
}

impl Session {
    pub fn new(opts: GbOptions) -> Self {
        Session {
            opts,
            p: None,
            e: None,
            inputs: BTreeMap::new(),
        }
    }

    fn record(&mut self, name: impl Into<String>, canonical: impl Into<String>) {
        self.inputs.insert(name.into(), canonical.into());
    }

    fn level(&mut self, args: &LevelArgs) -> Result<FrobeniusLevel, Failure> {
        self.p = Some(args.p);
        self.e = Some(args.e);
        Ok(FrobeniusLevel::new(FieldCtx::new(args.p)?, args.e)?)
    }

    fn field(&mut self, p: u64) -> Result<FieldCtx, Failure> {
        self.p = Some(p);
        Ok(FieldCtx::new(p)?)
    }
}

pub fn run(cmd: &Command, s: &mut Session) -> Outcome {
    match cmd {
        Command::Fpure { level, input } => fpure(s, level, input),
        Command::Center(args) => center(s, args),
        Command::Fdiff(args) => fdiff(s, args),
        Command::Fpt { level, input } => fpt(s, level, input),
        Command::Hasse {
            level,
            family,
            lambda0,
        } => hasse(s, level, &family.family, *lambda0),
        Command::Fibration(FibrationCommand::Scan { p, family }) => scan(s, *p, &family.family),
        Command::Fibration(FibrationCommand::Moduli { level, family }) => {
            moduli(s, level, &family.family)
        }
        Command::Fibration(FibrationCommand::Charscan {
            primes,
            lambda0,
            family,
        }) => charscan(s, primes, *lambda0, &family.family),
        Command::Divisor(DivisorCommand::Add { ctx, lhs, rhs }) => divisor_add(s, ctx, lhs, rhs),
        Command::Divisor(DivisorCommand::Pullback(args)) => divisor_map(s, args, false),
        Command::Divisor(DivisorCommand::Basechange(args)) => divisor_map(s, args, true),
    }
}

struct Ambient {
    vars: VarCtx,
    hypersurfaces: Vec<MultiPoly>,
    ideal: Vec<MultiPoly>,
    point: Vec<u64>,
}

impl Ambient {
    fn equations(&self) -> Vec<MultiPoly> {
        self.hypersurfaces
            .iter()
            .chain(&self.ideal)
            .cloned()
            .collect()
    }

    fn point_json(&self) -> Value {
        json!(self.point)
    }
}

fn ambient(
    s: &mut Session,
    field: FieldCtx,
    input: &InputArgs,
    need_equations: bool,
) -> Result<Ambient, Failure> {
    let vars = VarCtx::parse_list(&input.vars)?;
    s.record("vars", vars.names().join(","));
    let mut parse_all = |flag: &str, texts: &[String]| -> Result<Vec<MultiPoly>, Failure> {
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let f = parse_poly(t, &vars, field)?;
                s.record(format!("{flag}[{i}]"), f.to_string());
                Ok(f)
            })
            .collect()
    };
    let hypersurfaces = parse_all("hypersurface", &input.hypersurface)?;
    let ideal = parse_all("ideal", &input.ideal)?;
    if need_equations && hypersurfaces.is_empty() && ideal.is_empty() {
        return Err(Failure::Usage(
            "one of --hypersurface or --ideal is required".into(),
        ));
    }
    let point = match &input.at {
        None => vec![0; vars.len()],
        Some(text) => parse_point(text, field)?,
    };
    if point.len() != vars.len() {
        return Err(Error::ArityMismatch {
            expected: vars.len(),
            got: point.len(),
        }
        .into());
    }
    s.record("at", format!("{point:?}"));
    Ok(Ambient {
        vars,
        hypersurfaces,
        ideal,
        point,
    })
}

fn parse_point(text: &str, field: FieldCtx) -> Result<Vec<u64>, Failure> {
    text.split(',')
        .map(|c| {
            c.trim()
                .parse::<i64>()
                .map(|v| field.from_i64(v))
                .map_err(|_| Failure::Usage(format!("`{c}` is not an integer coordinate")))
        })
        .collect()
}

fn header(level: FrobeniusLevel, subcommand: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("subcommand".into(), json!(subcommand));
    m.insert("p".into(), json!(level.p()));
    m.insert("e".into(), json!(level.e()));
    m.insert("q".into(), json!(level.q()));
    m
}

fn fpure(s: &mut Session, level_args: &LevelArgs, input: &InputArgs) -> Outcome {
    let level = s.level(level_args)?;
    let amb = ambient(s, level.field(), input, true)?;
    let gens = amb
        .equations()
        .iter()
        .map(|g| at_point(g, &amb.point))
        .collect::<Result<Vec<_>, _>>()?;
    let m_vars: Vec<usize> = (0..amb.vars.len()).collect();
    let (route, report): (&str, FedderReport) =
        if amb.hypersurfaces.len() == 1 && amb.ideal.is_empty() {
            (
                "hypersurface",
                fpure_hypersurface(&gens[0], &m_vars, level)?,
            )
        } else {
            let ideal = Ideal::new(level.field(), &amb.vars, gens)?;
            ("general", fpure_general(&ideal, &m_vars, level, &s.opts)?)
        };
    let mut out = header(level, "fpure");
    out.insert("route".into(), json!(route));
    out.insert("point".into(), amb.point_json());
    out.insert("fpure".into(), json!(report.fpure));
    out.insert(
        "witness".into(),
        json!(report.witness.as_ref().map(|w| w.display_in(&amb.vars))),
    );
    out.insert("test_poly".into(), json!(report.test_poly_digest));
    let out = Value::Object(out);
    if !report.fpure {
        return Err(Failure::Domain {
            kind: "not_fpure".into(),
            message: format!("not F-pure at the point (q = {})", level.q()),
            report: Some(out),
        });
    }
    Ok(out)
}

fn center_problem(
    s: &mut Session,
    args: &CenterArgs,
) -> Result<(FrobeniusLevel, Ambient, CenterProblem), Failure> {
    let level = s.level(&args.level)?;
    let field = level.field();
    let amb = ambient(s, field, &args.input, args.fedder.is_none())?;
    let center = args
        .center
        .split(',')
        .map(|g| parse_poly(g, &amb.vars, field))
        .collect::<Result<Vec<_>, _>>()?;
    s.record(
        "center",
        center
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    let f = match &args.fedder {
        Some(text) => parse_poly(text, &amb.vars, field)?,
        None => amb
            .equations()
            .iter()
            .try_fold(MultiPoly::one(field, &amb.vars), |acc, g| acc.mul(g))?
            .pow(level.q() - 1)?,
    };
    s.record("fedder", f.to_string());
    let problem = CenterProblem::new(f, Ideal::new(field, &amb.vars, center)?)?;
    let problem = translate_center(&problem, &amb.point)?;
    Ok((level, amb, problem))
}

fn center_json(problem: &CenterProblem) -> Value {
    json!(problem
        .center
        .gens()
        .iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>())
}

fn center(s: &mut Session, args: &CenterArgs) -> Outcome {
    let (level, amb, problem) = center_problem(s, args)?;
    let compatible = center_test(&problem.f, &problem.center, level, &s.opts)?;
    let mut out = header(level, "center");
    out.insert("point".into(), amb.point_json());
    out.insert("center".into(), center_json(&problem));
    out.insert("compatible".into(), json!(compatible));
    let out = Value::Object(out);
    if !compatible {
        return Err(Failure::Domain {
            kind: "incompatible_center".into(),
            message: "the center is not compatible with the Fedder polynomial".into(),
            report: Some(out),
        });
    }
    Ok(out)
}

fn fdiff(s: &mut Session, args: &CenterArgs) -> Outcome {
    let (level, amb, problem) = center_problem(s, args)?;
    let r = compute_fdifferent(&problem.f, &problem.center, level, &s.opts)?;
    let mut out = header(level, "fdiff");
    out.insert("point".into(), amb.point_json());
    out.insert("center".into(), center_json(&problem));
    out.insert("h_bar".into(), json!(r.h_bar.to_string()));
    out.insert(
        "divisor".into(),
        r.divisor.as_ref().map_or(Value::Null, json::divisor),
    );
    out.insert("compat_ok".into(), json!(r.compat_ok));
    out.insert("center_ok".into(), json!(r.center_ok));
    out.insert("leftover".into(), json!(r.leftover_digest));
    let out = Value::Object(out);
    if !r.compat_ok {
        return Err(Failure::Domain {
            kind: "incompatible_center".into(),
            message: "f is not h * g_e modulo the bracket power of the center".into(),
            report: Some(out),
        });
    }
    Ok(out)
}

fn fpt(s: &mut Session, level_args: &LevelArgs, input: &InputArgs) -> Outcome {
    let level = s.level(level_args)?;
    let amb = ambient(s, level.field(), input, true)?;
    if amb.hypersurfaces.len() != 1 || !amb.ideal.is_empty() {
        return Err(Failure::Usage(
            "fpt takes exactly one --hypersurface".into(),
        ));
    }
    let f = at_point(&amb.hypersurfaces[0], &amb.point)?;
    let m_vars: Vec<usize> = (0..amb.vars.len()).collect();
    let seq = fpt_estimate(&f, &m_vars, level.e())?;
    let entries: Vec<Value> = seq
        .entries
        .iter()
        .map(|en| json!({"e": en.e, "q": level.p().pow(en.e), "nu": en.nu, "ratio": json::rational(&en.ratio)}))
        .collect();
    let mut out = header(level, "fpt");
    out.insert("point".into(), amb.point_json());
    out.insert("entries".into(), json!(entries));
    out.insert(
        "estimate".into(),
        json!(seq.estimate().map(|r| json::rational(&r))),
    );
    out.insert(
        "invariants_ok".into(),
        json!(seq.check_invariants(level.p())),
    );
    Ok(Value::Object(out))
}

fn family(s: &mut Session, expr: &str, field: FieldCtx) -> Result<CubicFamily, Failure> {
    let fam = CubicFamily::parse(expr, field)?;
    s.record("family", fam.poly().to_string());
    Ok(fam)
}

fn hasse(s: &mut Session, level_args: &LevelArgs, expr: &str, lambda0: Option<i64>) -> Outcome {
    let level = s.level(level_args)?;
    let field = level.field();
    let fam = family(s, expr, field)?;
    let h = cone_h_poly(&fam, level)?;
    let leg = legendre_hasse_poly(field)?;
    let (hs, ls) = (h.squarefree_part().monic(), leg.squarefree_part().monic());
    let mut out = header(level, "hasse");
    out.insert("h".into(), json::unipoly(&h, "t"));
    out.insert("legendre".into(), json::unipoly(&leg, "t"));
    out.insert("h_squarefree".into(), json::unipoly(&hs, "t"));
    out.insert("legendre_squarefree".into(), json::unipoly(&ls, "t"));
    out.insert("locus_agrees".into(), json!(!h.is_zero() && hs == ls));
    if let Some(l) = lambda0 {
        let lambda = field.from_i64(l);
        let fiber = match hasse_value(&fam, lambda) {
            Ok(v) => json!({
                "lambda": lambda,
                "degenerate": false,
                "h_value": h.eval(lambda),
                "hasse_value": v,
                "point_count": if field.p() >= 5 { Some(point_count(&fam, lambda)?) } else { None },
            }),
            Err(Error::DegenerateFiber(_)) => json!({
                "lambda": lambda,
                "degenerate": true,
                "h_value": h.eval(lambda),
                "hasse_value": null,
                "point_count": null,
            }),
            Err(e) => return Err(e.into()),
        };
        out.insert("lambda0".into(), fiber);
    }
    Ok(Value::Object(out))
}

fn scan(s: &mut Session, p: u64, expr: &str) -> Outcome {
    let field = s.field(p)?;
    s.e = Some(1);
    let fam = family(s, expr, field)?;
    let reports = scan_fibers(&fam)?;
    let fibers: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "lambda": r.lambda,
                "degenerate": r.degenerate,
                "h_value": r.h_value,
                "hasse_value": r.hasse_value,
                "point_count": r.point_count,
                "is_split": r.is_split,
                "consistent": r.consistent(p),
            })
        })
        .collect();
    let disagreements = reports.iter().filter(|r| !r.consistent(p)).count();
    Ok(json!({
        "subcommand": "fibration scan",
        "p": p,
        "fibers": fibers,
        "disagreements": disagreements,
    }))
}

fn moduli(s: &mut Session, level_args: &LevelArgs, expr: &str) -> Outcome {
    let level = s.level(level_args)?;
    let fam = family(s, expr, level.field())?;
    let h = cone_h_poly(&fam, level)?;
    let d = assemble_moduli_divisor(&fam, level)?;
    let mut out = header(level, "fibration moduli");
    out.insert("h".into(), json::unipoly(&h, "t"));
    out.insert("divisor".into(), json::divisor(&d));
    out.insert("rational_support".into(), json!(d.rational_support()));
    out.insert(
        "subfpure_ok".into(),
        json!(d.terms().all(|(_, c)| dvr_subfpure_ok(*c))),
    );
    Ok(Value::Object(out))
}

fn charscan(s: &mut Session, primes: &[u64], lambda0: i64, expr: &str) -> Outcome {
    s.record("family", expr.trim());
    s.record("primes", format!("{primes:?}"));
    let rows = char_scan(expr, primes, lambda0)?;
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "p": r.p,
                "h": json::unipoly(&r.h, "t"),
                "divisor": json::divisor(&r.divisor),
                "rational_support": r.rational_support,
                "lambda0": r.lambda0,
                "lambda0_in_support": r.lambda0_in_support,
                "lambda0_degenerate": r.lambda0_degenerate,
                "lambda0_hasse": r.lambda0_hasse,
                "lambda0_point_count": r.lambda0_point_count,
            })
        })
        .collect();
    Ok(json!({
        "subcommand": "fibration charscan",
        "lambda0": lambda0,
        "rows": rows,
    }))
}

fn parse_divisor_arg(
    s: &mut Session,
    name: &str,
    text: &str,
    field: FieldCtx,
    var: &str,
) -> Result<QDivisor, Failure> {
    let d = json::parse_divisor(text, field, var).map_err(Failure::Usage)?;
    s.record(name, d.to_string());
    Ok(d)
}

fn divisor_add(s: &mut Session, ctx: &DivisorCtx, lhs: &str, rhs: &str) -> Outcome {
    let field = s.field(ctx.p)?;
    let a = parse_divisor_arg(s, "lhs", lhs, field, &ctx.var)?;
    let b = parse_divisor_arg(s, "rhs", rhs, field, &ctx.var)?;
    let sum = a.add(&b)?;
    Ok(json!({
        "subcommand": "divisor add",
        "p": ctx.p,
        "divisor": json::divisor(&sum),
        "degree": json::rational(&sum.degree()?),
    }))
}

fn divisor_map(s: &mut Session, args: &MapArgs, base_change: bool) -> Outcome {
    let field = s.field(args.ctx.p)?;
    let d = parse_divisor_arg(s, "divisor", &args.divisor, field, &args.ctx.var)?;
    let src = VarCtx::new(&[args.source_var.as_str()])?;
    let g = parse_poly(&args.map, &src, field)?;
    s.record("map", g.to_string());
    let g = g.to_univariate(0).expect("single variable context");
    let map = BaseMap::new(g, &args.source_var)?;
    let up = pullback(&d, &map)?;
    let mut out = json!({
        "subcommand": if base_change { "divisor basechange" } else { "divisor pullback" },
        "p": args.ctx.p,
        "map": map.poly().display(&args.source_var),
        "pullback": json::divisor(&up),
    });
    let result = if base_change {
        let ram = ramification_divisor(&map)?;
        out["ramification"] = json::divisor(&ram);
        base_change_transform(&d, &map)?
    } else {
        up
    };
    out["divisor"] = json::divisor(&result);
    out["subfpure_ok"] = json!(result.terms().all(|(_, c)| dvr_subfpure_ok(*c)));
    Ok(out)
}
