//! `gci`: command-line front end.
//!
//! Every command prints one JSON document on standard output. Exit status is
//! 0 on success, 2 when a mathematical check fails (the witness is printed),
//! and 1 on usage or input errors.

use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gci_core::acceptance::{report_json, run_suite};
use gci_core::biharmonic::{
    complete, completion_consistent, dps_maximal, dps_solve, five_point_scan, pde_apply, pole_profile, sl2_act,
    sl2_ket, AnsatzConfig, BiharmonicError, DpsSpec, PoleProfile, Side, Sl2,
};
use gci_core::characters::{branch, char4d_restricted, keyed_json, CharError, RepLabel4D};
use gci_core::exactring::{
    format_rational, parse_rational, ring_arithmetic, LaurentPoly, Point, Rational, RingOp, Var, VarClass,
};
use gci_core::freefield::{u0_of_bifield_correlator, wick_correlator, Insertion};
use gci_core::pointcalc::{box_op, dot_grad_grad, double_contraction, vec_dot_grad, Dimension};
use gci_core::twist2::{example_vector, op1_apply, polynomiality_check, Twist2Problem};
use gci_core::waves::{
    beta2d, beta4d, branch_with_remainder, c_coeff, extract_2d_coeffs, gauss_g, three_term_residual, to_cross_ratios,
    uv_from_st, BiSeries, WavesError,
};

#[derive(Parser)]
#[command(name = "gci", version, about = "Exact checks for globally conformal invariant field theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Free-field correlator of Wick products. Fields: `V` (the bifield) or `i:k` (`:phi^k:` at point i).
    Freefield {
        #[arg(required = true)]
        fields: Vec<String>,
        /// Keep only connected contractions.
        #[arg(long)]
        connected: bool,
        /// Validate the result as a leading part U0 (needs exactly one `V`).
        #[arg(long)]
        u0: bool,
    },
    /// Double-pole structures.
    #[command(subcommand)]
    Dps(DpsCmd),
    /// Harmonic completion of U0 in powers of rho_xy.
    Complete {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value = "x")]
        side: SideArg,
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Applies the twist-two PDE; exits 2 on a nonzero residual.
    PdeCheck {
        #[arg(long)]
        input: String,
    },
    /// Conformal partial waves.
    #[command(subcommand)]
    Waves(WavesCmd),
    /// Conformal characters restricted to 2D.
    #[command(subcommand)]
    Chars(CharsCmd),
    /// Twist-two conditions for unequal dimensions.
    #[command(subcommand)]
    Twist2(Twist2Cmd),
    /// Ring operations on Laurent polynomials.
    #[command(subcommand)]
    Ring(RingCmd),
    /// Differential operators in squared distances.
    #[command(subcommand)]
    Calc(CalcCmd),
    /// The sl(2) action on x/y variables.
    #[command(subcommand)]
    Sl2(Sl2Cmd),
    /// Runs the acceptance suite and prints a pass/fail table.
    Accept {
        /// Criterion id, module name, or part of a criterion name.
        #[arg(long)]
        filter: Option<String>,
        /// Compare the canonical report with this file.
        #[arg(long)]
        golden: Option<String>,
        /// Write the canonical report to this file.
        #[arg(long)]
        write_golden: Option<String>,
    },
}

#[derive(Subcommand)]
enum DpsCmd {
    /// The maximal-order part of the structure described by a spec file.
    Generate {
        #[arg(long)]
        input: String,
    },
    /// Completes the maximal part to a PDE solution.
    Solve {
        #[arg(long)]
        input: String,
        #[arg(long)]
        pole_cap: Option<u32>,
        #[arg(long)]
        window: Option<u32>,
    },
    /// PDE residual and pole profile of a polynomial; exits 2 on a nonzero residual.
    Check {
        #[arg(long)]
        input: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
    /// Exhaustive search for five-point double poles up to a maximal order.
    FivePoint {
        #[arg(long, default_value_t = 4)]
        order: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    X,
    Y,
    /// Both sides, compared order by order.
    Both,
}

#[derive(Subcommand)]
enum WavesCmd {
    /// Hypergeometric series G_n and the coefficient c_n.
    #[command(name = "G")]
    G {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 12)]
        order: u32,
    },
    Beta4d {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 12)]
        order: u32,
    },
    Beta2d {
        #[arg(long)]
        hp: u32,
        #[arg(long)]
        hm: u32,
        #[arg(long, default_value_t = 12)]
        order: u32,
    },
    /// 2D coefficients of a 4D wave from the recursion.
    Branch {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long, default_value_t = 6)]
        depth: u32,
    },
    /// 2D partial-wave coefficients of a series in u, v.
    Extract {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 12)]
        level: u32,
    },
    /// Residual of the three-term identity; exits 2 if nonzero.
    Identity {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 30)]
        order: u32,
    },
    /// A conformal four-point function (points 1..4) as a series in u, v.
    Uv {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 12)]
        order: u32,
    },
}

#[derive(Args)]
struct RepArgs {
    #[arg(long)]
    d: u32,
    /// Spin as an integer or half-integer (`1/2`).
    #[arg(long, default_value = "0")]
    j1: String,
    #[arg(long, default_value = "0")]
    j2: String,
    #[arg(long, default_value_t = 12)]
    order: u32,
    /// The restriction `s = 1` with `xy`, `x/y`; not supported.
    #[arg(long)]
    exotic: bool,
}

#[derive(Subcommand)]
enum CharsCmd {
    Restrict(RepArgs),
    Branch(RepArgs),
}

#[derive(Subcommand)]
enum Twist2Cmd {
    /// Checks both twist-two conditions on `f`; exits 2 if either fails.
    Check {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        input: String,
        #[arg(long, default_value = "1")]
        p1: String,
        #[arg(long, default_value = "2")]
        p2: String,
    },
    /// The free-field vector h for the given spectators.
    Example {
        #[arg(long, default_value = "1")]
        p1: String,
        #[arg(long, default_value = "2")]
        p2: String,
        #[arg(long, value_delimiter = ',', default_value = "3")]
        spectators: Vec<String>,
    },
}

#[derive(Subcommand)]
enum RingCmd {
    Add {
        a: String,
        b: String,
    },
    Sub {
        a: String,
        b: String,
    },
    Mul {
        a: String,
        b: String,
    },
    /// Partial derivative in a variable given as `a,b`.
    Diff {
        #[arg(long)]
        input: String,
        #[arg(long)]
        var: String,
    },
    Degree {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum)]
        class: ClassArg,
    },
    /// Evaluates at `{"a,b": "p/q", ...}`.
    Eval {
        #[arg(long)]
        input: String,
        #[arg(long)]
        assign: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    X,
    Y,
    Xy,
    Spectator,
}

#[derive(Subcommand)]
enum CalcCmd {
    Box {
        #[arg(long)]
        input: String,
        #[arg(long)]
        at: String,
        #[arg(long, default_value_t = 4)]
        dim: u32,
    },
    DotGradGrad {
        #[arg(long)]
        input: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 4)]
        dim: u32,
    },
    /// `(x_a - x_b).d_at`, with `--from a,b`.
    VecDotGrad {
        #[arg(long)]
        input: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        at: String,
    },
    DoubleContraction {
        #[arg(long)]
        input: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenArg {
    H,
    X,
    Y,
}

#[derive(Subcommand)]
enum Sl2Cmd {
    Act {
        #[arg(long, value_enum)]
        g: GenArg,
        #[arg(long)]
        input: String,
        /// The pole pair `m,n`, left out of the sums.
        #[arg(long)]
        exclude: String,
    },
    Ket {
        #[arg(long)]
        input: String,
        #[arg(long)]
        nu: u32,
        #[arg(long)]
        exclude: String,
    },
}

enum Failure {
    Usage(String),
    /// A mathematical refutation, with its witness.
    Math(Value),
}

type Outcome = Result<Value, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
    }
}

fn load_poly(path: &str) -> Result<LaurentPoly, Failure> {
    LaurentPoly::from_json(&read_input(path)?).map_err(|e| usage(format!("{path}: {e}")))
}

fn poly_json(p: &LaurentPoly) -> Value {
    serde_json::to_value(p.to_json_value()).expect("polynomial serializes")
}

fn parse_json(text: &str) -> Value {
    serde_json::from_str(text).expect("library JSON is valid")
}

fn rat_map<K: std::fmt::Display>(m: &BTreeMap<K, Rational>) -> Value {
    Value::Object(m.iter().map(|(k, c)| (k.to_string(), Value::String(format_rational(c)))).collect())
}

fn point(label: &str) -> Result<Point, Failure> {
    Point::parse(label).map_err(usage)
}

fn point_pair(text: &str) -> Result<(Point, Point), Failure> {
    let (a, b) = text.split_once(',').ok_or_else(|| usage(format!("expected `a,b`, got {text:?}")))?;
    Ok((point(a)?, point(b)?))
}

fn var(text: &str) -> Result<Var, Failure> {
    let (a, b) = point_pair(text)?;
    Var::new(a, b).map_err(usage)
}

fn spectator_pair(text: &str) -> Result<(u32, u32), Failure> {
    match point_pair(text)? {
        (Point::Spectator(m), Point::Spectator(n)) => Ok((m, n)),
        _ => Err(usage("expected two spectator indices")),
    }
}

fn profile_json(p: &PoleProfile) -> Value {
    let entries: Vec<Value> = p
        .entries
        .iter()
        .map(|(&(a, b, c, d), num)| json!({"signature": [a, b, c, d], "numerator": poly_json(num)}))
        .collect();
    json!({
        "m": p.m, "n": p.n,
        "is_double": p.is_double(),
        "max_order": p.max_order(),
        "max_double_order": p.max_double_order(),
        "entries": entries,
    })
}

fn biharmonic_failure(e: BiharmonicError) -> Failure {
    match e {
        BiharmonicError::NoSolution { residual } => {
            Failure::Math(json!({"schema": 1, "error": "NO_SOLUTION", "residual": poly_json(&residual)}))
        }
        BiharmonicError::SingularOrder { order, reason } => {
            Failure::Math(json!({"schema": 1, "error": "SINGULAR_ORDER", "order": order, "reason": reason}))
        }
        other => usage(other),
    }
}

fn waves_failure(e: WavesError) -> Failure {
    match e {
        WavesError::NonAntisymmetric { i, j } => {
            Failure::Math(json!({"schema": 1, "error": "NON_ANTISYMMETRIC", "i": i, "j": j}))
        }
        WavesError::NonExpandable { i, j } => {
            Failure::Math(json!({"schema": 1, "error": "NON_EXPANDABLE", "i": i, "j": j}))
        }
        WavesError::SingularAtOrigin { a, b } => {
            Failure::Math(json!({"schema": 1, "error": "SINGULAR_AT_ORIGIN", "s": a, "t": b}))
        }
        other => usage(other),
    }
}

fn load_spec(path: &str) -> Result<DpsSpec, Failure> {
    DpsSpec::from_json(&read_input(path)?).map_err(|e| usage(format!("{path}: {e}")))
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Freefield { fields, connected, u0 } => freefield(&fields, connected, u0),
        Command::Dps(c) => dps(c),
        Command::Complete { input, side, order } => completion(&load_poly(&input)?, side, order),
        Command::PdeCheck { input } => {
            let r = pde_apply(&load_poly(&input)?).map_err(usage)?;
            let doc = json!({"schema": 1, "residual": poly_json(&r)});
            if r.is_zero() {
                Ok(doc)
            } else {
                Err(Failure::Math(doc))
            }
        }
        Command::Waves(c) => waves(c),
        Command::Chars(c) => chars(c),
        Command::Twist2(c) => twist2(c),
        Command::Ring(c) => ring(c),
        Command::Calc(c) => calc(c),
        Command::Sl2(c) => sl2(c),
        Command::Accept { .. } => unreachable!("handled in main"),
    }
}

fn freefield(fields: &[String], connected: bool, u0: bool) -> Outcome {
    let mut ins = Vec::new();
    for f in fields {
        if f == "V" || f == "v" {
            ins.push(Insertion::bifield());
            continue;
        }
        let (p, k) = f.split_once(':').ok_or_else(|| usage(format!("field {f:?}: expected `V` or `i:k`")))?;
        let k: u32 = k.parse().map_err(|_| usage(format!("field {f:?}: bad power")))?;
        ins.push(Insertion::phi(point(p)?, k));
    }
    let p = if u0 { u0_of_bifield_correlator(&ins) } else { wick_correlator(&ins, connected) }.map_err(usage)?;
    Ok(json!({"schema": 1, "correlator": poly_json(&p)}))
}

fn dps(cmd: DpsCmd) -> Outcome {
    match cmd {
        DpsCmd::Generate { input } => {
            let spec = load_spec(&input)?;
            let p = dps_maximal(&spec).map_err(usage)?;
            Ok(json!({"schema": 1, "mu": spec.mu(), "maximal": poly_json(&p)}))
        }
        DpsCmd::Solve { input, pole_cap, window } => {
            let spec = load_spec(&input)?;
            let sol = dps_solve(&spec, AnsatzConfig { pole_cap, window }).map_err(biharmonic_failure)?;
            Ok(json!({
                "schema": 1,
                "basis_size": sol.basis_size,
                "maximal": poly_json(&sol.maximal),
                "u0": poly_json(&sol.u0),
                "kernel": sol.kernel.iter().map(poly_json).collect::<Vec<_>>(),
                "profile": profile_json(&pole_profile(&sol.u0, spec.m, spec.n)),
            }))
        }
        DpsCmd::Check { input, m, n } => {
            let u = load_poly(&input)?;
            let r = pde_apply(&u).map_err(usage)?;
            let doc = json!({"schema": 1, "residual": poly_json(&r), "profile": profile_json(&pole_profile(&u, m, n))});
            if r.is_zero() {
                Ok(doc)
            } else {
                Err(Failure::Math(doc))
            }
        }
        DpsCmd::FivePoint { order } => {
            let s = five_point_scan(order);
            let doc = json!({
                "schema": 1,
                "max_order": s.max_order,
                "candidates": s.candidates,
                "kernel_dim": s.kernel_dim,
                "double_pole_solutions": s.double_pole_solutions,
            });
            if s.double_pole_solutions == 0 {
                Ok(doc)
            } else {
                Err(Failure::Math(doc))
            }
        }
    }
}

fn completion(u0: &LaurentPoly, side: SideArg, order: usize) -> Outcome {
    let series = |s: Side| -> Result<Value, Failure> {
        let c = complete(u0, s, order).map_err(biharmonic_failure)?;
        Ok(Value::Array(c.coeffs.iter().map(poly_json).collect()))
    };
    match side {
        SideArg::X => Ok(json!({"schema": 1, "side": "x", "order": order, "coeffs": series(Side::X)?})),
        SideArg::Y => Ok(json!({"schema": 1, "side": "y", "order": order, "coeffs": series(Side::Y)?})),
        SideArg::Both => {
            let ok = completion_consistent(u0, order).map_err(biharmonic_failure)?;
            let doc =
                json!({"schema": 1, "order": order, "consistent": ok, "x": series(Side::X)?, "y": series(Side::Y)?});
            if ok {
                Ok(doc)
            } else {
                Err(Failure::Math(doc))
            }
        }
    }
}

fn waves(cmd: WavesCmd) -> Outcome {
    match cmd {
        WavesCmd::G { n, order } => {
            let mut doc = parse_json(&gauss_g(n, order).to_json());
            if n > 0 {
                doc["c"] = Value::String(format_rational(&c_coeff(n)));
            }
            Ok(doc)
        }
        WavesCmd::Beta4d { k, l, order } => Ok(parse_json(&beta4d(k, l, order).map_err(waves_failure)?.to_json())),
        WavesCmd::Beta2d { hp, hm, order } => Ok(parse_json(&beta2d(hp, hm, order).to_json())),
        WavesCmd::Branch { k, l, depth } => {
            let b = branch_with_remainder(k, l, depth).map_err(waves_failure)?;
            let keyed = |m: &BTreeMap<(u32, u32), Rational>| {
                rat_map(&m.iter().map(|(&(a, b), c)| (format!("{a},{b}"), c.clone())).collect::<BTreeMap<_, _>>())
            };
            Ok(json!({"schema": 1, "coeffs": keyed(&b.coeffs), "remainder": keyed(&b.remainder)}))
        }
        WavesCmd::Extract { input, level } => {
            let f = BiSeries::from_json(&read_input(&input)?).map_err(usage)?;
            let c = extract_2d_coeffs(&f, level).map_err(waves_failure)?;
            let keyed: BTreeMap<String, Rational> = c.into_iter().map(|((a, b), q)| (format!("{a},{b}"), q)).collect();
            Ok(json!({"schema": 1, "level": level, "coeffs": rat_map(&keyed)}))
        }
        WavesCmd::Identity { n, order } => {
            let r = three_term_residual(n, order).map_err(waves_failure)?;
            if r.is_zero() {
                Ok(json!({"residual": "0"}))
            } else {
                Err(Failure::Math(json!({"residual": parse_json(&r.to_json())})))
            }
        }
        WavesCmd::Uv { input, order } => {
            let st = to_cross_ratios(&load_poly(&input)?).map_err(waves_failure)?;
            let series = uv_from_st(&st, order).map_err(waves_failure)?;
            let st_keyed: BTreeMap<String, Rational> =
                st.iter().map(|(&(a, b), c)| (format!("{a},{b}"), c.clone())).collect();
            Ok(json!({"schema": 1, "st": rat_map(&st_keyed), "series": parse_json(&series.to_json())}))
        }
    }
}

fn doubled_spin(text: &str) -> Result<u32, Failure> {
    let j = parse_rational(text).map_err(usage)?;
    let twice = j * Rational::from_integer(2.into());
    if !twice.is_integer() || twice < Rational::from_integer(0.into()) {
        return Err(usage(format!("spin {text} is not a nonnegative half-integer")));
    }
    twice.to_integer().try_into().map_err(|_| usage(format!("spin {text} is too large")))
}

fn rep(args: &RepArgs) -> Result<RepLabel4D, Failure> {
    if args.exotic {
        return Err(usage(
            "the exotic restriction (s = 1, variables xy and x/y) is unsupported: \
             the character expansion relies on the grading by s, which this restriction removes",
        ));
    }
    RepLabel4D::new(args.d, doubled_spin(&args.j1)?, doubled_spin(&args.j2)?).map_err(usage)
}

fn chars(cmd: CharsCmd) -> Outcome {
    match cmd {
        CharsCmd::Restrict(a) => Ok(parse_json(&char4d_restricted(rep(&a)?, a.order).to_json())),
        CharsCmd::Branch(a) => {
            let chi = char4d_restricted(rep(&a)?, a.order);
            match branch(&chi) {
                Ok(m) => Ok(parse_json(&keyed_json(a.order, &m))),
                Err(CharError::NegativeMultiplicity { h_plus2, h_minus2, value }) => Err(Failure::Math(json!({
                    "schema": 1, "error": "NEGATIVE_MULTIPLICITY", "key": format!("{h_plus2},{h_minus2}"), "value": value,
                }))),
                Err(e) => Err(usage(e)),
            }
        }
    }
}

fn twist2(cmd: Twist2Cmd) -> Outcome {
    match cmd {
        Twist2Cmd::Check { n, input, p1, p2 } => {
            let prob = Twist2Problem::new(n, point(&p1)?, point(&p2)?, load_poly(&input)?).map_err(usage)?;
            let o1 = op1_apply(&prob).map_err(usage)?;
            let poly = polynomiality_check(&prob);
            let doc = json!({"schema": 1, "op1": poly_json(&o1), "op1_zero": o1.is_zero(), "polynomial": poly});
            if o1.is_zero() && poly {
                Ok(doc)
            } else {
                Err(Failure::Math(doc))
            }
        }
        Twist2Cmd::Example { p1, p2, spectators } => {
            let s = spectators.iter().map(|p| point(p)).collect::<Result<Vec<_>, _>>()?;
            let h = example_vector(point(&p1)?, point(&p2)?, &s).map_err(usage)?;
            Ok(json!({"schema": 1, "h": poly_json(&h)}))
        }
    }
}

fn ring(cmd: RingCmd) -> Outcome {
    let arith =
        |a: &str, b: &str, op| -> Outcome { Ok(poly_json(&ring_arithmetic(&load_poly(a)?, &load_poly(b)?, op))) };
    match cmd {
        RingCmd::Add { a, b } => arith(&a, &b, RingOp::Add),
        RingCmd::Sub { a, b } => arith(&a, &b, RingOp::Sub),
        RingCmd::Mul { a, b } => arith(&a, &b, RingOp::Mul),
        RingCmd::Diff { input, var: v } => Ok(poly_json(&load_poly(&input)?.partial(var(&v)?))),
        RingCmd::Degree { input, class } => {
            let class = match class {
                ClassArg::X => VarClass::X,
                ClassArg::Y => VarClass::Y,
                ClassArg::Xy => VarClass::XY,
                ClassArg::Spectator => VarClass::Spectator,
            };
            let d = load_poly(&input)?.homogeneous_degree(class).map_err(usage)?;
            Ok(json!({"schema": 1, "degree": d}))
        }
        RingCmd::Eval { input, assign } => {
            let f = load_poly(&input)?;
            let raw: BTreeMap<String, String> =
                serde_json::from_str(&read_input(&assign)?).map_err(|e| usage(format!("{assign}: {e}")))?;
            let mut values = BTreeMap::new();
            for (k, v) in raw {
                values.insert(var(&k)?, parse_rational(&v).map_err(usage)?);
            }
            let x = f.evaluate(&values).map_err(usage)?;
            Ok(json!({"schema": 1, "value": format_rational(&x)}))
        }
    }
}

fn calc(cmd: CalcCmd) -> Outcome {
    let p = match cmd {
        CalcCmd::Box { input, at, dim } => box_op(&load_poly(&input)?, point(&at)?, Dimension(dim)),
        CalcCmd::DotGradGrad { input, a, b, dim } => {
            dot_grad_grad(&load_poly(&input)?, point(&a)?, point(&b)?, Dimension(dim)).map_err(usage)?
        }
        CalcCmd::VecDotGrad { input, from, at } => {
            vec_dot_grad(&load_poly(&input)?, point_pair(&from)?, point(&at)?).map_err(usage)?
        }
        CalcCmd::DoubleContraction { input, from, first, second } => {
            double_contraction(&load_poly(&input)?, point_pair(&from)?, point(&first)?, point(&second)?)
                .map_err(usage)?
        }
    };
    Ok(poly_json(&p))
}

fn sl2(cmd: Sl2Cmd) -> Outcome {
    match cmd {
        Sl2Cmd::Act { g, input, exclude } => {
            let g = match g {
                GenArg::H => Sl2::H,
                GenArg::X => Sl2::X,
                GenArg::Y => Sl2::Y,
            };
            Ok(poly_json(&sl2_act(g, &load_poly(&input)?, spectator_pair(&exclude)?)))
        }
        Sl2Cmd::Ket { input, nu, exclude } => {
            let k = sl2_ket(&load_poly(&input)?, nu, spectator_pair(&exclude)?).map_err(usage)?;
            Ok(json!({"schema": 1, "ell": k.ell, "nu": k.nu, "value": poly_json(&k.value)}))
        }
    }
}

fn accept(filter: Option<&str>, golden: Option<&str>, write_golden: Option<&str>) -> ExitCode {
    let results = run_suite(filter);
    let mut failed = 0;
    for r in &results {
        println!("{}", r.line());
        failed += usize::from(!r.passed);
    }
    let total: f64 = results.iter().map(|r| r.elapsed.as_secs_f64()).sum();
    println!("{} passed, {failed} failed, {total:.2}s", results.len() - failed);
    let report = report_json(&results);
    if let Some(path) = write_golden {
        if let Err(e) = std::fs::write(path, format!("{report}\n")) {
            eprintln!("error: {path}: {e}");
            return ExitCode::from(1);
        }
    }
    if let Some(path) = golden {
        let expected = match std::fs::read_to_string(path) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {path}: {e}");
                return ExitCode::from(1);
            }
        };
        let diff = line_diff(expected.trim_end(), &report);
        if !diff.is_empty() {
            println!("golden mismatch against {path}:");
            for line in diff {
                println!("{line}");
            }
            return ExitCode::from(2);
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

/// Lines of `expected` missing from `actual` (`-`) and vice versa (`+`), in order.
fn line_diff(expected: &str, actual: &str) -> Vec<String> {
    let (e, a): (Vec<&str>, Vec<&str>) = (expected.lines().collect(), actual.lines().collect());
    // longest common subsequence table
    let mut lcs = vec![vec![0usize; a.len() + 1]; e.len() + 1];
    for i in (0..e.len()).rev() {
        for j in (0..a.len()).rev() {
            lcs[i][j] = if e[i] == a[j] { lcs[i + 1][j + 1] + 1 } else { lcs[i + 1][j].max(lcs[i][j + 1]) };
        }
    }
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < e.len() || j < a.len() {
        if i < e.len() && j < a.len() && e[i] == a[j] {
            i += 1;
            j += 1;
        } else if j < a.len() && (i == e.len() || lcs[i][j + 1] >= lcs[i + 1][j]) {
            out.push(format!("+{}", a[j]));
            j += 1;
        } else {
            out.push(format!("-{}", e[i]));
            i += 1;
        }
    }
    out
}

fn configure_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var("GCI_THREADS") {
        let n: usize = v.parse().map_err(|_| format!("GCI_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            return Err("GCI_THREADS must be positive".into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if let Command::Accept { filter, golden, write_golden } = &cli.command {
        return accept(filter.as_deref(), golden.as_deref(), write_golden.as_deref());
    }
    match run(cli.command) {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(Failure::Math(v)) => {
            println!("{v}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diff_marks_changed_lines() {
        assert!(line_diff("a\nb", "a\nb").is_empty());
        assert_eq!(line_diff("a\nb\nc", "a\nx\nc"), vec!["+x", "-b"]);
    }

    #[test]
    fn spins() {
        assert_eq!(doubled_spin("1/2").ok(), Some(1));
        assert_eq!(doubled_spin("2").ok(), Some(4));
        assert!(doubled_spin("1/3").is_err());
        assert!(doubled_spin("-1").is_err());
    }
}
