//! Exact rationals and the sparse Laurent-polynomial ring in squared distances.
//!
//! Every quantity in the toolkit lives in this ring: a finite sum of rational
//! multiples of Laurent monomials in the variables `rho_ab = (x_a - x_b)^2`.
//! Points are either the two bifield arguments `x`, `y` or numbered
//! spectators. The representation is canonical (no zero coefficients, sorted
//! variables and terms) so structural equality is mathematical equality.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = BigRational;

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"num/den"` or `"num"` decimal text.
pub fn parse_rational(text: &str) -> Result<Rational, RingError> {
    let text = text.trim();
    let bad = || RingError::Parse(format!("invalid rational {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(text).map_err(|_| bad())?)),
    }
}

/// Canonical text of a rational: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("rho_{0}{0} is not a variable")]
    SamePoint(Point),
    #[error("polynomial is not homogeneous in the {class:?} class (witness terms: {witness:?})")]
    Inhomogeneous { class: VarClass, witness: Vec<String> },
    #[error("zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("no value assigned to {0}")]
    MissingVariable(Var),
    #[error("division by zero: {0} assigned 0 but appears with a negative exponent")]
    DivisionByZero(Var),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A spacetime point: the bifield arguments `x`, `y`, or a spectator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    X,
    Y,
    Spectator(u32),
}

impl Point {
    pub fn label(&self) -> String {
        match self {
            Point::X => "x".to_string(),
            Point::Y => "y".to_string(),
            Point::Spectator(i) => i.to_string(),
        }
    }

    pub fn parse(label: &str) -> Result<Point, RingError> {
        match label.trim() {
            "x" | "X" => Ok(Point::X),
            "y" | "Y" => Ok(Point::Y),
            other => match other.parse::<u32>() {
                Ok(i) if i > 0 => Ok(Point::Spectator(i)),
                _ => Err(RingError::Parse(format!("invalid point label {other:?}"))),
            },
        }
    }

    pub fn is_spectator(&self) -> bool {
        matches!(self, Point::Spectator(_))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarClass {
    X,
    Y,
    XY,
    Spectator,
}

/// The squared distance between two distinct points. `Var{a,b} == Var{b,a}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Var {
    lo: Point,
    hi: Point,
}

impl Var {
    pub fn new(p: Point, q: Point) -> Result<Var, RingError> {
        match p.cmp(&q) {
            std::cmp::Ordering::Less => Ok(Var { lo: p, hi: q }),
            std::cmp::Ordering::Greater => Ok(Var { lo: q, hi: p }),
            std::cmp::Ordering::Equal => Err(RingError::SamePoint(p)),
        }
    }

    /// Panicking constructor for call sites where `p != q` is structural.
    pub fn of(p: Point, q: Point) -> Var {
        Var::new(p, q).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn x(i: u32) -> Var {
        Var::of(Point::X, Point::Spectator(i))
    }

    pub fn y(i: u32) -> Var {
        Var::of(Point::Y, Point::Spectator(i))
    }

    pub fn xy() -> Var {
        Var::of(Point::X, Point::Y)
    }

    pub fn s(i: u32, j: u32) -> Var {
        Var::of(Point::Spectator(i), Point::Spectator(j))
    }

    pub fn endpoints(&self) -> (Point, Point) {
        (self.lo, self.hi)
    }

    pub fn involves(&self, p: Point) -> bool {
        self.lo == p || self.hi == p
    }

    /// The endpoint that is not `p`, if `p` is an endpoint.
    pub fn other(&self, p: Point) -> Option<Point> {
        if self.lo == p {
            Some(self.hi)
        } else if self.hi == p {
            Some(self.lo)
        } else {
            None
        }
    }

    pub fn class(&self) -> VarClass {
        match (self.lo, self.hi) {
            (Point::X, Point::Y) => VarClass::XY,
            (Point::X, _) => VarClass::X,
            (Point::Y, _) => VarClass::Y,
            _ => VarClass::Spectator,
        }
    }

    fn sort_key(&self) -> (u8, u32, u32) {
        let idx = |p: Point| match p {
            Point::Spectator(i) => i,
            _ => 0,
        };
        match self.class() {
            VarClass::X => (0, idx(self.hi), 0),
            VarClass::Y => (1, idx(self.hi), 0),
            VarClass::XY => (2, 0, 0),
            VarClass::Spectator => (3, idx(self.lo), idx(self.hi)),
        }
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r_{}{}", self.lo, self.hi)
    }
}

/// A Laurent monomial: sorted `(variable, nonzero exponent)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(Var, i32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: i32) -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    /// Builds a monomial from arbitrary pairs, merging repeats and dropping zeros.
    pub fn from_pairs<I: IntoIterator<Item = (Var, i32)>>(pairs: I) -> Monomial {
        let mut map: BTreeMap<Var, i32> = BTreeMap::new();
        for (v, e) in pairs {
            let slot = map.entry(v).or_insert(0);
            *slot = checked_exp(*slot, e);
        }
        Monomial(map.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.0.binary_search_by(|(w, _)| w.cmp(&v)).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Var, i32)> {
        self.0.iter()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let e = checked_exp(a[i].1, b[j].1);
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    /// The monomial with `v`'s exponent shifted by `delta`.
    pub fn shifted(&self, v: Var, delta: i32) -> Monomial {
        self.mul(&Monomial::var(v, delta))
    }

    /// Sum of exponents over the variables of one class.
    pub fn degree_in(&self, class: VarClass) -> i64 {
        self.0.iter().filter(|(v, _)| v.class() == class).map(|&(_, e)| e as i64).sum()
    }

    /// Sum of exponents over the variables incident to `p`.
    pub fn weight_at(&self, p: Point) -> i64 {
        self.0.iter().filter(|(v, _)| v.involves(p)).map(|&(_, e)| e as i64).sum()
    }

    /// Splits off the `v` exponent: `(e, monomial without v)`.
    pub fn split(&self, v: Var) -> (i32, Monomial) {
        let e = self.exponent(v);
        (e, Monomial(self.0.iter().copied().filter(|&(w, _)| w != v).collect()))
    }

    pub fn points(&self) -> BTreeSet<Point> {
        let mut out = BTreeSet::new();
        for (v, _) in &self.0 {
            let (a, b) = v.endpoints();
            out.insert(a);
            out.insert(b);
        }
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

fn checked_exp(a: i32, b: i32) -> i32 {
    a.checked_add(b).unwrap_or_else(|| panic!("exponent overflow: {a} + {b}"))
}

/// A finite sum of rational multiples of Laurent monomials, in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

pub fn ring_arithmetic(a: &LaurentPoly, b: &LaurentPoly, op: RingOp) -> LaurentPoly {
    match op {
        RingOp::Add => a + b,
        RingOp::Sub => a - b,
        RingOp::Mul => a * b,
    }
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        LaurentPoly::term(c, Monomial::one())
    }

    pub fn var(v: Var) -> Self {
        LaurentPoly::term(Rational::one(), Monomial::var(v, 1))
    }

    /// `v^e` for any integer `e`.
    pub fn var_pow(v: Var, e: i32) -> Self {
        LaurentPoly::term(Rational::one(), Monomial::var(v, e))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * m` in place, keeping the no-zero-coefficient invariant.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Formal partial derivative `d/d rho_v`, valid for negative exponents.
    pub fn partial(&self, v: Var) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e != 0 {
                out.add_term(m.shifted(v, -1), c * int(e as i64));
            }
        }
        out
    }

    /// `d^2 / d rho_u d rho_v`.
    pub fn partial2(&self, u: Var, v: Var) -> LaurentPoly {
        self.partial(u).partial(v)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn points(&self) -> BTreeSet<Point> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            out.extend(m.points());
        }
        out
    }

    pub fn spectators(&self) -> BTreeSet<u32> {
        self.points()
            .into_iter()
            .filter_map(|p| match p {
                Point::Spectator(i) => Some(i),
                _ => None,
            })
            .collect()
    }

    /// The common total exponent over the variables of `class`.
    pub fn homogeneous_degree(&self, class: VarClass) -> Result<i64, RingError> {
        let mut iter = self.terms.keys();
        let first = iter.next().ok_or(RingError::ZeroPolynomial)?;
        let d = first.degree_in(class);
        for m in iter {
            if m.degree_in(class) != d {
                return Err(RingError::Inhomogeneous { class, witness: vec![first.to_string(), m.to_string()] });
            }
        }
        Ok(d)
    }

    pub fn evaluate(&self, assignment: &BTreeMap<Var, Rational>) -> Result<Rational, RingError> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut value = c.clone();
            for &(v, e) in m.iter() {
                let x = assignment.get(&v).ok_or(RingError::MissingVariable(v))?;
                if e < 0 && x.is_zero() {
                    return Err(RingError::DivisionByZero(v));
                }
                value *= pow_rational(x, e);
            }
            total += value;
        }
        Ok(total)
    }

    /// Groups terms by the exponent of `v`: `self = sum_e v^e * out[e]`.
    pub fn collect_powers(&self, v: Var) -> BTreeMap<i32, LaurentPoly> {
        let mut out: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Keeps the terms for which `keep` returns true.
    pub fn filter_terms<F: Fn(&Monomial) -> bool>(&self, keep: F) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Substitutes `v -> value` in every term (a ring homomorphism onto fewer variables).
    pub fn substitute(&self, v: Var, value: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e, rest) in self.collect_powers(v) {
            let factor = if e >= 0 {
                value.pow(e as u32)
            } else {
                // Only monomial values can be inverted inside the ring.
                let (m, c) = value
                    .terms
                    .iter()
                    .next()
                    .filter(|_| value.len() == 1)
                    .expect("negative power substitution needs a monomial value");
                LaurentPoly::term(pow_rational(c, e), m.inverse().pow_exps(-e))
            };
            out += &(&rest * &factor);
        }
        out
    }

    pub fn to_json_value(&self) -> PolyJson {
        let vars: Vec<Var> = self.vars().into_iter().collect();
        PolyJson {
            schema: 1,
            vars: vars
                .iter()
                .map(|v| {
                    let (a, b) = v.endpoints();
                    VarJson { a: a.label(), b: b.label() }
                })
                .collect(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    exps: vars.iter().map(|&v| m.exponent(v)).collect(),
                    coef: format_rational(c),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("polynomial serializes")
    }

    pub fn from_json_value(doc: &PolyJson) -> Result<LaurentPoly, RingError> {
        if doc.schema != 1 {
            return Err(RingError::Parse(format!("unsupported schema {}", doc.schema)));
        }
        let vars = doc
            .vars
            .iter()
            .map(|v| Var::new(Point::parse(&v.a)?, Point::parse(&v.b)?))
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = LaurentPoly::zero();
        for t in &doc.terms {
            if t.exps.len() != vars.len() {
                return Err(RingError::Parse(format!(
                    "term has {} exponents for {} variables",
                    t.exps.len(),
                    vars.len()
                )));
            }
            let m = Monomial::from_pairs(vars.iter().copied().zip(t.exps.iter().copied()));
            out.add_term(m, parse_rational(&t.coef)?);
        }
        Ok(out)
    }

    pub fn from_json(text: &str) -> Result<LaurentPoly, RingError> {
        let doc: PolyJson = serde_json::from_str(text).map_err(|e| RingError::Parse(e.to_string()))?;
        LaurentPoly::from_json_value(&doc)
    }
}

impl Monomial {
    fn pow_exps(&self, n: i32) -> Monomial {
        Monomial(
            self.0
                .iter()
                .map(|&(v, e)| {
                    let p = e.checked_mul(n).unwrap_or_else(|| panic!("exponent overflow: {e} * {n}"));
                    (v, p)
                })
                .filter(|&(_, e)| e != 0)
                .collect(),
        )
    }
}

/// `x^e` for integer `e`; `x` must be nonzero when `e < 0`.
pub fn pow_rational(x: &Rational, e: i32) -> Rational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarJson {
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<i32>,
    pub coef: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    #[serde(default = "schema_one")]
    pub schema: u32,
    pub vars: Vec<VarJson>,
    pub terms: Vec<TermJson>,
}

fn schema_one() -> u32 {
    1
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl From<Var> for LaurentPoly {
    fn from(v: Var) -> Self {
        LaurentPoly::var(v)
    }
}

impl From<Rational> for LaurentPoly {
    fn from(c: Rational) -> Self {
        LaurentPoly::constant(c)
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl AddAssign<LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

/// The sl(2) singlet `R_ij = rho_xi rho_yj - rho_xj rho_yi`.
pub fn singlet(i: u32, j: u32) -> LaurentPoly {
    &LaurentPoly::var(Var::x(i)) * &LaurentPoly::var(Var::y(j))
        - &LaurentPoly::var(Var::x(j)) * &LaurentPoly::var(Var::y(i))
}
