//! The leading-part PDE of a biharmonic bifield, its sl(2) structure,
//! double-pole structures (DPS) and the harmonic completion in `rho_xy`.
//!
//! A leading part `U0` is a Laurent polynomial in `rho_xi`, `rho_yi` and
//! spectator distances `rho_ij`, homogeneous of degree -1 in the x-class and
//! in the y-class. It must satisfy
//!
//! ```text
//! (sum_i rho_yi d_xi)(sum_{i<j} rho_ij d_yi d_yj) U0 = (x <-> y)
//! ```
//!
//! with all sums over spectators.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactring::{int, singlet, LaurentPoly, Monomial, Point, Rational, RingError, Var, VarClass};
use crate::linalg::{combine, solve_columns};
use crate::pointcalc::{box_op, Dimension};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BiharmonicError {
    #[error("invalid DPS spec: {0}")]
    InvalidSpec(String),
    #[error("input contains rho_xy")]
    ContainsRhoXy,
    #[error("no solution in the ansatz space; residual has {} terms", .residual.len())]
    NoSolution { residual: LaurentPoly },
    #[error("completion order {order} is not uniquely solvable: {reason}")]
    SingularOrder { order: usize, reason: String },
    #[error(transparent)]
    Ring(#[from] RingError),
}

type Result<T> = std::result::Result<T, BiharmonicError>;

fn check_no_rho_xy(u: &LaurentPoly) -> Result<()> {
    if u.vars().contains(&Var::xy()) {
        Err(BiharmonicError::ContainsRhoXy)
    } else {
        Ok(())
    }
}

/// `(a)_j = a (a+1) ... (a+j-1)`.
pub fn pochhammer(a: &Rational, j: u32) -> Rational {
    let mut out = Rational::one();
    for i in 0..j {
        out *= a + int(i as i64);
    }
    out
}

fn factorial(j: u32) -> Rational {
    (1..=j).fold(Rational::one(), |acc, i| acc * int(i as i64))
}

fn second_order_sum(u: &LaurentPoly, spectators: &[u32], var: fn(u32) -> Var) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (k, &i) in spectators.iter().enumerate() {
        let di = u.partial(var(i));
        if di.is_zero() {
            continue;
        }
        for &j in &spectators[k + 1..] {
            let dij = di.partial(var(j));
            if !dij.is_zero() {
                out += &(&LaurentPoly::var(Var::s(i, j)) * &dij);
            }
        }
    }
    out
}

fn transfer(u: &LaurentPoly, spectators: &[u32], to: fn(u32) -> Var, from: fn(u32) -> Var) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for &i in spectators {
        let d = u.partial(from(i));
        if !d.is_zero() {
            out += &(&LaurentPoly::var(to(i)) * &d);
        }
    }
    out
}

/// The left side minus the right side of the leading-part PDE.
pub fn pde_apply(u: &LaurentPoly) -> Result<LaurentPoly> {
    check_no_rho_xy(u)?;
    let s: Vec<u32> = u.spectators().into_iter().collect();
    let by = second_order_sum(u, &s, Var::y);
    let bx = second_order_sum(u, &s, Var::x);
    Ok(transfer(&by, &s, Var::y, Var::x) - transfer(&bx, &s, Var::x, Var::y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sl2 {
    H,
    X,
    Y,
}

/// `H`, `X = sum rho_xi d_yi` or `Y = sum rho_yi d_xi`, summed over the
/// spectators of `p` other than the excluded pair.
pub fn sl2_act(g: Sl2, p: &LaurentPoly, excluded: (u32, u32)) -> LaurentPoly {
    let s: Vec<u32> = p.spectators().into_iter().filter(|&i| i != excluded.0 && i != excluded.1).collect();
    match g {
        Sl2::X => transfer(p, &s, Var::x, Var::y),
        Sl2::Y => transfer(p, &s, Var::y, Var::x),
        Sl2::H => {
            let two_h = transfer(p, &s, Var::x, Var::x) - transfer(p, &s, Var::y, Var::y);
            two_h.scale(&Rational::new(1.into(), 2.into()))
        }
    }
}

/// The vector `|l/2, l/2 - nu> = (-1)^nu (-l)_nu Y^nu P_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Vector {
    pub ell: u32,
    pub nu: u32,
    pub value: LaurentPoly,
}

pub fn sl2_ket(p_ell: &LaurentPoly, nu: u32, excluded: (u32, u32)) -> Result<Sl2Vector> {
    let ell = if p_ell.is_zero() { 0 } else { p_ell.homogeneous_degree(VarClass::X)? };
    if ell < 0 {
        return Err(BiharmonicError::InvalidSpec(format!("P_ell has negative order {ell}")));
    }
    let mut value = p_ell.clone();
    for _ in 0..nu {
        value = sl2_act(Sl2::Y, &value, excluded);
    }
    let mut c = pochhammer(&int(-ell), nu);
    if nu % 2 == 1 {
        c = -c;
    }
    Ok(Sl2Vector { ell: ell as u32, nu, value: value.scale(&c) })
}

/// Generator data of a double-pole structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpsSpec {
    pub m: u32,
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub p: u32,
    pub q: u32,
    /// `P_ell = prod rho_xi^e`.
    pub p_ell: Vec<(u32, u32)>,
    /// `Q_k = prod R_ij`.
    pub q_k: Vec<(u32, u32)>,
    /// `L = prod rho_ij^e`.
    pub l: Vec<(u32, u32, i32)>,
    /// All spectator points of the correlator.
    pub spectators: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DpsSpecJson {
    #[serde(default = "one")]
    pub schema: u32,
    pub m: u32,
    pub n: u32,
    pub a: u32,
    pub b: u32,
    pub p: u32,
    pub q: u32,
    #[serde(rename = "P_ell", default)]
    pub p_ell: Vec<(u32, u32)>,
    #[serde(rename = "Q_k")]
    pub q_k: Vec<(u32, u32)>,
    #[serde(rename = "L", default)]
    pub l: Vec<(u32, u32, i32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectators: Option<Vec<u32>>,
}

fn one() -> u32 {
    1
}

impl DpsSpec {
    /// Validates the data; `spectators` defaults to every point mentioned.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        (m, n): (u32, u32),
        (a, b): (u32, u32),
        (p, q): (u32, u32),
        p_ell: Vec<(u32, u32)>,
        q_k: Vec<(u32, u32)>,
        l: Vec<(u32, u32, i32)>,
        spectators: Option<Vec<u32>>,
    ) -> Result<DpsSpec> {
        let bad = |msg: String| Err(BiharmonicError::InvalidSpec(msg));
        if m == 0 || n == 0 || m == n {
            return bad(format!("pole points must be distinct spectators, got ({m}, {n})"));
        }
        if a == 0 || b == 0 {
            return bad("a and b must be positive".into());
        }
        if p >= a || q >= b {
            return bad(format!("need p < a and q < b, got p={p}, a={a}, q={q}, b={b}"));
        }
        let ell = p + q;
        if a + b < ell + 2 {
            return bad(format!("k = a+b-l-1 = {} must be at least 1", (a + b) as i64 - ell as i64 - 1));
        }
        let k = a + b - ell - 1;
        let mut mentioned: BTreeSet<u32> = [m, n].into_iter().collect();
        let p_order: u32 = p_ell.iter().map(|&(_, e)| e).sum();
        if p_order != ell {
            return bad(format!("P_ell has order {p_order}, expected {ell}"));
        }
        for &(i, _) in &p_ell {
            if i == 0 || i == m || i == n {
                return bad(format!("P_ell may not involve point {i}"));
            }
            mentioned.insert(i);
        }
        if q_k.len() as u32 != k {
            return bad(format!("Q_k has {} singlet factors, expected k = {k}", q_k.len()));
        }
        for &(i, j) in &q_k {
            if i == j || i == 0 || j == 0 || [i, j].iter().any(|&t| t == m || t == n) {
                return bad(format!("invalid singlet R_{i}{j}"));
            }
            mentioned.extend([i, j]);
        }
        for &(i, j, _) in &l {
            if i == j || i == 0 || j == 0 {
                return bad(format!("invalid L variable rho_{i}{j}"));
            }
            mentioned.extend([i, j]);
        }
        let spectators: BTreeSet<u32> = match spectators {
            Some(s) => {
                let s: BTreeSet<u32> = s.into_iter().collect();
                if let Some(missing) = mentioned.difference(&s).next() {
                    return bad(format!("point {missing} is not among the spectators"));
                }
                s
            }
            None => mentioned,
        };
        let others = spectators.iter().filter(|&&i| i != m && i != n).count();
        if others < 2 {
            return bad(format!(
                "only {others} spectator(s) besides m, n: no singlet R_ij exists, so k >= 1 cannot hold"
            ));
        }
        Ok(DpsSpec { m, n, a, b, p, q, p_ell, q_k, l, spectators: spectators.into_iter().collect() })
    }

    pub fn from_json(text: &str) -> Result<DpsSpec> {
        let doc: DpsSpecJson = serde_json::from_str(text).map_err(|e| BiharmonicError::InvalidSpec(e.to_string()))?;
        DpsSpec::try_from(doc)
    }

    pub fn to_json_value(&self) -> DpsSpecJson {
        DpsSpecJson {
            schema: 1,
            m: self.m,
            n: self.n,
            a: self.a,
            b: self.b,
            p: self.p,
            q: self.q,
            p_ell: self.p_ell.clone(),
            q_k: self.q_k.clone(),
            l: self.l.clone(),
            spectators: Some(self.spectators.clone()),
        }
    }

    pub fn ell(&self) -> u32 {
        self.p + self.q
    }

    /// Maximal pole order `mu = 2(a+b) - l`.
    pub fn mu(&self) -> u32 {
        2 * (self.a + self.b) - self.ell()
    }

    pub fn p_poly(&self) -> LaurentPoly {
        self.p_ell.iter().fold(LaurentPoly::one(), |acc, &(i, e)| &acc * &LaurentPoly::var_pow(Var::x(i), e as i32))
    }

    pub fn q_poly(&self) -> LaurentPoly {
        self.q_k.iter().fold(LaurentPoly::one(), |acc, &(i, j)| &acc * &singlet(i, j))
    }

    pub fn l_monomial(&self) -> Monomial {
        self.l.iter().fold(Monomial::one(), |acc, &(i, j, e)| acc.mul(&Monomial::var(Var::s(i, j), e)))
    }
}

impl TryFrom<DpsSpecJson> for DpsSpec {
    type Error = BiharmonicError;

    fn try_from(d: DpsSpecJson) -> Result<DpsSpec> {
        if d.schema != 1 {
            return Err(BiharmonicError::InvalidSpec(format!("unsupported schema {}", d.schema)));
        }
        DpsSpec::new((d.m, d.n), (d.a, d.b), (d.p, d.q), d.p_ell, d.q_k, d.l, d.spectators)
    }
}

/// The closed-form part of maximal pole order `mu`.
pub fn dps_maximal(spec: &DpsSpec) -> Result<LaurentPoly> {
    let (m, n) = (spec.m, spec.n);
    let (a, b, p, q) = (spec.a as i64, spec.b as i64, spec.p as i64, spec.q as i64);
    let p_ell = spec.p_poly();
    let tail = spec.q_poly().mul_monomial(&spec.l_monomial());
    let mut out = LaurentPoly::zero();
    for delta in 0..=spec.p {
        let cd = pochhammer(&int(b - q), delta) * pochhammer(&int(-p), delta)
            / (pochhammer(&int(1 - a), delta) * factorial(delta));
        for eps in 0..=spec.q {
            let ce = pochhammer(&int(a - p), eps) * pochhammer(&int(-q), eps)
                / (pochhammer(&int(1 - b), eps) * factorial(eps));
            let c = &cd * &ce;
            if c.is_zero() {
                continue;
            }
            let (d, e) = (delta as i64, eps as i64);
            let poles = Monomial::from_pairs([
                (Var::x(m), (d - a) as i32),
                (Var::x(n), (e - b) as i32),
                (Var::y(m), (q - d - b) as i32),
                (Var::y(n), (p - e - a) as i32),
            ]);
            let ket = sl2_ket(&p_ell, delta + eps, (m, n))?;
            out += &(&ket.value.mul_monomial(&poles) * &tail).scale(&c);
        }
    }
    Ok(out)
}

/// Bounds of the finite monomial basis used by [`dps_solve`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct AnsatzConfig {
    /// Largest pole exponent per pole variable; `None` means `max(a, b)`.
    pub pole_cap: Option<u32>,
    /// Spectator exponents range over `L`'s exponent plus or minus this; `None` means `a + b`.
    pub window: Option<u32>,
}

/// Total pole order at the four pole variables of `(m, n)`.
pub fn pole_order(mono: &Monomial, m: u32, n: u32) -> u32 {
    [Var::x(m), Var::x(n), Var::y(m), Var::y(n)].iter().map(|&v| (-mono.exponent(v)).max(0) as u32).sum()
}

/// Exponent vectors over `slots` with entries in `[lo_i, hi_i]` summing to `total`.
fn compositions(lo: &[i32], hi: &[i32], total: i32) -> Vec<Vec<i32>> {
    fn go(k: usize, lo: &[i32], hi: &[i32], left: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if k == lo.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest_lo: i32 = lo[k + 1..].iter().sum();
        let rest_hi: i32 = hi[k + 1..].iter().sum();
        let from = lo[k].max(left - rest_hi);
        let to = hi[k].min(left - rest_lo);
        for e in from..=to {
            cur.push(e);
            go(k + 1, lo, hi, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, lo, hi, total, &mut Vec::new(), &mut out);
    out
}

/// Spectator-pair exponents `f_ij` in `[lo, hi]` with prescribed vertex sums.
fn pair_assignments(points: &[u32], lo: &[i32], hi: &[i32], weights: &BTreeMap<u32, i32>) -> Vec<Vec<i32>> {
    let pairs: Vec<(usize, usize)> =
        (0..points.len()).flat_map(|i| (i + 1..points.len()).map(move |j| (i, j))).collect();
    // last pair index touching each vertex
    let mut last = vec![usize::MAX; points.len()];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        last[i] = k;
        last[j] = k;
    }
    let mut out = Vec::new();
    let mut sums = vec![0i32; points.len()];
    let mut cur = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        pairs: &[(usize, usize)],
        last: &[usize],
        lo: &[i32],
        hi: &[i32],
        target: &[i32],
        sums: &mut Vec<i32>,
        cur: &mut Vec<i32>,
        out: &mut Vec<Vec<i32>>,
    ) {
        if k == pairs.len() {
            if sums.iter().zip(target).all(|(s, t)| s == t) {
                out.push(cur.clone());
            }
            return;
        }
        let (i, j) = pairs[k];
        for e in lo[k]..=hi[k] {
            sums[i] += e;
            sums[j] += e;
            let ok = (last[i] != k || sums[i] == target[i]) && (last[j] != k || sums[j] == target[j]);
            if ok {
                cur.push(e);
                go(k + 1, pairs, last, lo, hi, target, sums, cur, out);
                cur.pop();
            }
            sums[i] -= e;
            sums[j] -= e;
        }
    }
    let target: Vec<i32> = points.iter().map(|p| weights[p]).collect();
    if points.len() < 2 {
        if target.iter().all(|&t| t == 0) {
            out.push(Vec::new());
        }
        return out;
    }
    go(0, &pairs, &last, lo, hi, &target, &mut sums, &mut cur, &mut out);
    out
}

/// The ansatz basis for the lower pole orders of `spec`, in canonical order.
pub fn dps_ansatz(spec: &DpsSpec, maximal: &LaurentPoly, cfg: AnsatzConfig) -> Vec<Monomial> {
    let (m, n) = (spec.m, spec.n);
    let cap = cfg.pole_cap.unwrap_or(spec.a.max(spec.b)) as i32;
    let window = cfg.window.unwrap_or(spec.a + spec.b) as i32;
    let pts = &spec.spectators;
    let Some(reference) = maximal.terms().next().map(|(mono, _)| mono.clone()) else {
        return Vec::new();
    };
    let weights: BTreeMap<u32, i32> =
        pts.iter().map(|&i| (i, reference.weight_at(Point::Spectator(i)) as i32)).collect();
    let is_pole = |i: u32| i == m || i == n;
    // Non-pole x/y exponents are nonnegative and bounded by what the poles can absorb.
    let lo: Vec<i32> = pts.iter().map(|&i| if is_pole(i) { -cap } else { 0 }).collect();
    let hi: Vec<i32> = pts.iter().map(|&i| if is_pole(i) { 0 } else { 2 * cap }).collect();
    let patterns = compositions(&lo, &hi, -1);
    let l_mono = spec.l_monomial();
    let pairs: Vec<(u32, u32)> =
        (0..pts.len()).flat_map(|i| (i + 1..pts.len()).map(move |j| (pts[i], pts[j]))).collect();
    let plo: Vec<i32> = pairs.iter().map(|&(i, j)| l_mono.exponent(Var::s(i, j)) - window).collect();
    let phi: Vec<i32> = pairs.iter().map(|&(i, j)| l_mono.exponent(Var::s(i, j)) + window).collect();
    let mu = spec.mu();
    let mut out = BTreeSet::new();
    for ex in &patterns {
        for ey in &patterns {
            let xy = Monomial::from_pairs(
                pts.iter()
                    .zip(ex)
                    .map(|(&i, &e)| (Var::x(i), e))
                    .chain(pts.iter().zip(ey).map(|(&i, &e)| (Var::y(i), e))),
            );
            if pole_order(&xy, m, n) >= mu {
                continue;
            }
            let residual: BTreeMap<u32, i32> =
                pts.iter().map(|&i| (i, weights[&i] - xy.exponent(Var::x(i)) - xy.exponent(Var::y(i)))).collect();
            for f in pair_assignments(pts, &plo, &phi, &residual) {
                let s = Monomial::from_pairs(pairs.iter().zip(&f).map(|(&(i, j), &e)| (Var::s(i, j), e)));
                out.insert(xy.mul(&s));
            }
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug)]
pub struct DpsSolution {
    pub maximal: LaurentPoly,
    pub u0: LaurentPoly,
    /// Homogeneous solutions inside the ansatz (DPSs of lower maximal order).
    pub kernel: Vec<LaurentPoly>,
    pub basis_size: usize,
}

fn pde_columns(basis: &[Monomial]) -> Vec<LaurentPoly> {
    basis
        .par_iter()
        .map(|mono| pde_apply(&LaurentPoly::term(Rational::one(), mono.clone())).expect("ansatz has no rho_xy"))
        .collect()
}

/// Completes the maximal part to a solution of the PDE inside the ansatz.
pub fn dps_solve(spec: &DpsSpec, cfg: AnsatzConfig) -> Result<DpsSolution> {
    let maximal = dps_maximal(spec)?;
    let basis = dps_ansatz(spec, &maximal, cfg);
    let target = -pde_apply(&maximal)?;
    let columns = pde_columns(&basis);
    let res = solve_columns(&columns, &target);
    let polys: Vec<LaurentPoly> = basis.iter().map(|m| LaurentPoly::term(Rational::one(), m.clone())).collect();
    match &res.particular {
        None => {
            let attempt = &maximal + &combine(&polys, &res.best_effort);
            Err(BiharmonicError::NoSolution { residual: pde_apply(&attempt)? })
        }
        Some(x) => {
            let u0 = &maximal + &combine(&polys, x);
            let kernel = res.kernel.iter().map(|k| combine(&polys, k)).collect();
            Ok(DpsSolution { maximal, u0, kernel, basis_size: basis.len() })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn point(self) -> Point {
        match self {
            Side::X => Point::X,
            Side::Y => Point::Y,
        }
    }
}

/// `U_0 + rho_xy U_1 + ... + rho_xy^K U_K`, harmonic at the side point modulo `rho_xy^K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionSeries {
    pub side: Side,
    pub order: usize,
    pub coeffs: Vec<LaurentPoly>,
}

impl CompletionSeries {
    pub fn sum(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (k, u) in self.coeffs.iter().enumerate() {
            out += &u.mul_monomial(&Monomial::var(Var::xy(), k as i32));
        }
        out
    }
}

fn box_coefficient(f: &LaurentPoly, at: Point, power: i32) -> BTreeMap<i32, LaurentPoly> {
    let mut b = box_op(f, at, Dimension::FOUR).collect_powers(Var::xy());
    b.retain(|&e, p| e <= power && !p.is_zero());
    b
}

/// Candidate monomials for `U_{j+1}` given the right-hand side at order `j`.
///
/// On the unknown, the order-`j` operator is a multiple of `Y` (x side) or
/// `X` (y side). Writing `rho_xi^a rho_yi^b` with `s_i = a + b` fixed, a
/// Laurent preimage can only have poles one order lower than the right-hand
/// side, and the degree constraint bounds the rest.
fn completion_candidates(rhs: &LaurentPoly, side: Side, spectators: &[u32], degree: i32) -> Vec<Monomial> {
    type VarOf = fn(u32) -> Var;
    let (lowered, other): (VarOf, VarOf) = match side {
        Side::X => (Var::x, Var::y),
        Side::Y => (Var::y, Var::x),
    };
    // block key: spectator part and s_i
    let mut blocks: BTreeMap<(Monomial, Vec<i32>), Vec<i32>> = BTreeMap::new();
    for (mono, _) in rhs.terms() {
        let spect = Monomial::from_pairs(mono.iter().copied().filter(|(v, _)| v.class() == VarClass::Spectator));
        let s: Vec<i32> = spectators.iter().map(|&i| mono.exponent(lowered(i)) + mono.exponent(other(i))).collect();
        let a: Vec<i32> = spectators.iter().map(|&i| mono.exponent(lowered(i))).collect();
        let entry = blocks.entry((spect, s)).or_insert_with(|| a.clone());
        for (lo, v) in entry.iter_mut().zip(&a) {
            *lo = (*lo).min(*v);
        }
    }
    let mut out = BTreeSet::new();
    for ((spect, s), min_a) in blocks {
        let c: Vec<i32> = min_a.iter().map(|&a| (-a - 1).max(0)).collect();
        let total_c: i32 = c.iter().sum();
        let lo: Vec<i32> = c.iter().map(|&ci| -ci).collect();
        let hi: Vec<i32> = c.iter().map(|&ci| degree + total_c - ci).collect();
        for a in compositions(&lo, &hi, degree) {
            let xy = Monomial::from_pairs(
                spectators.iter().enumerate().flat_map(|(k, &i)| [(lowered(i), a[k]), (other(i), s[k] - a[k])]),
            );
            out.insert(xy.mul(&spect));
        }
    }
    out.into_iter().collect()
}

fn check_leading_part(u0: &LaurentPoly) -> Result<()> {
    check_no_rho_xy(u0)?;
    if u0.is_zero() {
        return Ok(());
    }
    for class in [VarClass::X, VarClass::Y] {
        let d = u0.homogeneous_degree(class)?;
        if d != -1 {
            return Err(RingError::Inhomogeneous { class, witness: vec![format!("degree {d}, expected -1")] }.into());
        }
    }
    Ok(())
}

/// The harmonic completion of `u0` at the side point (D = 4), to order `k`.
pub fn complete(u0: &LaurentPoly, side: Side, k: usize) -> Result<CompletionSeries> {
    check_leading_part(u0)?;
    let at = side.point();
    let spectators: Vec<u32> = u0.spectators().into_iter().collect();
    let mut coeffs = vec![u0.clone()];
    let mut partial = u0.clone();
    for j in 0..k {
        let jj = j as i32;
        let low = box_coefficient(&partial, at, jj);
        if let Some((&e, _)) = low.iter().find(|(&e, _)| e < jj) {
            return Err(BiharmonicError::SingularOrder {
                order: j,
                reason: format!("lower order rho_xy^{e} did not cancel"),
            });
        }
        let rhs = low.get(&jj).cloned().unwrap_or_default();
        let next = if rhs.is_zero() {
            LaurentPoly::zero()
        } else {
            let basis = completion_candidates(&rhs, side, &spectators, -2 - jj);
            let lift = Monomial::var(Var::xy(), jj + 1);
            let columns: Vec<LaurentPoly> = basis
                .par_iter()
                .map(|mono| {
                    let f = LaurentPoly::term(Rational::one(), mono.mul(&lift));
                    box_coefficient(&f, at, jj).remove(&jj).unwrap_or_default()
                })
                .collect();
            let res = solve_columns(&columns, &-rhs);
            let Some(x) = res.particular else {
                return Err(BiharmonicError::SingularOrder {
                    order: j + 1,
                    reason: "no Laurent polynomial solution".into(),
                });
            };
            if !res.kernel.is_empty() {
                return Err(BiharmonicError::SingularOrder {
                    order: j + 1,
                    reason: format!("{}-dimensional kernel", res.kernel.len()),
                });
            }
            let polys: Vec<LaurentPoly> = basis.into_iter().map(|m| LaurentPoly::term(Rational::one(), m)).collect();
            combine(&polys, &x)
        };
        partial += &next.mul_monomial(&Monomial::var(Var::xy(), jj + 1));
        coeffs.push(next);
    }
    Ok(CompletionSeries { side, order: k, coeffs })
}

/// `X g_x - Y g_y`, where `g_s` is the `rho_xy^0` part of the wave operator
/// at `s` applied to `u0`. Both completions share their first correction
/// `U_1`, and `[X, Y] U_1 = 2H U_1 = 0` at equal degrees, so this must vanish
/// whenever the two completions can coincide. It equals `4 pde_apply(u0)`.
pub fn integrability_defect(u0: &LaurentPoly) -> Result<LaurentPoly> {
    check_leading_part(u0)?;
    let g = |p: Point| box_coefficient(u0, p, 0).remove(&0).unwrap_or_default();
    Ok(sl2_act(Sl2::X, &g(Point::X), (0, 0)) - sl2_act(Sl2::Y, &g(Point::Y), (0, 0)))
}

/// Whether the x-side and y-side completions agree through order `k`.
///
/// A nonzero [`integrability_defect`] already rules agreement out; otherwise
/// both series are computed and compared.
pub fn completion_consistent(u0: &LaurentPoly, k: usize) -> Result<bool> {
    if k > 0 && !integrability_defect(u0)?.is_zero() {
        return Ok(false);
    }
    let x = complete(u0, Side::X, k)?;
    let y = complete(u0, Side::Y, k)?;
    Ok(x.coeffs == y.coeffs)
}

/// Terms of `U` grouped by their pole signature `(a, b, c, d)` in
/// `P / (rho_xm^a rho_xn^b rho_yn^c rho_ym^d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleProfile {
    pub m: u32,
    pub n: u32,
    pub entries: BTreeMap<(u32, u32, u32, u32), LaurentPoly>,
}

impl PoleProfile {
    pub fn is_double(&self) -> bool {
        self.entries.keys().any(|&(a, b, c, d)| (a > 0 && b > 0) || (c > 0 && d > 0))
    }

    pub fn max_order(&self) -> u32 {
        self.entries.keys().map(|&(a, b, c, d)| a + b + c + d).max().unwrap_or(0)
    }

    /// Largest order among the double-pole signatures.
    pub fn max_double_order(&self) -> u32 {
        self.entries
            .keys()
            .filter(|&&(a, b, c, d)| (a > 0 && b > 0) || (c > 0 && d > 0))
            .map(|&(a, b, c, d)| a + b + c + d)
            .max()
            .unwrap_or(0)
    }
}

pub fn pole_profile(u: &LaurentPoly, m: u32, n: u32) -> PoleProfile {
    let vars = [Var::x(m), Var::x(n), Var::y(n), Var::y(m)];
    let mut entries: BTreeMap<(u32, u32, u32, u32), LaurentPoly> = BTreeMap::new();
    for (mono, c) in u.terms() {
        let sig: Vec<u32> = vars.iter().map(|&v| (-mono.exponent(v)).max(0) as u32).collect();
        if sig.iter().all(|&s| s == 0) {
            continue;
        }
        let mut num = mono.clone();
        for (&v, &s) in vars.iter().zip(&sig) {
            num = num.shifted(v, s as i32);
        }
        entries.entry((sig[0], sig[1], sig[2], sig[3])).or_default().add_term(num, c.clone());
    }
    PoleProfile { m, n, entries }
}

/// Outcome of the exhaustive five-point search for double-pole solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FivePointScan {
    pub max_order: u32,
    pub candidates: usize,
    pub kernel_dim: usize,
    /// Kernel vectors with a genuine double pole at some pair of spectators.
    pub double_pole_solutions: usize,
}

fn has_double_pole(mono: &Monomial, spectators: &[u32]) -> bool {
    [Var::x as fn(u32) -> Var, Var::y]
        .iter()
        .any(|class| spectators.iter().filter(|&&i| mono.exponent(class(i)) < 0).count() >= 2)
}

/// Every monomial in three spectators with x- and y-degree -1, at most
/// `max_order` negative x/y exponents in total, and per-spectator weights
/// `grade`. Multiplying by spectator monomials commutes with the PDE, so one
/// grade of each parity represents all of them.
pub fn five_point_candidates(max_order: u32, grade: [i32; 3]) -> Vec<Monomial> {
    let pts = [1u32, 2, 3];
    let cap = max_order as i32;
    let lo = [-cap; 3];
    let hi = [cap + 1; 3];
    let patterns = compositions(&lo, &hi, -1);
    let mut out = BTreeSet::new();
    for ex in &patterns {
        for ey in &patterns {
            let neg: i32 = ex.iter().chain(ey).filter(|&&e| e < 0).map(|e| -e).sum();
            if neg > cap {
                continue;
            }
            let w: Vec<i32> = (0..3).map(|k| grade[k] - ex[k] - ey[k]).collect();
            // f_12 + f_13 = w1, f_12 + f_23 = w2, f_13 + f_23 = w3
            let twice = [w[0] + w[1] - w[2], w[0] + w[2] - w[1], w[1] + w[2] - w[0]];
            if twice.iter().any(|t| t % 2 != 0) {
                continue;
            }
            let f = [(1, 2, twice[0] / 2), (1, 3, twice[1] / 2), (2, 3, twice[2] / 2)];
            let mono = Monomial::from_pairs(
                pts.iter()
                    .zip(ex)
                    .map(|(&i, &e)| (Var::x(i), e))
                    .chain(pts.iter().zip(ey).map(|(&i, &e)| (Var::y(i), e)))
                    .chain(f.iter().map(|&(i, j, e)| (Var::s(i, j), e))),
            );
            out.insert(mono);
        }
    }
    out.into_iter().collect()
}

/// Solves the PDE on the five-point candidate space and counts kernel
/// vectors carrying a double pole.
pub fn five_point_scan(max_order: u32) -> FivePointScan {
    let pts = [1u32, 2, 3];
    let mut candidates = 0;
    let mut kernel_dim = 0;
    let mut double = 0;
    // the two parity classes of the total spectator weight
    for grade in [[0, -1, -1], [0, 0, -1]] {
        let basis = five_point_candidates(max_order, grade);
        candidates += basis.len();
        let columns = pde_columns(&basis);
        let res = solve_columns(&columns, &LaurentPoly::zero());
        kernel_dim += res.kernel.len();
        double += res
            .kernel
            .iter()
            .filter(|v| v.iter().zip(&basis).any(|(c, mono)| !c.is_zero() && has_double_pole(mono, &pts)))
            .count();
    }
    FivePointScan { max_order, candidates, kernel_dim, double_pole_solutions: double }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freefield::{u0_of_bifield_correlator, Insertion};

    fn mono(pairs: &[(Var, i32)]) -> LaurentPoly {
        LaurentPoly::term(Rational::one(), Monomial::from_pairs(pairs.iter().copied()))
    }

    fn six_point() -> DpsSpec {
        DpsSpec::new((3, 4), (1, 1), (0, 0), vec![], vec![(1, 2)], vec![], None).unwrap()
    }

    #[test]
    fn single_poles_solve_the_pde() {
        let u = mono(&[(Var::x(1), -1), (Var::y(2), -1), (Var::s(1, 2), -1)]);
        assert!(pde_apply(&u).unwrap().is_zero());
        assert_eq!(pde_apply(&LaurentPoly::var(Var::xy())), Err(BiharmonicError::ContainsRhoXy));
    }

    #[test]
    fn pde_commutes_with_spectator_monomials() {
        let u = mono(&[(Var::x(1), -2), (Var::x(2), 1), (Var::y(2), -1), (Var::s(1, 2), -1)]);
        let l = mono(&[(Var::s(1, 3), -2), (Var::s(2, 3), 1)]);
        let lhs = pde_apply(&(&l * &u)).unwrap();
        assert!(!lhs.is_zero());
        assert_eq!(lhs, &l * &pde_apply(&u).unwrap());
    }

    #[test]
    fn sl2_examples() {
        let p = &LaurentPoly::var(Var::x(1)) * &LaurentPoly::var(Var::x(3));
        assert!(sl2_act(Sl2::X, &p, (5, 6)).is_zero());
        assert_eq!(sl2_act(Sl2::H, &p, (5, 6)), p);
        let f = &mono(&[(Var::x(1), 2), (Var::y(2), -1)]) + &mono(&[(Var::y(1), 3), (Var::x(2), 1)]);
        let xy = sl2_act(Sl2::X, &sl2_act(Sl2::Y, &f, (5, 6)), (5, 6));
        let yx = sl2_act(Sl2::Y, &sl2_act(Sl2::X, &f, (5, 6)), (5, 6));
        assert_eq!(&xy - &yx, sl2_act(Sl2::H, &f, (5, 6)).scale(&int(2)));
        // singlets are invariant
        assert!(sl2_act(Sl2::Y, &singlet(1, 2), (5, 6)).is_zero());
        // excluded points are left alone
        assert!(sl2_act(Sl2::Y, &LaurentPoly::var(Var::x(5)), (5, 6)).is_zero());
    }

    #[test]
    fn kets() {
        let p = LaurentPoly::var(Var::x(3));
        assert_eq!(sl2_ket(&p, 0, (1, 2)).unwrap().value, p);
        assert_eq!(sl2_ket(&p, 1, (1, 2)).unwrap().value, LaurentPoly::var(Var::y(3)));
        assert!(sl2_ket(&p, 2, (1, 2)).unwrap().value.is_zero());
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            DpsSpec::new((2, 3), (1, 1), (0, 0), vec![], vec![(1, 1)], vec![], Some(vec![1, 2, 3])),
            Err(BiharmonicError::InvalidSpec(_))
        ));
        assert!(matches!(
            DpsSpec::new((2, 3), (1, 1), (0, 0), vec![], vec![], vec![], Some(vec![1, 2, 3])),
            Err(BiharmonicError::InvalidSpec(_))
        ));
        assert!(matches!(
            DpsSpec::new((3, 4), (1, 1), (1, 0), vec![(1, 1)], vec![(1, 2)], vec![], None),
            Err(BiharmonicError::InvalidSpec(_))
        ));
        let spec = six_point();
        let json = serde_json::to_string(&spec.to_json_value()).unwrap();
        assert_eq!(DpsSpec::from_json(&json).unwrap(), spec);
    }

    #[test]
    fn six_point_maximal_part() {
        let spec = six_point();
        assert_eq!(spec.mu(), 4);
        let max = dps_maximal(&spec).unwrap();
        let poles = mono(&[(Var::x(3), -1), (Var::x(4), -1), (Var::y(3), -1), (Var::y(4), -1)]);
        assert_eq!(max, &singlet(1, 2) * &poles);
        let prof = pole_profile(&max, 3, 4);
        assert!(prof.is_double());
        assert_eq!(prof.entries.keys().copied().collect::<Vec<_>>(), vec![(1, 1, 1, 1)]);
        assert_eq!(prof.max_order(), 4);
    }

    #[test]
    fn maximal_part_is_homogeneous() {
        let spec =
            DpsSpec::new((5, 6), (2, 2), (1, 1), vec![(1, 1), (2, 1)], vec![(1, 3)], vec![(1, 2, -1)], None).unwrap();
        let max = dps_maximal(&spec).unwrap();
        assert!(!max.is_zero());
        assert_eq!(max.homogeneous_degree(VarClass::X).unwrap(), -1);
        assert_eq!(max.homogeneous_degree(VarClass::Y).unwrap(), -1);
        assert!(pole_profile(&max, 5, 6).entries.keys().all(|&(a, b, c, d)| a + b + c + d == spec.mu()));
    }

    #[test]
    fn profile_of_spectator_pole_is_empty() {
        let p = pole_profile(&LaurentPoly::var_pow(Var::s(1, 2), -1), 1, 2);
        assert!(p.entries.is_empty());
        assert!(!p.is_double());
    }

    #[test]
    fn free_field_completions_vanish() {
        let ins = [Insertion::bifield(), Insertion::phi2(1), Insertion::phi2(2), Insertion::phi2(3)];
        let u0 = u0_of_bifield_correlator(&ins).unwrap();
        for side in [Side::X, Side::Y] {
            let c = complete(&u0, side, 3).unwrap();
            assert!(c.coeffs[1..].iter().all(LaurentPoly::is_zero));
        }
        assert!(!pole_profile(&u0, 1, 2).is_double());
    }

    #[test]
    fn six_point_solution() {
        let spec = six_point();
        let sol = dps_solve(&spec, AnsatzConfig::default()).unwrap();
        assert!(pde_apply(&sol.u0).unwrap().is_zero());
        assert!(!pde_apply(&sol.maximal).unwrap().is_zero());
        let prof = pole_profile(&sol.u0, 3, 4);
        assert!(prof.is_double());
        assert_eq!(prof.max_double_order(), 4);
        for k in &sol.kernel {
            assert!(pde_apply(k).unwrap().is_zero());
            assert!(pole_profile(k, 3, 4).max_order() < spec.mu());
        }
        let zero_window = AnsatzConfig { pole_cap: None, window: Some(0) };
        match dps_solve(&spec, zero_window) {
            Err(BiharmonicError::NoSolution { residual }) => assert!(!residual.is_zero()),
            other => panic!("expected NoSolution, got {other:?}"),
        }
    }

    #[test]
    fn integrability_defect_is_the_pde() {
        let sol = dps_solve(&six_point(), AnsatzConfig::default()).unwrap();
        let bad = mono(&[(Var::x(1), -2), (Var::x(2), 1), (Var::y(3), -1), (Var::s(1, 2), 1), (Var::s(3, 4), -1)]);
        for u in [sol.u0.clone(), &sol.u0 + &bad, sol.maximal] {
            assert_eq!(integrability_defect(&u).unwrap(), pde_apply(&u).unwrap().scale(&int(4)));
        }
        assert_eq!(completion_consistent(&(&sol.u0 + &bad), 3), Ok(false));
    }

    #[test]
    fn five_point_scan_finds_no_double_poles() {
        let scan = five_point_scan(3);
        assert!(scan.kernel_dim > 0);
        assert_eq!(scan.double_pole_solutions, 0);
    }

    #[test]
    fn completion_of_a_generic_term() {
        let u0 = mono(&[(Var::x(1), -2), (Var::x(2), 1), (Var::y(1), -1), (Var::s(1, 2), -1)]);
        let c = complete(&u0, Side::X, 2).unwrap();
        assert!(!c.coeffs[1].is_zero());
        let sum = c.sum();
        let b = box_op(&sum, Point::X, Dimension::FOUR).collect_powers(Var::xy());
        assert!(b.iter().all(|(&e, p)| e >= 2 || p.is_zero()));
    }
}
