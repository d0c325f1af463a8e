//! Conformal partial waves for four equal scalars and their 4D -> 2D branching.
//!
//! `G_n(z) = z^n 2F1(n, n; 2n; z)`, `beta2d_{h+,h-}(u, v) = G_{h+}(u) G_{h-}(v)`
//! and `beta4d_{k,L}(u, v) = uv/(u-v) (G_{k+L}(u) G_{k-1}(v) - (u <-> v))`,
//! all as exact truncated power series. Bivariate series are truncated by
//! total degree in `(u, v)`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactring::{format_rational, int, parse_rational, LaurentPoly, Point, Rational, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WavesError {
    #[error("numerator is not antisymmetric at u^{i} v^{j}")]
    NonAntisymmetric { i: u32, j: u32 },
    #[error("term u^{i} v^{j} cannot be expanded in 2D partial waves")]
    NonExpandable { i: u32, j: u32 },
    #[error("s^{a} t^{b} is singular at u = v = 0")]
    SingularAtOrigin { a: i32, b: i32 },
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("not a function of the cross ratios: {0}")]
    NotConformal(String),
    #[error("bad series document: {0}")]
    Parse(String),
}

type Result<T> = std::result::Result<T, WavesError>;

/// `sum_{j <= trunc} c_j z^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Series1 {
    pub trunc: u32,
    pub coeffs: BTreeMap<u32, Rational>,
}

impl Series1 {
    pub fn zero(trunc: u32) -> Self {
        Series1 { trunc, coeffs: BTreeMap::new() }
    }

    pub fn coeff(&self, j: u32) -> Rational {
        self.coeffs.get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, j: u32, c: Rational) {
        if j > self.trunc || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(j).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&j);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_json(&self) -> String {
        let terms: Vec<_> =
            self.coeffs.iter().map(|(i, c)| serde_json::json!({"i": i, "coef": format_rational(c)})).collect();
        serde_json::json!({"schema": 1, "trunc": self.trunc, "terms": terms}).to_string()
    }
}

/// `sum_{i + j <= trunc} c_ij u^i v^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiSeries {
    pub trunc: u32,
    pub coeffs: BTreeMap<(u32, u32), Rational>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BiTermJson {
    pub i: u32,
    pub j: u32,
    pub coef: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BiSeriesJson {
    #[serde(default = "one")]
    pub schema: u32,
    pub trunc: u32,
    pub terms: Vec<BiTermJson>,
}

fn one() -> u32 {
    1
}

impl BiSeries {
    pub fn zero(trunc: u32) -> Self {
        BiSeries { trunc, coeffs: BTreeMap::new() }
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if i + j > self.trunc || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry((i, j)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `a(u) b(v)`.
    pub fn product(a: &Series1, b: &Series1, trunc: u32) -> BiSeries {
        let mut out = BiSeries::zero(trunc);
        for (&i, x) in &a.coeffs {
            for (&j, y) in &b.coeffs {
                out.add_term(i, j, x * y);
            }
        }
        out
    }

    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        let mut out = BiSeries::zero(self.trunc.min(other.trunc));
        for (&(i, j), x) in &self.coeffs {
            for (&(k, l), y) in &other.coeffs {
                out.add_term(i + k, j + l, x * y);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> BiSeries {
        let mut out = BiSeries::zero(self.trunc);
        for (&(i, j), x) in &self.coeffs {
            out.add_term(i, j, x * c);
        }
        out
    }

    pub fn add(&self, other: &BiSeries) -> BiSeries {
        let mut out = BiSeries::zero(self.trunc.min(other.trunc));
        for (&(i, j), x) in self.coeffs.iter().chain(&other.coeffs) {
            out.add_term(i, j, x.clone());
        }
        out
    }

    pub fn sub(&self, other: &BiSeries) -> BiSeries {
        self.add(&other.scale(&int(-1)))
    }

    /// `(u, v) -> (v, u)`.
    pub fn swap(&self) -> BiSeries {
        BiSeries { trunc: self.trunc, coeffs: self.coeffs.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect() }
    }

    pub fn truncated(&self, trunc: u32) -> BiSeries {
        let mut out = BiSeries::zero(trunc);
        for (&(i, j), c) in &self.coeffs {
            out.add_term(i, j, c.clone());
        }
        out
    }

    /// Lowest total degree carrying a nonzero coefficient.
    pub fn order(&self) -> Option<u32> {
        self.coeffs.keys().map(|&(i, j)| i + j).min()
    }

    pub fn to_json_value(&self) -> BiSeriesJson {
        BiSeriesJson {
            schema: 1,
            trunc: self.trunc,
            terms: self.coeffs.iter().map(|(&(i, j), c)| BiTermJson { i, j, coef: format_rational(c) }).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("series serializes")
    }

    pub fn from_json(text: &str) -> Result<BiSeries> {
        let doc: BiSeriesJson = serde_json::from_str(text).map_err(|e| WavesError::Parse(e.to_string()))?;
        if doc.schema != 1 {
            return Err(WavesError::Parse(format!("unsupported schema {}", doc.schema)));
        }
        let mut out = BiSeries::zero(doc.trunc);
        for t in doc.terms {
            let c = parse_rational(&t.coef).map_err(|e| WavesError::Parse(e.to_string()))?;
            out.add_term(t.i, t.j, c);
        }
        Ok(out)
    }
}

/// `G_n(z)` through `z^trunc`; `G_0 = 1`.
pub fn gauss_g(n: u32, trunc: u32) -> Series1 {
    let mut out = Series1::zero(trunc);
    if n == 0 {
        out.add_term(0, Rational::one());
        return out;
    }
    // ratio of consecutive terms: (n+j)^2 / ((2n+j)(j+1))
    let mut c = Rational::one();
    let mut j = 0u32;
    while n + j <= trunc {
        out.add_term(n + j, c.clone());
        let (nj, tj) = (int((n + j) as i64), int((2 * n + j) as i64));
        c = c * &nj * &nj / (tj * int(j as i64 + 1));
        j += 1;
    }
    out
}

/// `c_n = n^2 / (4 (4 n^2 - 1))`; `c_0 = 0`.
pub fn c_coeff(n: u32) -> Rational {
    let n = int(n as i64);
    &n * &n / (int(4) * (int(4) * &n * &n - int(1)))
}

/// `G_{n-1}(z) - (1 - z/2)/z G_n(z) + c G_{n+1}(z)` with `c = c_n` unless given.
pub fn three_term_residual_with(n: u32, trunc: u32, c: &Rational) -> Series1 {
    let gm = gauss_g(n - 1, trunc);
    let g = gauss_g(n, trunc + 1);
    let gp = gauss_g(n + 1, trunc);
    let mut out = Series1::zero(trunc);
    for j in 0..=trunc {
        out.add_term(j, gm.coeff(j) - g.coeff(j + 1) + g.coeff(j) / int(2) + c * gp.coeff(j));
    }
    out
}

pub fn three_term_residual(n: u32, trunc: u32) -> Result<Series1> {
    if n == 0 {
        return Err(WavesError::InvalidLabel("the three-term identity needs n >= 1".into()));
    }
    Ok(three_term_residual_with(n, trunc, &c_coeff(n)))
}

pub fn beta2d(h_plus: u32, h_minus: u32, trunc: u32) -> BiSeries {
    BiSeries::product(&gauss_g(h_plus, trunc), &gauss_g(h_minus, trunc), trunc)
}

/// Exact division of an antisymmetric series by `u - v`, using
/// `u^i v^j - u^j v^i = (u - v) sum_{r < i-j} u^{i-1-r} v^{j+r}`.
pub fn divide_antisymmetric(num: &BiSeries) -> Result<BiSeries> {
    let mut out = BiSeries::zero(num.trunc.saturating_sub(1));
    for (&(i, j), c) in &num.coeffs {
        if i == j || num.coeff(j, i) != -c.clone() {
            return Err(WavesError::NonAntisymmetric { i, j });
        }
        if i < j {
            continue;
        }
        for r in 0..i - j {
            out.add_term(i - 1 - r, j + r, c.clone());
        }
    }
    Ok(out)
}

/// `uv/(u-v) (G_{k+L}(u) G_{k-1}(v) - (u <-> v))` through total degree `trunc`.
pub fn beta4d(k: u32, l: u32, trunc: u32) -> Result<BiSeries> {
    if k == 0 {
        return Err(WavesError::InvalidLabel("beta4d needs k >= 1".into()));
    }
    // The numerator is needed through degree trunc - 1.
    let nt = trunc.saturating_sub(1);
    let a = BiSeries::product(&gauss_g(k + l, nt), &gauss_g(k - 1, nt), nt);
    let num = a.sub(&a.swap());
    let q = divide_antisymmetric(&num)?;
    let mut out = BiSeries::zero(trunc);
    for (&(i, j), c) in &q.coeffs {
        out.add_term(i + 1, j + 1, c.clone());
    }
    Ok(out)
}

/// 2D coefficients and the 4D remainder after `depth` steps of the branching recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branching {
    pub coeffs: BTreeMap<(u32, u32), Rational>,
    pub remainder: BTreeMap<(u32, u32), Rational>,
}

/// Iterates
/// `beta4d_{k,L} = sum_{m+n=L} beta2d_{k+m,k+n} + c_{k+L} beta4d_{k+1,L}
///   + sum_{nu=1}^{L/2} (c_{k+L-nu} - c_{k+nu-1}) beta4d_{k+nu+1,L-2nu}`.
pub fn branch_with_remainder(k: u32, l: u32, depth: u32) -> Result<Branching> {
    if k == 0 {
        return Err(WavesError::InvalidLabel("branching needs k >= 1".into()));
    }
    let mut coeffs: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
    let mut pending: BTreeMap<(u32, u32), Rational> = BTreeMap::from([((k, l), Rational::one())]);
    for _ in 0..depth {
        let mut next: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for ((k, l), w) in pending {
            for m in 0..=l {
                *coeffs.entry((k + m, k + l - m)).or_insert_with(Rational::zero) += &w;
            }
            let mut push = |key: (u32, u32), c: Rational| {
                if !c.is_zero() {
                    *next.entry(key).or_insert_with(Rational::zero) += c;
                }
            };
            push((k + 1, l), &w * c_coeff(k + l));
            for nu in 1..=l / 2 {
                push((k + nu + 1, l - 2 * nu), &w * (c_coeff(k + l - nu) - c_coeff(k + nu - 1)));
            }
        }
        next.retain(|_, c| !c.is_zero());
        pending = next;
    }
    coeffs.retain(|_, c| !c.is_zero());
    Ok(Branching { coeffs, remainder: pending })
}

pub fn branch4d_to_2d(k: u32, l: u32, depth: u32) -> Result<BTreeMap<(u32, u32), Rational>> {
    Ok(branch_with_remainder(k, l, depth)?.coeffs)
}

/// Peels `F = sum b_{h+,h-} beta2d_{h+,h-}` for all `h+ + h- <= max_level`.
/// The constant term (vacuum) is ignored.
pub fn extract_2d_coeffs(f: &BiSeries, max_level: u32) -> Result<BTreeMap<(u32, u32), Rational>> {
    let level = max_level.min(f.trunc);
    let mut rest = f.truncated(level);
    let mut out = BTreeMap::new();
    for total in 1..=level {
        for i in 0..=total {
            let j = total - i;
            let c = rest.coeff(i, j);
            if c.is_zero() {
                continue;
            }
            if i == 0 || j == 0 {
                return Err(WavesError::NonExpandable { i, j });
            }
            rest = rest.sub(&beta2d(i, j, level).scale(&c));
            out.insert((i, j), c);
        }
    }
    Ok(out)
}

/// A Laurent polynomial in the cross ratios `s`, `t`: `(a, b) -> coefficient of s^a t^b`.
pub type StPoly = BTreeMap<(i32, i32), Rational>;

/// `(1 - z)^b` through `z^trunc` (generalized binomial series).
fn one_minus_pow(b: i32, trunc: u32) -> Series1 {
    let mut out = Series1::zero(trunc);
    let mut c = Rational::one();
    for i in 0..=trunc {
        out.add_term(i, c.clone());
        // binom(b, i+1) (-1)^{i+1} from binom(b, i) (-1)^i
        c = -c * int(b as i64 - i as i64) / int(i as i64 + 1);
        if c.is_zero() {
            break;
        }
    }
    out
}

/// Substitutes `s = uv`, `t = (1-u)(1-v)` and expands around `u = v = 0`.
pub fn uv_from_st(f: &StPoly, trunc: u32) -> Result<BiSeries> {
    let mut out = BiSeries::zero(trunc);
    for (&(a, b), c) in f {
        if a < 0 {
            return Err(WavesError::SingularAtOrigin { a, b });
        }
        let a = a as u32;
        if 2 * a > trunc {
            continue;
        }
        let t = one_minus_pow(b, trunc - 2 * a);
        let tb = BiSeries::product(&t, &t, trunc - 2 * a);
        for (&(i, j), x) in &tb.coeffs {
            out.add_term(i + a, j + a, x * c);
        }
    }
    Ok(out)
}

/// Rewrites a conformally invariant four-point function of the points
/// 1..4, given in squared distances, as a Laurent polynomial in
/// `s = rho_12 rho_34 / (rho_13 rho_24)` and `t = rho_14 rho_23 / (rho_13 rho_24)`.
pub fn to_cross_ratios(f: &LaurentPoly) -> Result<StPoly> {
    let p = |i| Point::Spectator(i);
    let mut out = StPoly::new();
    for (m, c) in f.terms() {
        let e = |i, j| m.exponent(Var::of(p(i), p(j)));
        let (a, b) = (e(1, 2), e(1, 4));
        let ok = m.vars().all(|v| {
            let (x, y) = v.endpoints();
            x.is_spectator()
                && y.is_spectator()
                && x.label().parse::<u32>().is_ok_and(|n| n <= 4)
                && y.label().parse::<u32>().is_ok_and(|n| n <= 4)
        }) && e(3, 4) == a
            && e(2, 3) == b
            && e(1, 3) == -a - b
            && e(2, 4) == -a - b;
        if !ok {
            return Err(WavesError::NotConformal(m.to_string()));
        }
        *out.entry((a, b)).or_insert_with(Rational::zero) += c;
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::rat;

    #[test]
    fn g_series() {
        let g1 = gauss_g(1, 10);
        for j in 0..10 {
            assert_eq!(g1.coeff(1 + j), rat(1, 1 + j as i64));
        }
        assert_eq!(gauss_g(0, 5).coeffs, BTreeMap::from([(0, int(1))]));
        assert_eq!(gauss_g(2, 5).coeff(3), int(1));
    }

    #[test]
    fn c_values() {
        assert_eq!(c_coeff(1), rat(1, 12));
        assert_eq!(c_coeff(2), rat(1, 15));
        assert_eq!(c_coeff(0), int(0));
        for n in 1..50 {
            assert!(c_coeff(n + 1) < c_coeff(n));
        }
    }

    #[test]
    fn three_term_identity() {
        for n in [1, 5] {
            assert!(three_term_residual(n, 30).unwrap().is_zero());
        }
        assert!(!three_term_residual_with(3, 30, &(c_coeff(3) + int(1))).is_zero());
    }

    #[test]
    fn two_dimensional_waves() {
        assert_eq!(beta2d(1, 1, 4).order(), Some(2));
        assert_eq!(beta2d(1, 1, 4).coeff(1, 1), int(1));
        assert_eq!(beta2d(2, 1, 4).coeff(2, 1), int(1));
        assert_eq!(beta2d(2, 1, 3).coeffs.len(), 1);
        assert_eq!(beta2d(3, 1, 9), beta2d(1, 3, 9).swap());
    }

    #[test]
    fn four_dimensional_wave() {
        let b = beta4d(1, 0, 6).unwrap();
        assert_eq!(b.coeff(1, 1), int(1));
        assert_eq!(b.coeff(2, 2), rat(1, 3));
        assert_eq!(b.coeff(2, 2), rat(1, 4) + c_coeff(1));
        let mut bad = BiSeries::zero(4);
        bad.add_term(2, 1, int(1));
        assert_eq!(divide_antisymmetric(&bad), Err(WavesError::NonAntisymmetric { i: 2, j: 1 }));
    }

    #[test]
    fn branching_examples() {
        let b = branch4d_to_2d(1, 0, 3).unwrap();
        assert_eq!(b[&(1, 1)], int(1));
        assert_eq!(b[&(2, 2)], c_coeff(1));
        assert_eq!(b[&(3, 3)], c_coeff(1) * c_coeff(2));
        let b = branch4d_to_2d(1, 1, 2).unwrap();
        assert_eq!(b[&(3, 2)], c_coeff(2));
        assert_eq!(b[&(2, 3)], c_coeff(2));
        // L = 2: middle coefficient 1 at r = 0 and c_{k+2} + c_{k+1} - c_k at r = 1
        let b = branch4d_to_2d(1, 2, 2).unwrap();
        assert_eq!(b[&(2, 2)], int(1));
        assert_eq!(b[&(3, 3)], c_coeff(3) + c_coeff(2) - c_coeff(1));
    }

    #[test]
    fn extraction_round_trip() {
        let f = beta2d(2, 1, 10);
        assert_eq!(extract_2d_coeffs(&f, 10).unwrap(), BTreeMap::from([((2, 1), int(1))]));
        let b = extract_2d_coeffs(&beta4d(1, 0, 10).unwrap(), 10).unwrap();
        assert_eq!(b, branch4d_to_2d(1, 0, 5).unwrap());
        let mut g = BiSeries::zero(5);
        g.add_term(2, 0, int(1));
        assert_eq!(extract_2d_coeffs(&g, 5), Err(WavesError::NonExpandable { i: 2, j: 0 }));
    }

    #[test]
    fn cross_ratio_substitution() {
        let s = StPoly::from([((1, 0), int(1))]);
        let us = uv_from_st(&s, 6).unwrap();
        assert_eq!(us.coeffs, BTreeMap::from([((1, 1), int(1))]));
        let inv_t = uv_from_st(&StPoly::from([((0, -1), int(1))]), 6).unwrap();
        for i in 0..=6 {
            for j in 0..=6 - i {
                assert_eq!(inv_t.coeff(i, j), int(1));
            }
        }
        assert_eq!(
            uv_from_st(&StPoly::from([((-1, 0), int(1))]), 4),
            Err(WavesError::SingularAtOrigin { a: -1, b: 0 })
        );
    }

    #[test]
    fn json_round_trip() {
        let b = beta4d(2, 1, 8).unwrap();
        assert_eq!(BiSeries::from_json(&b.to_json()).unwrap(), b);
    }
}
