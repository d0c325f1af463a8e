//! Conformal characters restricted to a 2D subgroup, and their branching.
//!
//! `chi4d_{d,j1,j2}(s,x,y) = s^d chi_j1(x) chi_j2(y) / prod (1 - s x^{+-1/2} y^{+-1/2})`.
//! At `x = y` the denominator becomes `(1-p)(1-q)(1-s)^2` with `p = sx`,
//! `q = s/x`, and `s^a x^b = p^{(a+b)/2} q^{(a-b)/2}`. Exponents are kept
//! doubled, as `(2h+, 2h-)`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("j1 + j2 must be an integer (got 2j1 = {0}, 2j2 = {1})")]
    HalfIntegralSpin(u32, u32),
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("negative multiplicity {value} at (2h+, 2h-) = ({h_plus2}, {h_minus2})")]
    NegativeMultiplicity { h_plus2: i64, h_minus2: i64, value: i64 },
}

type Result<T> = std::result::Result<T, CharError>;

/// `(d, j1, j2)` with spins stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RepLabel4D {
    pub d: u32,
    pub j1_2: u32,
    pub j2_2: u32,
}

impl RepLabel4D {
    pub fn new(d: u32, j1_2: u32, j2_2: u32) -> Result<Self> {
        if d == 0 {
            return Err(CharError::ZeroDimension);
        }
        if !(j1_2 + j2_2).is_multiple_of(2) {
            return Err(CharError::HalfIntegralSpin(j1_2, j2_2));
        }
        Ok(RepLabel4D { d, j1_2, j2_2 })
    }

    pub fn scalar(d: u32) -> Self {
        RepLabel4D { d, j1_2: 0, j2_2: 0 }
    }

    /// Twist `d - j1 - j2`, doubled.
    pub fn twist2x(&self) -> i64 {
        2 * self.d as i64 - self.j1_2 as i64 - self.j2_2 as i64
    }

    /// Twist two with both spins nonzero: the conservation law removes states.
    pub fn is_subtracted(&self) -> bool {
        self.twist2x() == 4 && self.j1_2 > 0 && self.j2_2 > 0
    }
}

/// Integer series in `p`, `q` keyed by `(2h+, 2h-)`, truncated at `h+ + h- <= trunc`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharSeries {
    pub trunc: u32,
    pub coeffs: BTreeMap<(i64, i64), i64>,
}

impl CharSeries {
    pub fn zero(trunc: u32) -> Self {
        CharSeries { trunc, coeffs: BTreeMap::new() }
    }

    pub fn coeff(&self, key: (i64, i64)) -> i64 {
        self.coeffs.get(&key).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, key: (i64, i64), c: i64) {
        if key.0 + key.1 > 2 * self.trunc as i64 || c == 0 {
            return;
        }
        let e = self.coeffs.entry(key).or_insert(0);
        *e += c;
        if *e == 0 {
            self.coeffs.remove(&key);
        }
    }

    pub fn add(&self, other: &CharSeries) -> CharSeries {
        let mut out = CharSeries::zero(self.trunc.min(other.trunc));
        for (&k, &c) in self.coeffs.iter().chain(&other.coeffs) {
            out.add_term(k, c);
        }
        out
    }

    /// Total number of states per level `h+ + h-`.
    pub fn level_counts(&self) -> BTreeMap<i64, i64> {
        let mut out = BTreeMap::new();
        for (&(a, b), &c) in &self.coeffs {
            *out.entry((a + b) / 2).or_insert(0) += c;
        }
        out
    }

    pub fn to_json(&self) -> String {
        keyed_json(self.trunc, &self.coeffs)
    }
}

/// `{"schema":1,"trunc":N,"coeffs":{"2h+,2h-":c,...}}`.
pub fn keyed_json(trunc: u32, coeffs: &BTreeMap<(i64, i64), i64>) -> String {
    #[derive(Serialize)]
    struct Doc {
        schema: u32,
        trunc: u32,
        coeffs: BTreeMap<String, i64>,
    }
    let doc = Doc { schema: 1, trunc, coeffs: coeffs.iter().map(|(&(a, b), &c)| (format!("{a},{b}"), c)).collect() };
    serde_json::to_string(&doc).expect("character serializes")
}

/// `chi_j1(x) chi_j2(x)` as x-exponent -> multiplicity (exponents are integers).
fn spin_product(j1_2: u32, j2_2: u32) -> BTreeMap<i64, i64> {
    let mut out = BTreeMap::new();
    for a in 0..=j1_2 as i64 {
        for b in 0..=j2_2 as i64 {
            // (2 * exponent) = (2a - 2j1) + (2b - 2j2)
            let twice = 2 * a - j1_2 as i64 + 2 * b - j2_2 as i64;
            *out.entry(twice / 2).or_insert(0) += 1;
        }
    }
    out
}

/// The 4D character at `x = y`, including the twist-two subtraction.
pub fn char4d_restricted(rep: RepLabel4D, trunc: u32) -> CharSeries {
    // numerator: s-exponent -> (x-exponent -> coefficient)
    let mut numerator: Vec<(i64, i64, i64)> =
        spin_product(rep.j1_2, rep.j2_2).into_iter().map(|(b, c)| (rep.d as i64, b, c)).collect();
    if rep.is_subtracted() {
        numerator.extend(spin_product(rep.j1_2 - 1, rep.j2_2 - 1).into_iter().map(|(b, c)| (rep.d as i64 + 1, b, -c)));
    }
    let n = trunc as i64;
    let mut out = CharSeries::zero(trunc);
    for (alpha0, beta0, c) in numerator {
        // (sx)^a (s/x)^e (b+1) s^b
        for a in 0..=(n - alpha0).max(-1) {
            for e in 0..=(n - alpha0 - a).max(-1) {
                for b in 0..=(n - alpha0 - a - e).max(-1) {
                    let alpha = alpha0 + a + e + b;
                    let beta = beta0 + a - e;
                    out.add_term((alpha + beta, alpha - beta), c * (b + 1));
                }
            }
        }
    }
    out
}

/// `p^{h+} q^{h-} / ((1-p)(1-q))`.
pub fn char2d(h_plus2: i64, h_minus2: i64, trunc: u32) -> CharSeries {
    let mut out = CharSeries::zero(trunc);
    let n2 = 2 * trunc as i64;
    let mut i = 0;
    while h_plus2 + h_minus2 + 2 * i <= n2 {
        let mut j = 0;
        while h_plus2 + h_minus2 + 2 * i + 2 * j <= n2 {
            out.add_term((h_plus2 + 2 * i, h_minus2 + 2 * j), 1);
            j += 1;
        }
        i += 1;
    }
    out
}

/// Multiplicities of 2D characters: the coefficients of `(1-p)(1-q) chi`.
pub fn branch(chi: &CharSeries) -> Result<BTreeMap<(i64, i64), i64>> {
    let mut out = BTreeMap::new();
    let keys: std::collections::BTreeSet<(i64, i64)> =
        chi.coeffs.keys().flat_map(|&(a, b)| [(a, b), (a + 2, b), (a, b + 2), (a + 2, b + 2)]).collect();
    for (a, b) in keys {
        if a + b > 2 * chi.trunc as i64 {
            continue;
        }
        let m = chi.coeff((a, b)) - chi.coeff((a - 2, b)) - chi.coeff((a, b - 2)) + chi.coeff((a - 2, b - 2));
        if m < 0 {
            return Err(CharError::NegativeMultiplicity { h_plus2: a, h_minus2: b, value: m });
        }
        if m != 0 {
            out.insert((a, b), m);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_branching_is_diagonal() {
        for d in 2..=4u32 {
            let b = branch(&char4d_restricted(RepLabel4D::scalar(d), 12)).unwrap();
            let expected: BTreeMap<(i64, i64), i64> =
                (0..=(12 - d) as i64).map(|n| ((d as i64 + n, d as i64 + n), n + 1)).collect();
            assert_eq!(b, expected);
        }
    }

    #[test]
    fn spin_characters() {
        assert_eq!(spin_product(1, 1), BTreeMap::from([(-1, 1), (0, 2), (1, 1)]));
        assert_eq!(spin_product(2, 0).len(), 3);
        assert_eq!(RepLabel4D::new(3, 1, 0), Err(CharError::HalfIntegralSpin(1, 0)));
    }

    /// The character without the subtraction: the scalar character times
    /// `chi_j1(x) chi_j2(x)`.
    fn unsubtracted(rep: RepLabel4D, trunc: u32) -> CharSeries {
        let mut out = CharSeries::zero(trunc);
        let scalar = char4d_restricted(RepLabel4D::scalar(rep.d), trunc);
        for (b, c) in spin_product(rep.j1_2, rep.j2_2) {
            for (&(p, q), &m) in &scalar.coeffs {
                out.add_term((p + b, q - b), c * m);
            }
        }
        out
    }

    #[test]
    fn twist_two_subtraction_removes_states() {
        let rep = RepLabel4D::new(3, 1, 1).unwrap();
        assert!(rep.is_subtracted());
        let sub = char4d_restricted(rep, 10);
        let full = unsubtracted(rep, 10);
        let (lf, ls) = (full.level_counts(), sub.level_counts());
        // the subtracted term starts one level above the lowest
        assert_eq!(ls[&3], lf[&3]);
        for (level, n) in ls.range(4..) {
            assert!(*n < lf[level], "level {level}");
        }
        let bs = branch(&sub).unwrap();
        let bf = branch(&full).unwrap();
        assert!(bs.iter().all(|(k, m)| *m <= bf.get(k).copied().unwrap_or(0)));
        assert!(bs.values().sum::<i64>() < bf.values().sum::<i64>());
        // away from twist two the formula is the plain product
        let rep = RepLabel4D::new(5, 1, 1).unwrap();
        assert_eq!(char4d_restricted(rep, 10), unsubtracted(rep, 10));
    }

    #[test]
    fn two_dimensional_round_trip() {
        let b = branch(&char2d(5, 3, 12)).unwrap();
        assert_eq!(b, BTreeMap::from([((5, 3), 1)]));
        let sum = char2d(2, 2, 10).add(&char2d(3, 5, 10)).add(&char2d(3, 5, 10));
        assert_eq!(branch(&sum).unwrap(), BTreeMap::from([((2, 2), 1), ((3, 5), 2)]));
    }

    #[test]
    fn negative_multiplicity_is_reported() {
        let mut chi = CharSeries::zero(4);
        chi.add_term((2, 2), -1);
        assert!(matches!(branch(&chi), Err(CharError::NegativeMultiplicity { .. })));
    }

    #[test]
    fn keyed_output() {
        let b = branch(&char4d_restricted(RepLabel4D::scalar(2), 3)).unwrap();
        assert_eq!(keyed_json(3, &b), r#"{"schema":1,"trunc":3,"coeffs":{"2,2":1,"3,3":2}}"#);
    }
}
