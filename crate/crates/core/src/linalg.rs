//! Exact sparse linear solves over the rationals.
//!
//! The unknowns are coefficients of a finite list of basis polynomials and
//! the equations are indexed by monomials: solve `sum_i c_i * col_i = target`.
//! Rows are inserted in canonical monomial order and reduced against the
//! pivots found so far, so the elimination order (and hence the reported
//! particular solution and kernel basis) is deterministic.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::exactring::{LaurentPoly, Monomial, Rational};

type Row = BTreeMap<usize, Rational>;

#[derive(Clone, Debug)]
pub struct SolveResult {
    /// Coefficients with every free unknown set to zero; `None` if inconsistent.
    pub particular: Option<Vec<Rational>>,
    /// Like `particular`, but always present: solves the consistent rows and
    /// ignores the contradictory ones, so it can serve as a residual witness.
    pub best_effort: Vec<Rational>,
    /// A basis of the homogeneous solution space, one vector per free unknown.
    pub kernel: Vec<Vec<Rational>>,
    pub rank: usize,
}

impl SolveResult {
    pub fn is_consistent(&self) -> bool {
        self.particular.is_some()
    }
}

struct Echelon {
    ncols: usize,
    pivots: BTreeMap<usize, Row>,
    inconsistent: bool,
}

impl Echelon {
    fn new(ncols: usize) -> Self {
        Echelon { ncols, pivots: BTreeMap::new(), inconsistent: false }
    }

    fn insert(&mut self, mut row: Row) {
        loop {
            let Some((&lead, lead_val)) = row.iter().next() else {
                return;
            };
            if lead == self.ncols {
                self.inconsistent = true;
                return;
            }
            match self.pivots.get(&lead) {
                Some(pivot) => {
                    let factor = lead_val.clone();
                    for (&c, v) in pivot {
                        let entry = row.entry(c).or_insert_with(Rational::zero);
                        *entry -= &factor * v;
                        if entry.is_zero() {
                            row.remove(&c);
                        }
                    }
                }
                None => {
                    let inv = lead_val.recip();
                    for v in row.values_mut() {
                        *v *= &inv;
                    }
                    self.pivots.insert(lead, row);
                    return;
                }
            }
        }
    }

    /// Back-substitution to reduced row echelon form.
    fn reduce(&mut self) {
        let leads: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &lead in &leads {
            let row = self.pivots.remove(&lead).expect("pivot present");
            let mut row = row;
            let targets: Vec<usize> =
                row.keys().copied().filter(|&c| c != lead && self.pivots.contains_key(&c)).collect();
            for c in targets {
                // Pivots with larger columns are already fully reduced.
                if c < lead {
                    continue;
                }
                let factor = match row.get(&c) {
                    Some(f) => f.clone(),
                    None => continue,
                };
                let pivot = &self.pivots[&c];
                for (&k, v) in pivot {
                    let entry = row.entry(k).or_insert_with(Rational::zero);
                    *entry -= &factor * v;
                    if entry.is_zero() {
                        row.remove(&k);
                    }
                }
            }
            self.pivots.insert(lead, row);
        }
    }
}

/// Solves `sum_i c_i * columns[i] = target` exactly.
pub fn solve_columns(columns: &[LaurentPoly], target: &LaurentPoly) -> SolveResult {
    let ncols = columns.len();
    let mut rows: BTreeMap<Monomial, Row> = BTreeMap::new();
    for (i, col) in columns.iter().enumerate() {
        for (m, c) in col.terms() {
            rows.entry(m.clone()).or_default().insert(i, c.clone());
        }
    }
    for (m, c) in target.terms() {
        rows.entry(m.clone()).or_default().insert(ncols, c.clone());
    }
    solve_rows(ncols, rows.into_values())
}

/// Solves a system given as sparse rows; column `ncols` holds the right-hand side.
pub fn solve_rows<I: IntoIterator<Item = BTreeMap<usize, Rational>>>(ncols: usize, rows: I) -> SolveResult {
    let mut ech = Echelon::new(ncols);
    for row in rows {
        ech.insert(row);
    }
    ech.reduce();
    let rank = ech.pivots.len();
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains_key(c)).collect();
    let mut best_effort = vec![Rational::zero(); ncols];
    for (&lead, row) in &ech.pivots {
        if let Some(r) = row.get(&ncols) {
            best_effort[lead] = r.clone();
        }
    }
    let particular = if ech.inconsistent { None } else { Some(best_effort.clone()) };
    let kernel = free
        .iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); ncols];
            x[f] = Rational::one();
            for (&lead, row) in &ech.pivots {
                if let Some(v) = row.get(&f) {
                    x[lead] = -v.clone();
                }
            }
            x
        })
        .collect();
    SolveResult { particular, best_effort, kernel, rank }
}

/// `sum_i coeffs[i] * basis[i]`.
pub fn combine(basis: &[LaurentPoly], coeffs: &[Rational]) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for (b, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            out += &b.scale(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::{int, rat, Var};

    fn row(entries: &[(usize, i64)]) -> Row {
        entries.iter().map(|&(c, v)| (c, int(v))).collect()
    }

    #[test]
    fn unique_solution() {
        // x + y = 3, x - y = 1
        let res = solve_rows(2, vec![row(&[(0, 1), (1, 1), (2, 3)]), row(&[(0, 1), (1, -1), (2, 1)])]);
        assert_eq!(res.particular, Some(vec![int(2), int(1)]));
        assert!(res.kernel.is_empty());
        assert_eq!(res.rank, 2);
    }

    #[test]
    fn inconsistent_system() {
        let res = solve_rows(1, vec![row(&[(0, 2), (1, 1)]), row(&[(0, 4), (1, 3)])]);
        assert!(res.particular.is_none());
    }

    #[test]
    fn kernel_vectors_solve_homogeneous_system() {
        // x + 2y + 3z = 6 ; 2x + 4y + 7z = 13
        let rows = vec![row(&[(0, 1), (1, 2), (2, 3), (3, 6)]), row(&[(0, 2), (1, 4), (2, 7), (3, 13)])];
        let res = solve_rows(3, rows.clone());
        let x = res.particular.clone().unwrap();
        assert_eq!(res.kernel.len(), 1);
        for r in &rows {
            let lhs: Rational = (0..3).map(|c| r.get(&c).cloned().unwrap_or_default() * &x[c]).sum();
            assert_eq!(lhs, r[&3]);
            let k: Rational = (0..3).map(|c| r.get(&c).cloned().unwrap_or_default() * &res.kernel[0][c]).sum();
            assert!(k.is_zero());
        }
    }

    #[test]
    fn polynomial_columns() {
        let a = LaurentPoly::var(Var::x(1));
        let b = LaurentPoly::var(Var::y(1));
        let target = &a.scale(&rat(1, 2)) - &b.scale(&int(3));
        let res = solve_columns(&[a.clone(), b.clone()], &target);
        let c = res.particular.unwrap();
        assert_eq!(combine(&[a, b], &c), target);
    }
}
