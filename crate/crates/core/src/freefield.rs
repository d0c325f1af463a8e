//! Wick contractions of normal-ordered powers of a massless free field.
//!
//! Propagators are normalized to `1/rho`. Slots belonging to the same
//! insertion are never contracted with each other, and the bifield
//! `V(x,y) = :phi(x) phi(y):` contributes one slot at `x` and one at `y` with
//! no `x`-`y` contraction. Instead of walking every slot-level perfect
//! matching, contractions are enumerated as edge-multiplicity patterns between
//! insertion points; a pattern with multiplicities `e_ij` stands for
//! `prod_i k_i! / prod_{i<j} e_ij!` slot matchings.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactring::{LaurentPoly, Monomial, Point, Rational, RingError, Var, VarClass};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum InsertionKind {
    /// `:phi^k:` at the insertion point.
    Phi { power: u32 },
    /// `:phi(x) phi(y):`, always at the points `x` and `y`.
    Bifield,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Insertion {
    pub point: Point,
    pub kind: InsertionKind,
}

impl Insertion {
    pub fn phi(point: Point, power: u32) -> Insertion {
        Insertion { point, kind: InsertionKind::Phi { power } }
    }

    pub fn phi2(i: u32) -> Insertion {
        Insertion::phi(Point::Spectator(i), 2)
    }

    pub fn bifield() -> Insertion {
        Insertion { point: Point::X, kind: InsertionKind::Bifield }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WickError {
    #[error("odd number of field slots ({0})")]
    OddSlotCount(u32),
    #[error("two insertions at point {0}")]
    DuplicatePoint(Point),
    #[error("at most one bifield per correlator")]
    MultipleBifields,
    #[error("expected exactly one bifield insertion")]
    MissingBifield,
    #[error(":phi^0: is the identity; drop it from the insertion list")]
    ZeroPower,
    #[error("bifield correlator contains rho_xy")]
    UnexpectedRhoXy,
    #[error(transparent)]
    Ring(#[from] RingError),
}

struct Vertex {
    point: Point,
    slots: u32,
    group: usize,
}

fn vertices(insertions: &[Insertion]) -> Result<Vec<Vertex>, WickError> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut bifields = 0;
    for (group, ins) in insertions.iter().enumerate() {
        let pts: Vec<(Point, u32)> = match ins.kind {
            InsertionKind::Phi { power: 0 } => return Err(WickError::ZeroPower),
            InsertionKind::Phi { power } => vec![(ins.point, power)],
            InsertionKind::Bifield => {
                bifields += 1;
                vec![(Point::X, 1), (Point::Y, 1)]
            }
        };
        for (point, slots) in pts {
            if !seen.insert(point) {
                return Err(WickError::DuplicatePoint(point));
            }
            out.push(Vertex { point, slots, group });
        }
    }
    if bifields > 1 {
        return Err(WickError::MultipleBifields);
    }
    let total: u32 = out.iter().map(|v| v.slots).sum();
    if total % 2 == 1 {
        return Err(WickError::OddSlotCount(total));
    }
    Ok(out)
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

struct Enumerator<'a> {
    verts: &'a [Vertex],
    pairs: Vec<(usize, usize)>,
    connected_only: bool,
    groups: usize,
    out: LaurentPoly,
}

impl Enumerator<'_> {
    /// Distributes the remaining slots of the pairs from index `k` on.
    fn run(&mut self, k: usize, remaining: &mut Vec<u32>, edges: &mut Vec<u32>) {
        if k == self.pairs.len() {
            if remaining.iter().all(|&r| r == 0) {
                self.emit(edges);
            }
            return;
        }
        let (i, j) = self.pairs[k];
        // Once every pair touching vertex i has been visited, its slots must be used up.
        let last_for_i = self.pairs[k + 1..].iter().all(|&(a, b)| a != i && b != i);
        let max = remaining[i].min(remaining[j]);
        let min = if last_for_i { remaining[i] } else { 0 };
        if min > max {
            return;
        }
        for e in min..=max {
            remaining[i] -= e;
            remaining[j] -= e;
            edges[k] = e;
            self.run(k + 1, remaining, edges);
            remaining[i] += e;
            remaining[j] += e;
        }
        edges[k] = 0;
    }

    fn emit(&mut self, edges: &[u32]) {
        if self.connected_only && !self.connected(edges) {
            return;
        }
        let mut weight = self.verts.iter().fold(BigInt::one(), |acc, v| acc * factorial(v.slots));
        let mut pairs = Vec::new();
        for (&(i, j), &e) in self.pairs.iter().zip(edges) {
            if e > 0 {
                weight /= factorial(e);
                pairs.push((Var::of(self.verts[i].point, self.verts[j].point), -(e as i32)));
            }
        }
        self.out.add_term(Monomial::from_pairs(pairs), Rational::from_integer(weight));
    }

    fn connected(&self, edges: &[u32]) -> bool {
        let mut parent: Vec<usize> = (0..self.groups).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for (&(i, j), &e) in self.pairs.iter().zip(edges) {
            if e > 0 {
                let a = find(&mut parent, self.verts[i].group);
                let b = find(&mut parent, self.verts[j].group);
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 0);
        (0..self.groups).all(|g| find(&mut parent, g) == root)
    }
}

/// Sum over admissible contractions of the product of `1/rho` propagators.
pub fn wick_correlator(insertions: &[Insertion], connected_only: bool) -> Result<LaurentPoly, WickError> {
    let verts = vertices(insertions)?;
    if verts.is_empty() {
        return Ok(LaurentPoly::one());
    }
    let mut pairs = Vec::new();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            if verts[i].group != verts[j].group {
                pairs.push((i, j));
            }
        }
    }
    let mut en =
        Enumerator { verts: &verts, pairs, connected_only, groups: insertions.len(), out: LaurentPoly::zero() };
    let mut remaining: Vec<u32> = verts.iter().map(|v| v.slots).collect();
    let mut edges = vec![0; en.pairs.len()];
    if en.pairs.is_empty() {
        return Ok(LaurentPoly::zero());
    }
    en.run(0, &mut remaining, &mut edges);
    Ok(en.out)
}

/// The bifield correlator, checked to be a valid leading part: free of
/// `rho_xy` and homogeneous of degree -1 in the x- and y-classes.
pub fn u0_of_bifield_correlator(insertions: &[Insertion]) -> Result<LaurentPoly, WickError> {
    let n = insertions.iter().filter(|i| i.kind == InsertionKind::Bifield).count();
    match n {
        0 => return Err(WickError::MissingBifield),
        1 => {}
        _ => return Err(WickError::MultipleBifields),
    }
    let u0 = wick_correlator(insertions, false)?;
    if u0.is_zero() {
        return Ok(u0);
    }
    if u0.vars().contains(&Var::xy()) {
        return Err(WickError::UnexpectedRhoXy);
    }
    for class in [VarClass::X, VarClass::Y] {
        let d = u0.homogeneous_degree(class)?;
        if d != -1 {
            return Err(RingError::Inhomogeneous { class, witness: vec![format!("degree {d}")] }.into());
        }
    }
    Ok(u0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::int;

    fn mono(pairs: &[(Var, i32)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn two_point_function() {
        let f = wick_correlator(&[Insertion::phi2(1), Insertion::phi2(2)], false).unwrap();
        assert_eq!(f, LaurentPoly::term(int(2), mono(&[(Var::s(1, 2), -2)])));
    }

    #[test]
    fn connected_three_point_function() {
        let ins = [Insertion::phi2(1), Insertion::phi2(2), Insertion::phi2(3)];
        let f = wick_correlator(&ins, true).unwrap();
        let expected = LaurentPoly::term(int(8), mono(&[(Var::s(1, 2), -1), (Var::s(1, 3), -1), (Var::s(2, 3), -1)]));
        assert_eq!(f, expected);
        assert_eq!(wick_correlator(&ins, false).unwrap(), expected);
    }

    #[test]
    fn bifield_with_two_squares() {
        let ins = [Insertion::bifield(), Insertion::phi2(1), Insertion::phi2(2)];
        let f = u0_of_bifield_correlator(&ins).unwrap();
        let expected = &LaurentPoly::term(int(4), mono(&[(Var::x(1), -1), (Var::y(2), -1), (Var::s(1, 2), -1)]))
            + &LaurentPoly::term(int(4), mono(&[(Var::x(2), -1), (Var::y(1), -1), (Var::s(1, 2), -1)]));
        assert_eq!(f, expected);
    }

    #[test]
    fn lone_bifield_has_no_contraction() {
        assert!(u0_of_bifield_correlator(&[Insertion::bifield()]).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        assert_eq!(wick_correlator(&[Insertion::phi(Point::Spectator(1), 3)], false), Err(WickError::OddSlotCount(3)));
        assert_eq!(
            wick_correlator(&[Insertion::phi2(1), Insertion::phi2(1)], false),
            Err(WickError::DuplicatePoint(Point::Spectator(1)))
        );
        assert_eq!(
            wick_correlator(&[Insertion::bifield(), Insertion::bifield()], false),
            Err(WickError::DuplicatePoint(Point::X))
        );
        assert_eq!(u0_of_bifield_correlator(&[Insertion::phi2(1), Insertion::phi2(2)]), Err(WickError::MissingBifield));
    }

    #[test]
    fn disconnected_pieces_are_dropped_on_request() {
        let ins = [Insertion::phi2(1), Insertion::phi2(2), Insertion::phi2(3), Insertion::phi2(4)];
        let full = wick_correlator(&ins, false).unwrap();
        let conn = wick_correlator(&ins, true).unwrap();
        let disc = &full - &conn;
        // three ways to split into two pairs, each 2 * 2
        assert_eq!(disc.len(), 3);
        assert!(disc.terms().all(|(_, c)| *c == int(4)));
        // three 4-cycles, each 2^4
        assert_eq!(conn.len(), 3);
        assert!(conn.terms().all(|(_, c)| *c == int(16)));
    }
}
