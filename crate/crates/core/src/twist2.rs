//! Twist-two conditions for `<V(x,y) B(x2) A(x1)>` with `d_B - d_A = 2n`.
//!
//! After stripping the prefactor, biharmonicity of `V` becomes a pair of
//! conditions on `f`. The first is
//!
//! ```text
//! O1 = x12^2 d1.d2 - 2 (x12 (x) x12).(d1 (x) d2) + 2(n-1) x12.d2 + 2(n+1) x12.d1
//! ```
//!
//! and the second says `f` is a homogeneous polynomial of order `n - 1` in
//! the squared distances from `x1`.

use thiserror::Error;

use crate::exactring::{int, LaurentPoly, Point};
use crate::freefield::{wick_correlator, Insertion, WickError};
use crate::pointcalc::{box_op, dot_grad_grad, double_contraction, rho, vec_dot_grad, CalcError, Dimension};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twist2Problem {
    /// Half the dimension difference, `n >= 1`.
    pub n: u32,
    /// Argument of `A`.
    pub point1: Point,
    /// Argument of `B`.
    pub point2: Point,
    pub f: LaurentPoly,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Twist2Error {
    #[error("n must be at least 1 (d_B - d_A = 2n > 0)")]
    ZeroN,
    #[error(transparent)]
    Calc(#[from] CalcError),
}

impl Twist2Problem {
    pub fn new(n: u32, point1: Point, point2: Point, f: LaurentPoly) -> Result<Self, Twist2Error> {
        if n == 0 {
            return Err(Twist2Error::ZeroN);
        }
        if point1 == point2 {
            return Err(CalcError::SamePoint(point1).into());
        }
        Ok(Twist2Problem { n, point1, point2, f })
    }
}

pub fn op1_apply(prob: &Twist2Problem) -> Result<LaurentPoly, CalcError> {
    let (p1, p2, f) = (prob.point1, prob.point2, &prob.f);
    let n = prob.n as i64;
    let mut out = &rho(p1, p2) * &dot_grad_grad(f, p1, p2, Dimension::FOUR)?;
    out -= &double_contraction(f, (p1, p2), p1, p2)?.scale(&int(2));
    out += &vec_dot_grad(f, (p1, p2), p2)?.scale(&int(2 * (n - 1)));
    out += &vec_dot_grad(f, (p1, p2), p1)?.scale(&int(2 * (n + 1)));
    Ok(out)
}

/// Every term is a monomial of total order `n - 1` in the `rho_{1i}`, with
/// no negative powers.
pub fn polynomiality_check(prob: &Twist2Problem) -> bool {
    let target = prob.n as i64 - 1;
    prob.f.terms().all(|(m, _)| {
        let mut degree = 0i64;
        for &(v, e) in m.iter() {
            if v.involves(prob.point1) {
                if e < 0 {
                    return false;
                }
                degree += e as i64;
            }
        }
        degree == target
    })
}

/// `h = (rho_12 box_2 - 4 x12.d2 + 8) K` with `K` the correlator of `:phi^2:`
/// at `point2` and at each spectator.
pub fn example_vector(point1: Point, point2: Point, spectators: &[Point]) -> Result<LaurentPoly, WickError> {
    let mut ins = vec![Insertion::phi(point2, 2)];
    ins.extend(spectators.iter().map(|&p| Insertion::phi(p, 2)));
    let k = wick_correlator(&ins, false)?;
    let mut h = &rho(point1, point2) * &box_op(&k, point2, Dimension::FOUR);
    h -= &vec_dot_grad(&k, (point1, point2), point2).expect("distinct points").scale(&int(4));
    h += &k.scale(&int(8));
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::{Monomial, Var};

    const P1: Point = Point::Spectator(1);
    const P2: Point = Point::Spectator(2);

    fn problem(n: u32, f: LaurentPoly) -> Twist2Problem {
        Twist2Problem::new(n, P1, P2, f).unwrap()
    }

    #[test]
    fn free_field_vectors_pass_both_conditions() {
        let sets: [&[u32]; 3] = [&[3], &[3, 4], &[3, 4, 5]];
        for s in sets {
            let pts: Vec<Point> = s.iter().map(|&i| Point::Spectator(i)).collect();
            let h = example_vector(P1, P2, &pts).unwrap();
            assert!(!h.is_zero());
            let prob = problem(2, h);
            assert!(op1_apply(&prob).unwrap().is_zero(), "spectators {s:?}");
            assert!(polynomiality_check(&prob));
        }
    }

    #[test]
    fn one_spectator_vector() {
        let h = example_vector(P1, P2, &[Point::Spectator(3)]).unwrap();
        // K = 2 rho_23^-2, box_2 K = 16 rho_23^-3, x12.d2 K = -4 (rho_13 - rho_12 - rho_23) rho_23^-3
        let expected = LaurentPoly::term(int(16), Monomial::from_pairs([(Var::s(1, 3), 1), (Var::s(2, 3), -3)]));
        assert_eq!(h, expected);
    }

    #[test]
    fn negative_controls() {
        let bad = LaurentPoly::term(int(1), Monomial::from_pairs([(Var::s(1, 3), -1), (Var::s(2, 3), -1)]));
        let prob = problem(2, bad);
        assert!(!op1_apply(&prob).unwrap().is_zero());
        assert!(!polynomiality_check(&prob));
        let h = example_vector(P1, P2, &[Point::Spectator(3)]).unwrap();
        let spoiled = &h + &LaurentPoly::var_pow(Var::s(1, 3), 2);
        assert!(!polynomiality_check(&problem(2, spoiled)));
        assert!(polynomiality_check(&problem(1, LaurentPoly::var_pow(Var::s(2, 3), -2))));
        assert!(!polynomiality_check(&problem(1, LaurentPoly::var(Var::s(1, 3)))));
        assert_eq!(Twist2Problem::new(0, P1, P2, LaurentPoly::one()), Err(Twist2Error::ZeroN));
    }

    #[test]
    fn operator_is_linear() {
        let f = LaurentPoly::term(int(3), Monomial::from_pairs([(Var::s(1, 3), 2), (Var::s(2, 4), -1)]));
        let g = LaurentPoly::term(int(-1), Monomial::from_pairs([(Var::s(1, 2), 1), (Var::s(2, 3), -2)]));
        let sum = op1_apply(&problem(2, &f + &g)).unwrap();
        assert_eq!(sum, &op1_apply(&problem(2, f)).unwrap() + &op1_apply(&problem(2, g)).unwrap());
    }
}
