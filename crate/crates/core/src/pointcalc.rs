//! Spacetime differential operators rewritten as derivations on the rho-ring.
//!
//! For `f` a function of squared distances, the chain rule with
//! `d rho_au / d x_a = 2 (x_a - x_u)` and the polarization identity
//!
//! ```text
//! 2 (x_a - x_b).(x_c - x_u) = rho_au + rho_bc - rho_ac - rho_bu      (rho_pp = 0)
//! ```
//!
//! turns every scalar contraction of gradients into a polynomial-coefficient
//! differential operator in the `rho` variables. Coefficients multiply from
//! the left; derivatives only act on the operand. The points a chain-rule sum
//! runs over are read off the operand's variable support.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::exactring::{int, LaurentPoly, Point, Var};

/// Spacetime dimension entering through `d/dx_a . (x_a - x_u) = D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dimension(pub u32);

impl Dimension {
    pub const FOUR: Dimension = Dimension(4);

    pub fn get(self) -> i64 {
        self.0 as i64
    }
}

impl Default for Dimension {
    fn default() -> Self {
        Dimension::FOUR
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalcError {
    #[error("operator needs two distinct points, got {0} twice")]
    SamePoint(Point),
}

/// `rho_pq`, or zero when `p == q`.
pub fn rho(p: Point, q: Point) -> LaurentPoly {
    match Var::new(p, q) {
        Ok(v) => LaurentPoly::var(v),
        Err(_) => LaurentPoly::zero(),
    }
}

/// `2 (x_a - x_b).(x_c - x_u)` as a polynomial in squared distances.
pub fn polarization(a: Point, b: Point, c: Point, u: Point) -> LaurentPoly {
    &(&rho(a, u) + &rho(b, c)) - &(&rho(a, c) + &rho(b, u))
}

/// Points `u != a` such that `rho_au` occurs in `f`.
fn partners(f: &LaurentPoly, a: Point) -> BTreeSet<Point> {
    f.vars().into_iter().filter_map(|v| v.other(a)).collect()
}

/// The wave operator at point `a`:
/// `2D sum_u d_au f + 2 sum_{u,v} (rho_au + rho_av - rho_uv) d_au d_av f`.
pub fn box_op(f: &LaurentPoly, a: Point, dim: Dimension) -> LaurentPoly {
    let us: Vec<Point> = partners(f, a).into_iter().collect();
    let mut out = LaurentPoly::zero();
    let firsts: Vec<(Point, LaurentPoly)> = us.iter().map(|&u| (u, f.partial(Var::of(a, u)))).collect();
    for (_, d) in &firsts {
        out += &d.scale(&int(2 * dim.get()));
    }
    for (u, du) in &firsts {
        for &v in &us {
            let duv = du.partial(Var::of(a, v));
            if duv.is_zero() {
                continue;
            }
            let coef = &(&rho(a, *u) + &rho(a, v)) - &rho(*u, v);
            out += &(&coef * &duv).scale(&int(2));
        }
    }
    out
}

/// `d_a . d_b f` for `a != b`:
/// `2 sum_{u,v} (rho_av + rho_bu - rho_ab - rho_uv) d_au d_bv f - 2D d_ab f`.
pub fn dot_grad_grad(f: &LaurentPoly, a: Point, b: Point, dim: Dimension) -> Result<LaurentPoly, CalcError> {
    if a == b {
        return Err(CalcError::SamePoint(a));
    }
    let mut out = f.partial(Var::of(a, b)).scale(&int(-2 * dim.get()));
    let us = partners(f, a);
    let vs = partners(f, b);
    for &u in &us {
        let du = f.partial(Var::of(a, u));
        if du.is_zero() {
            continue;
        }
        for &v in &vs {
            let duv = du.partial(Var::of(b, v));
            if duv.is_zero() {
                continue;
            }
            // 4 (x_a - x_u).(x_b - x_v)
            let coef = polarization(a, u, b, v).scale(&int(2));
            out += &(&coef * &duv);
        }
    }
    Ok(out)
}

/// `(x_a - x_b) . d_c f = sum_u (rho_au + rho_bc - rho_ac - rho_bu) d_cu f`.
pub fn vec_dot_grad(f: &LaurentPoly, from: (Point, Point), at: Point) -> Result<LaurentPoly, CalcError> {
    let (a, b) = from;
    if a == b {
        return Err(CalcError::SamePoint(a));
    }
    let mut out = LaurentPoly::zero();
    for u in partners(f, at) {
        let d = f.partial(Var::of(at, u));
        if d.is_zero() {
            continue;
        }
        out += &(&polarization(a, b, at, u) * &d);
    }
    Ok(out)
}

/// `(x_a - x_b)^mu (x_a - x_b)^nu d_{c,mu} d_{e,nu} f` with `c != e`,
/// derivatives acting on `f` only (the second-order chain-rule term included).
pub fn double_contraction(
    f: &LaurentPoly,
    from: (Point, Point),
    first: Point,
    second: Point,
) -> Result<LaurentPoly, CalcError> {
    let (a, b) = from;
    if a == b {
        return Err(CalcError::SamePoint(a));
    }
    if first == second {
        return Err(CalcError::SamePoint(first));
    }
    let mut out = LaurentPoly::zero();
    let us = partners(f, first);
    let vs = partners(f, second);
    for &u in &us {
        let du = f.partial(Var::of(first, u));
        if du.is_zero() {
            continue;
        }
        let cu = polarization(a, b, first, u);
        for &v in &vs {
            let duv = du.partial(Var::of(second, v));
            if duv.is_zero() {
                continue;
            }
            let cv = polarization(a, b, second, v);
            out += &(&(&cu * &cv) * &duv);
        }
    }
    // d_first of 2 (x_second - x_first) contributes -2 eta, contracted with
    // (x_a - x_b)(x_a - x_b): -2 rho_ab d_{first,second} f.
    let shared = f.partial(Var::of(first, second));
    out -= &(&rho(a, b) * &shared).scale(&int(2));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactring::Monomial;

    const A: Point = Point::Spectator(1);
    const B: Point = Point::Spectator(2);
    const C: Point = Point::Spectator(3);

    fn r(p: Point, q: Point) -> LaurentPoly {
        rho(p, q)
    }

    #[test]
    fn propagator_is_harmonic_in_four_dimensions() {
        let f = LaurentPoly::var_pow(Var::of(A, C), -1);
        assert!(box_op(&f, A, Dimension(4)).is_zero());
    }

    #[test]
    fn box_of_square_distance() {
        for d in [2, 4, 6] {
            let f = r(A, C);
            assert_eq!(box_op(&f, A, Dimension(d)), LaurentPoly::constant(int(2 * d as i64)));
        }
    }

    #[test]
    fn box_of_two_propagators_is_the_cross_term() {
        // box(gh) = 2 grad g . grad h for harmonic g, h; both orderings of the
        // (u, v) sum contribute.
        let f = LaurentPoly::term(int(1), Monomial::from_pairs([(Var::of(A, B), -1), (Var::of(A, C), -1)]));
        let expected = &(&(&r(A, B) + &r(A, C)) - &r(B, C)).scale(&int(4))
            * &LaurentPoly::term(int(1), Monomial::from_pairs([(Var::of(A, B), -2), (Var::of(A, C), -2)]));
        assert_eq!(box_op(&f, A, Dimension(4)), expected);
    }

    #[test]
    fn dot_grad_grad_examples() {
        let d = Dimension(4);
        assert_eq!(dot_grad_grad(&r(A, B), A, B, d).unwrap(), LaurentPoly::constant(int(-8)));
        let f = &r(A, C) * &r(B, C);
        let expected = (&(&r(A, C) + &r(B, C)) - &r(A, B)).scale(&int(2));
        assert_eq!(dot_grad_grad(&f, A, B, d).unwrap(), expected);
        assert!(dot_grad_grad(&r(C, Point::Spectator(4)), A, B, d).unwrap().is_zero());
        assert_eq!(dot_grad_grad(&f, A, A, d), Err(CalcError::SamePoint(A)));
    }

    #[test]
    fn vec_dot_grad_examples() {
        let d4 = Point::Spectator(4);
        let f = r(C, Point::Spectator(5));
        let expected = &(&r(C, d4) + &r(C, Point::Spectator(5))) - &r(d4, Point::Spectator(5));
        assert_eq!(vec_dot_grad(&f, (C, d4), C).unwrap(), expected);
        assert_eq!(vec_dot_grad(&r(A, B), (A, B), A).unwrap(), r(A, B).scale(&int(2)));
        assert!(vec_dot_grad(&LaurentPoly::constant(int(5)), (A, B), C).unwrap().is_zero());
        assert_eq!(vec_dot_grad(&r(A, B), (A, A), C), Err(CalcError::SamePoint(A)));
    }

    #[test]
    fn higher_dimensional_propagators() {
        for d in [4i32, 6, 8] {
            let f = LaurentPoly::var_pow(Var::of(A, B), 1 - d / 2);
            assert!(box_op(&f, A, Dimension(d as u32)).is_zero(), "D = {d}");
        }
    }
}
