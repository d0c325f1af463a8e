//! Coordinate-space oracle for the rho-calculus.
//!
//! A polynomial in squared distances becomes an ordinary polynomial in the
//! coordinates once `rho_ab = sum_mu (x_a^mu - x_b^mu)^2` is substituted.
//! The operators are then plain partial derivatives, which the ring already
//! provides. Each coordinate is stored as a dummy variable.

use gci_core::exactring::{int, rat, LaurentPoly, Monomial, Point, Var};
use gci_core::pointcalc::{box_op, dot_grad_grad, double_contraction, rho, vec_dot_grad, Dimension};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const POINTS: [Point; 5] = [Point::X, Point::Y, Point::Spectator(1), Point::Spectator(2), Point::Spectator(3)];

fn index(p: Point) -> u32 {
    POINTS.iter().position(|&q| q == p).unwrap() as u32
}

fn coord(p: Point, mu: u32) -> Var {
    Var::s(1000 + 10 * index(p) + mu, 9999)
}

fn diff(a: Point, b: Point, mu: u32) -> LaurentPoly {
    &LaurentPoly::var(coord(a, mu)) - &LaurentPoly::var(coord(b, mu))
}

fn to_coords(f: &LaurentPoly, dim: u32) -> LaurentPoly {
    let mut out = f.clone();
    for (i, &a) in POINTS.iter().enumerate() {
        for &b in &POINTS[i + 1..] {
            let r = (0..dim).fold(LaurentPoly::zero(), |acc, mu| &acc + &diff(a, b, mu).pow(2));
            out = out.substitute(Var::of(a, b), &r);
        }
    }
    out
}

fn random_poly(rng: &mut ChaCha8Rng) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut pairs = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let a = POINTS[rng.gen_range(0..5)];
            let b = POINTS[rng.gen_range(0..5)];
            if a != b {
                pairs.push((Var::of(a, b), rng.gen_range(1..=2)));
            }
        }
        out.add_term(Monomial::from_pairs(pairs), rat(rng.gen_range(1..=5), rng.gen_range(1..=3)));
    }
    out
}

fn two_points(rng: &mut ChaCha8Rng) -> (Point, Point) {
    let a = POINTS[rng.gen_range(0..5)];
    let mut b = POINTS[rng.gen_range(0..5)];
    while b == a {
        b = POINTS[rng.gen_range(0..5)];
    }
    (a, b)
}

#[test]
fn wave_operator() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for dim in [2u32, 3, 4] {
        for _ in 0..15 {
            let f = random_poly(&mut rng);
            let a = POINTS[rng.gen_range(0..5)];
            let fc = to_coords(&f, dim);
            let lap = (0..dim).fold(LaurentPoly::zero(), |acc, mu| &acc + &fc.partial2(coord(a, mu), coord(a, mu)));
            assert_eq!(to_coords(&box_op(&f, a, Dimension(dim)), dim), lap, "D = {dim}, f = {f}");
        }
    }
}

#[test]
fn mixed_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for dim in [2u32, 4] {
        for _ in 0..15 {
            let f = random_poly(&mut rng);
            let (a, b) = two_points(&mut rng);
            let fc = to_coords(&f, dim);
            let expected =
                (0..dim).fold(LaurentPoly::zero(), |acc, mu| &acc + &fc.partial2(coord(a, mu), coord(b, mu)));
            let got = dot_grad_grad(&f, a, b, Dimension(dim)).unwrap();
            assert_eq!(to_coords(&got, dim), expected, "f = {f}");
        }
    }
}

#[test]
fn directional_derivative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let dim = 4;
    for _ in 0..20 {
        let f = random_poly(&mut rng);
        let (a, b) = two_points(&mut rng);
        let c = POINTS[rng.gen_range(0..5)];
        let fc = to_coords(&f, dim);
        let expected =
            (0..dim).fold(LaurentPoly::zero(), |acc, mu| &acc + &(&diff(a, b, mu) * &fc.partial(coord(c, mu))));
        assert_eq!(to_coords(&vec_dot_grad(&f, (a, b), c).unwrap(), dim), expected, "f = {f}");
    }
}

#[test]
fn double_contraction_matches() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let dim = 4;
    for _ in 0..15 {
        let f = random_poly(&mut rng);
        let (a, b) = two_points(&mut rng);
        let (c, e) = two_points(&mut rng);
        let fc = to_coords(&f, dim);
        let mut expected = LaurentPoly::zero();
        for mu in 0..dim {
            for nu in 0..dim {
                let d = fc.partial(coord(c, mu)).partial(coord(e, nu));
                expected += &(&(&diff(a, b, mu) * &diff(a, b, nu)) * &d);
            }
        }
        assert_eq!(to_coords(&double_contraction(&f, (a, b), c, e).unwrap(), dim), expected, "f = {f}");
    }
}

#[test]
fn box_of_squared_distance() {
    // box rho^2 = 4 (D + 2) rho
    for dim in [3u32, 4, 6] {
        let f = rho(Point::X, Point::Spectator(1)).pow(2);
        let got = box_op(&f, Point::X, Dimension(dim));
        assert_eq!(got, rho(Point::X, Point::Spectator(1)).scale(&int(4 * (dim as i64 + 2))));
    }
}
