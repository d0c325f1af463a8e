//! The end-to-end verification suite.
//!
//! Each criterion is an exact check with a wall-clock budget. A criterion
//! passes only if the check succeeds and finishes inside its budget.
//! Randomized checks draw from a fixed seed, so every run is identical.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::biharmonic::{
    complete, completion_consistent, dps_solve, five_point_scan, integrability_defect, pde_apply, pole_profile,
    sl2_act, AnsatzConfig, DpsSpec, Side, Sl2,
};
use crate::characters::{branch, char4d_restricted, RepLabel4D};
use crate::exactring::{int, rat, LaurentPoly, Monomial, Point, Rational, Var};
use crate::freefield::{u0_of_bifield_correlator, wick_correlator, Insertion};
use crate::pointcalc::{box_op, Dimension};
use crate::twist2::{example_vector, op1_apply, polynomiality_check, Twist2Problem};
use crate::waves::{
    beta4d, branch4d_to_2d, c_coeff, extract_2d_coeffs, three_term_residual, to_cross_ratios, uv_from_st,
};

/// Seed for the randomized property suites.
pub const PROPERTY_SEED: u64 = 0x6c1_2001;
/// Cases per property.
pub const PROPERTY_CASES: usize = 1000;

type Check = std::result::Result<String, String>;

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    /// Module names, used by `--filter`.
    pub tags: &'static [&'static str],
    pub limit: Duration,
    pub check: fn() -> Check,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub limit: Duration,
}

impl CriterionResult {
    /// One table row: status, id, name, timing against budget, detail.
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {:<28} {:>8.2}s / {:>3}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }
}

pub fn criteria() -> Vec<Criterion> {
    let s = Duration::from_secs;
    vec![
        Criterion { id: 1, name: "scalar branching", tags: &["characters"], limit: s(5), check: scalar_branching },
        Criterion { id: 2, name: "three-term identity", tags: &["waves"], limit: s(5), check: three_term },
        Criterion { id: 3, name: "partial-wave branching", tags: &["waves"], limit: s(30), check: partial_waves },
        Criterion { id: 4, name: "six-point double pole", tags: &["biharmonic"], limit: s(60), check: six_point },
        Criterion { id: 5, name: "five-point exclusion", tags: &["biharmonic"], limit: s(60), check: five_point },
        Criterion {
            id: 6,
            name: "completion consistency",
            tags: &["biharmonic", "freefield"],
            limit: s(120),
            check: completion,
        },
        Criterion { id: 7, name: "twist-two example", tags: &["twist2", "pointcalc"], limit: s(10), check: twist_two },
        Criterion {
            id: 8,
            name: "free-field positivity",
            tags: &["waves", "freefield"],
            limit: s(30),
            check: free_positivity,
        },
        Criterion {
            id: 9,
            name: "property suites",
            tags: &["exactring", "pointcalc", "biharmonic"],
            limit: s(60),
            check: properties,
        },
    ]
}

fn selected(c: &Criterion, filter: Option<&str>) -> bool {
    match filter {
        None => true,
        Some(f) => c.id.to_string() == f || c.tags.contains(&f) || c.name.contains(f),
    }
}

/// Runs every criterion matching `filter` (an id, a module tag, or part of a name).
pub fn run_suite(filter: Option<&str>) -> Vec<CriterionResult> {
    criteria()
        .into_iter()
        .filter(|c| selected(c, filter))
        .map(|c| {
            let start = Instant::now();
            let outcome = (c.check)();
            let elapsed = start.elapsed();
            let (ok, mut detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            let in_time = elapsed <= c.limit;
            if !in_time {
                detail.push_str(" (over time budget)");
            }
            CriterionResult { id: c.id, name: c.name, passed: ok && in_time, detail, elapsed, limit: c.limit }
        })
        .collect()
}

/// Canonical JSON of a report, without timings, for golden comparison.
pub fn report_json(results: &[CriterionResult]) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        schema: u32,
        results: &'a [CriterionResult],
    }
    serde_json::to_string_pretty(&Doc { schema: 1, results }).expect("report serializes")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn scalar_branching() -> Check {
    let trunc = 12;
    for d in 2..=4u32 {
        let b = branch(&char4d_restricted(RepLabel4D::scalar(d), trunc)).map_err(|e| e.to_string())?;
        // keys are (2h+, 2h-); the diagonal has h+ = h- = (d + n) / 2
        let expected: BTreeMap<(i64, i64), i64> =
            (0..=(trunc - d) as i64).map(|n| ((d as i64 + n, d as i64 + n), n + 1)).collect();
        ensure(b == expected, || format!("d = {d}: multiplicities {b:?}"))?;
    }
    Ok("d = 2,3,4: multiplicity n+1 on the diagonal, 0 elsewhere".into())
}

fn three_term() -> Check {
    for n in 1..=10 {
        let r = three_term_residual(n, 30).map_err(|e| e.to_string())?;
        ensure(r.is_zero(), || format!("n = {n}: residual {}", r.to_json()))?;
    }
    Ok("n = 1..10, order 30: residual 0".into())
}

/// Product `c_from c_{from+1} ... c_{to-1}` (1 when empty).
fn c_product(from: u32, to: u32) -> Rational {
    (from..to).map(c_coeff).fold(Rational::one(), |acc, c| acc * c)
}

/// The closed sums for `L = 0, 1, 2`, through total degree `max_level`.
fn closed_sum(k: u32, l: u32, max_level: u32) -> BTreeMap<(u32, u32), Rational> {
    let mut out = BTreeMap::new();
    let mut put = |key: (u32, u32), c: Rational| {
        if key.0 + key.1 <= max_level && !c.is_zero() {
            out.insert(key, c);
        }
    };
    for r in 0..=max_level {
        match l {
            0 => put((k + r, k + r), c_product(k, k + r)),
            1 => {
                let w = c_product(k + 1, k + r + 1);
                put((k + r + 1, k + r), w.clone());
                put((k + r, k + r + 1), w);
            }
            2 => {
                let w = c_product(k + 2, k + r + 2);
                let mid = &w * (c_coeff(k + r + 1) + c_coeff(k + r) - c_coeff(k)) / c_coeff(k + r + 1);
                put((k + r + 2, k + r), w.clone());
                put((k + r + 1, k + r + 1), mid);
                put((k + r, k + r + 2), w);
            }
            _ => unreachable!("closed sums are known for L <= 2"),
        }
    }
    out
}

fn partial_waves() -> Check {
    let level = 12;
    for k in 1..=3 {
        for l in 0..=2 {
            let expected = closed_sum(k, l, level);
            let series = beta4d(k, l, level).map_err(|e| e.to_string())?;
            let extracted = extract_2d_coeffs(&series, level).map_err(|e| e.to_string())?;
            ensure(extracted == expected, || format!("(k, L) = ({k}, {l}): extracted coefficients differ"))?;
            let recursion: BTreeMap<_, _> = branch4d_to_2d(k, l, level)
                .map_err(|e| e.to_string())?
                .into_iter()
                .filter(|((a, b), _)| a + b <= level)
                .collect();
            ensure(recursion == expected, || format!("(k, L) = ({k}, {l}): recursion differs"))?;
        }
    }
    let mut checked = 0;
    for k in 1..=4 {
        for l in 0..=4 {
            let top = 2 * k + l + 2 * 6;
            let series = beta4d(k, l, top).map_err(|e| e.to_string())?;
            let coeffs = extract_2d_coeffs(&series, top).map_err(|e| e.to_string())?;
            for (key, c) in &coeffs {
                ensure(!c.is_negative(), || format!("(k, L) = ({k}, {l}): coefficient {c} at {key:?}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("closed sums match for k = 1..3, L = 0..2; {checked} coefficients nonnegative"))
}

/// The PDE written out directly, as a second implementation:
/// `(sum rho_yi d_xi)(sum_{i<j} rho_ij d_yi d_yj) U - (x <-> y)`.
pub fn pde_reference(u: &LaurentPoly) -> LaurentPoly {
    let spectators: Vec<u32> = u.spectators().into_iter().collect();
    let half = |u: &LaurentPoly, a: fn(u32) -> Var, b: fn(u32) -> Var| {
        let mut inner = LaurentPoly::zero();
        for (n, &i) in spectators.iter().enumerate() {
            for &j in &spectators[n + 1..] {
                inner += &(&LaurentPoly::var(Var::s(i, j)) * &u.partial2(b(i), b(j)));
            }
        }
        let mut out = LaurentPoly::zero();
        for &i in &spectators {
            out += &(&LaurentPoly::var(b(i)) * &inner.partial(a(i)));
        }
        out
    };
    &half(u, Var::x, Var::y) - &half(u, Var::y, Var::x)
}

fn six_point_spec() -> DpsSpec {
    DpsSpec::new((3, 4), (1, 1), (0, 0), vec![], vec![(1, 2)], vec![], None).expect("valid six-point spec")
}

fn six_point() -> Check {
    let sol = dps_solve(&six_point_spec(), AnsatzConfig::default()).map_err(|e| e.to_string())?;
    let residual = pde_apply(&sol.u0).map_err(|e| e.to_string())?;
    ensure(residual.is_zero(), || format!("pde residual {residual}"))?;
    let independent = pde_reference(&sol.u0);
    ensure(independent.is_zero(), || format!("reference pde residual {independent}"))?;
    let prof = pole_profile(&sol.u0, 3, 4);
    ensure(prof.is_double(), || "no double pole".into())?;
    ensure(prof.max_double_order() == 4, || format!("double pole order {}", prof.max_double_order()))?;
    Ok(format!("U0 has {} terms, pde = 0, double pole of order 4", sol.u0.len()))
}

fn five_point() -> Check {
    let mut attempts = 0;
    for m in 1..=3u32 {
        for n in 1..=3u32 {
            if m == n {
                continue;
            }
            for i in 1..=3u32 {
                for j in 1..=3u32 {
                    for (a, b) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                        attempts += 1;
                        let k = (a + b - 1) as usize;
                        let spec =
                            DpsSpec::new((m, n), (a, b), (0, 0), vec![], vec![(i, j); k], vec![], Some(vec![1, 2, 3]));
                        ensure(spec.is_err(), || format!("five-point spec accepted: {spec:?}"))?;
                    }
                }
            }
        }
    }
    let scan = five_point_scan(4);
    ensure(scan.double_pole_solutions == 0, || format!("{} double-pole solutions", scan.double_pole_solutions))?;
    Ok(format!(
        "{attempts} specs rejected; {} candidates, kernel dim {}, no double poles",
        scan.candidates, scan.kernel_dim
    ))
}

fn free_field_u0s() -> Vec<(&'static str, LaurentPoly)> {
    let five = [Insertion::bifield(), Insertion::phi2(1), Insertion::phi2(2), Insertion::phi2(3)];
    let six = [Insertion::bifield(), Insertion::phi2(1), Insertion::phi2(2), Insertion::phi2(3), Insertion::phi2(4)];
    vec![
        ("five-point", u0_of_bifield_correlator(&five).expect("free field")),
        ("six-point", u0_of_bifield_correlator(&six).expect("free field")),
    ]
}

fn completion() -> Check {
    for (label, u0) in free_field_u0s() {
        for side in [Side::X, Side::Y] {
            let c = complete(&u0, side, 3).map_err(|e| format!("{label}: {e}"))?;
            ensure(c.coeffs[1..].iter().all(LaurentPoly::is_zero), || format!("{label}: U_k != 0"))?;
        }
        ensure(completion_consistent(&u0, 3) == Ok(true), || format!("{label}: completions disagree"))?;
    }
    let sol = dps_solve(&six_point_spec(), AnsatzConfig::default()).map_err(|e| e.to_string())?;
    let defect = integrability_defect(&sol.u0).map_err(|e| e.to_string())?;
    match completion_consistent(&sol.u0, 3) {
        Ok(true) => {
            let c = complete(&sol.u0, Side::X, 1).map_err(|e| e.to_string())?;
            ensure(!c.coeffs[1].is_zero(), || "six-point U1 = 0".into())?;
            Ok("free fields: U_k = 0; six-point completions agree, U1 != 0".into())
        }
        Ok(false) => Err(format!("six-point completions disagree (integrability defect zero: {})", defect.is_zero())),
        Err(e) => Err(format!(
            "free fields: U_k = 0 on both sides; six-point: {e} (integrability defect zero: {})",
            defect.is_zero()
        )),
    }
}

fn twist_two() -> Check {
    let (p1, p2) = (Point::Spectator(1), Point::Spectator(2));
    for spectators in [vec![Point::Spectator(3)], vec![Point::Spectator(3), Point::Spectator(4)]] {
        let h = example_vector(p1, p2, &spectators).map_err(|e| e.to_string())?;
        ensure(!h.is_zero(), || "h = 0".into())?;
        let prob = Twist2Problem::new(2, p1, p2, h).map_err(|e| e.to_string())?;
        let o1 = op1_apply(&prob).map_err(|e| e.to_string())?;
        ensure(o1.is_zero(), || format!("{} spectators: O1 h = {o1}", spectators.len()))?;
        ensure(polynomiality_check(&prob), || format!("{} spectators: not polynomial", spectators.len()))?;
    }
    Ok("1 and 2 spectators: O1 h = 0, polynomial of order 1".into())
}

/// `(rho_12 rho_34)^2 <phi^2 phi^2 phi^2 phi^2>` minus the identity contribution.
pub fn free_four_point_crossed() -> LaurentPoly {
    let ins: Vec<Insertion> = (1..=4).map(Insertion::phi2).collect();
    let g = wick_correlator(&ins, false).expect("free field");
    let pref = LaurentPoly::term(int(1), Monomial::from_pairs([(Var::s(1, 2), 2), (Var::s(3, 4), 2)]));
    let full = &pref * &g;
    full.filter_terms(|m| !m.is_one())
}

fn free_positivity() -> Check {
    let level = 8;
    let st = to_cross_ratios(&free_four_point_crossed()).map_err(|e| e.to_string())?;
    let series = uv_from_st(&st, level).map_err(|e| e.to_string())?;
    let coeffs = extract_2d_coeffs(&series, level).map_err(|e| e.to_string())?;
    ensure(!coeffs.is_empty(), || "no coefficients".into())?;
    for (key, c) in &coeffs {
        ensure(!c.is_negative(), || format!("coefficient {c} at {key:?}"))?;
    }
    Ok(format!("{} terms in s, t; {} coefficients to level {level}, all nonnegative", st.len(), coeffs.len()))
}

/// Random variable among x-, y- and spectator variables of points 1..4.
fn random_var(rng: &mut ChaCha8Rng) -> Var {
    let i = rng.gen_range(1..=4u32);
    match rng.gen_range(0..3) {
        0 => Var::x(i),
        1 => Var::y(i),
        _ => {
            let mut j = rng.gen_range(1..=4u32);
            while j == i {
                j = rng.gen_range(1..=4u32);
            }
            Var::s(i, j)
        }
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let mut n = rng.gen_range(-9..=9i64);
    if n == 0 {
        n = 1;
    }
    rat(n, rng.gen_range(1..=6))
}

fn random_poly(rng: &mut ChaCha8Rng) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let mono = Monomial::from_pairs((0..rng.gen_range(0..=4)).map(|_| (random_var(rng), rng.gen_range(-3..=3))));
        out.add_term(mono, random_rational(rng));
    }
    out
}

fn properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(PROPERTY_SEED);
    let ex = (5, 6);
    let act = |g, p: &LaurentPoly| sl2_act(g, p, ex);
    let bracket = |a, b, p: &LaurentPoly| &act(a, &act(b, p)) - &act(b, &act(a, p));
    for case in 0..PROPERTY_CASES {
        let f = random_poly(&mut rng);
        ensure(bracket(Sl2::X, Sl2::Y, &f) == act(Sl2::H, &f).scale(&int(2)), || {
            format!("sl2 [X,Y] case {case}: {f}")
        })?;
        ensure(bracket(Sl2::H, Sl2::X, &f) == act(Sl2::X, &f), || format!("sl2 [H,X] case {case}: {f}"))?;
        ensure(bracket(Sl2::H, Sl2::Y, &f) == -act(Sl2::Y, &f), || format!("sl2 [H,Y] case {case}: {f}"))?;
    }
    for case in 0..PROPERTY_CASES {
        let (f, g, v) = (random_poly(&mut rng), random_poly(&mut rng), random_var(&mut rng));
        let lhs = (&f * &g).partial(v);
        let rhs = &(&f.partial(v) * &g) + &(&f * &g.partial(v));
        ensure(lhs == rhs, || format!("Leibniz case {case}: d_{v} of ({f})({g})"))?;
    }
    for case in 0..PROPERTY_CASES {
        let (f, u, v) = (random_poly(&mut rng), random_var(&mut rng), random_var(&mut rng));
        ensure(f.partial(u).partial(v) == f.partial(v).partial(u), || format!("commutation case {case}: {f}"))?;
    }
    for case in 0..PROPERTY_CASES {
        let a = Point::Spectator(rng.gen_range(1..=4));
        let mut b = Point::Spectator(rng.gen_range(1..=4));
        while b == a {
            b = Point::Spectator(rng.gen_range(1..=4));
        }
        let d = [4u32, 6, 8][rng.gen_range(0..3)];
        // a factor not involving `a` commutes with box_a
        let mut spectator_factor = random_poly(&mut rng).filter_terms(|m| m.vars().all(|v| !v.involves(a)));
        if spectator_factor.is_zero() {
            spectator_factor = LaurentPoly::one();
        }
        let f = &spectator_factor * &LaurentPoly::var_pow(Var::of(a, b), 1 - d as i32 / 2);
        let r = box_op(&f, a, Dimension(d));
        ensure(r.is_zero(), || format!("harmonicity case {case}: D = {d}, f = {f}, box f = {r}"))?;
    }
    for case in 0..PROPERTY_CASES {
        let f = random_poly(&mut rng);
        let back = LaurentPoly::from_json(&f.to_json()).map_err(|e| format!("round trip case {case}: {e}"))?;
        ensure(back == f, || format!("round trip case {case}: {f}"))?;
    }
    Ok(format!("{PROPERTY_CASES} cases each: sl2, Leibniz, commutation, harmonicity (D = 4, 6, 8), JSON"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_pde_agrees() {
        let sol = dps_solve(&six_point_spec(), AnsatzConfig::default()).unwrap();
        assert!(!sol.maximal.is_zero());
        assert_eq!(pde_reference(&sol.maximal), pde_apply(&sol.maximal).unwrap());
    }

    #[test]
    fn closed_sum_low_terms() {
        let s = closed_sum(1, 2, 6);
        assert_eq!(s[&(2, 2)], int(1));
        assert_eq!(s[&(3, 1)], int(1));
        assert_eq!(s[&(3, 3)], c_coeff(3) + c_coeff(2) - c_coeff(1));
    }

    #[test]
    fn filter_selects() {
        let all = criteria();
        assert_eq!(all.iter().filter(|c| selected(c, Some("waves"))).count(), 3);
        assert_eq!(all.iter().filter(|c| selected(c, Some("7"))).count(), 1);
        assert_eq!(all.iter().filter(|c| selected(c, None)).count(), 9);
    }
}
