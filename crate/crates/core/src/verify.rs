//! Exact quadrature, functional-equation residuals and the grid-level property
//! suites for the approximants.

use alloc::format;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::approximant::{ApproximantFamily, PiecewiseLinearApproximant, SLOPE_BOUND};
use crate::dyadic::Dyadic;
use crate::error::{Budget, Error, Result};
use crate::operator::iterate_t;
use crate::report::VerificationReport;
use crate::seqcore::{thue_morse, Sign};

/// `∫₀^X f_n(x) dx`: trapezoid sum over whole cells plus the exact area of the
/// trailing partial cell.
pub fn integral_fn(f: &PiecewiseLinearApproximant, upper: &Dyadic) -> Result<Dyadic> {
    if upper.is_negative() {
        return Err(Error::InvalidArgument("integration bound must be non-negative"));
    }
    let (k, t) = f.locate(upper);
    let out_of_range = || Error::OutOfRange { what: "X", value: format!("{upper}"), limit: format!("{}", f.reach()) };
    let k = k.to_usize().ok_or_else(out_of_range)?;
    let nodes = f.nodes();
    if k >= nodes.len() || (!t.is_zero() && k + 1 >= nodes.len()) {
        return Err(out_of_range());
    }

    let mut cells = if k == 0 {
        Dyadic::zero()
    } else {
        nodes[1..k].iter().sum::<Dyadic>() + (&nodes[0] + &nodes[k]).half()
    };
    if !t.is_zero() {
        let at_upper = &nodes[k] + &(&t * &(&nodes[k + 1] - &nodes[k]));
        cells += &(&t * &(&nodes[k] + &at_upper)).half();
    }
    Ok(cells.mul_pow2(-(f.step_exponent() as i64)))
}

/// Which reading of the functional equation a residual is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualForm {
    /// `∫₀^X f + f(0) - f(X/2)`.
    Half,
    /// `∫₀^{2X} f + f(0) - f(X)`, the same identity with `X -> 2X`.
    Doubled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualRecord {
    pub n: u32,
    pub x: Dyadic,
    pub integral: Dyadic,
    pub lhs: Dyadic,
    pub rhs: Dyadic,
    pub residual: Dyadic,
}

/// Residual of `∫₀^X f_n + f_n(0) = f_n(X/2)` at `X`.
pub fn residual(f: &PiecewiseLinearApproximant, x: &Dyadic) -> Result<ResidualRecord> {
    residual_in_form(f, x, ResidualForm::Half)
}

pub fn residual_in_form(f: &PiecewiseLinearApproximant, x: &Dyadic, form: ResidualForm) -> Result<ResidualRecord> {
    if x.is_negative() {
        return Err(Error::InvalidArgument("residual point must be non-negative"));
    }
    let (bound, probe) = match form {
        ResidualForm::Half => (x.clone(), x.half()),
        ResidualForm::Doubled => (x.mul_pow2(1), x.clone()),
    };
    let integral = integral_fn(f, &bound)?;
    let lhs = &integral + &f.eval(&Dyadic::zero())?;
    let rhs = f.eval(&probe)?;
    let residual = &lhs - &rhs;
    Ok(ResidualRecord { n: f.level(), x: x.clone(), integral, lhs, rhs, residual })
}

/// Residuals for every level in `levels` and every point, level-major.
pub fn residual_scan(
    family: &ApproximantFamily,
    levels: RangeInclusive<u32>,
    xs: &[Dyadic],
    form: ResidualForm,
) -> Result<Vec<ResidualRecord>> {
    let mut out = Vec::new();
    for n in levels {
        let f = family.level(n)?;
        for x in xs {
            out.push(residual_in_form(f, x, form)?);
        }
    }
    Ok(out)
}

/// Residuals vanish at even integers and `|residual|` never grows with the
/// level at any scanned point.
pub fn residual_suite(
    family: &ApproximantFamily,
    levels: RangeInclusive<u32>,
    xs: &[Dyadic],
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(format!("residual n={}..{}", levels.start(), levels.end()));
    let records = residual_scan(family, levels.clone(), xs, ResidualForm::Half)?;
    let per_level = xs.len();
    for (i, x) in xs.iter().enumerate() {
        let column: Vec<&ResidualRecord> = records.iter().skip(i).step_by(per_level.max(1)).collect();
        let even_integer = x.is_integer() && (x.mantissa() % 2u8) == BigInt::from(0);
        for r in &column {
            if even_integer {
                report.check(r.residual.is_zero(), || format!("residual n={} X={x} at even integer", r.n), 0, &r.residual);
            }
        }
        for pair in column.windows(2) {
            let (a, b) = (pair[0].residual.abs(), pair[1].residual.abs());
            report.check(
                b <= a,
                || format!("|residual| X={x} n={}->{}", pair[0].n, pair[1].n),
                format!("<= {a}"),
                &b,
            );
        }
    }
    Ok(report)
}

fn u(m: u64) -> Sign {
    thue_morse(m)
}

/// Grid-exact checks of the approximant properties at level `n` over
/// `[0, 2 m_max + 2]`:
///
/// 1. `f_n(2m) = 0`, `f_n(2m+1) = u_m`;
/// 2. every node in `[-1, 1]`;
/// 3. `f_n(x + 2m) = -u_m f_n(x)` for every node `x ∈ [0, 2]`;
/// 4. nodes non-increasing on `[j, j+1]` when `u_j = -1`, non-decreasing
///    otherwise, and `f_n` has the sign of `u_m` on `[2m, 2m+2]`;
/// 5. node steps on `[0, 2]` satisfy `x^{k+1}_n - x^k_n = 2^{2-n} x^k_{n-1}`,
///    so slopes are at most [`SLOPE_BOUND`].
///
/// Points 6 and 7: for `n >= 2`, `f_{n+1} - f_n` at level-`(n+1)` nodes is
/// `<= 0` on `[2m, 2m+1]` and `>= 0` on `[2m+1, 2m+2]` when `u_m = -1`,
/// reversed when `u_m = +1`.
///
/// Notes list where the slope bound 1, the reversed direction in point 4, and
/// the `n = 1` case of points 6–7 fail.
pub fn lemma5_suite_on(family: &ApproximantFamily, n: u32, m_max: u64) -> Result<VerificationReport> {
    let f = family.level(n)?;
    let finer = family.level(n + 1)?;
    let coarser = if n >= 2 { Some(family.level(n - 1)?) } else { None };
    let per_unit = 1u64 << (n - 1);
    let period = 2 * per_unit;
    let last = (m_max + 1) * period;
    if f.k_max() < last || finer.k_max() < 2 * last {
        return Err(Error::OutOfRange { what: "m_max", value: format!("{m_max}"), limit: format!("{}", f.reach()) });
    }
    let node = |k: u64| &f.nodes()[k as usize];
    let mut report = VerificationReport::new(format!("lemma5 n={n} m_max={m_max}"));

    // 1
    for m in 0..=m_max {
        let at_even = f.eval(&Dyadic::from_i64(2 * m as i64))?;
        report.check(at_even.is_zero(), || format!("pt1 f_{n}({})", 2 * m), 0, &at_even);
        let at_odd = f.eval(&Dyadic::from_i64(2 * m as i64 + 1))?;
        let want = Dyadic::from_i64(u(m).value() as i64);
        report.check(at_odd == want, || format!("pt1 f_{n}({})", 2 * m + 1), &want, &at_odd);
    }

    // 2
    let (lo, hi) = (Dyadic::from_i64(-1), Dyadic::one());
    for k in 0..=last {
        let v = node(k);
        report.check(&lo <= v && v <= &hi, || format!("pt2 x^{k}_{n}"), "in [-1, 1]", v);
    }

    // 3
    for m in 0..=m_max {
        for k in 0..=period {
            let shifted = node(k + m * period);
            let want = (-u(m)).apply(node(k).clone());
            report.check(shifted == &want, || format!("pt3 m={m} x^{}_{n}", k + m * period), &want, shifted);
        }
    }

    // 4
    let mut reversed_direction = 0u64;
    for j in 0..(2 * m_max + 2) {
        let falling = u(j).is_minus();
        for k in j * per_unit..(j + 1) * per_unit {
            let step = node(k + 1) - node(k);
            let ok = if falling { !step.is_positive() } else { !step.is_negative() };
            report.check(ok, || format!("pt4 [{j},{}] step {k}", j + 1), if falling { "<= 0" } else { ">= 0" }, &step);
            let reversed_ok = if falling { !step.is_negative() } else { !step.is_positive() };
            if !reversed_ok {
                reversed_direction += 1;
            }
        }
    }
    for m in 0..=m_max {
        for k in m * period..=(m + 1) * period {
            let v = node(k);
            let ok = if u(m).is_minus() { !v.is_positive() } else { !v.is_negative() };
            report.check(ok, || format!("pt4 sign x^{k}_{n}"), format!("sign of u_{m}"), v);
        }
    }
    if reversed_direction > 0 {
        report.note(format!(
            "pt4 with the direction reversed (increasing when u_m = -1) fails on {reversed_direction} node steps"
        ));
    }

    // 5
    let bound = Dyadic::from_i64(SLOPE_BOUND);
    let mut above_one = 0u64;
    for k in 0..period {
        let step = node(k + 1) - node(k);
        let slope = step.mul_pow2(n as i64 - 1).abs();
        report.check(slope <= bound, || format!("pt5 slope x^{k}..x^{}_{n}", k + 1), format!("<= {bound}"), &slope);
        if slope > Dyadic::one() {
            above_one += 1;
        }
        if let Some(c) = coarser {
            let want = c.nodes()[k as usize].mul_pow2(2 - n as i64);
            report.check(step == want, || format!("pt5 telescoping k={k}"), &want, &step);
        }
    }
    if above_one > 0 {
        report.note(format!("pt5 slope bound 1 fails on {above_one} of {period} steps in [0, 2]; the bound that holds is {SLOPE_BOUND}"));
    }

    // 6-7: both functions are affine between level-(n+1) nodes, so checking
    // there covers every real x in range.
    let mut level_one_violations = 0u64;
    for k in 0..=2 * last {
        let x = finer.abscissa(k);
        let diff = &finer.nodes()[k as usize] - &f.eval(&x)?;
        let j = k / (2 * per_unit);
        let m = j / 2;
        let first_half = j.is_multiple_of(2);
        let falling = first_half == u(m).is_minus();
        let ok = if falling { !diff.is_positive() } else { !diff.is_negative() };
        if n >= 2 {
            report.check(ok, || format!("pt6-7 f_{}-f_{n} at {x}", n + 1), if falling { "<= 0" } else { ">= 0" }, &diff);
        } else if !ok {
            level_one_violations += 1;
        }
    }
    if level_one_violations > 0 {
        report.note(format!(
            "pt6-7 between levels 1 and 2 fails at {level_one_violations} nodes (monotonicity in n starts at n = 2)"
        ));
    }
    Ok(report)
}

/// [`lemma5_suite_on`] over a freshly built table.
pub fn lemma5_suite(n: u32, m_max: u64, budget: Budget) -> Result<VerificationReport> {
    let reach = Dyadic::from_i64(2 * m_max as i64 + 2);
    let family = ApproximantFamily::build(n + 1, &reach, budget)?;
    lemma5_suite_on(&family, n, m_max)
}

/// Integer values `f_n(2m) = 0`, `f_n(2m+1) = u_m` (already exact at every
/// finite level), `|f_n(x)| = |f_n(x + 2)|` at every node of `[0, 2 m_max]`,
/// and the zero extension on the negative half-line.
pub fn theorem_value_suite_on(family: &ApproximantFamily, m_max: u64, n: u32) -> Result<VerificationReport> {
    let f = family.level(n)?;
    let per_unit = 1u64 << (n - 1);
    let last = (2 * m_max + 2) * per_unit;
    if f.k_max() < last {
        return Err(Error::OutOfRange { what: "m_max", value: format!("{m_max}"), limit: format!("{}", f.reach()) });
    }
    let mut report = VerificationReport::new(format!("theorem n={n} m_max={m_max}"));
    for m in 0..=m_max {
        let even = f.eval(&Dyadic::from_i64(2 * m as i64))?;
        report.check(even.is_zero(), || format!("f_{n}({})", 2 * m), 0, &even);
        let odd = f.eval(&Dyadic::from_i64(2 * m as i64 + 1))?;
        let want = Dyadic::from_i64(u(m).value() as i64);
        report.check(odd == want, || format!("f_{n}({})", 2 * m + 1), &want, &odd);
    }
    for k in 0..=(2 * m_max * per_unit) {
        let a = f.nodes()[k as usize].abs();
        let b = f.nodes()[(k + 2 * per_unit) as usize].abs();
        report.check(a == b, || format!("|f_{n}({})| = |f_{n}(x+2)|", f.abscissa(k)), &a, &b);
    }
    for x in [Dyadic::from_parts(-1, 1), Dyadic::from_i64(-5), Dyadic::from_i64(-(2 * m_max as i64) - 1)] {
        let v = f.eval(&x)?;
        report.check(v.is_zero(), || format!("f_{n}({x})"), 0, &v);
    }
    Ok(report)
}

pub fn theorem_value_suite(m_max: u64, n: u32, budget: Budget) -> Result<VerificationReport> {
    let reach = Dyadic::from_i64(2 * m_max as i64 + 2);
    let family = ApproximantFamily::build(n, &reach, budget)?;
    theorem_value_suite_on(&family, m_max, n)
}

/// Orbit of `T` against the table: `y^k_n = -x^k_n` for `k <= k_max`,
/// `n <= len`.
pub fn operator_suite_on(family: &ApproximantFamily, k_max: u64, len: usize, budget: Budget) -> Result<VerificationReport> {
    let orbit = iterate_t(k_max, len, budget)?;
    let mut report = VerificationReport::new(format!("operator k<={k_max} n<={len}"));
    for state in &orbit {
        for n in 1..=len {
            let x = family.node_value(n as u32, state.k)?;
            let want = (-x).to_rational();
            let got = state.coord(n);
            report.check(got == &want, || format!("y^{}_{n}", state.k), &want, got);
        }
    }
    Ok(report)
}

pub fn operator_suite(k_max: u64, len: usize, budget: Budget) -> Result<VerificationReport> {
    if len == 0 {
        return Err(Error::InvalidArgument("truncation length must be at least 1"));
    }
    let table = crate::triangle::TriangleTable::build(
        &crate::triangle::InitSpec::thue_morse(),
        k_max.max(1),
        len as u32,
        budget,
    )?;
    let family = ApproximantFamily::from_table(&table);
    operator_suite_on(&family, k_max, len, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn family(n_max: u32, reach: i64) -> ApproximantFamily {
        ApproximantFamily::build(n_max, &Dyadic::from_i64(reach), Budget::default()).unwrap()
    }

    /// Independent quadrature: sum each cell's trapezoid with rationals.
    fn trapezoid_oracle(f: &PiecewiseLinearApproximant, upper: &Dyadic) -> num_rational::BigRational {
        let h = f.abscissa(1).to_rational();
        let x = upper.to_rational();
        let mut total = num_rational::BigRational::from_integer(0.into());
        let mut k = 0u64;
        loop {
            let a = f.abscissa(k).to_rational();
            if a >= x {
                break;
            }
            let b = (&a + &h).min(x.clone());
            let fa = f.eval(&f.abscissa(k)).unwrap().to_rational();
            let fb = f.eval(&Dyadic::from_rational(&b).unwrap()).unwrap().to_rational();
            total += (&b - &a) * (fa + fb) / num_rational::BigRational::from_integer(2.into());
            k += 1;
        }
        total
    }

    #[test]
    fn integral_examples() {
        let fam = family(12, 5);
        for n in 1..=12 {
            let f = fam.level(n).unwrap();
            assert_eq!(integral_fn(f, &d("0")).unwrap(), Dyadic::zero());
            assert_eq!(integral_fn(f, &d("2")).unwrap(), d("-1"), "n={n}");
            assert_eq!(integral_fn(f, &d("4")).unwrap(), d("0"), "n={n}");
        }
        assert_eq!(integral_fn(fam.level(4).unwrap(), &d("1")).unwrap(), d("-5/16"));
        assert_eq!(integral_fn(fam.level(5).unwrap(), &d("1")).unwrap(), d("-3/8"));
    }

    #[test]
    fn integral_matches_cellwise_oracle() {
        let fam = family(8, 4);
        for n in [1, 3, 4, 6, 8] {
            let f = fam.level(n).unwrap();
            for x in ["1/3", "1/1024", "7/4", "3", "2049/1024", "13/8"] {
                let Ok(x) = x.parse::<Dyadic>() else { continue };
                assert_eq!(integral_fn(f, &x).unwrap().to_rational(), trapezoid_oracle(f, &x), "n={n} x={x}");
            }
        }
    }

    #[test]
    fn integral_is_additive() {
        let fam = family(10, 4);
        for n in 1..=10 {
            let f = fam.level(n).unwrap();
            let (a, b) = (d("5/8"), d("23/8"));
            let whole = integral_fn(f, &b).unwrap();
            let split = integral_fn(f, &a).unwrap() + (integral_fn(f, &b).unwrap() - integral_fn(f, &a).unwrap());
            assert_eq!(whole, split);
        }
    }

    #[test]
    fn integral_errors() {
        let fam = family(4, 2);
        let f = fam.level(4).unwrap();
        assert!(integral_fn(f, &d("-1")).is_err());
        assert!(matches!(integral_fn(f, &d("3")), Err(Error::OutOfRange { .. })));
        assert!(integral_fn(f, &d("2")).is_ok());
    }

    #[test]
    fn residual_examples() {
        let fam = family(12, 3);
        let r4 = residual(fam.level(4).unwrap(), &d("1")).unwrap();
        assert_eq!((r4.integral.clone(), r4.rhs.clone(), r4.residual.clone()), (d("-5/16"), d("-1/8"), d("-3/16")));
        let r5 = residual(fam.level(5).unwrap(), &d("1")).unwrap();
        assert_eq!(r5.residual, d("-1/8"));
        for n in 1..=12 {
            let f = fam.level(n).unwrap();
            assert!(residual(f, &d("2")).unwrap().residual.is_zero());
            assert!(residual(f, &d("0")).unwrap().residual.is_zero());
        }
    }

    #[test]
    fn doubled_form_is_half_form_at_twice_the_point() {
        let fam = family(9, 4);
        for n in 2..=9 {
            let f = fam.level(n).unwrap();
            for x in ["1/4", "3/4", "1", "7/8"] {
                let x = d(x);
                let doubled = residual_in_form(f, &x, ResidualForm::Doubled).unwrap();
                let half = residual(f, &x.mul_pow2(1)).unwrap();
                assert_eq!(doubled.residual, half.residual);
            }
        }
    }

    #[test]
    fn scan_decreases_at_one() {
        let fam = family(5, 2);
        let recs = residual_scan(&fam, 4..=5, &[d("1")], ResidualForm::Half).unwrap();
        assert_eq!(recs[0].residual, d("-3/16"));
        assert_eq!(recs[1].residual, d("-1/8"));
        assert!(residual_suite(&fam, 4..=5, &[d("1"), d("2"), d("0")]).unwrap().passed());
    }

    #[test]
    fn residual_suite_flags_growth() {
        // |residual(n, 1/2)| = 1/128 at n = 4 and 11/512 at n = 5.
        let fam = family(5, 1);
        let r = residual_suite(&fam, 4..=5, &[d("1/2")]).unwrap();
        assert!(!r.passed());
        assert_eq!(r.failures[0].actual, "11/512");
    }

    #[test]
    fn lemma5_passes_at_level_six() {
        let r = lemma5_suite(6, 16, Budget::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.notes.iter().any(|n| n.starts_with("pt5 slope bound 1 fails")));
    }

    #[test]
    fn lemma5_level_one_notes_monotonicity_gap() {
        let r = lemma5_suite(1, 4, Budget::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert!(r.notes.iter().any(|n| n.starts_with("pt6-7 between levels 1 and 2")));
    }

    #[test]
    fn lemma5_spot_values() {
        let fam = family(4, 4);
        assert_eq!(fam.eval_fn(3, &d("3")).unwrap(), d("1"));
        // f_4(x + 2) = -u_1 f_4(x) with u_1 = 1
        assert_eq!(fam.eval_fn(4, &d("5/2")).unwrap(), d("1/8"));
        assert_eq!(fam.eval_fn(4, &d("1/2")).unwrap(), d("-1/8"));
    }

    #[test]
    fn lemma5_rejects_short_tables() {
        let fam = family(5, 2);
        assert!(lemma5_suite_on(&fam, 4, 16).is_err());
    }

    #[test]
    fn theorem_suite_values() {
        for n in 3..=10 {
            assert!(theorem_value_suite(4, n, Budget::default()).unwrap().passed());
        }
        let fam = family(10, 8);
        for n in 3..=10 {
            assert_eq!(fam.eval_fn(n, &d("7")).unwrap(), d("-1"));
            assert_eq!(fam.eval_fn(n, &d("-5")).unwrap(), d("0"));
        }
    }

    #[test]
    fn operator_matches_negated_nodes() {
        let r = operator_suite(64, 8, Budget::default()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.cases, 65 * 8);
    }
}
