//! Frozen exact values from the first oracle run.

use tmpascal_core::approximant::{eval_finfty, ApproximantFamily, EnclosureStatus};
use tmpascal_core::verify::{integral_fn, residual_in_form, residual_scan, ResidualForm};
use tmpascal_core::{Budget, Dyadic};

fn d(s: &str) -> Dyadic {
    s.parse().unwrap()
}

fn family() -> ApproximantFamily {
    ApproximantFamily::build(12, &Dyadic::from_i64(8), Budget::default()).unwrap()
}

#[test]
fn residuals_at_one_and_a_half() {
    let at_one = ["-3/16", "-1/8", "-5/64", "-3/64", "-7/256", "-1/64", "-9/1024", "-5/1024", "-11/4096"];
    let at_half = [
        "-1/128", "-11/512", "-23/1024", "-71/4096", "-379/32768", "-933/131072", "-547/131072", "-311/131072",
        "-11089/8388608",
    ];
    let fam = family();
    let records = residual_scan(&fam, 4..=12, &[d("1"), d("1/2"), d("3")], ResidualForm::Half).unwrap();
    for (i, n) in (4..=12).enumerate() {
        let (one, half, three) = (&records[3 * i], &records[3 * i + 1], &records[3 * i + 2]);
        assert_eq!(one.n, n);
        assert_eq!(one.residual, d(at_one[i]), "X=1 n={n}");
        assert_eq!(half.residual, d(at_half[i]), "X=1/2 n={n}");
        assert_eq!(three.residual, -d(at_one[i]), "X=3 n={n}");
    }
}

#[test]
fn doubled_form_is_half_form_at_twice_the_point() {
    let fam = family();
    for n in 1..=12 {
        let f = fam.level(n).unwrap();
        for x in ["1/2", "3/4", "1", "3/2", "2"] {
            let a = residual_in_form(f, &d(x), ResidualForm::Doubled).unwrap();
            let b = residual_in_form(f, &d(x).mul_pow2(1), ResidualForm::Half).unwrap();
            assert_eq!(a.residual, b.residual);
        }
    }
}

#[test]
fn approximant_values_at_one_half() {
    let want = ["0", "0", "-1/8", "-1/4", "-11/32", "-13/32", "-57/128", "-15/32", "-247/512", "-251/512", "-1013/2048"];
    let fam = family();
    for (i, n) in (2..=12).enumerate() {
        assert_eq!(fam.eval_fn(n, &d("1/2")).unwrap(), d(want[i]), "n={n}");
    }
    assert_eq!(integral_fn(fam.level(4).unwrap(), &d("1")).unwrap(), d("-5/16"));
    assert_eq!(integral_fn(fam.level(5).unwrap(), &d("1")).unwrap(), d("-3/8"));
}

#[test]
fn limit_enclosures() {
    let tol = d("1/1024");
    let one = eval_finfty(&d("1"), &tol, 12, Budget::default()).unwrap();
    assert_eq!((one.interval.lower.clone(), one.interval.upper.clone()), (d("-1"), d("-1")));
    let six = eval_finfty(&d("6"), &tol, 12, Budget::default()).unwrap();
    assert_eq!((six.interval.lower.clone(), six.interval.upper.clone()), (d("0"), d("0")));

    let half = eval_finfty(&d("1/2"), &tol, 12, Budget::default()).unwrap();
    assert_eq!(half.interval.upper, d("-1013/2048"));
    assert_eq!(half.interval.lower, d("-1"));
    assert_eq!(half.interval.level_reached, 12);
    assert_eq!(half.status, EnclosureStatus::LevelCapReached);
}
