//! Line plots as a single SVG document.
//!
//! Points are written in data coordinates inside a group that flips the y
//! axis, so a polyline vertex `1,-1` is the point `(1, -1)`.

use std::fmt::Write as _;

use tmpascal_core::Dyadic;

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Decimal places kept when converting exact samples for output.
pub const PLACES: usize = 8;

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(Dyadic, Dyadic)>,
}

/// Decimal with trailing zeros dropped.
pub fn decimal(v: &Dyadic) -> String {
    let s = v.to_decimal_places(PLACES);
    let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

pub fn render(series: &[Series]) -> String {
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (None::<&Dyadic>, None::<&Dyadic>, None::<&Dyadic>, None::<&Dyadic>);
    for (x, y) in all {
        x0 = Some(x0.map_or(x, |a| a.min(x)));
        x1 = Some(x1.map_or(x, |a| a.max(x)));
        y0 = Some(y0.map_or(y, |a| a.min(y)));
        y1 = Some(y1.map_or(y, |a| a.max(y)));
    }
    let zero = Dyadic::zero();
    let (x0, x1) = (x0.unwrap_or(&zero).clone(), x1.unwrap_or(&zero).clone());
    let (mut y0, mut y1) = (y0.unwrap_or(&zero).clone(), y1.unwrap_or(&zero).clone());
    if y0 == y1 {
        y0 = &y0 - &Dyadic::one();
        y1 = &y1 + &Dyadic::one();
    }
    let width = if x0 == x1 { Dyadic::one() } else { &x1 - &x0 };
    let height = &y1 - &y0;
    let stroke = decimal(&width.clone().max(height.clone()).mul_pow2(-8));

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" preserveAspectRatio="none">"#,
        decimal(&x0),
        decimal(&-&y1),
        decimal(&width),
        decimal(&height),
    );
    let _ = writeln!(out, r#"<g transform="scale(1,-1)" fill="none" stroke-width="{stroke}">"#);
    for (i, s) in series.iter().enumerate() {
        let pts: Vec<String> = s.points.iter().map(|(x, y)| format!("{},{}", decimal(x), decimal(y))).collect();
        let _ = writeln!(
            out,
            r#"<polyline data-label="{}" stroke="{}" points="{}"/>"#,
            s.label,
            COLORS[i % COLORS.len()],
            pts.join(" "),
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn decimals_are_trimmed() {
        assert_eq!(decimal(&d("-1/8")), "-0.125");
        assert_eq!(decimal(&d("3")), "3");
        assert_eq!(decimal(&d("1/2")), "0.5");
        assert_eq!(decimal(&Dyadic::new((-1).into(), 40)), "0");
    }

    #[test]
    fn view_box_follows_data() {
        let s = Series { label: "f".into(), points: vec![(d("0"), d("0")), (d("2"), d("-1")), (d("4"), d("1/2"))] };
        let svg = render(&[s]);
        assert!(svg.contains(r#"viewBox="0 -0.5 4 1.5""#), "{svg}");
        assert!(svg.contains(r#"points="0,0 2,-1 4,0.5""#));
    }

    #[test]
    fn flat_data_gets_unit_padding() {
        let s = Series { label: "f".into(), points: vec![(d("-2"), d("0")), (d("0"), d("0"))] };
        assert!(render(&[s]).contains(r#"viewBox="-2 -1 2 2""#));
    }
}
