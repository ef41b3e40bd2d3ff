//! Circle and strip diagrams of rhythm patterns.

use std::f64::consts::PI;
use std::fmt::Write;

use super::num;
use crate::rhythm::RhythmPattern;
use crate::zeta::LPolynomial;

/// Circle radius in the unit square: 0.45 at p = 7, scaling as p^{−1/2}.
pub fn circle_radius(p: u64) -> f64 {
    0.45 * (7.0 / p as f64).sqrt()
}

/// Dot centres for each alpha, in viewBox coordinates (y grows downward).
pub fn circle_marks(rp: &RhythmPattern) -> Vec<(f64, f64)> {
    let r = circle_radius(rp.p);
    rp.alphas
        .iter()
        .map(|&a| {
            let theta = -a;
            (0.5 + r * theta.cos(), 0.5 - r * theta.sin())
        })
        .collect()
}

pub fn write_svg_circle(rp: &RhythmPattern, l: &LPolynomial) -> String {
    let r = circle_radius(rp.p);
    let coeffs: Vec<String> = l.coeffs.iter().map(i64::to_string).collect();
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 1 1\" width=\"400\" height=\"400\">\n",
    );
    let _ = writeln!(s, "<title>p = {}</title>", rp.p);
    let _ = writeln!(s, "<desc>L(z) coefficients: {}</desc>", coeffs.join(" "));
    s.push_str("<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"white\"/>\n");
    let _ = writeln!(
        s,
        "<line class=\"axis\" x1=\"{}\" y1=\"0.5\" x2=\"{}\" y2=\"0.5\" stroke=\"#999\" stroke-width=\"0.002\" stroke-dasharray=\"0.01 0.01\"/>",
        num(0.5 - r - 0.03),
        num(0.5 + r + 0.03)
    );
    let _ = writeln!(
        s,
        "<circle class=\"weil\" cx=\"0.5\" cy=\"0.5\" r=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.003\"/>",
        num(r)
    );
    for (j, (x, y)) in circle_marks(rp).into_iter().enumerate() {
        let _ = writeln!(
            s,
            "<circle class=\"zero\" data-j=\"{}\" cx=\"{}\" cy=\"{}\" r=\"0.012\" fill=\"#c03\"/>",
            j + 1,
            num(x),
            num(y)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub const STRIP_WIDTH: f64 = 600.0;
pub const STRIP_ROW: f64 = 30.0;
pub const STRIP_LABEL: f64 = 50.0;

/// Tick x-positions in [0, 1] of the row width, one period.
pub fn strip_positions(rp: &RhythmPattern) -> Vec<f64> {
    rp.alphas.iter().map(|&a| (a + PI) / (2.0 * PI)).collect()
}

pub fn write_svg_strip(patterns: &[RhythmPattern]) -> String {
    let width = STRIP_LABEL + STRIP_WIDTH + 10.0;
    let height = STRIP_ROW * patterns.len() as f64 + 10.0;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {} {}\" width=\"{}\" height=\"{}\">",
        num(width),
        num(height),
        num(width),
        num(height)
    );
    let _ = writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\"/>", num(width), num(height));
    for (row, rp) in patterns.iter().enumerate() {
        let y0 = 5.0 + STRIP_ROW * row as f64;
        let mid = y0 + STRIP_ROW / 2.0;
        let _ = writeln!(s, "<g class=\"row\" data-p=\"{}\">", rp.p);
        let _ = writeln!(
            s,
            "<text x=\"5\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">p = {}</text>",
            num(mid + 4.0),
            rp.p
        );
        let _ = writeln!(
            s,
            "<line class=\"baseline\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999\" stroke-width=\"1\"/>",
            num(STRIP_LABEL),
            num(mid),
            num(STRIP_LABEL + STRIP_WIDTH),
            num(mid)
        );
        let centre = STRIP_LABEL + STRIP_WIDTH / 2.0;
        let _ = writeln!(
            s,
            "<line class=\"centre\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#ccc\" stroke-width=\"1\"/>",
            num(centre),
            num(y0 + 2.0),
            num(centre),
            num(y0 + STRIP_ROW - 2.0)
        );
        for u in strip_positions(rp) {
            let x = STRIP_LABEL + STRIP_WIDTH * u;
            let _ = writeln!(
                s,
                "<line class=\"tick\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"2\"/>",
                num(x),
                num(y0 + 5.0),
                num(x),
                num(y0 + STRIP_ROW - 5.0)
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pattern(p: u64, alphas: Vec<f64>) -> RhythmPattern {
        RhythmPattern {
            p,
            g: alphas.len() / 2,
            alphas,
            period: 2.0 * PI / (p as f64).ln(),
            radius: (p as f64).powf(-0.5),
        }
    }

    fn lpoly(p: u64) -> LPolynomial {
        LPolynomial { p, g: 1, coeffs: vec![1, 0, p as i64] }
    }

    #[test]
    fn quarter_turn_dots() {
        let rp = pattern(7, vec![-PI / 2.0, PI / 2.0]);
        let marks = circle_marks(&rp);
        // −α = π/2 is the top of the circle
        assert!((marks[0].0 - 0.5).abs() < 1e-12 && (marks[0].1 - 0.05).abs() < 1e-12);
        assert!((marks[1].0 - 0.5).abs() < 1e-12 && (marks[1].1 - 0.95).abs() < 1e-12);
        let svg = write_svg_circle(&rp, &lpoly(7));
        assert!(svg.contains("cx=\"0.500000\" cy=\"0.050000\""));
        assert!(svg.contains("r=\"0.450000\""));
        assert!(svg.contains("<desc>L(z) coefficients: 1 0 7</desc>"));
    }

    #[test]
    fn radius_ratio() {
        assert!((circle_radius(67) / circle_radius(7) - (7.0f64 / 67.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn strip_quarter_ticks() {
        let rp = pattern(7, vec![-PI / 2.0, PI / 2.0]);
        assert_eq!(strip_positions(&rp), vec![0.25, 0.75]);
        let svg = write_svg_strip(&[rp]);
        assert!(svg.contains("x1=\"200.000000\""));
        assert!(svg.contains("x1=\"500.000000\""));
        assert!(svg.contains(">p = 7<"));
    }

    #[test]
    fn strip_and_circle_agree() {
        let rp = pattern(11, vec![-2.9, -1.3, -0.2, 0.2, 1.3, 2.9]);
        let r = circle_radius(11);
        for ((x, y), u) in circle_marks(&rp).into_iter().zip(strip_positions(&rp)) {
            // recover the angle from the circle and map it onto the strip
            let theta = (0.5 - y).atan2(x - 0.5);
            let alpha = -theta;
            let from_circle = (crate::rhythm::fold_angle(alpha) + PI) / (2.0 * PI);
            assert!((from_circle - u).abs() < 1e-6);
            assert!(((x - 0.5).hypot(y - 0.5) - r).abs() < 1e-6);
        }
    }

    #[test]
    fn deterministic() {
        let rp = pattern(13, vec![-1.0, 1.0]);
        assert_eq!(write_svg_circle(&rp, &lpoly(13)), write_svg_circle(&rp, &lpoly(13)));
        assert_eq!(write_svg_strip(std::slice::from_ref(&rp)), write_svg_strip(&[rp]));
    }
}
