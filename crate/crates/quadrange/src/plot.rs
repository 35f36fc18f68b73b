//! Sampled joint-range scatter as CSV and SVG.

use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::core::{PlaneDirection, QuadraticPair};
use crate::oracle::FloatPair;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;

#[derive(Clone, Debug)]
pub struct PlotData {
    pub xs: Vec<Vec<f64>>,
    pub fg: Vec<[f64; 2]>,
}

/// `samples` points uniform in the ball of radius `radius`, plus the origin.
pub fn sample_range(pair: &QuadraticPair, samples: usize, radius: f64, seed: u64) -> PlotData {
    let fp = FloatPair::new(pair);
    let n = fp.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs = vec![vec![0.0; n]];
    for _ in 0..samples {
        let mut x: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
        let r = radius * rng.gen::<f64>().powf(1.0 / n as f64);
        for v in &mut x {
            *v *= r / nrm;
        }
        xs.push(x);
    }
    let fg = xs.iter().map(|x| fp.eval(x)).collect();
    PlotData { xs, fg }
}

pub fn to_csv(d: &PlotData) -> String {
    let n = d.xs.first().map_or(0, |x| x.len());
    let mut s = String::new();
    for i in 1..=n {
        write!(s, "x{i},").unwrap();
    }
    s.push_str("f,g\n");
    for (x, p) in d.xs.iter().zip(&d.fg) {
        for v in x {
            write!(s, "{v:.9e},").unwrap();
        }
        writeln!(s, "{:.9e},{:.9e}", p[0], p[1]).unwrap();
    }
    s
}

/// Affine data-to-viewport map px = ax·f + bx, py = ay·g + by.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ViewMap {
    pub ax: f64,
    pub bx: f64,
    pub ay: f64,
    pub by: f64,
}

impl ViewMap {
    fn fit(pts: &[[f64; 2]]) -> ViewMap {
        let range = |k: usize| {
            let lo = pts.iter().map(|p| p[k]).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p[k]).fold(f64::NEG_INFINITY, f64::max);
            if !lo.is_finite() || hi - lo < 1e-12 {
                (lo.min(0.0) - 1.0, hi.max(0.0) + 1.0)
            } else {
                let pad = 0.05 * (hi - lo);
                (lo - pad, hi + pad)
            }
        };
        let (f0, f1) = range(0);
        let (g0, g1) = range(1);
        let w = SIZE - 2.0 * MARGIN;
        let ax = w / (f1 - f0);
        let ay = -w / (g1 - g0);
        ViewMap { ax, bx: MARGIN - ax * f0, ay, by: SIZE - MARGIN - ay * g0 }
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        [self.ax * p[0] + self.bx, self.ay * p[1] + self.by]
    }
}

/// Scatter of F over the samples; each direction in `dirs` is drawn as a
/// translucent ray from a subset of points.
pub fn to_svg(d: &PlotData, dirs: &[PlaneDirection], title: &str) -> String {
    let map = ViewMap::fit(&d.fg);
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="800" viewBox="0 0 800 800">"#).unwrap();
    writeln!(s, "<!-- map: px = {:.9e}*f + {:.9e}; py = {:.9e}*g + {:.9e} -->", map.ax, map.bx, map.ay, map.by).unwrap();
    writeln!(s, r#"<rect x="0" y="0" width="800" height="800" fill="white"/>"#).unwrap();
    writeln!(s, "<title>{}</title>", escape(title)).unwrap();
    let o = map.apply([0.0, 0.0]);
    writeln!(s, r##"<g stroke="#bbbbbb" stroke-width="1">"##).unwrap();
    if (0.0..=SIZE).contains(&o[1]) {
        writeln!(s, r#"<line x1="0" y1="{:.2}" x2="800" y2="{:.2}"/>"#, o[1], o[1]).unwrap();
    }
    if (0.0..=SIZE).contains(&o[0]) {
        writeln!(s, r#"<line x1="{:.2}" y1="0" x2="{:.2}" y2="800"/>"#, o[0], o[0]).unwrap();
    }
    writeln!(s, "</g>").unwrap();
    let step = (d.fg.len() / 300).max(1);
    for dir in dirs {
        let v = dir.as_f64();
        let (vx, vy) = (map.ax * v[0], map.ay * v[1]);
        let nrm = (vx * vx + vy * vy).sqrt();
        let (ux, uy) = (vx / nrm * 2.0 * SIZE, vy / nrm * 2.0 * SIZE);
        writeln!(s, r##"<g stroke="#d9822b" stroke-opacity="0.06" stroke-width="2"><!-- R+({}) -->"##, dir).unwrap();
        for p in d.fg.iter().step_by(step) {
            let q = map.apply(*p);
            writeln!(s, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, q[0], q[1], q[0] + ux, q[1] + uy).unwrap();
        }
        writeln!(s, "</g>").unwrap();
    }
    writeln!(s, r##"<g fill="#1f4e79" fill-opacity="0.6">"##).unwrap();
    for p in &d.fg {
        let q = map.apply(*p);
        if q[0].is_finite() && q[1].is_finite() {
            writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="1.5"/>"#, q[0], q[1]).unwrap();
        }
    }
    writeln!(s, "</g>\n</svg>").unwrap();
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// The map recorded in an SVG produced by `to_svg`.
pub fn parse_view_map(svg: &str) -> Option<ViewMap> {
    let line = svg.lines().find(|l| l.starts_with("<!-- map:"))?;
    let nums: Vec<f64> = line
        .split(|c: char| c == '=' || c == '*' || c == '+' || c == ';')
        .filter_map(|t| t.trim().trim_end_matches("-->").trim().parse().ok())
        .collect();
    match nums[..] {
        [ax, bx, ay, by] => Some(ViewMap { ax, bx, ay, by }),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::SymMatrix;

    #[test]
    fn deterministic_and_map_recorded() {
        let p = QuadraticPair::homogeneous(SymMatrix::from_ints(&[&[1, 0], &[0, -1]]), SymMatrix::from_ints(&[&[0, 1], &[1, 0]])).unwrap();
        let a = sample_range(&p, 200, 2.0, 7);
        let b = sample_range(&p, 200, 2.0, 7);
        let sa = to_svg(&a, &[PlaneDirection::from_ints(1, 0).unwrap()], "t");
        assert_eq!(sa, to_svg(&b, &[PlaneDirection::from_ints(1, 0).unwrap()], "t"));
        assert_eq!(to_csv(&a), to_csv(&b));
        assert!(a.xs.iter().all(|x| x.iter().map(|v| v * v).sum::<f64>() <= 4.0 + 1e-12));
        let m = parse_view_map(&sa).unwrap();
        for p in &a.fg {
            let q = m.apply(*p);
            assert!((-1.0..=801.0).contains(&q[0]) && (-1.0..=801.0).contains(&q[1]));
        }
        assert_eq!(to_csv(&a).lines().next(), Some("x1,x2,f,g"));
    }
}
