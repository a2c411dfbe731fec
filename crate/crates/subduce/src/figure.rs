//! Plot data for the planar Randers example: the unit circle of
//! `F₁(u) = sqrt(uᵀAu) + b·u` with `A = [[2,1],[1,2]]`, `b = (1,1)`, the rays
//! through the horizontal unit vectors, and the line `v + 2w = 0`.

use serde::Serialize;

pub const CIRCLE_POINTS: usize = 360;
pub const RAY_POINTS: usize = 101;
pub const LINE_POINTS: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigurePoint {
    pub series: &'static str,
    pub index: usize,
    pub v: f64,
    pub w: f64,
}

/// The two points of the indicatrix on the image of the lift.
pub fn horizontal_unit_vectors() -> [(f64, f64); 2] {
    let s3 = 3f64.sqrt();
    [(-1.0 + s3, -1.0), (-1.0 - s3, -1.0)]
}

pub fn randers_figure() -> Vec<FigurePoint> {
    let mut out = Vec::with_capacity(CIRCLE_POINTS + 2 * RAY_POINTS + LINE_POINTS);
    let r = 3f64.sqrt();
    for k in 0..CIRCLE_POINTS {
        let t = (k as f64).to_radians();
        out.push(FigurePoint { series: "indicatrix", index: k, v: -1.0 + r * t.cos(), w: -1.0 + r * t.sin() });
    }
    let [u1, u2] = horizontal_unit_vectors();
    for (series, (a, b)) in [("ray_u1", u1), ("ray_u2", u2)] {
        for k in 0..RAY_POINTS {
            let s = 2.0 * k as f64 / (RAY_POINTS - 1) as f64;
            out.push(FigurePoint { series, index: k, v: s * a, w: s * b });
        }
    }
    for k in 0..LINE_POINTS {
        let v = -4.0 + 8.0 * k as f64 / (LINE_POINTS - 1) as f64;
        out.push(FigurePoint { series: "line", index: k, v, w: -v / 2.0 });
    }
    out
}
