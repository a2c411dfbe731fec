mod common;

use common::run;
use subduce::figure::{horizontal_unit_vectors, randers_figure, CIRCLE_POINTS};
use subduce_core::{MinkowskiFunction, NormSpec, Vector};

#[test]
fn indicatrix_points_have_unit_norm() {
    let f = NormSpec::randers_example();
    let circle: Vec<_> = randers_figure().into_iter().filter(|p| p.series == "indicatrix").collect();
    assert_eq!(circle.len(), CIRCLE_POINTS);
    for p in circle {
        let value = f.eval(&Vector::from_vec(vec![p.v, p.w])).unwrap();
        assert!((value - 1.0).abs() < 1e-12, "{p:?}: {value}");
    }
}

#[test]
fn rays_pass_through_horizontal_unit_vectors() {
    let points = randers_figure();
    for (series, (a, b)) in ["ray_u1", "ray_u2"].into_iter().zip(horizontal_unit_vectors()) {
        let ray: Vec<_> = points.iter().filter(|p| p.series == series).collect();
        assert_eq!((ray[0].v, ray[0].w), (0.0, 0.0));
        assert!(ray.iter().all(|p| (p.v * b - p.w * a).abs() < 1e-12));
        assert!(ray.iter().any(|p| (p.v - a).abs() < 1e-12 && (p.w - b).abs() < 1e-12));
    }
    let line: Vec<_> = points.iter().filter(|p| p.series == "line").collect();
    assert!(!line.is_empty());
    assert!(line.iter().all(|p| p.v + 2.0 * p.w == 0.0));
}

#[test]
fn figure_csv() {
    let r = run(&["randers-figure"]);
    assert_eq!(r.code, 0);
    let mut lines = r.stdout.lines();
    assert_eq!(lines.next(), Some("series,index,v,w"));
    assert_eq!(lines.count(), randers_figure().len());
    assert!(r.stdout.ends_with('\n') && !r.stdout.contains('\r'));
}
