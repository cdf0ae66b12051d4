//! Small dense vector helpers for points in R^d.

pub type Point = Vec<f64>;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn sub(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[inline]
pub fn add(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

#[inline]
pub fn scale(a: &[f64], s: f64) -> Point {
    a.iter().map(|x| x * s).collect()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `(1 - lambda) * a + lambda * b`
#[inline]
pub fn lerp(a: &[f64], b: &[f64], lambda: f64) -> Point {
    a.iter().zip(b).map(|(x, y)| x + lambda * (y - x)).collect()
}

#[inline]
pub fn inf_norm_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn zeros(d: usize) -> Point {
    vec![0.0; d]
}

pub fn unit(d: usize, i: usize) -> Point {
    let mut e = vec![0.0; d];
    e[i] = 1.0;
    e
}

/// Fixed catalog of unit directions: coordinate axes, their negatives and, for
/// d >= 2, evenly spaced directions in every coordinate plane.
pub fn direction_catalog(d: usize, per_plane: usize) -> Vec<Point> {
    let mut out = Vec::new();
    for i in 0..d {
        out.push(unit(d, i));
        let mut e = unit(d, i);
        e[i] = -1.0;
        out.push(e);
    }
    if d >= 2 {
        for i in 0..d {
            for j in (i + 1)..d {
                for k in 0..per_plane {
                    let theta = std::f64::consts::PI * (2 * k + 1) as f64 / per_plane as f64;
                    let mut v = vec![0.0; d];
                    v[i] = theta.cos();
                    v[j] = theta.sin();
                    out.push(v);
                }
            }
        }
    }
    out
}
