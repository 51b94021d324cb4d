//! Planar vectors and the L^p gauge.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// z-component of the cross product `self × other`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn sup_norm(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn scale(self, k: f64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, rhs: Vec2) -> Vec2 {
        rhs.scale(self)
    }
}

impl From<(f64, f64)> for Vec2 {
    fn from((x, y): (f64, f64)) -> Self {
        Vec2::new(x, y)
    }
}

/// `|x|^p + |y|^p`. A point lies in `D_p` iff this is at most 1.
pub fn power_sum(p: f64, v: Vec2) -> f64 {
    v.x.abs().powf(p) + v.y.abs().powf(p)
}

/// The L^p gauge `(|x|^p + |y|^p)^{1/p}`: the smallest `t` with `v / t ∈ D_p`.
///
/// Evaluated relative to the larger coordinate so large `p` does not overflow.
pub fn gauge(p: f64, v: Vec2) -> f64 {
    let big = v.sup_norm();
    if big == 0.0 {
        return 0.0;
    }
    let ratio = v.x.abs().min(v.y.abs()) / big;
    big * (1.0 + ratio.powf(p)).powf(1.0 / p)
}

/// Outward normal of the level set `|x|^p + |y|^p = const` at `v`, up to the factor `p`.
///
/// For `p > 1` a zero coordinate gives a zero component, which is the axis-aligned
/// tangent obtained by continuity.
pub fn normal(p: f64, v: Vec2) -> Vec2 {
    let component = |c: f64| {
        if c == 0.0 {
            0.0
        } else {
            c.signum() * c.abs().powf(p - 1.0)
        }
    };
    Vec2::new(component(v.x), component(v.y))
}

/// `n` points on the boundary of `scale · D_p`, counterclockwise from `(scale, 0)`.
pub fn boundary_points(p: f64, scale: f64, n: usize) -> Vec<Vec2> {
    (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            let (s, c) = t.sin_cos();
            // |c|^{2/p}, |s|^{2/p} have p-th powers summing to c² + s² = 1.
            let x = c.signum() * c.abs().powf(2.0 / p);
            let y = s.signum() * s.abs().powf(2.0 / p);
            Vec2::new(scale * x, scale * y)
        })
        .collect()
}

/// Signed shoelace area (positive for counterclockwise order).
pub fn shoelace_area(vertices: &[Vec2]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| vertices[i].cross(vertices[(i + 1) % n]))
        .sum::<f64>()
        / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauge_matches_power_sum() {
        for &p in &[1.0, 1.5, 2.0, 7.0] {
            let v = Vec2::new(0.3, -1.7);
            let direct = power_sum(p, v).powf(1.0 / p);
            assert!((gauge(p, v) - direct).abs() < 1e-14);
        }
        assert_eq!(gauge(3.0, Vec2::ZERO), 0.0);
    }

    #[test]
    fn gauge_survives_large_exponent() {
        let g = gauge(400.0, Vec2::new(10.0, 10.0));
        assert!((g - 10.0 * 2f64.powf(1.0 / 400.0)).abs() < 1e-12);
    }

    #[test]
    fn boundary_samples_lie_on_boundary() {
        for &p in &[1.0, 1.3, 2.0, 4.5] {
            for v in boundary_points(p, 1.0, 37) {
                assert!((power_sum(p, v) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unit_square_area() {
        let sq = [
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        assert_eq!(shoelace_area(&sq), 1.0);
    }
}
