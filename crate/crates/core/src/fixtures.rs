//! Reference mappings used by the tests, the acceptance suite and the CLI.

use std::f64::consts::PI;

use crate::coefficient::CoefficientFunction;
use crate::convex::ConvexSet;
use crate::mapping::{Family, Override, Piece, SetValuedMapping};

fn constant(v: f64, horizon: f64) -> CoefficientFunction {
    CoefficientFunction::constant(v, horizon)
}

fn interval_family(lower: CoefficientFunction, upper: CoefficientFunction) -> Family {
    Family::Box {
        lower: vec![lower],
        upper: vec![upper],
    }
}

fn build(
    dim: usize,
    horizon: f64,
    pieces: Vec<(f64, Family)>,
    overrides: Vec<(f64, ConvexSet)>,
) -> SetValuedMapping {
    SetValuedMapping::new(
        dim,
        horizon,
        pieces
            .into_iter()
            .map(|(start, family)| Piece { start, family })
            .collect(),
        overrides
            .into_iter()
            .map(|(time, set)| Override { time, set })
            .collect(),
    )
    .expect("fixture is valid")
}

/// `[0, 1]` on `[0, 1]`.
pub fn constant_box() -> SetValuedMapping {
    build(
        1,
        1.0,
        vec![(0.0, interval_family(constant(0.0, 1.0), constant(1.0, 1.0)))],
        vec![],
    )
}

/// The closed unit disc on `[0, 1]`.
pub fn constant_ball() -> SetValuedMapping {
    SetValuedMapping::constant(ConvexSet::ball(vec![0.0, 0.0], 1.0).unwrap(), 1.0).unwrap()
}

/// `[0, 1]` on `[0, 0.5)` and `[2, 3]` on `[0.5, 1]`.
pub fn step() -> SetValuedMapping {
    build(
        1,
        1.0,
        vec![
            (0.0, interval_family(constant(0.0, 1.0), constant(1.0, 1.0))),
            (0.5, interval_family(constant(2.0, 1.0), constant(3.0, 1.0))),
        ],
        vec![],
    )
}

/// The step with the value `[0, 1]` kept at `t = 0.5`: it jumps right after
/// 0.5 and is not right inner semicontinuous there.
pub fn left_continuous_step() -> SetValuedMapping {
    let mut m = step();
    m.overrides.push(Override {
        time: 0.5,
        set: ConvexSet::interval(0.0, 1.0).unwrap(),
    });
    m
}

/// `[0, 1 - t]` on `[0, 1)` and `{2}` at `t = 1`.
pub fn remark_2_5() -> SetValuedMapping {
    build(
        1,
        1.0,
        vec![(
            0.0,
            interval_family(
                constant(0.0, 1.0),
                CoefficientFunction::affine(1.0, -1.0, 1.0),
            ),
        )],
        vec![(1.0, ConvexSet::point(vec![2.0]))],
    )
}

/// `{sin(1/(π - t))}` on `[0, π)` and `{2}` at `π`.
pub fn example_2_1() -> SetValuedMapping {
    build(
        1,
        PI,
        vec![(0.0, Family::Oscillator)],
        vec![(PI, ConvexSet::point(vec![2.0]))],
    )
}

/// The right-continuous upper bound of [`interval_upper_right_continuous`].
pub fn sawtooth_upper() -> CoefficientFunction {
    // 1 + t on [0, 0.4), 0.5 on [0.4, 0.7), 2 - t on [0.7, 1]
    CoefficientFunction::new(
        vec![0.0, 0.4, 0.7, 1.0],
        vec![1.0, 0.5, 1.3],
        vec![1.4, 0.5, 1.0],
        1.0,
    )
    .unwrap()
}

/// `[0, f(t)]` with `f > 0` right-continuous: a downward jump at 0.4 and an
/// upward jump at 0.7.
pub fn interval_upper_right_continuous() -> SetValuedMapping {
    build(
        1,
        1.0,
        vec![(0.0, interval_family(constant(0.0, 1.0), sawtooth_upper()))],
        vec![],
    )
}

/// `[g(t), f(t)]` with càdlàg `g <= f`.
pub fn interval_cadlag_bounds() -> SetValuedMapping {
    // g: 0.2 t on [0, 0.3), 0.8 on [0.3, 0.6), 0.1 on [0.6, 1]
    let g = CoefficientFunction::new(
        vec![0.0, 0.3, 0.6, 1.0],
        vec![0.0, 0.8, 0.1],
        vec![0.06, 0.8, 0.1],
        0.1,
    )
    .unwrap();
    // f: 1 + t on [0, 0.6), 1 - 0.25 (t - 0.6) on [0.6, 1]
    let f =
        CoefficientFunction::new(vec![0.0, 0.6, 1.0], vec![1.0, 1.0], vec![1.6, 0.9], 0.9).unwrap();
    build(1, 1.0, vec![(0.0, interval_family(g, f))], vec![])
}

/// Disc of radius 0.1 whose center moves from the origin to `(0.5, 0.25)`.
pub fn moving_ball() -> SetValuedMapping {
    build(
        2,
        1.0,
        vec![(
            0.0,
            Family::Ball {
                center: vec![
                    CoefficientFunction::affine(0.0, 0.5, 1.0),
                    CoefficientFunction::affine(0.0, 0.25, 1.0),
                ],
                radius: constant(0.1, 1.0),
            },
        )],
        vec![],
    )
}

/// `[t, t + 1]` on `[0, 1]`.
pub fn moving_box() -> SetValuedMapping {
    build(
        1,
        1.0,
        vec![(
            0.0,
            interval_family(
                CoefficientFunction::affine(0.0, 1.0, 1.0),
                CoefficientFunction::affine(1.0, 1.0, 1.0),
            ),
        )],
        vec![],
    )
}

/// The unit simplex `{x + y <= 1, x, y >= 0}` on `[0, 1]`.
pub fn simplex() -> SetValuedMapping {
    build(
        2,
        1.0,
        vec![(
            0.0,
            Family::Polytope {
                normals: vec![vec![1.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]],
                offsets: vec![constant(1.0, 1.0), constant(0.0, 1.0), constant(0.0, 1.0)],
                lower: vec![0.0, 0.0],
                upper: vec![1.0, 1.0],
            },
        )],
        vec![],
    )
}

/// `{x + y <= 1 - t/2, x, y >= 0}`.
pub fn shrinking_simplex() -> SetValuedMapping {
    build(
        2,
        1.0,
        vec![(
            0.0,
            Family::Polytope {
                normals: vec![vec![1.0, 1.0], vec![-1.0, 0.0], vec![0.0, -1.0]],
                offsets: vec![
                    CoefficientFunction::affine(1.0, -0.5, 1.0),
                    constant(0.0, 1.0),
                    constant(0.0, 1.0),
                ],
                lower: vec![0.0, 0.0],
                upper: vec![1.0, 1.0],
            },
        )],
        vec![],
    )
}

/// Every named fixture, in a fixed order.
pub fn all() -> Vec<(&'static str, SetValuedMapping)> {
    vec![
        ("constant_box", constant_box()),
        ("constant_ball", constant_ball()),
        ("step", step()),
        ("left_continuous_step", left_continuous_step()),
        ("remark_2_5", remark_2_5()),
        ("example_2_1", example_2_1()),
        (
            "interval_upper_right_continuous",
            interval_upper_right_continuous(),
        ),
        ("interval_cadlag_bounds", interval_cadlag_bounds()),
        ("moving_ball", moving_ball()),
        ("moving_box", moving_box()),
        ("simplex", simplex()),
        ("shrinking_simplex", shrinking_simplex()),
    ]
}

pub fn by_name(name: &str) -> Option<SetValuedMapping> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, m)| m)
}
