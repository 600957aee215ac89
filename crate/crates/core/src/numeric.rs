//! Floating-point oracle for the exact pipeline.
//!
//! Waves are converted to `f64` once and then sampled: finite-difference
//! Laplacians check the eigenvalue equation in the interior of each chart,
//! and one-sided differences check the vertex and diagonal conditions along
//! boundaries. Nothing here feeds back into the exact computations.
//!
//! Boundary samples use the additive recurrence
//! `t_s = T_MIN + (T_MAX - T_MIN)·frac(φ₀ + s·α)` with `α = (√5 - 1)/2` and a
//! start `φ₀` derived from `(n, edge)`, so every run samples the same points.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::to_f64;
use crate::wave::{Region, TrigMonomial, Wave};

const T_MIN: f64 = 0.25;
const T_MAX: f64 = 4.0;
const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// A point in the local coordinates of one region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalPoint {
    region: Region,
    x: f64,
    y: f64,
}

impl EvalPoint {
    /// Rejects points outside the region (`Lower` needs `x > y`, `Upper`
    /// needs `x < y`, all coordinates nonnegative).
    pub fn new(region: Region, x: f64, y: f64) -> Result<Self> {
        let inside = x >= 0.0
            && y >= 0.0
            && match region {
                Region::Off(..) => true,
                Region::Lower(_) => x > y,
                Region::Upper(_) => x < y,
            };
        if !inside {
            return Err(Error::PointOutsideRegion {
                region: region.to_string(),
                x,
                y,
            });
        }
        Ok(EvalPoint { region, x, y })
    }

    pub fn region(&self) -> Region {
        self.region
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Distance to the nearest boundary of the region.
    pub fn boundary_distance(&self) -> f64 {
        let axes = self.x.min(self.y);
        match self.region {
            Region::Off(..) => axes,
            Region::Lower(_) | Region::Upper(_) => {
                axes.min((self.x - self.y).abs() / std::f64::consts::SQRT_2)
            }
        }
    }
}

/// A wave with coefficients rounded to `f64`.
#[derive(Clone, Debug)]
pub struct FloatWave {
    k1: f64,
    k2: f64,
    c: f64,
    blocks: BTreeMap<Region, [f64; 8]>,
}

impl From<&Wave> for FloatWave {
    fn from(w: &Wave) -> Self {
        let p = w.params();
        FloatWave {
            k1: to_f64(p.k1()),
            k2: to_f64(p.k2()),
            c: to_f64(p.c()),
            blocks: w
                .regions()
                .map(|(r, b)| (*r, std::array::from_fn(|k| to_f64(&b[k]))))
                .collect(),
        }
    }
}

impl FloatWave {
    pub fn energy(&self) -> f64 {
        self.k1 * self.k1 + self.k2 * self.k2
    }

    /// The region's formula at `(x, y)`, without checking that the point
    /// lies in the region. Boundary traces rely on this.
    pub fn formula(&self, region: Region, x: f64, y: f64) -> f64 {
        let Some(block) = self.blocks.get(&region) else {
            return 0.0;
        };
        TrigMonomial::all()
            .into_iter()
            .zip(block)
            .filter(|(_, q)| **q != 0.0)
            .map(|(m, q)| {
                let (kx, ky) = match m.assign {
                    crate::wave::Assign::A12 => (self.k1, self.k2),
                    crate::wave::Assign::A21 => (self.k2, self.k1),
                };
                q * m.tx.eval(kx * x) * m.ty.eval(ky * y)
            })
            .sum()
    }

    pub fn eval(&self, p: &EvalPoint) -> f64 {
        self.formula(p.region, p.x, p.y)
    }

    /// `|-Δ_h w - (k1² + k2²) w|` with the five-point Laplacian of width `h`.
    pub fn eigen_residual(&self, p: &EvalPoint, h: f64) -> Result<f64> {
        if h.is_nan() || h <= 0.0 || p.boundary_distance() <= 2.0 * h {
            return Err(Error::StencilCrossesBoundary {
                region: p.region.to_string(),
                x: p.x,
                y: p.y,
                h,
            });
        }
        let f = |x, y| self.formula(p.region, x, y);
        let center = f(p.x, p.y);
        let lap = (f(p.x + h, p.y) + f(p.x - h, p.y) + f(p.x, p.y + h) + f(p.x, p.y - h)
            - 4.0 * center)
            / (h * h);
        Ok((-lap - self.energy() * center).abs())
    }
}

pub fn eval(w: &Wave, p: &EvalPoint) -> f64 {
    FloatWave::from(w).eval(p)
}

pub fn eigen_residual(w: &Wave, p: &EvalPoint, h: f64) -> Result<f64> {
    FloatWave::from(w).eigen_residual(p, h)
}

/// `log2(residual(h) / residual(h/2))`; close to 2 for a second-order stencil.
pub fn convergence_order(w: &Wave, p: &EvalPoint, h: f64) -> Result<f64> {
    let fw = FloatWave::from(w);
    let coarse = fw.eigen_residual(p, h)?;
    let fine = fw.eigen_residual(p, h / 2.0)?;
    Ok((coarse / fine).log2())
}

/// Deterministic interior point of `region` number `s`, at least 0.3 away
/// from every boundary.
pub fn interior_point(region: Region, s: usize) -> EvalPoint {
    let u = (0.5 + s as f64 * 0.754_877_666_246_693).fract();
    let v = (0.2 + s as f64 * 0.569_840_290_998_053).fract();
    let (x, y) = match region {
        Region::Off(..) => (0.3 + 2.7 * u, 0.3 + 2.7 * v),
        Region::Lower(_) => {
            let y = 0.3 + 2.2 * u;
            (y + 0.5 + 1.0 * v, y)
        }
        Region::Upper(_) => {
            let x = 0.3 + 2.2 * u;
            (x, x + 0.5 + 1.0 * v)
        }
    };
    EvalPoint::new(region, x, y).expect("constructed inside the region")
}

/// Step at which convergence orders are estimated.
pub const ORDER_STEP: f64 = 1e-2;

/// Eigen-residual convergence orders over one interior point per supported
/// region of every wave.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderSurvey {
    pub h: f64,
    /// Points whose coarse residual was large enough to estimate an order.
    pub points: usize,
    pub max_residual: f64,
    pub min_order: Option<f64>,
    pub max_order: Option<f64>,
}

impl OrderSurvey {
    pub fn within(&self, lo: f64, hi: f64) -> bool {
        match (self.min_order, self.max_order) {
            (Some(a), Some(b)) => lo <= a && b <= hi,
            _ => false,
        }
    }
}

pub fn order_survey<'a>(waves: impl IntoIterator<Item = &'a Wave>, h: f64) -> Result<OrderSurvey> {
    let mut survey = OrderSurvey {
        h,
        points: 0,
        max_residual: 0.0,
        min_order: None,
        max_order: None,
    };
    let mut s = 0;
    for w in waves {
        let fw = FloatWave::from(w);
        for (&region, _) in w.regions() {
            let p = interior_point(region, s);
            s += 1;
            let coarse = fw.eigen_residual(&p, h)?;
            survey.max_residual = survey.max_residual.max(coarse);
            if coarse < 1e-10 {
                continue;
            }
            let order = (coarse / fw.eigen_residual(&p, h / 2.0)?).log2();
            survey.points += 1;
            survey.min_order = Some(survey.min_order.map_or(order, |m| m.min(order)));
            survey.max_order = Some(survey.max_order.map_or(order, |m| m.max(order)));
        }
    }
    Ok(survey)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampledCondition {
    VertexContinuity,
    Kirchhoff,
    DiagContinuity,
    Dbc,
}

impl SampledCondition {
    pub const ALL: [SampledCondition; 4] = [
        SampledCondition::VertexContinuity,
        SampledCondition::Kirchhoff,
        SampledCondition::DiagContinuity,
        SampledCondition::Dbc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SampledCondition::VertexContinuity => "vertex-continuity",
            SampledCondition::Kirchhoff => "kirchhoff",
            SampledCondition::DiagContinuity => "diag-continuity",
            SampledCondition::Dbc => "dbc",
        }
    }
}

/// Sample positions along a boundary of length `T_MAX - T_MIN`.
pub fn sample_points(n: usize, edge: usize, samples: usize) -> Vec<f64> {
    let start = (n as f64 * 0.754_877_666_246_693 + edge as f64 * 0.569_840_290_998_053).fract();
    (0..samples)
        .map(|s| T_MIN + (T_MAX - T_MIN) * (start + s as f64 * GOLDEN).fract())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampledCheck {
    pub condition: SampledCondition,
    pub samples: usize,
    pub h: f64,
    pub max_residual: f64,
    /// Largest magnitude of the terms being compared, for relative error.
    pub scale: f64,
    pub relative: f64,
}

fn vertex_region(x_side: bool, fixed: usize, free: usize) -> Region {
    match (x_side, fixed == free) {
        (true, true) => Region::Upper(fixed),
        (true, false) => Region::Off(fixed, free),
        (false, true) => Region::Lower(fixed),
        (false, false) => Region::Off(free, fixed),
    }
}

/// Second-order one-sided difference from `f(0), f(h), f(2h)`.
fn forward(f0: f64, f1: f64, f2: f64, h: f64) -> f64 {
    (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h)
}

/// Checks one condition at `samples` points per boundary with second-order
/// one-sided differences of width `h`, returning the worst residual.
/// Relative residuals are taken against the size of the first-order jet
/// (values times `max|k|` and one-sided derivatives), since the compared
/// terms themselves may all vanish.
pub fn sampled_condition_check(
    w: &Wave,
    condition: SampledCondition,
    samples: usize,
    h: f64,
) -> SampledCheck {
    let fw = FloatWave::from(w);
    let n = w.params().n();
    let k_max = fw.k1.abs().max(fw.k2.abs());
    let mut max_residual = 0.0_f64;
    let mut scale = 0.0_f64;
    let mut record = |residual: f64, magnitude: f64| {
        max_residual = max_residual.max(residual);
        scale = scale.max(magnitude);
    };

    match condition {
        SampledCondition::VertexContinuity | SampledCondition::Kirchhoff => {
            for x_side in [true, false] {
                for free in 1..=n {
                    for s in sample_points(n, free, samples) {
                        // (coordinate at the vertex, coordinate on the free edge)
                        let at = |fixed: usize, d: f64| {
                            let region = vertex_region(x_side, fixed, free);
                            if x_side {
                                fw.formula(region, d, s)
                            } else {
                                fw.formula(region, s, d)
                            }
                        };
                        let jet = |fixed: usize| {
                            let f0 = at(fixed, 0.0);
                            let d = forward(f0, at(fixed, h), at(fixed, 2.0 * h), h);
                            (f0, d, (k_max * f0.abs()).max(d.abs()))
                        };
                        if condition == SampledCondition::VertexContinuity {
                            let (reference, _, j1) = jet(1);
                            for fixed in 2..=n {
                                let (v, _, j) = jet(fixed);
                                record((v - reference).abs(), j.max(j1) / k_max);
                            }
                        } else {
                            let mut total = 0.0;
                            let mut magnitude = 0.0_f64;
                            for fixed in 1..=n {
                                let (_, d, j) = jet(fixed);
                                total += d;
                                magnitude = magnitude.max(j);
                            }
                            record(total.abs(), magnitude);
                        }
                    }
                }
            }
        }
        SampledCondition::DiagContinuity | SampledCondition::Dbc => {
            for edge in 1..=n {
                let (lo, up) = (Region::Lower(edge), Region::Upper(edge));
                for t in sample_points(n, edge, samples) {
                    let vu = fw.formula(up, t, t);
                    let vl = fw.formula(lo, t, t);
                    let up_dx = -forward(
                        vu,
                        fw.formula(up, t - h, t),
                        fw.formula(up, t - 2.0 * h, t),
                        h,
                    );
                    let up_dy = forward(
                        vu,
                        fw.formula(up, t, t + h),
                        fw.formula(up, t, t + 2.0 * h),
                        h,
                    );
                    let lo_dx = forward(
                        vl,
                        fw.formula(lo, t + h, t),
                        fw.formula(lo, t + 2.0 * h, t),
                        h,
                    );
                    let lo_dy = -forward(
                        vl,
                        fw.formula(lo, t, t - h),
                        fw.formula(lo, t, t - 2.0 * h),
                        h,
                    );
                    // First-order jet size, in derivative units.
                    let jet = [up_dx, up_dy, lo_dx, lo_dy]
                        .iter()
                        .fold(k_max * vu.abs().max(vl.abs()), |m, d| m.max(d.abs()));
                    if condition == SampledCondition::DiagContinuity {
                        record((vu - vl).abs(), jet / k_max);
                        continue;
                    }
                    let jump = 0.5 * (up_dx - up_dy) - 0.5 * (lo_dx - lo_dy);
                    let target = fw.c * vu;
                    record((jump - target).abs(), jet.max(target.abs()));
                }
            }
        }
    }

    let relative = if scale > 0.0 {
        max_residual / scale
    } else {
        max_residual
    };
    SampledCheck {
        condition,
        samples,
        h,
        max_residual,
        scale,
        relative,
    }
}
