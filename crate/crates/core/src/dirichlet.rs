//! Random star-shaped domains and the Nyström discretization of the
//! double-layer equation for the interior Dirichlet problem.
//!
//! With `K` the trapezoidal discretization of `∂/∂n_Q log|P - Q|` (outward
//! normal), constants satisfy `K𝟙 = π𝟙`. The interior Dirichlet equation
//! `π u + K u = -f` is nonsingular; the trial system is its `1/π` scaling
//! `(I + K/π) u = -f/π`.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krylov::gmres_run;
use crate::linalg::Matrix;
use crate::record::{Ensemble, HaltingRecord};

/// Resampling budget for star-shapedness.
pub const MAX_BOUNDARY_ATTEMPTS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryFamily {
    /// Coefficients `±1/(2m)` with equal probability (BDE).
    Bernoulli,
    /// Coefficients uniform on `[-1/(2m), 1/(2m)]` (UDE).
    Uniform,
}

impl BoundaryFamily {
    pub fn ensemble(self) -> Ensemble {
        match self {
            BoundaryFamily::Bernoulli => Ensemble::Bde,
            BoundaryFamily::Uniform => Ensemble::Ude,
        }
    }

    pub fn from_ensemble(e: Ensemble) -> Option<Self> {
        match e {
            Ensemble::Bde => Some(BoundaryFamily::Bernoulli),
            Ensemble::Ude => Some(BoundaryFamily::Uniform),
            _ => None,
        }
    }
}

/// `r(θ) = 1 + Σ_j (X_j cos jθ + Y_j sin jθ)`, `j = 1..=m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierCurve {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// `(r, r', r'')` at one angle.
#[derive(Clone, Copy, Debug)]
struct Radius {
    r: f64,
    dr: f64,
    ddr: f64,
}

impl FourierCurve {
    pub fn circle(m: usize) -> Self {
        FourierCurve {
            x: vec![0.0; m],
            y: vec![0.0; m],
        }
    }

    pub fn modes(&self) -> usize {
        self.x.len()
    }

    pub fn radius(&self, theta: f64) -> f64 {
        self.radius_derivatives(theta).r
    }

    fn radius_derivatives(&self, theta: f64) -> Radius {
        let mut out = Radius {
            r: 1.0,
            dr: 0.0,
            ddr: 0.0,
        };
        for (j, (xj, yj)) in self.x.iter().zip(&self.y).enumerate() {
            let k = (j + 1) as f64;
            let (s, c) = (k * theta).sin_cos();
            out.r += xj * c + yj * s;
            out.dr += k * (yj * c - xj * s);
            out.ddr -= k * k * (xj * c + yj * s);
        }
        out
    }

    /// `γ(θ)`, `γ'(θ)`, `γ''(θ)` for `γ(θ) = r(θ)(cos θ, sin θ)`.
    fn point(&self, theta: f64) -> BoundaryPoint {
        let Radius { r, dr, ddr } = self.radius_derivatives(theta);
        let (s, c) = theta.sin_cos();
        BoundaryPoint {
            r,
            pos: [r * c, r * s],
            d1: [dr * c - r * s, dr * s + r * c],
            d2: [ddr * c - 2.0 * dr * s - r * c, ddr * s + 2.0 * dr * c - r * s],
        }
    }

    fn is_star_shaped_on(&self, nodes: usize) -> bool {
        (0..nodes).all(|j| self.radius(node(j, nodes)) > 0.0)
    }
}

#[derive(Clone, Copy, Debug)]
struct BoundaryPoint {
    r: f64,
    pos: [f64; 2],
    d1: [f64; 2],
    d2: [f64; 2],
}

fn node(j: usize, n: usize) -> f64 {
    TAU * j as f64 / n as f64
}

/// Draws `X_1..X_m` then `Y_1..Y_m`, resampling until `r > 0` at the `2m`
/// quadrature nodes.
pub fn sample_boundary<R: Rng + ?Sized>(m: usize, family: BoundaryFamily, rng: &mut R) -> Result<FourierCurve> {
    if m == 0 {
        return Err(Error::InvalidDimension {
            n: m,
            reason: "a boundary needs at least one Fourier mode",
        });
    }
    let h = 1.0 / (2.0 * m as f64);
    let draw = |rng: &mut R| match family {
        BoundaryFamily::Bernoulli => {
            if rng.random::<bool>() {
                h
            } else {
                -h
            }
        }
        BoundaryFamily::Uniform => rng.random_range(-h..=h),
    };
    for _ in 0..MAX_BOUNDARY_ATTEMPTS {
        let x: Vec<f64> = (0..m).map(|_| draw(rng)).collect();
        let y: Vec<f64> = (0..m).map(|_| draw(rng)).collect();
        let curve = FourierCurve { x, y };
        if curve.is_star_shaped_on(2 * m) {
            return Ok(curve);
        }
    }
    Err(Error::NonStarShaped {
        attempts: MAX_BOUNDARY_ATTEMPTS,
    })
}

/// Double-layer kernel `κ(θ, φ)` including the arc-length factor `|γ'(φ)|`:
/// `ν(φ)·(γ(φ) - γ(θ)) / |γ(θ) - γ(φ)|² · |γ'(φ)|`, which is `1/2` on the
/// unit circle.
fn kernel(p: &BoundaryPoint, q: &BoundaryPoint) -> f64 {
    let dx = q.pos[0] - p.pos[0];
    let dy = q.pos[1] - p.pos[1];
    // ν|γ'| = (γ'_2, -γ'_1) for the counterclockwise parametrization.
    (q.d1[1] * dx - q.d1[0] * dy) / (dx * dx + dy * dy)
}

/// Limit of [`kernel`] as `θ → φ`.
fn kernel_diagonal(p: &BoundaryPoint) -> f64 {
    let speed2 = p.d1[0] * p.d1[0] + p.d1[1] * p.d1[1];
    (p.d1[0] * p.d2[1] - p.d1[1] * p.d2[0]) / (2.0 * speed2)
}

/// `K_jk = (2π/n) κ(θ_j, θ_k)` on `nodes` equally spaced angles.
pub fn double_layer_with_nodes(curve: &FourierCurve, nodes: usize) -> Result<Matrix> {
    if nodes == 0 {
        return Err(Error::InvalidDimension {
            n: nodes,
            reason: "the quadrature needs at least one node",
        });
    }
    let points: Vec<BoundaryPoint> = (0..nodes).map(|j| curve.point(node(j, nodes))).collect();
    if points.iter().any(|p| !(p.r > 0.0)) {
        return Err(Error::NonStarShaped { attempts: 1 });
    }
    let w = TAU / nodes as f64;
    Ok(Matrix::from_fn(nodes, nodes, |j, k| {
        if j == k {
            w * kernel_diagonal(&points[j])
        } else {
            w * kernel(&points[j], &points[k])
        }
    }))
}

/// [`double_layer_with_nodes`] at the ensemble resolution `n = 2m`.
pub fn double_layer(curve: &FourierCurve) -> Result<Matrix> {
    double_layer_with_nodes(curve, 2 * curve.modes())
}

/// The scaled trial operator `I + K/π`.
pub fn build_operator(curve: &FourierCurve) -> Result<Matrix> {
    let mut a = double_layer(curve)?.scaled(1.0 / PI);
    for i in 0..a.nrows() {
        a[(i, i)] += 1.0;
    }
    Ok(a)
}

/// Right-hand side of the scaled system for boundary data `f`.
pub fn scaled_rhs(f: &[f64]) -> Vec<f64> {
    f.iter().map(|v| -v / PI).collect()
}

/// One GMRES trial on a fresh boundary and fresh boundary data `f` iid uniform on `[-1, 1]`.
pub fn dirichlet_trial<R: Rng + ?Sized>(
    m: usize,
    family: BoundaryFamily,
    epsilon: f64,
    rng: &mut R,
) -> Result<HaltingRecord> {
    let curve = sample_boundary(m, family, rng)?;
    let a = build_operator(&curve)?;
    let n = a.nrows();
    let f: Vec<f64> = loop {
        let f: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if f.iter().any(|&v| v != 0.0) {
            break f;
        }
    };
    let out = gmres_run(&a, &scaled_rhs(&f), epsilon, n)?;
    let mut record = out.record;
    record.ensemble = Some(family.ensemble());
    Ok(record)
}
