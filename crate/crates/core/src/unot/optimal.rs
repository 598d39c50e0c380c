use std::f64::consts::FRAC_1_SQRT_2;

use crate::channel::ChannelParams;
use crate::operator::check_alpha;
use crate::Result;

/// Entanglement class `Ω_α`: orbit of `α|↑↑⟩ + β|↓↓⟩` under local unitaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementClass {
    alpha: f64,
}

impl EntanglementClass {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        (1.0 - self.alpha * self.alpha).sqrt()
    }

    /// `s = α²β² ∈ [0, 1/4]`.
    pub fn s(&self) -> f64 {
        let a2 = self.alpha * self.alpha;
        (a2 * (1.0 - a2)).clamp(0.0, 0.25)
    }

    pub fn concurrence(&self) -> f64 {
        2.0 * self.alpha * self.beta()
    }
}

/// `K = (8 − 3√6)/20`; the branch switch happens at `α₀²β₀² = K`.
fn branch_k() -> f64 {
    (8.0 - 3.0 * 6f64.sqrt()) / 20.0
}

/// `α₀ = √((1 − √(1 − 4K))/2)` ≈ 0.1836.
pub fn alpha_0() -> f64 {
    ((1.0 - (1.0 - 4.0 * branch_k()).sqrt()) / 2.0).sqrt()
}

/// `α_max = √(1/2 − √(3/20))`, where `α²β² = 1/10`.
pub fn alpha_max() -> f64 {
    (0.5 - (3.0f64 / 20.0).sqrt()).sqrt()
}

/// NOT error of any covariant channel with `V + X = z` and correlation
/// scale `y`, for every input of `Ω_α`:
///
/// `(1/12){[1 + Z(1−4s) + Y(1+8s)]² + 6s(1−4s)(Z−2Y)²}`, `s = α²β²`.
pub fn covariant_error(z: f64, y: f64, alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    let s = a2 * (1.0 - a2);
    let lin = 1.0 + z * (1.0 - 4.0 * s) + y * (1.0 + 8.0 * s);
    let cross = z - 2.0 * y;
    (lin * lin + 6.0 * s * (1.0 - 4.0 * s) * cross * cross) / 12.0
}

/// Where the optimum lives in `(V, X, Y)` space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimalFamily {
    /// The single point `U_SEP = (−1/3, −1/3, 1/9)`.
    SeparablePoint,
    /// Segment `Y = y`, `V + X = z`, `V ∈ [v_min, v_max]`.
    LineSegment {
        y: f64,
        z: f64,
        v_min: f64,
        v_max: f64,
    },
    /// Perfect NOTs for maximally entangled inputs: `Y = −1/3`, `Z = 2/3`.
    MaximallyEntangledLine { v_min: f64, v_max: f64 },
    /// A point found by numerical search; no family is asserted.
    Numerical,
}

impl OptimalFamily {
    pub fn label(&self) -> &'static str {
        match self {
            Self::SeparablePoint => "sep",
            Self::LineSegment { .. } => "line",
            Self::MaximallyEntangledLine { .. } => "me",
            Self::Numerical => "numerical",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub alpha: f64,
    pub delta: f64,
    pub point: ChannelParams,
    pub family: OptimalFamily,
}

/// Optimal covariant NOT for the class `Ω_α`.
///
/// For `α ≤ α₀` the optimum is `U_SEP` with
/// `Δ = (4 + 160s − 128s²)/243`; above `α₀` it is the segment
/// `Y = −(1/3)(2 − 31s + 20s²)/(−2 − 35s + 100s²)`, `Z = −3Y − 1/3`, with
/// `Δ = 4s(1 − 4s)/(2 + 35s − 100s²)`. The reported point is the symmetric
/// `X = V = Z/2`, clamped to `X, V ≥ −1/3`.
pub fn optimal_not(alpha: f64) -> Result<ErrorReport> {
    let class = EntanglementClass::new(alpha)?;
    let s = class.s();
    if s <= branch_k() {
        return Ok(ErrorReport {
            alpha,
            delta: (4.0 + 160.0 * s - 128.0 * s * s) / 243.0,
            point: ChannelParams::new(-1.0 / 3.0, -1.0 / 3.0, 1.0 / 9.0),
            family: OptimalFamily::SeparablePoint,
        });
    }

    let denom = -2.0 - 35.0 * s + 100.0 * s * s;
    let y = -(2.0 - 31.0 * s + 20.0 * s * s) / (3.0 * denom);
    let z = 2.0 * (4.0 - 29.0 * s - 20.0 * s * s) / (3.0 * denom);
    let delta = 4.0 * s * (1.0 - 4.0 * s) / (2.0 + 35.0 * s - 100.0 * s * s);

    // CP on the facet Z = −3Y − 1/3 leaves V ∈ [−1/3, Z + 1/3].
    let v_min = -1.0 / 3.0;
    let v_max = (z + 1.0 / 3.0).min(1.0);
    let v = (z / 2.0).clamp(v_min, v_max);
    let point = ChannelParams::new(v, z - v, y);

    let family = if (alpha - FRAC_1_SQRT_2).abs() < 1e-12 {
        OptimalFamily::MaximallyEntangledLine { v_min, v_max }
    } else {
        OptimalFamily::LineSegment { y, z, v_min, v_max }
    };
    Ok(ErrorReport {
        alpha,
        delta: delta.max(0.0),
        point,
        family,
    })
}
