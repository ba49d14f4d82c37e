//! Edge conditions of the F12 simplex.
//!
//! The identified edges `A₀A₁ ~ A₀A₂` and `A₀A₃ ~ A₁A₃` must have equal
//! length. Written through the two principal minors
//!
//! ```text
//! B₀₀ = 1 − cos²α₁ − cos²α₂ − cos²β₁ − 2 cos α₁ cos α₂ cos β₁
//! B₁₁ = 1 − cos²α₁ − cos²β₁ − cos²β₂ − 2 cos α₁ cos β₁ cos β₂
//! ```
//!
//! this becomes `f₁ = B₀₀ sin²β₁ − B₁₁ sin²α₂ = 0` and
//! `f₂ = B₁₁ sin²α₁ − B₀₀ sin²β₂ = 0`, with `α₂`, `β₂` eliminated through the
//! angle sums. `d₁`, `d₂` are the derivatives of `f₁`, `f₂` along `α₁`
//! (resp. `β₁`) with that elimination applied.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::{DihedralAngles, SimplexParams};

/// Band around zero treated as exact equality for the realizability
/// inequality and the boundary sign of `f₂`.
pub const EQUALITY_TOL: f64 = 1e-12;

const SLICE_TOL: f64 = 1e-12;

/// Reduced coordinates `(α₁, β₁)` for a parameter pair. `α₂` and `β₂` are
/// always derived from the angle sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSlice {
    alpha1: f64,
    beta1: f64,
    params: SimplexParams,
}

impl AngleSlice {
    /// Requires `α₁ ∈ [0, π/a]` and `β₁ ∈ [0, π/b]`.
    pub fn new(alpha1: f64, beta1: f64, params: SimplexParams) -> Result<Self> {
        let amax = PI / params.a() as f64;
        let bmax = PI / params.b() as f64;
        if !(-SLICE_TOL..=amax + SLICE_TOL).contains(&alpha1)
            || !(-SLICE_TOL..=bmax + SLICE_TOL).contains(&beta1)
        {
            return Err(Error::InvalidParams(format!(
                "(α₁, β₁) = ({alpha1}, {beta1}) outside [0, π/{}] × [0, π/{}]",
                params.a(),
                params.b()
            )));
        }
        Ok(Self::unchecked(alpha1, beta1, params))
    }

    /// No range check; used by the solvers, which may probe just outside the
    /// box (finite differences, bisection brackets).
    pub fn unchecked(alpha1: f64, beta1: f64, params: SimplexParams) -> Self {
        Self { alpha1, beta1, params }
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn alpha2(&self) -> f64 {
        self.params.alpha_sum() - 2.0 * self.alpha1
    }

    pub fn beta2(&self) -> f64 {
        self.params.beta_sum() - 2.0 * self.beta1
    }

    pub fn params(&self) -> &SimplexParams {
        &self.params
    }

    pub fn angles(&self) -> DihedralAngles {
        DihedralAngles::from_reduced(self.alpha1, self.beta1, &self.params)
    }
}

/// `(B₀₀, B₁₁)` for arbitrary angles (no constraint applied).
pub fn principal_minors(ang: &DihedralAngles) -> (f64, f64) {
    let (ca1, ca2, cb1, cb2) = (ang.alpha1.cos(), ang.alpha2.cos(), ang.beta1.cos(), ang.beta2.cos());
    let b00 = 1.0 - ca1 * ca1 - ca2 * ca2 - cb1 * cb1 - 2.0 * ca1 * ca2 * cb1;
    let b11 = 1.0 - ca1 * ca1 - cb1 * cb1 - cb2 * cb2 - 2.0 * ca1 * cb1 * cb2;
    (b00, b11)
}

pub fn b00(s: &AngleSlice) -> f64 {
    principal_minors(&s.angles()).0
}

pub fn b11(s: &AngleSlice) -> f64 {
    principal_minors(&s.angles()).1
}

/// `f₁` in the compact form `B₀₀ sin²β₁ − B₁₁ sin²α₂`.
pub fn f1_compact(ang: &DihedralAngles) -> f64 {
    let (b00, b11) = principal_minors(ang);
    b00 * ang.beta1.sin().powi(2) - b11 * ang.alpha2.sin().powi(2)
}

/// `f₂` in the compact form `B₁₁ sin²α₁ − B₀₀ sin²β₂`.
pub fn f2_compact(ang: &DihedralAngles) -> f64 {
    let (b00, b11) = principal_minors(ang);
    b11 * ang.alpha1.sin().powi(2) - b00 * ang.beta2.sin().powi(2)
}

/// `f₁` written out term by term for arbitrary angles.
pub fn f1_raw(ang: &DihedralAngles) -> f64 {
    let (ca1, ca2, cb1, cb2) = (ang.alpha1.cos(), ang.alpha2.cos(), ang.beta1.cos(), ang.beta2.cos());
    let sb1 = ang.beta1.sin();
    let sa2 = ang.alpha2.sin();
    (1.0 - ca1.powi(2) - ca2.powi(2) - cb1.powi(2) - 2.0 * ca1 * ca2 * cb1) * sb1.powi(2)
        - (1.0 - ca1.powi(2) - cb1.powi(2) - cb2.powi(2) - 2.0 * ca1 * cb1 * cb2) * sa2.powi(2)
}

/// `f₂` written out term by term for arbitrary angles.
pub fn f2_raw(ang: &DihedralAngles) -> f64 {
    let (ca1, ca2, cb1, cb2) = (ang.alpha1.cos(), ang.alpha2.cos(), ang.beta1.cos(), ang.beta2.cos());
    let sa1 = ang.alpha1.sin();
    let sb2 = ang.beta2.sin();
    (1.0 - ca1.powi(2) - cb1.powi(2) - cb2.powi(2) - 2.0 * ca1 * cb1 * cb2) * sa1.powi(2)
        - (1.0 - ca1.powi(2) - ca2.powi(2) - cb1.powi(2) - 2.0 * ca1 * ca2 * cb1) * sb2.powi(2)
}

pub fn f1(s: &AngleSlice) -> f64 {
    f1_raw(&s.angles())
}

pub fn f2(s: &AngleSlice) -> f64 {
    f2_raw(&s.angles())
}

/// `d₁ = ∂f₁/∂α₁ − 2 ∂f₁/∂α₂` as a function of all four angles.
pub fn d1_raw(ang: &DihedralAngles) -> f64 {
    let (sa1, ca1) = ang.alpha1.sin_cos();
    let (sa2, ca2) = ang.alpha2.sin_cos();
    let (sb1, cb1) = ang.beta1.sin_cos();
    let cb2 = ang.beta2.cos();
    let b11 = 1.0 - ca1 * ca1 - cb1 * cb1 - cb2 * cb2 - 2.0 * ca1 * cb1 * cb2;
    let by_alpha1 = (2.0 * sa1 * ca1 + 2.0 * sa1 * ca2 * cb1) * sb1 * sb1
        - (2.0 * sa1 * ca1 + 2.0 * sa1 * cb1 * cb2) * sa2 * sa2;
    let by_alpha2 = (2.0 * sa2 * ca2 + 2.0 * sa2 * ca1 * cb1) * sb1 * sb1 - 2.0 * sa2 * ca2 * b11;
    by_alpha1 - 2.0 * by_alpha2
}

/// `d₂ = ∂f₂/∂β₁ − 2 ∂f₂/∂β₂` as a function of all four angles.
pub fn d2_raw(ang: &DihedralAngles) -> f64 {
    let (sa1, ca1) = ang.alpha1.sin_cos();
    let ca2 = ang.alpha2.cos();
    let (sb1, cb1) = ang.beta1.sin_cos();
    let (sb2, cb2) = ang.beta2.sin_cos();
    let b00 = 1.0 - ca1 * ca1 - ca2 * ca2 - cb1 * cb1 - 2.0 * ca1 * ca2 * cb1;
    let by_beta1 = (2.0 * sb1 * cb1 + 2.0 * sb1 * ca1 * cb2) * sa1 * sa1
        - (2.0 * sb1 * cb1 + 2.0 * sb1 * ca1 * ca2) * sb2 * sb2;
    let by_beta2 = (2.0 * sb2 * cb2 + 2.0 * sb2 * ca1 * cb1) * sa1 * sa1 - 2.0 * sb2 * cb2 * b00;
    by_beta1 - 2.0 * by_beta2
}

pub fn d1(s: &AngleSlice) -> f64 {
    d1_raw(&s.angles())
}

pub fn d2(s: &AngleSlice) -> f64 {
    d2_raw(&s.angles())
}

/// Jacobian of `(f₁, f₂)` with respect to the reduced coordinates
/// `(α₁, β₁)`, the angle sums held fixed:
///
/// ```text
/// [ d₁          df₁/dβ₁ ]
/// [ df₂/dα₁     d₂      ]
/// ```
pub fn reduced_jacobian(s: &AngleSlice) -> [[f64; 2]; 2] {
    let ang = s.angles();
    let (sa1, ca1) = ang.alpha1.sin_cos();
    let (sa2, ca2) = ang.alpha2.sin_cos();
    let (sb1, cb1) = ang.beta1.sin_cos();
    let (sb2, cb2) = ang.beta2.sin_cos();
    let (b00, b11) = principal_minors(&ang);

    // gradients of the two minors; B₀₀ does not involve β₂, B₁₁ not α₂
    let b00_a1 = 2.0 * sa1 * ca1 + 2.0 * sa1 * ca2 * cb1;
    let b00_a2 = 2.0 * sa2 * ca2 + 2.0 * ca1 * sa2 * cb1;
    let b00_b1 = 2.0 * sb1 * cb1 + 2.0 * ca1 * ca2 * sb1;
    let b11_a1 = 2.0 * sa1 * ca1 + 2.0 * sa1 * cb1 * cb2;
    let b11_b1 = 2.0 * sb1 * cb1 + 2.0 * ca1 * sb1 * cb2;
    let b11_b2 = 2.0 * sb2 * cb2 + 2.0 * ca1 * cb1 * sb2;

    let f1_b1 = b00_b1 * sb1 * sb1 + b00 * 2.0 * sb1 * cb1 - b11_b1 * sa2 * sa2;
    let f1_b2 = -b11_b2 * sa2 * sa2;
    let f2_a1 = b11_a1 * sa1 * sa1 + b11 * 2.0 * sa1 * ca1 - b00_a1 * sb2 * sb2;
    let f2_a2 = -b00_a2 * sb2 * sb2;

    [[d1_raw(&ang), f1_b1 - 2.0 * f1_b2], [f2_a1 - 2.0 * f2_a2, d2_raw(&ang)]]
}

/// Both sides of the realizability inequality
/// `(1 + cos π/a) sin 2π/b > (cos π/a + cos 2π/b) sin π/a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs > EQUALITY_TOL`.
    pub strict: bool,
}

pub fn realizability_inequality(params: &SimplexParams) -> Result<Inequality> {
    let (a, b) = (params.a(), params.b());
    if a < 2 || b <= a {
        return Err(Error::InvalidParams(format!(
            "realizability inequality needs b > a ≥ 2, got ({a}, {b})"
        )));
    }
    let pa = PI / a as f64;
    let pb2 = 2.0 * PI / b as f64;
    let lhs = (1.0 + pa.cos()) * pb2.sin();
    let rhs = (pa.cos() + pb2.cos()) * pa.sin();
    Ok(Inequality {
        lhs,
        rhs,
        strict: lhs - rhs > EQUALITY_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BMax {
    /// Largest `b` with the strict inequality; equals `a` when no `b > a`
    /// qualifies.
    Finite(u32),
    /// The inequality still holds at the scan ceiling.
    Unbounded,
}

impl BMax {
    pub fn value(&self) -> Option<u32> {
        match self {
            BMax::Finite(b) => Some(*b),
            BMax::Unbounded => None,
        }
    }
}

/// Scans `b = a+1, a+2, …` up to `b_limit` and returns the last `b` for
/// which the strict inequality holds. The left side decreases and the right
/// side increases in `b`, so the first failure ends the scan.
pub fn compute_bmax(a: u32, b_limit: u32) -> Result<BMax> {
    if a < 2 || b_limit < a + 1 {
        return Err(Error::InvalidParams(format!(
            "b_max needs a ≥ 2 and b_limit ≥ a + 1, got a = {a}, b_limit = {b_limit}"
        )));
    }
    let mut last = a;
    for b in (a + 1)..=b_limit {
        let params = SimplexParams::new(a, b)?;
        if realizability_inequality(&params)?.strict {
            last = b;
        } else {
            return Ok(BMax::Finite(last));
        }
    }
    Ok(BMax::Unbounded)
}

/// `compute_bmax` with the default ceiling `4a`.
pub fn bmax(a: u32) -> Result<BMax> {
    compute_bmax(a, 4 * a.max(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(value: f64, tol: f64) -> Sign {
        if value.abs() < tol {
            Sign::Zero
        } else if value > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// `f₂(π/a, 0)`.
pub fn f2_boundary_value(params: &SimplexParams) -> f64 {
    f2(&AngleSlice::unchecked(PI / params.a() as f64, 0.0, *params))
}

/// Sign of `f₂(π/a, 0)`, which decides between no solution, the improper
/// boundary solution `(π/a, 0)`, and a unique proper solution.
pub fn f2_boundary_sign(params: &SimplexParams) -> Result<Sign> {
    if params.a() < 2 || params.b() <= params.a() {
        return Err(Error::InvalidParams(format!(
            "boundary sign needs b > a ≥ 2, got {params}"
        )));
    }
    Ok(Sign::of(f2_boundary_value(params), EQUALITY_TOL))
}
