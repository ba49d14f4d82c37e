//! The F12 simplex: its integer parameters, the four dihedral angle classes,
//! the Coxeter-Schläfli matrix built from them, and realization/vertex
//! classification.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::edge;
use crate::error::{Error, Result};
use crate::metric::{signature_of, Signature, SymMatrix4};

/// Tolerance on `2α₁ + α₂ = 2π/a` and `2β₁ + β₂ = 2π/b`.
pub const ANGLE_CONSTRAINT_TOL: f64 = 1e-12;

/// The parameter pair `(a, b)`: the simplex has dihedral angle sums `2π/a`
/// around the "a lines" and `2π/b` around the "b lines".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimplexParams {
    a: u32,
    b: u32,
    swapped: bool,
}

impl SimplexParams {
    /// Parameters taken as given, without the `b ≥ a` normalization.
    pub fn new(a: u32, b: u32) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidParams(format!(
                "parameters must be at least 1, got (a, b) = ({a}, {b})"
            )));
        }
        Ok(Self { a, b, swapped: false })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    /// Whether normalization exchanged the inputs.
    pub fn swapped(&self) -> bool {
        self.swapped
    }

    pub fn is_normalized(&self) -> bool {
        self.b >= self.a
    }

    /// `2π/a`, the sum `2α₁ + α₂`.
    pub fn alpha_sum(&self) -> f64 {
        2.0 * PI / self.a as f64
    }

    /// `2π/b`, the sum `2β₁ + β₂`.
    pub fn beta_sum(&self) -> f64 {
        2.0 * PI / self.b as f64
    }
}

impl fmt::Display for SimplexParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Uses the a-line/b-line duality to put the pair into `b ≥ a` form.
pub fn normalize_params(a: u32, b: u32) -> Result<SimplexParams> {
    let mut p = SimplexParams::new(a, b)?;
    if b < a {
        p = SimplexParams {
            a: b,
            b: a,
            swapped: true,
        };
    }
    Ok(p)
}

/// The four dihedral angle classes in radians. `alpha1` and `beta1` each
/// occur on two edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DihedralAngles {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl DihedralAngles {
    pub fn new(alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> Self {
        Self {
            alpha1,
            alpha2,
            beta1,
            beta2,
        }
    }

    /// Completes `(α₁, β₁)` with `α₂ = 2π/a − 2α₁`, `β₂ = 2π/b − 2β₁`.
    pub fn from_reduced(alpha1: f64, beta1: f64, params: &SimplexParams) -> Self {
        Self {
            alpha1,
            alpha2: params.alpha_sum() - 2.0 * alpha1,
            beta1,
            beta2: params.beta_sum() - 2.0 * beta1,
        }
    }

    /// Checks the angle-sum constraints and that every angle lies in `[0, π]`.
    pub fn validate(&self, params: &SimplexParams) -> Result<()> {
        let ea = 2.0 * self.alpha1 + self.alpha2 - params.alpha_sum();
        let eb = 2.0 * self.beta1 + self.beta2 - params.beta_sum();
        if ea.abs() > ANGLE_CONSTRAINT_TOL || eb.abs() > ANGLE_CONSTRAINT_TOL {
            return Err(Error::InvalidParams(format!(
                "angles violate the sum constraints for {params}: errors {ea:e}, {eb:e}"
            )));
        }
        let all = [self.alpha1, self.alpha2, self.beta1, self.beta2];
        if all.iter().any(|x| !(0.0..=PI).contains(x)) {
            return Err(Error::InvalidParams(format!("angles outside [0, π]: {all:?}")));
        }
        Ok(())
    }

    pub fn all_positive(&self) -> bool {
        [self.alpha1, self.alpha2, self.beta1, self.beta2]
            .iter()
            .all(|&x| x > 0.0)
    }

    pub fn to_degrees(&self) -> Self {
        Self {
            alpha1: self.alpha1.to_degrees(),
            alpha2: self.alpha2.to_degrees(),
            beta1: self.beta1.to_degrees(),
            beta2: self.beta2.to_degrees(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RealizationClass {
    /// `a = 1`: realized in the 3-sphere.
    Spherical,
    /// `(a, b) = (2, 2)`: hyperbolic with ideal vertices.
    HyperbolicIdeal,
    /// Hyperbolic with all vertices out of the absolute.
    HyperbolicOuter,
    /// `b > a ≥ 2` but the realizability inequality fails (or is an equality).
    NoProperSolution,
    /// `a = b ≥ 3`: more symmetric, belongs to another family.
    ExcludedSymmetric,
}

impl RealizationClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RealizationClass::Spherical => "Spherical",
            RealizationClass::HyperbolicIdeal => "HyperbolicIdeal",
            RealizationClass::HyperbolicOuter => "HyperbolicOuter",
            RealizationClass::NoProperSolution => "NoProperSolution",
            RealizationClass::ExcludedSymmetric => "ExcludedSymmetric",
        }
    }
}

impl fmt::Display for RealizationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Position of a vertex relative to the absolute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexClass {
    Proper,
    Ideal,
    Outer,
}

impl VertexClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            VertexClass::Proper => "Proper",
            VertexClass::Ideal => "Ideal",
            VertexClass::Outer => "Outer",
        }
    }
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The Coxeter-Schläfli matrix: unit diagonal, negated cosines of the
/// dihedral angles off the diagonal.
///
/// ```text
///  1       -cos β₁  -cos β₂  -cos α₁
/// -cos β₁   1       -cos α₁  -cos α₂
/// -cos β₂  -cos α₁   1       -cos β₁
/// -cos α₁  -cos α₂  -cos β₁   1
/// ```
pub fn build_coxeter_schlafli(angles: &DihedralAngles) -> SymMatrix4 {
    let ca1 = -angles.alpha1.cos();
    let ca2 = -angles.alpha2.cos();
    let cb1 = -angles.beta1.cos();
    let cb2 = -angles.beta2.cos();
    SymMatrix4::from_upper([
        [1.0, cb1, cb2, ca1],
        [0.0, 1.0, ca1, ca2],
        [0.0, 0.0, 1.0, cb1],
        [0.0, 0.0, 0.0, 1.0],
    ])
}

/// Classifies vertex `i` from the signature of the submatrix that deletes
/// row and column `i`.
pub fn classify_vertex(b: &SymMatrix4, i: usize) -> Result<VertexClass> {
    if i > 3 {
        return Err(Error::InvalidParams(format!("vertex index {i} out of range")));
    }
    let sig = signature_of(b.vertex_submatrix(i));
    match (sig.positive, sig.negative, sig.zero) {
        (3, 0, 0) => Ok(VertexClass::Proper),
        (2, 0, 1) => Ok(VertexClass::Ideal),
        (2, 1, 0) => Ok(VertexClass::Outer),
        (positive, negative, zero) => Err(Error::AmbiguousSignature {
            vertex: i,
            positive,
            negative,
            zero,
        }),
    }
}

pub fn vertex_signature(b: &SymMatrix4, i: usize) -> Signature {
    signature_of(b.vertex_submatrix(i))
}

/// Space of realization for the parameter pair.
pub fn classify_realization(params: &SimplexParams) -> Result<RealizationClass> {
    let p = if params.is_normalized() {
        *params
    } else {
        normalize_params(params.a(), params.b())?
    };
    let (a, b) = (p.a(), p.b());
    Ok(if a == 1 {
        RealizationClass::Spherical
    } else if a == 2 && b == 2 {
        RealizationClass::HyperbolicIdeal
    } else if a == b {
        RealizationClass::ExcludedSymmetric
    } else if edge::realizability_inequality(&p)?.strict {
        RealizationClass::HyperbolicOuter
    } else {
        RealizationClass::NoProperSolution
    })
}

/// `a₀₁, a₀₂, a₀₃, a₁₃ < 0` on the Gram matrix. These are the signs lost when
/// the distance equalities are squared.
pub fn gram_sign_check(gram: &SymMatrix4) -> bool {
    [(0, 1), (0, 2), (0, 3), (1, 3)]
        .iter()
        .all(|&(i, j)| gram.get(i, j) < 0.0)
}
