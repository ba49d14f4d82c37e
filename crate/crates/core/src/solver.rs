//! Solving the edge conditions `f₁ = f₂ = 0` for `(α₁, β₁)`.
//!
//! The primary route rewrites the system as the fixed point of
//! `ḡ(α₁, β₁) = (α₁ + f₁/k₁, β₁ + f₂/k₂)` and iterates it inside the search
//! box, then polishes with a few Newton steps. [`grid_oracle`] is an
//! independent route (sign-change scan plus nested bisection) used to
//! cross-check solutions and to count roots.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::edge::{self, AngleSlice, Sign};
use crate::error::{Error, Result};
use crate::metric::{self, Geometry, Signature};
use crate::simplex::{
    build_coxeter_schlafli, classify_realization, classify_vertex, gram_sign_check, normalize_params,
    DihedralAngles, RealizationClass, SimplexParams, VertexClass,
};

/// Residual bound for a grid-oracle candidate.
pub const ORACLE_RESIDUAL: f64 = 1e-9;
/// Two roots closer than this (max-norm) are the same root.
pub const ROOT_MERGE_TOL: f64 = 1e-7;
/// Widening applied to the sampled spread of each partial derivative.
pub const CONTRACTION_SAFETY: f64 = 1.1;
/// Central-difference step for the Newton Jacobian.
pub const NEWTON_FD_STEP: f64 = 1e-7;

const CLAMP_STREAK_LIMIT: usize = 1000;
const NEWTON_POLISH_STEPS: usize = 50;
const BISECTION_STEPS: usize = 200;
const GAIN_SCHEDULE: [f64; 7] = [2.0, 1.5, 1.25, 1.0, 0.8, 0.6, 0.5];

/// Closed rectangle in the `(α₁, β₁)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainBox {
    pub alpha1_lo: f64,
    pub alpha1_hi: f64,
    pub beta1_lo: f64,
    pub beta1_hi: f64,
}

impl DomainBox {
    pub fn new(alpha1_lo: f64, alpha1_hi: f64, beta1_lo: f64, beta1_hi: f64) -> Result<Self> {
        if !(alpha1_lo <= alpha1_hi) || !(beta1_lo <= beta1_hi) {
            return Err(Error::InvalidParams(format!(
                "empty box [{alpha1_lo}, {alpha1_hi}] × [{beta1_lo}, {beta1_hi}]"
            )));
        }
        Ok(Self {
            alpha1_lo,
            alpha1_hi,
            beta1_lo,
            beta1_hi,
        })
    }

    pub fn center(&self) -> (f64, f64) {
        (
            0.5 * (self.alpha1_lo + self.alpha1_hi),
            0.5 * (self.beta1_lo + self.beta1_hi),
        )
    }

    pub fn width(&self) -> f64 {
        self.alpha1_hi - self.alpha1_lo
    }

    pub fn height(&self) -> f64 {
        self.beta1_hi - self.beta1_lo
    }

    pub fn contains(&self, (a, b): (f64, f64)) -> bool {
        (self.alpha1_lo..=self.alpha1_hi).contains(&a) && (self.beta1_lo..=self.beta1_hi).contains(&b)
    }

    pub fn strictly_contains(&self, (a, b): (f64, f64)) -> bool {
        a > self.alpha1_lo && a < self.alpha1_hi && b > self.beta1_lo && b < self.beta1_hi
    }

    /// Projects onto the box; the flag reports whether anything moved.
    pub fn clamp(&self, (a, b): (f64, f64)) -> ((f64, f64), bool) {
        let ca = a.clamp(self.alpha1_lo, self.alpha1_hi);
        let cb = b.clamp(self.beta1_lo, self.beta1_hi);
        ((ca, cb), ca != a || cb != b)
    }

    /// Box of the given half-widths around `center`, cut down to `self`.
    pub fn neighbourhood(&self, center: (f64, f64), half_alpha: f64, half_beta: f64) -> DomainBox {
        DomainBox {
            alpha1_lo: (center.0 - half_alpha).max(self.alpha1_lo),
            alpha1_hi: (center.0 + half_alpha).min(self.alpha1_hi),
            beta1_lo: (center.1 - half_beta).max(self.beta1_lo),
            beta1_hi: (center.1 + half_beta).min(self.beta1_hi),
        }
    }

    /// Node `(i, j)` of an `n × n` grid spanning the box (corners included).
    fn node(&self, n: usize, i: usize, j: usize) -> (f64, f64) {
        let t = |k: usize| if n <= 1 { 0.5 } else { k as f64 / (n - 1) as f64 };
        (
            self.alpha1_lo + self.width() * t(i),
            self.beta1_lo + self.height() * t(j),
        )
    }
}

/// `[0, π/a] × [0, π/b]`.
pub fn full_box(params: &SimplexParams) -> DomainBox {
    DomainBox {
        alpha1_lo: 0.0,
        alpha1_hi: PI / params.a() as f64,
        beta1_lo: 0.0,
        beta1_hi: PI / params.b() as f64,
    }
}

/// Search box for the proper solution. For `a = 2` and `a = 3` the low end
/// of `α₁` is cut off, since no proper solution lives there.
pub fn domain_for(params: &SimplexParams) -> Result<DomainBox> {
    let (a, b) = (params.a(), params.b());
    if a < 2 || b <= a {
        return Err(Error::InvalidParams(format!("search box needs b > a ≥ 2, got ({a}, {b})")));
    }
    let beta_hi = PI / b as f64;
    let (lo, hi) = match a {
        2 => (PI / 3.0, PI / 2.0),
        3 => (PI / 12.0, PI / 3.0),
        _ => (0.0, PI / a as f64),
    };
    DomainBox::new(lo, hi, 0.0, beta_hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    FixedPoint,
    Newton,
    GridOracle,
    Auto,
}

/// The constants `k₁, k₂` of the fixed-point map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gains {
    pub k1: f64,
    pub k2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Bound on `max(|f₁|, |f₂|)`.
    pub tolerance: f64,
    /// Bound on the last step of the iteration.
    pub angle_tolerance: f64,
    pub max_iterations: usize,
    /// Fixed gains; `None` selects them from the sampled derivatives.
    pub k1: Option<f64>,
    pub k2: Option<f64>,
    pub method: Method,
    pub oracle_resolution: usize,
    pub contraction_grid: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-11,
            angle_tolerance: 1e-12,
            max_iterations: 200_000,
            k1: None,
            k2: None,
            method: Method::Auto,
            oracle_resolution: 200,
            contraction_grid: 200,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(self.tolerance > 0.0) || !(self.angle_tolerance > 0.0) {
            return bad(format!(
                "tolerances must be positive (tol = {}, angle_tol = {})",
                self.tolerance, self.angle_tolerance
            ));
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1".into());
        }
        for k in [self.k1, self.k2].into_iter().flatten() {
            if !(k > 0.0) || !k.is_finite() {
                return bad(format!("gains must be positive, got {k}"));
            }
        }
        if self.oracle_resolution < 50 {
            return bad(format!("oracle resolution must be at least 50, got {}", self.oracle_resolution));
        }
        if self.contraction_grid < 2 {
            return bad("contraction grid needs at least 2 points per axis".into());
        }
        Ok(())
    }
}

/// Bounds on `|∂gᵢ/∂xⱼ|` over a box and the induced max-norm Lipschitz
/// bound (largest row sum).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractionEstimate {
    pub derivative_suprema: [[f64; 2]; 2],
    pub norm: f64,
}

impl ContractionEstimate {
    pub fn is_contraction(&self) -> bool {
        self.norm < 1.0
    }
}

/// Sampled ranges of the four entries of the Jacobian of `(f₁, f₂)` over a
/// box, plus the largest `|d₁|`, `|d₂|` seen.
#[derive(Debug, Clone, Copy)]
struct JacobianRanges {
    lo: [[f64; 2]; 2],
    hi: [[f64; 2]; 2],
}

impl JacobianRanges {
    fn sample<J>(jacobian: J, domain: &DomainBox, grid: usize) -> Self
    where
        J: Fn(f64, f64) -> [[f64; 2]; 2],
    {
        let mut lo = [[f64::INFINITY; 2]; 2];
        let mut hi = [[f64::NEG_INFINITY; 2]; 2];
        for i in 0..grid {
            for j in 0..grid {
                let (a, b) = domain.node(grid, i, j);
                let jac = jacobian(a, b);
                for r in 0..2 {
                    for c in 0..2 {
                        lo[r][c] = lo[r][c].min(jac[r][c]);
                        hi[r][c] = hi[r][c].max(jac[r][c]);
                    }
                }
            }
        }
        Self { lo, hi }
    }

    fn diagonal_sup(&self, r: usize) -> f64 {
        self.lo[r][r].abs().max(self.hi[r][r].abs())
    }

    /// Supremum bound for one row of the Jacobian of `ḡ` at gain `k`.
    fn row_suprema(&self, r: usize, k: f64) -> [f64; 2] {
        let mut out = [0.0; 2];
        for c in 0..2 {
            let shift = if r == c { 1.0 } else { 0.0 };
            let lo = shift + self.lo[r][c] / k;
            let hi = shift + self.hi[r][c] / k;
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo).abs();
            out[c] = mid.abs() + CONTRACTION_SAFETY * half;
        }
        out
    }

    fn estimate(&self, gains: Gains) -> ContractionEstimate {
        let rows = [self.row_suprema(0, gains.k1), self.row_suprema(1, gains.k2)];
        let norm = rows.iter().map(|r| r[0] + r[1]).fold(0.0, f64::max);
        ContractionEstimate {
            derivative_suprema: rows,
            norm,
        }
    }
}

/// Contraction estimate of `ḡ = x + diag(1/k₁, 1/k₂)·F(x)` for a vector
/// field whose Jacobian is `jacobian`. The Jacobian of `ḡ` is
/// `I + diag(1/k)·J_F`, so `F ≡ 0` gives norm exactly 1.
pub fn estimate_contraction_with<J>(jacobian: J, domain: &DomainBox, gains: Gains, grid: usize) -> ContractionEstimate
where
    J: Fn(f64, f64) -> [[f64; 2]; 2],
{
    JacobianRanges::sample(jacobian, domain, grid.max(2)).estimate(gains)
}

pub fn estimate_contraction(params: &SimplexParams, domain: &DomainBox, gains: Gains, grid: usize) -> ContractionEstimate {
    let p = *params;
    estimate_contraction_with(
        move |a, b| edge::reduced_jacobian(&AngleSlice::unchecked(a, b, p)),
        domain,
        gains,
        grid,
    )
}

/// The default gains `kᵢ = 2 · sup|dᵢ|` over the box.
pub fn default_gains(params: &SimplexParams, domain: &DomainBox, grid: usize) -> Gains {
    let p = *params;
    let ranges = JacobianRanges::sample(
        move |a, b| edge::reduced_jacobian(&AngleSlice::unchecked(a, b, p)),
        domain,
        grid.max(2),
    );
    gains_from(&ranges, 2.0)
}

fn gains_from(ranges: &JacobianRanges, factor: f64) -> Gains {
    let pick = |s: f64| if s > 0.0 { factor * s } else { 1.0 };
    Gains {
        k1: pick(ranges.diagonal_sup(0)),
        k2: pick(ranges.diagonal_sup(1)),
    }
}

/// Searches `kᵢ = c · sup|dᵢ|` over a fixed schedule of `c` for gains that
/// make `ḡ` a contraction on `domain`. Rows of the Jacobian of `ḡ` depend on
/// one gain each, so both are tuned independently.
pub fn select_gains(params: &SimplexParams, domain: &DomainBox, grid: usize) -> Result<(Gains, ContractionEstimate)> {
    let p = *params;
    let ranges = JacobianRanges::sample(
        move |a, b| edge::reduced_jacobian(&AngleSlice::unchecked(a, b, p)),
        domain,
        grid.max(2),
    );
    let best_for_row = |r: usize| {
        let s = ranges.diagonal_sup(r);
        GAIN_SCHEDULE
            .iter()
            .map(|c| if s > 0.0 { c * s } else { 1.0 })
            .map(|k| {
                let row = ranges.row_suprema(r, k);
                (k, row[0] + row[1])
            })
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty schedule")
    };
    let (k1, _) = best_for_row(0);
    let (k2, _) = best_for_row(1);
    let gains = Gains { k1, k2 };
    let est = ranges.estimate(gains);
    if est.is_contraction() {
        Ok((gains, est))
    } else {
        Err(Error::NoContraction { best_norm: est.norm })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapStep {
    pub point: (f64, f64),
    /// The raw image left the box and was projected back.
    pub clamped: bool,
}

/// One application of `ḡ(α₁, β₁) = (α₁ + f₁/k₁, β₁ + f₂/k₂)`, projected onto
/// the box.
pub fn contraction_map(point: (f64, f64), params: &SimplexParams, gains: Gains, domain: &DomainBox) -> MapStep {
    let s = AngleSlice::unchecked(point.0, point.1, *params);
    let raw = (point.0 + edge::f1(&s) / gains.k1, point.1 + edge::f2(&s) / gains.k2);
    let (point, clamped) = domain.clamp(raw);
    MapStep { point, clamped }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Solved,
    NoProperSolution,
    /// Only the improper root `(π/a, 0)` exists.
    BoundarySolution,
    Diverged,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Solved => "Solved",
            SolveStatus::NoProperSolution => "NoProperSolution",
            SolveStatus::BoundarySolution => "BoundarySolution",
            SolveStatus::Diverged => "Diverged",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Properness {
    pub angles_positive: bool,
    pub det_negative: bool,
    pub all_vertices_outer: bool,
    pub gram_signs_negative: bool,
}

impl Properness {
    pub fn is_proper(&self) -> bool {
        self.angles_positive && self.det_negative && self.all_vertices_outer && self.gram_signs_negative
    }
}

/// The two pairs of identified edge lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeLengths {
    pub d01: f64,
    pub d02: f64,
    pub d03: f64,
    pub d13: f64,
}

/// Geometric checks on the simplex built from a root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub det_b: f64,
    pub signature: Signature,
    pub vertex_classes: [Option<VertexClass>; 4],
    pub gram_signs_negative: bool,
    pub edge_lengths: Option<EdgeLengths>,
}

pub fn verify(angles: &DihedralAngles) -> (Verification, Properness) {
    let b = build_coxeter_schlafli(angles);
    let det_b = metric::determinant(&b);
    let sig = metric::signature(&b);
    let vertex_classes: [Option<VertexClass>; 4] = std::array::from_fn(|i| classify_vertex(&b, i).ok());
    let gram = metric::inverse(&b).ok();
    let gram_signs_negative = gram.as_ref().map(gram_sign_check).unwrap_or(false);
    let edge_lengths = gram.as_ref().and_then(|g| {
        let d = |i, j| metric::projective_distance(g, i, j, Geometry::Hyperbolic).ok();
        Some(EdgeLengths {
            d01: d(0, 1)?,
            d02: d(0, 2)?,
            d03: d(0, 3)?,
            d13: d(1, 3)?,
        })
    });
    let properness = Properness {
        angles_positive: angles.all_positive(),
        det_negative: det_b < 0.0,
        all_vertices_outer: vertex_classes.iter().all(|v| *v == Some(VertexClass::Outer)),
        gram_signs_negative,
    };
    (
        Verification {
            det_b,
            signature: sig,
            vertex_classes,
            gram_signs_negative,
            edge_lengths,
        },
        properness,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub params: SimplexParams,
    pub class: RealizationClass,
    pub status: SolveStatus,
    pub method: Method,
    /// Present for `Solved` and `BoundarySolution`.
    pub angles: Option<DihedralAngles>,
    pub residual_f1: f64,
    pub residual_f2: f64,
    pub iterations: usize,
    pub gains: Option<Gains>,
    /// Max-norm Lipschitz bound of `ḡ` on the certified neighbourhood of the
    /// root (or on the whole box when no neighbourhood certifies).
    pub contraction_norm_estimate: f64,
    pub properness: Option<Properness>,
    pub verification: Option<Verification>,
    /// Roots that were found and rejected, as `(α₁, β₁)`.
    pub improper_roots: Vec<(f64, f64)>,
}

impl SolveReport {
    pub fn max_residual(&self) -> f64 {
        self.residual_f1.abs().max(self.residual_f2.abs())
    }

    pub fn is_solved(&self) -> bool {
        self.status == SolveStatus::Solved
    }

    fn empty(params: SimplexParams, class: RealizationClass, method: Method, status: SolveStatus) -> Self {
        Self {
            params,
            class,
            status,
            method,
            angles: None,
            residual_f1: f64::NAN,
            residual_f2: f64::NAN,
            iterations: 0,
            gains: None,
            contraction_norm_estimate: f64::NAN,
            properness: None,
            verification: None,
            improper_roots: Vec::new(),
        }
    }
}

fn residuals(params: &SimplexParams, (a, b): (f64, f64)) -> (f64, f64) {
    let s = AngleSlice::unchecked(a, b, *params);
    (edge::f1(&s), edge::f2(&s))
}

fn max_abs_residual(params: &SimplexParams, x: (f64, f64)) -> f64 {
    let (r1, r2) = residuals(params, x);
    r1.abs().max(r2.abs())
}

/// Solves the edge conditions for `params` (normalized first).
pub fn solve(params: &SimplexParams, config: &SolverConfig) -> Result<SolveReport> {
    config.validate()?;
    let params = normalize_params(params.a(), params.b())?;
    let class = classify_realization(&params)?;
    if !matches!(class, RealizationClass::HyperbolicOuter | RealizationClass::NoProperSolution) {
        return Err(Error::InvalidClass(class));
    }

    match edge::f2_boundary_sign(&params)? {
        Sign::Negative => {
            let mut r = SolveReport::empty(params, class, config.method, SolveStatus::NoProperSolution);
            let (r1, r2) = residuals(&params, (PI / params.a() as f64, 0.0));
            r.residual_f1 = r1;
            r.residual_f2 = r2;
            return Ok(r);
        }
        Sign::Zero => {
            let corner = (PI / params.a() as f64, 0.0);
            let mut r = SolveReport::empty(params, class, config.method, SolveStatus::BoundarySolution);
            let (r1, r2) = residuals(&params, corner);
            r.residual_f1 = r1;
            r.residual_f2 = r2;
            r.angles = Some(DihedralAngles::from_reduced(corner.0, corner.1, &params));
            r.improper_roots.push(corner);
            return Ok(r);
        }
        Sign::Positive => {}
    }

    let domain = domain_for(&params)?;
    let gains = match (config.k1, config.k2) {
        (Some(k1), Some(k2)) => Gains { k1, k2 },
        (k1, k2) => {
            let auto = default_gains(&params, &domain, config.contraction_grid);
            Gains {
                k1: k1.unwrap_or(auto.k1),
                k2: k2.unwrap_or(auto.k2),
            }
        }
    };

    let mut report = SolveReport::empty(params, class, config.method, SolveStatus::Diverged);
    report.gains = Some(gains);

    let found = match config.method {
        Method::FixedPoint => fixed_point(&params, &domain, gains, config, true),
        Method::Newton => newton(&params, &domain, domain.center(), config.max_iterations, config),
        Method::Auto => {
            let fp = fixed_point(&params, &domain, gains, config, false);
            let start = fp.point;
            let polished = newton(&params, &domain, start, NEWTON_POLISH_STEPS, config);
            IterationOutcome {
                point: polished.point,
                iterations: fp.iterations + polished.iterations,
                converged: polished.converged,
            }
        }
        Method::GridOracle => {
            let cands = grid_oracle(&params, &domain, config.oracle_resolution)?;
            let proper: Vec<_> = cands
                .iter()
                .filter(|c| {
                    let ang = DihedralAngles::from_reduced(c.alpha1, c.beta1, &params);
                    verify(&ang).1.is_proper()
                })
                .collect();
            match proper.first() {
                Some(c) => IterationOutcome {
                    point: (c.alpha1, c.beta1),
                    iterations: 0,
                    converged: c.residual <= config.tolerance,
                },
                None => {
                    report.improper_roots = cands.iter().map(|c| (c.alpha1, c.beta1)).collect();
                    report.status = if cands.is_empty() {
                        SolveStatus::Diverged
                    } else {
                        SolveStatus::NoProperSolution
                    };
                    return Ok(report);
                }
            }
        }
    };

    let (r1, r2) = residuals(&params, found.point);
    report.residual_f1 = r1;
    report.residual_f2 = r2;
    report.iterations = found.iterations;

    if !found.converged || r1.abs().max(r2.abs()) > config.tolerance {
        report.contraction_norm_estimate =
            estimate_contraction(&params, &domain, gains, config.contraction_grid).norm;
        return Ok(report);
    }

    let angles = DihedralAngles::from_reduced(found.point.0, found.point.1, &params);
    let (verification, properness) = verify(&angles);
    report.properness = Some(properness);
    report.verification = Some(verification);
    report.contraction_norm_estimate = certify_contraction(&params, &domain, found.point, gains, config);

    if properness.is_proper() && domain.strictly_contains(found.point) {
        report.status = SolveStatus::Solved;
        report.angles = Some(angles);
    } else {
        report.status = SolveStatus::NoProperSolution;
        report.improper_roots.push(found.point);
    }

    if params.a() == 2 && params.b() == 3 {
        let solution = found.point;
        let scan = grid_oracle(&params, &full_box(&params), config.oracle_resolution)?;
        for c in scan {
            let p = (c.alpha1, c.beta1);
            let same = (p.0 - solution.0).abs().max((p.1 - solution.1).abs()) < 1e-6;
            let known = report
                .improper_roots
                .iter()
                .any(|q| (p.0 - q.0).abs().max((p.1 - q.1).abs()) < 1e-4);
            if !same && !known {
                report.improper_roots.push(p);
            }
        }
    }
    Ok(report)
}

struct IterationOutcome {
    point: (f64, f64),
    iterations: usize,
    converged: bool,
}

/// Iterates `ḡ` from the box center. With `require_residual` the stop also
/// waits for the residual bound; otherwise it stops on the step size alone.
fn fixed_point(
    params: &SimplexParams,
    domain: &DomainBox,
    gains: Gains,
    config: &SolverConfig,
    require_residual: bool,
) -> IterationOutcome {
    let mut x = domain.center();
    let mut clamp_streak = 0;
    for it in 1..=config.max_iterations {
        let step = contraction_map(x, params, gains, domain);
        let moved = (step.point.0 - x.0).abs().max((step.point.1 - x.1).abs());
        x = step.point;
        clamp_streak = if step.clamped { clamp_streak + 1 } else { 0 };
        if clamp_streak > CLAMP_STREAK_LIMIT {
            return IterationOutcome {
                point: x,
                iterations: it,
                converged: false,
            };
        }
        if moved < config.angle_tolerance
            && (!require_residual || max_abs_residual(params, x) <= config.tolerance)
        {
            return IterationOutcome {
                point: x,
                iterations: it,
                converged: true,
            };
        }
    }
    IterationOutcome {
        point: x,
        iterations: config.max_iterations,
        converged: false,
    }
}

fn fd_jacobian(params: &SimplexParams, (a, b): (f64, f64)) -> [[f64; 2]; 2] {
    let h = NEWTON_FD_STEP;
    let (f1ap, f2ap) = residuals(params, (a + h, b));
    let (f1am, f2am) = residuals(params, (a - h, b));
    let (f1bp, f2bp) = residuals(params, (a, b + h));
    let (f1bm, f2bm) = residuals(params, (a, b - h));
    [
        [(f1ap - f1am) / (2.0 * h), (f1bp - f1bm) / (2.0 * h)],
        [(f2ap - f2am) / (2.0 * h), (f2bp - f2bm) / (2.0 * h)],
    ]
}

/// Newton iteration with a finite-difference Jacobian, projected onto the
/// box. Converged means residual within tolerance and the last step below
/// the angle tolerance (or the residual has hit rounding level).
fn newton(
    params: &SimplexParams,
    domain: &DomainBox,
    start: (f64, f64),
    max_steps: usize,
    config: &SolverConfig,
) -> IterationOutcome {
    let mut x = start;
    for it in 1..=max_steps {
        let (r1, r2) = residuals(params, x);
        let j = fd_jacobian(params, x);
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return IterationOutcome {
                point: x,
                iterations: it,
                converged: false,
            };
        }
        let da = (j[1][1] * r1 - j[0][1] * r2) / det;
        let db = (-j[1][0] * r1 + j[0][0] * r2) / det;
        let (next, _) = domain.clamp((x.0 - da, x.1 - db));
        let moved = (next.0 - x.0).abs().max((next.1 - x.1).abs());
        x = next;
        let res = max_abs_residual(params, x);
        if res <= config.tolerance && (moved < config.angle_tolerance || res < 1e-15) {
            return IterationOutcome {
                point: x,
                iterations: it,
                converged: true,
            };
        }
    }
    let res = max_abs_residual(params, x);
    IterationOutcome {
        point: x,
        iterations: max_steps,
        converged: res <= config.tolerance,
    }
}

/// Finds a neighbourhood of `root` on which `ḡ` is a contraction, shrinking
/// from 5% of the box until the gain search succeeds, and returns its norm.
/// Falls back to the whole-box estimate for the iteration gains.
fn certify_contraction(
    params: &SimplexParams,
    domain: &DomainBox,
    root: (f64, f64),
    gains: Gains,
    config: &SolverConfig,
) -> f64 {
    let mut half = (0.05 * domain.width(), 0.05 * domain.height());
    for _ in 0..30 {
        let local = domain.neighbourhood(root, half.0, half.1);
        if let Ok((_, est)) = select_gains(params, &local, config.contraction_grid.min(64)) {
            return est.norm;
        }
        half = (0.5 * half.0, 0.5 * half.1);
    }
    estimate_contraction(params, domain, gains, config.contraction_grid).norm
}

/// Neighbourhood of `root` certified as a contraction region, with its gains
/// and estimate.
pub fn contraction_neighbourhood(
    params: &SimplexParams,
    root: (f64, f64),
    grid: usize,
) -> Result<(DomainBox, Gains, ContractionEstimate)> {
    let domain = domain_for(params)?;
    let mut half = (0.05 * domain.width(), 0.05 * domain.height());
    let mut best = f64::INFINITY;
    for _ in 0..30 {
        let local = domain.neighbourhood(root, half.0, half.1);
        match select_gains(params, &local, grid) {
            Ok((g, est)) => return Ok((local, g, est)),
            Err(Error::NoContraction { best_norm }) => best = best.min(best_norm),
            Err(e) => return Err(e),
        }
        half = (0.5 * half.0, 0.5 * half.1);
    }
    Err(Error::NoContraction { best_norm: best })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootCandidate {
    pub alpha1: f64,
    pub beta1: f64,
    pub residual: f64,
}

/// Root candidates of `f₁ = f₂ = 0` in `domain`, found without any
/// derivative information.
///
/// The box is cut into `resolution × resolution` cells. In every cell where
/// both `f₁` and `f₂` change sign over the corners, the `f₁ = 0` curve is
/// followed by bisection on `β₁`-slices and `f₂` is bisected along it (or the
/// roles are swapped when the curve leaves the cell's neighbourhood).
/// Candidates with residual below `1e-9` are returned, merged within `1e-7`.
pub fn grid_oracle(params: &SimplexParams, domain: &DomainBox, resolution: usize) -> Result<Vec<RootCandidate>> {
    if resolution < 50 {
        return Err(Error::InvalidParams(format!(
            "oracle resolution must be at least 50, got {resolution}"
        )));
    }
    let nodes = resolution + 1;
    let mut values = vec![(0.0, 0.0); nodes * nodes];
    for i in 0..nodes {
        for j in 0..nodes {
            values[i * nodes + j] = residuals(params, domain.node(nodes, i, j));
        }
    }
    let da = domain.width() / resolution as f64;
    let db = domain.height() / resolution as f64;

    let mut found: Vec<RootCandidate> = Vec::new();
    for i in 0..resolution {
        for j in 0..resolution {
            let corners = [
                values[i * nodes + j],
                values[(i + 1) * nodes + j],
                values[i * nodes + j + 1],
                values[(i + 1) * nodes + j + 1],
            ];
            if !straddles(corners.iter().map(|c| c.0)) || !straddles(corners.iter().map(|c| c.1)) {
                continue;
            }
            let (a0, b0) = domain.node(nodes, i, j);
            let cell = Cell {
                a0,
                a1: a0 + da,
                b0,
                b1: b0 + db,
                wa: da,
                wb: db,
            };
            let Some(root) = refine_cell(params, domain, &cell) else {
                continue;
            };
            let residual = max_abs_residual(params, root);
            if residual >= ORACLE_RESIDUAL || !domain.contains(root) {
                continue;
            }
            let cand = RootCandidate {
                alpha1: root.0,
                beta1: root.1,
                residual,
            };
            match found
                .iter_mut()
                .find(|c| (c.alpha1 - cand.alpha1).abs().max((c.beta1 - cand.beta1).abs()) < ROOT_MERGE_TOL)
            {
                Some(existing) if existing.residual > cand.residual => *existing = cand,
                Some(_) => {}
                None => found.push(cand),
            }
        }
    }
    found.sort_by(|x, y| x.alpha1.total_cmp(&y.alpha1).then(x.beta1.total_cmp(&y.beta1)));
    Ok(found)
}

struct Cell {
    a0: f64,
    a1: f64,
    b0: f64,
    b1: f64,
    wa: f64,
    wb: f64,
}

fn straddles(vals: impl Iterator<Item = f64>) -> bool {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in vals {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    lo <= 0.0 && hi >= 0.0
}

fn refine_cell(params: &SimplexParams, domain: &DomainBox, cell: &Cell) -> Option<(f64, f64)> {
    let f1 = |a: f64, b: f64| residuals(params, (a, b)).0;
    let f2 = |a: f64, b: f64| residuals(params, (a, b)).1;

    // f₁ = 0 traced as α₁(β₁), then f₂ bisected along it
    let alo = (cell.a0 - cell.wa).max(domain.alpha1_lo);
    let ahi = (cell.a1 + cell.wa).min(domain.alpha1_hi);
    let alpha_of = |b: f64| bisect(|a| f1(a, b), alo, ahi);
    if let Some(b) = bisect_along(|b| alpha_of(b).map(|a| f2(a, b)), cell.b0, cell.b1) {
        if let Some(a) = alpha_of(b) {
            return Some((a, b));
        }
    }

    // f₂ = 0 traced as β₁(α₁), then f₁ bisected along it
    let blo = (cell.b0 - cell.wb).max(domain.beta1_lo);
    let bhi = (cell.b1 + cell.wb).min(domain.beta1_hi);
    let beta_of = |a: f64| bisect(|b| f2(a, b), blo, bhi);
    let a = bisect_along(|a| beta_of(a).map(|b| f1(a, b)), cell.a0, cell.a1)?;
    beta_of(a).map(|b| (a, b))
}

/// Plain bisection on `[lo, hi]`; `None` without a sign change.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return None;
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Bisection for a function that is only defined where the inner root exists.
fn bisect_along<F: Fn(f64) -> Option<f64>>(g: F, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut glo = g(lo)?;
    let ghi = g(hi)?;
    if glo == 0.0 {
        return Some(lo);
    }
    if ghi == 0.0 {
        return Some(hi);
    }
    if glo.signum() == ghi.signum() {
        return None;
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid)?;
        if gm == 0.0 {
            return Some(mid);
        }
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
