//! Small symmetric matrix algebra for the projective metric of a simplex.
//!
//! Everything here works on fixed 4×4 (and, for vertex submatrices, 3×3)
//! arrays. Determinants and minors use cofactor expansion, the inverse is the
//! adjugate over the determinant, and eigenvalues come from cyclic Jacobi
//! rotations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance below which an eigenvalue counts as zero.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-9;
/// `|det| < SINGULAR_TOL * max|entry|^4` makes a matrix singular.
pub const SINGULAR_TOL: f64 = 1e-12;
/// Slack allowed on the arccos/arccosh argument before it is a domain error.
pub const DISTANCE_CLAMP_TOL: f64 = 1e-9;

const SYMMETRY_TOL: f64 = 1e-12;

/// A real symmetric 4×4 matrix. Houses both the Coxeter-Schläfli matrix of a
/// simplex and its inverse, the vertex Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix4 {
    entries: [[f64; 4]; 4],
}

impl SymMatrix4 {
    /// Checks symmetry and stores the matrix with the upper triangle mirrored
    /// onto the lower one.
    pub fn new(entries: [[f64; 4]; 4]) -> Result<Self> {
        let scale = max_abs(&entries).max(1.0);
        for i in 0..4 {
            for j in (i + 1)..4 {
                if (entries[i][j] - entries[j][i]).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::InvalidParams(format!(
                        "matrix is not symmetric at ({i},{j}): {} vs {}",
                        entries[i][j], entries[j][i]
                    )));
                }
            }
        }
        Ok(Self::from_upper(entries))
    }

    /// Builds a symmetric matrix from the upper triangle (diagonal included).
    pub fn from_upper(entries: [[f64; 4]; 4]) -> Self {
        let mut e = entries;
        for i in 0..4 {
            for j in 0..i {
                e[i][j] = e[j][i];
            }
        }
        Self { entries: e }
    }

    pub fn identity() -> Self {
        Self::diagonal([1.0; 4])
    }

    pub fn diagonal(d: [f64; 4]) -> Self {
        let mut e = [[0.0; 4]; 4];
        for i in 0..4 {
            e[i][i] = d[i];
        }
        Self { entries: e }
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn max_abs_entry(&self) -> f64 {
        max_abs(&self.entries)
    }

    /// The 3×3 submatrix obtained by deleting row and column `i`.
    pub fn vertex_submatrix(&self, i: usize) -> [[f64; 3]; 3] {
        let keep: Vec<usize> = (0..4).filter(|&k| k != i).collect();
        let mut sub = [[0.0; 3]; 3];
        for (r, &kr) in keep.iter().enumerate() {
            for (c, &kc) in keep.iter().enumerate() {
                sub[r][c] = self.entries[kr][kc];
            }
        }
        sub
    }

    /// `pᵀ · self · p` for an arbitrary 4×4 `p`.
    pub fn congruence(&self, p: &[[f64; 4]; 4]) -> Self {
        let mut tmp = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                tmp[i][j] = (0..4).map(|k| self.entries[i][k] * p[k][j]).sum();
            }
        }
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in i..4 {
                out[i][j] = (0..4).map(|k| p[k][i] * tmp[k][j]).sum();
            }
        }
        Self::from_upper(out)
    }

    pub fn mul(&self, other: &SymMatrix4) -> [[f64; 4]; 4] {
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = (0..4).map(|k| self.entries[i][k] * other.entries[k][j]).sum();
            }
        }
        out
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        symmetric_eigenvalues(self.entries)
    }
}

impl fmt::Display for SymMatrix4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            writeln!(
                f,
                "[{:>12.8} {:>12.8} {:>12.8} {:>12.8}]",
                row[0], row[1], row[2], row[3]
            )?;
        }
        Ok(())
    }
}

/// Inertia of a symmetric form: numbers of positive, negative and zero
/// eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub const fn new(positive: usize, negative: usize, zero: usize) -> Self {
        Self {
            positive,
            negative,
            zero,
        }
    }

    pub fn dimension(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    /// `(+,+,+,-)`.
    pub fn is_hyperbolic(&self) -> bool {
        *self == Signature::new(3, 1, 0)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positive, self.negative, self.zero)
    }
}

/// Row and column selection for a minor of a 4×4 matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorSpec {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl MinorSpec {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        if rows.is_empty() || rows.len() != cols.len() {
            return Err(Error::InvalidParams(format!(
                "minor needs equal, non-zero row and column counts (got {} and {})",
                rows.len(),
                cols.len()
            )));
        }
        for idx in [&rows, &cols] {
            if idx.iter().any(|&k| k > 3) || idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParams(format!(
                    "minor indices must be strictly increasing within 0..4: {idx:?}"
                )));
            }
        }
        Ok(Self { rows, cols })
    }

    /// Principal minor on the given indices.
    pub fn principal(indices: Vec<usize>) -> Result<Self> {
        Self::new(indices.clone(), indices)
    }

    /// The principal minor deleting row and column `i`.
    pub fn deleting(i: usize) -> Self {
        let idx: Vec<usize> = (0..4).filter(|&k| k != i).collect();
        Self {
            rows: idx.clone(),
            cols: idx,
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Complementary row and column index lists (may be empty).
    pub fn complement(&self) -> (Vec<usize>, Vec<usize>) {
        let rows = (0..4).filter(|k| !self.rows.contains(k)).collect();
        let cols = (0..4).filter(|k| !self.cols.contains(k)).collect();
        (rows, cols)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Geometry {
    Elliptic,
    Hyperbolic,
}

impl Geometry {
    fn name(self) -> &'static str {
        match self {
            Geometry::Elliptic => "elliptic",
            Geometry::Hyperbolic => "hyperbolic",
        }
    }
}

pub fn determinant(m: &SymMatrix4) -> f64 {
    let all = [0, 1, 2, 3];
    det_indexed(&m.entries, &all, &all)
}

pub fn minor(m: &SymMatrix4, spec: &MinorSpec) -> f64 {
    det_indexed(&m.entries, &spec.rows, &spec.cols)
}

pub fn singularity_threshold(m: &SymMatrix4) -> f64 {
    SINGULAR_TOL * m.max_abs_entry().powi(4)
}

/// Inverse through the adjugate.
pub fn inverse(m: &SymMatrix4) -> Result<SymMatrix4> {
    let det = determinant(m);
    let threshold = singularity_threshold(m);
    if !(det.abs() >= threshold) || det == 0.0 {
        return Err(Error::SingularMatrix { det, threshold });
    }
    let mut inv = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            // inv[i][j] = C[j][i] / det with C the cofactor matrix
            let rows: Vec<usize> = (0..4).filter(|&k| k != j).collect();
            let cols: Vec<usize> = (0..4).filter(|&k| k != i).collect();
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            inv[i][j] = sign * det_indexed(&m.entries, &rows, &cols) / det;
        }
    }
    Ok(SymMatrix4::from_upper(inv))
}

pub fn signature(m: &SymMatrix4) -> Signature {
    signature_of(m.entries)
}

/// Inertia of an N×N symmetric array; eigenvalues with
/// `|λ| < 1e-9 * max|entry|` count as zero.
pub fn signature_of<const N: usize>(entries: [[f64; N]; N]) -> Signature {
    let scale = entries
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let tol = ZERO_EIGENVALUE_TOL * scale;
    let mut sig = Signature::new(0, 0, 0);
    for lambda in symmetric_eigenvalues(entries) {
        if lambda.abs() <= tol {
            sig.zero += 1;
        } else if lambda > 0.0 {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
    }
    sig
}

/// Both sides of the complementary-minor identity
///
/// ```text
/// minor(m; I, J) = det(m) · minor(m⁻¹; I', J') · σ
/// ```
///
/// where `I'`, `J'` are the complementary index sets and `σ` is the product of
/// the signs of the permutations `(I, I')` and `(J, J')`.
pub fn complementary_minor_identity(m: &SymMatrix4, spec: &MinorSpec) -> Result<(f64, f64)> {
    let inv = inverse(m)?;
    let lhs = minor(m, spec);
    let (crow, ccol) = spec.complement();
    let comp = if crow.is_empty() {
        1.0
    } else {
        det_indexed(&inv.entries, &crow, &ccol)
    };
    let sigma = permutation_sign(spec.rows.iter().chain(crow.iter()).copied())
        * permutation_sign(spec.cols.iter().chain(ccol.iter()).copied());
    Ok((lhs, determinant(m) * comp * sigma))
}

/// Projective distance between vertices `i` and `j` read off a Gram matrix:
/// `arccos(a_ij / √(a_ii a_jj))` (elliptic) or
/// `arccosh(-a_ij / √(a_ii a_jj))` (hyperbolic).
pub fn projective_distance(gram: &SymMatrix4, i: usize, j: usize, geometry: Geometry) -> Result<f64> {
    if i > 3 || j > 3 {
        return Err(Error::InvalidParams(format!("vertex index out of range: ({i},{j})")));
    }
    if i == j {
        return Ok(0.0);
    }
    let norm = gram.get(i, i) * gram.get(j, j);
    if !(norm > 0.0) {
        return Err(Error::DomainError {
            argument: norm,
            geometry: geometry.name(),
        });
    }
    let ratio = gram.get(i, j) / norm.sqrt();
    match geometry {
        Geometry::Elliptic => {
            if ratio.abs() > 1.0 + DISTANCE_CLAMP_TOL {
                return Err(Error::DomainError {
                    argument: ratio,
                    geometry: geometry.name(),
                });
            }
            Ok(ratio.clamp(-1.0, 1.0).acos())
        }
        Geometry::Hyperbolic => {
            let arg = -ratio;
            if arg < 1.0 - DISTANCE_CLAMP_TOL || arg.is_nan() {
                return Err(Error::DomainError {
                    argument: arg,
                    geometry: geometry.name(),
                });
            }
            Ok(arg.max(1.0).acosh())
        }
    }
}

/// Eigenvalues of a symmetric N×N array by cyclic Jacobi rotations, sorted
/// ascending.
pub fn symmetric_eigenvalues<const N: usize>(entries: [[f64; N]; N]) -> [f64; N] {
    let mut a = entries;
    for _sweep in 0..64 {
        let off: f64 = (0..N)
            .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let total: f64 = a.iter().flat_map(|r| r.iter()).map(|v| v * v).sum();
        if off <= f64::EPSILON * f64::EPSILON * total || off == 0.0 {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig = [0.0; N];
    for i in 0..N {
        eig[i] = a[i][i];
    }
    eig.sort_by(|x, y| x.total_cmp(y));
    eig
}

fn max_abs(entries: &[[f64; 4]; 4]) -> f64 {
    entries
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Determinant of the submatrix on `rows × cols`, by cofactor expansion along
/// the first selected row.
fn det_indexed(e: &[[f64; 4]; 4], rows: &[usize], cols: &[usize]) -> f64 {
    match rows.len() {
        0 => 1.0,
        1 => e[rows[0]][cols[0]],
        2 => e[rows[0]][cols[0]] * e[rows[1]][cols[1]] - e[rows[0]][cols[1]] * e[rows[1]][cols[0]],
        n => {
            let r0 = rows[0];
            let rest = &rows[1..];
            let mut sum = 0.0;
            let mut sub_cols = Vec::with_capacity(n - 1);
            for (k, &c) in cols.iter().enumerate() {
                let entry = e[r0][c];
                if entry == 0.0 {
                    continue;
                }
                sub_cols.clear();
                sub_cols.extend(cols.iter().copied().filter(|&x| x != c));
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sum += sign * entry * det_indexed(e, rest, &sub_cols);
            }
            sum
        }
    }
}

fn permutation_sign(perm: impl Iterator<Item = usize>) -> f64 {
    let p: Vec<usize> = perm.collect();
    let inversions = (0..p.len())
        .flat_map(|i| ((i + 1)..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}
