//! Frames for the Hilbert-Schmidt space: families of linear maps
//! `G_j: C^n -> C2(C^m)` with frame operator `S = sum_j G_j^* G_j`,
//! together with g-frames and ordinary frames as special cases.
//!
//! Each map is stored through its coefficient matrix `C_j` of shape
//! `m^2 x n`, acting as `G_j f = unvec(C_j f)` with column-major
//! vectorization. Duality follows the reconstruction convention
//! `sum_j G_j^* Gamma_j = id`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::matrix::{ComplexMatrix, HermitianFn, PD_RTOL};
use crate::rng::{gaussian_matrix, substream, Domain};
use crate::subset::SubsetMask;
use crate::vector_frame::{DualityCheck, VectorFrame};
use crate::Complex64;

/// Attempts before giving up on randomized dual construction.
const MAX_DUAL_ATTEMPTS: u32 = 32;

/// Default tolerance for accepting a reconstruction identity on `C^n`.
pub fn duality_tolerance(n: usize) -> f64 {
    1e-9 * (n as f64).sqrt()
}

/// Linear map from `C^n` into the `m x m` Hilbert-Schmidt space.
#[derive(Clone, Debug, PartialEq)]
pub struct HSOperatorMap {
    domain_dim: usize,
    target_side: usize,
    coeff: ComplexMatrix,
}

impl HSOperatorMap {
    /// Map from its `m^2 x n` coefficient matrix.
    pub fn new(domain_dim: usize, target_side: usize, coeff: ComplexMatrix) -> Result<Self> {
        if domain_dim == 0 || target_side == 0 {
            return Err(FrameError::InvalidParameter(
                "map dimensions must be positive".into(),
            ));
        }
        if coeff.shape() != (target_side * target_side, domain_dim) {
            return Err(FrameError::Dimension(format!(
                "coefficient matrix has shape {:?}, expected ({}, {})",
                coeff.shape(),
                target_side * target_side,
                domain_dim
            )));
        }
        coeff.ensure_finite("coefficient matrix")?;
        Ok(Self { domain_dim, target_side, coeff })
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn target_side(&self) -> usize {
        self.target_side
    }

    pub fn coeff(&self) -> &ComplexMatrix {
        &self.coeff
    }

    /// `G f = unvec(C f)` as an `m x m` matrix.
    pub fn apply(&self, f: &ComplexMatrix) -> Result<ComplexMatrix> {
        if f.shape() != (self.domain_dim, 1) {
            return Err(FrameError::Dimension(format!(
                "map on C^{} applied to a vector of shape {:?}",
                self.domain_dim,
                f.shape()
            )));
        }
        ComplexMatrix::unvectorize(&(&self.coeff * f), self.target_side, self.target_side)
    }

    /// Adjoint `G^* T = C^H vec(T)`, satisfying
    /// `<G^* T, f> = [T, G f]` for all `f` and `T`.
    pub fn adjoint_apply(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        if t.shape() != (self.target_side, self.target_side) {
            return Err(FrameError::Dimension(format!(
                "adjoint expects an {0} x {0} argument, got {1:?}",
                self.target_side,
                t.shape()
            )));
        }
        Ok(&self.coeff.adjoint() * &t.vectorized())
    }

    /// Operator norm of the map, `sup ||G f||_2 / ||f||`.
    pub fn op_norm(&self) -> Result<f64> {
        self.coeff.schatten_norm(f64::INFINITY)
    }

    /// Gram operator `G^* G` on `C^n`.
    pub fn gram(&self) -> ComplexMatrix {
        &self.coeff.adjoint() * &self.coeff
    }

    /// Cross Gram operator `G^* H` on `C^n` for another map `H` with the
    /// same dimensions.
    pub fn cross_gram(&self, other: &Self) -> Result<ComplexMatrix> {
        if self.domain_dim != other.domain_dim || self.target_side != other.target_side {
            return Err(FrameError::Dimension(
                "cross Gram requires maps with equal dimensions".into(),
            ));
        }
        Ok(&self.coeff.adjoint() * &other.coeff)
    }

    /// Composition `G o M` with an operator `M` on `C^n`.
    pub fn right_composed(&self, m: &ComplexMatrix) -> Result<Self> {
        if m.shape() != (self.domain_dim, self.domain_dim) {
            return Err(FrameError::Dimension(format!(
                "composition expects an {0} x {0} operator, got {1:?}",
                self.domain_dim,
                m.shape()
            )));
        }
        Self::new(self.domain_dim, self.target_side, &self.coeff * m)
    }

    /// Map scaled by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            domain_dim: self.domain_dim,
            target_side: self.target_side,
            coeff: self.coeff.scale(c),
        }
    }
}

/// Frame (or Bessel family) of Hilbert-Schmidt maps.
#[derive(Debug, Serialize, Deserialize)]
#[serde(try_from = "HsFrameWire", into = "HsFrameWire")]
pub struct HSFrame {
    domain_dim: usize,
    target_side: usize,
    maps: Vec<HSOperatorMap>,
    op_cache: OnceLock<ComplexMatrix>,
}

impl Clone for HSFrame {
    fn clone(&self) -> Self {
        let op_cache = OnceLock::new();
        if let Some(s) = self.op_cache.get() {
            let _ = op_cache.set(s.clone());
        }
        Self {
            domain_dim: self.domain_dim,
            target_side: self.target_side,
            maps: self.maps.clone(),
            op_cache,
        }
    }
}

impl PartialEq for HSFrame {
    fn eq(&self, other: &Self) -> bool {
        self.domain_dim == other.domain_dim
            && self.target_side == other.target_side
            && self.maps == other.maps
    }
}

impl HSFrame {
    pub fn new(domain_dim: usize, target_side: usize, maps: Vec<HSOperatorMap>) -> Result<Self> {
        if maps.is_empty() {
            return Err(FrameError::InvalidInput("frame must contain at least one map".into()));
        }
        for (j, g) in maps.iter().enumerate() {
            if g.domain_dim() != domain_dim || g.target_side() != target_side {
                return Err(FrameError::Dimension(format!(
                    "map {j} has dimensions ({}, {}), expected ({domain_dim}, {target_side})",
                    g.domain_dim(),
                    g.target_side()
                )));
            }
        }
        Ok(Self { domain_dim, target_side, maps, op_cache: OnceLock::new() })
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn target_side(&self) -> usize {
        self.target_side
    }

    /// Number of maps.
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn map(&self, j: usize) -> &HSOperatorMap {
        &self.maps[j]
    }

    pub fn maps(&self) -> &[HSOperatorMap] {
        &self.maps
    }

    /// Frame with every map multiplied by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            domain_dim: self.domain_dim,
            target_side: self.target_side,
            maps: self.maps.iter().map(|g| g.scaled(c)).collect(),
            op_cache: OnceLock::new(),
        }
    }

    /// Frame operator `S = sum_j G_j^* G_j`, cached after first use.
    pub fn frame_operator(&self) -> &ComplexMatrix {
        self.op_cache.get_or_init(|| {
            let mut acc = ComplexMatrix::zeros(self.domain_dim, self.domain_dim);
            for g in &self.maps {
                acc = &acc + &g.gram();
            }
            acc
        })
    }

    /// Partial frame operator `S_K = sum_{j in K} G_j^* G_j`.
    pub fn partial_operator(&self, k: &SubsetMask) -> Result<ComplexMatrix> {
        if k.len() != self.len() {
            return Err(FrameError::Dimension(format!(
                "subset over {} indices used with a frame of {} maps",
                k.len(),
                self.len()
            )));
        }
        let mut acc = ComplexMatrix::zeros(self.domain_dim, self.domain_dim);
        for (j, g) in self.maps.iter().enumerate() {
            if k.contains(j) {
                acc = &acc + &g.gram();
            }
        }
        Ok(acc)
    }

    /// Optimal frame bounds `(A, B)` as the extreme eigenvalues of `S`.
    pub fn frame_bounds(&self) -> Result<(f64, f64)> {
        let eig = self.frame_operator().hermitian_eig()?;
        Ok((eig.min_eigenvalue(), eig.max_eigenvalue()))
    }

    /// Whether the lower frame bound is above the positivity threshold
    /// `PD_RTOL * B`.
    pub fn is_frame(&self) -> Result<bool> {
        let (a, b) = self.frame_bounds()?;
        Ok(a > PD_RTOL * b)
    }

    /// Canonical dual pair `(G_j, G_j S^{-1})`.
    pub fn canonical_dual(&self) -> Result<HSDualPair> {
        let s_inv = self.frame_operator().hermitian_fn(HermitianFn::Inverse)?;
        let dual_maps = self
            .maps
            .iter()
            .map(|g| g.right_composed(&s_inv))
            .collect::<Result<Vec<_>>>()?;
        let dual = HSFrame::new(self.domain_dim, self.target_side, dual_maps)?;
        HSDualPair::new(self.clone(), dual, DualKind::Canonical)
    }

    /// Total frame energy of a vector, `sum_j ||G_j f||_2^2`.
    pub fn energy(&self, f: &ComplexMatrix) -> Result<f64> {
        let mut total = 0.0;
        for g in &self.maps {
            total += g.apply(f)?.frobenius_norm_sq();
        }
        Ok(total)
    }
}

/// Which construction produced a dual pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualKind {
    Canonical,
    Alternate,
}

/// A frame together with a verified dual.
#[derive(Clone, Debug, PartialEq)]
pub struct HSDualPair {
    frame: HSFrame,
    dual: HSFrame,
    kind: DualKind,
}

impl HSDualPair {
    /// Builds the pair, verifying the reconstruction identity within
    /// [`duality_tolerance`].
    pub fn new(frame: HSFrame, dual: HSFrame, kind: DualKind) -> Result<Self> {
        let check = is_alternate_dual_hs(&frame, &dual, duality_tolerance(frame.domain_dim()))?;
        if !check.holds {
            return Err(FrameError::NotADual {
                residual: check.residual.max(check.adjoint_residual),
                tolerance: duality_tolerance(frame.domain_dim()),
            });
        }
        Ok(Self { frame, dual, kind })
    }

    pub fn frame(&self) -> &HSFrame {
        &self.frame
    }

    pub fn dual(&self) -> &HSFrame {
        &self.dual
    }

    pub fn kind(&self) -> DualKind {
        self.kind
    }
}

/// Outcome of the randomized alternate-dual construction.
#[derive(Clone, Debug)]
pub struct AlternateDualResult {
    pub pair: HSDualPair,
    /// Dimension of the per-column perturbation space, `N m^2 - n`.
    pub null_space_dim: usize,
    /// Frobenius norm of the stacked perturbation that was added.
    pub perturbation_norm: f64,
}

impl AlternateDualResult {
    /// True when the frame admits no dual other than the canonical one.
    pub fn is_degenerate(&self) -> bool {
        self.null_space_dim == 0
    }
}

/// Checks whether `(Gamma_j)` is an alternate dual of `(G_j)`, i.e.
/// `sum_j G_j^* Gamma_j = id`. `adjoint_residual` covers the adjoint
/// identity `sum_j Gamma_j^* G_j = id`.
pub fn is_alternate_dual_hs(frame: &HSFrame, candidate: &HSFrame, tol: f64) -> Result<DualityCheck> {
    if frame.domain_dim() != candidate.domain_dim()
        || frame.target_side() != candidate.target_side()
        || frame.len() != candidate.len()
    {
        return Err(FrameError::Dimension(
            "dual candidate must match the frame in dimensions and length".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(FrameError::InvalidParameter(format!(
            "duality tolerance must be positive, got {tol}"
        )));
    }
    let n = frame.domain_dim();
    let mut synth = ComplexMatrix::zeros(n, n);
    for (g, gamma) in frame.maps().iter().zip(candidate.maps()) {
        synth = &synth + &g.cross_gram(gamma)?;
    }
    let eye = ComplexMatrix::identity(n);
    let residual = synth.distance(&eye);
    let adjoint_residual = synth.adjoint().distance(&eye);
    Ok(DualityCheck {
        holds: residual <= tol && adjoint_residual <= tol,
        residual,
        adjoint_residual,
    })
}

/// Builds an alternate dual of `frame` by perturbing the canonical dual
/// inside the null space of the synthesis constraint. `scale` sets the
/// perturbation size relative to the canonical dual's stacked norm;
/// `scale = 0` returns the canonical dual itself. When the constraint
/// admits no perturbation (`N m^2 = n`) the canonical dual is returned
/// and the result is flagged degenerate.
pub fn make_alternate_dual(frame: &HSFrame, seed: u64, scale: f64) -> Result<AlternateDualResult> {
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(FrameError::InvalidParameter(format!(
            "perturbation scale must be finite and non-negative, got {scale}"
        )));
    }
    let n = frame.domain_dim();
    let m = frame.target_side();
    let s_inv = frame.frame_operator().hermitian_fn(HermitianFn::Inverse)?;
    let dual_maps: Vec<HSOperatorMap> = frame
        .maps()
        .iter()
        .map(|g| g.right_composed(&s_inv))
        .collect::<Result<Vec<_>>>()?;
    let null_space_dim = frame.len() * m * m - n;

    if scale == 0.0 || null_space_dim == 0 {
        let dual = HSFrame::new(n, m, dual_maps)?;
        let pair = HSDualPair::new(frame.clone(), dual, DualKind::Canonical)?;
        return Ok(AlternateDualResult { pair, null_space_dim, perturbation_norm: 0.0 });
    }

    let dual_norm = dual_maps
        .iter()
        .map(|g| g.coeff().frobenius_norm_sq())
        .sum::<f64>()
        .sqrt();
    let target = scale * dual_norm;

    for attempt in 0..MAX_DUAL_ATTEMPTS {
        let raw: Vec<ComplexMatrix> = (0..frame.len())
            .map(|j| {
                let mut rng = substream(seed, Domain::DualPerturbation, attempt, j as u32);
                gaussian_matrix(&mut rng, m * m, n)
            })
            .collect();
        // Project the stacked draw onto the null space of the synthesis
        // constraint: X_j = R_j - C_j S^{-1} sum_k C_k^H R_k.
        let mut pushforward = ComplexMatrix::zeros(n, n);
        for (g, r) in frame.maps().iter().zip(&raw) {
            pushforward = &pushforward + &(&g.coeff().adjoint() * r);
        }
        let correction = &s_inv * &pushforward;
        let perturbation: Vec<ComplexMatrix> = frame
            .maps()
            .iter()
            .zip(&raw)
            .map(|(g, r)| r - &(g.coeff() * &correction))
            .collect();
        let raw_norm = raw.iter().map(|r| r.frobenius_norm_sq()).sum::<f64>().sqrt();
        let pert_norm = perturbation
            .iter()
            .map(|x| x.frobenius_norm_sq())
            .sum::<f64>()
            .sqrt();
        if pert_norm <= 1e-8 * raw_norm {
            continue;
        }
        let factor = Complex64::new(target / pert_norm, 0.0);
        let candidate_maps = dual_maps
            .iter()
            .zip(&perturbation)
            .map(|(d, x)| {
                HSOperatorMap::new(n, m, &d.coeff().clone() + &x.scale(factor))
            })
            .collect::<Result<Vec<_>>>()?;
        let candidate = HSFrame::new(n, m, candidate_maps)?;
        if !candidate.is_frame()? {
            continue;
        }
        let pair = match HSDualPair::new(frame.clone(), candidate, DualKind::Alternate) {
            Ok(pair) => pair,
            Err(_) => continue,
        };
        return Ok(AlternateDualResult { pair, null_space_dim, perturbation_norm: target });
    }
    Err(FrameError::InvalidInput(
        "alternate dual construction failed to produce a frame after retries".into(),
    ))
}

/// Embeds an ordinary frame as an HS frame with `m = 1`:
/// `G_j f = [<f, f_j>]`.
pub fn embed_vector_frame(frame: &VectorFrame) -> HSFrame {
    let n = frame.ambient_dim();
    let maps = frame
        .vectors()
        .iter()
        .map(|v| HSOperatorMap::new(n, 1, v.adjoint()).expect("shape fixed by construction"))
        .collect();
    HSFrame::new(n, 1, maps).expect("vector frame is non-empty")
}

/// Inverse of [`embed_vector_frame`]; requires `m = 1`.
pub fn extract_vector_frame(frame: &HSFrame) -> Result<VectorFrame> {
    if frame.target_side() != 1 {
        return Err(FrameError::InvalidInput(format!(
            "only frames with target side 1 correspond to vector frames, got {}",
            frame.target_side()
        )));
    }
    let vectors = frame.maps().iter().map(|g| g.coeff().adjoint()).collect();
    VectorFrame::new(frame.domain_dim(), vectors)
}

/// Frame of operators `Lambda_j: C^n -> C^{d_j}` (a g-frame).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GFrameWire", into = "GFrameWire")]
pub struct GFrame {
    domain_dim: usize,
    maps: Vec<ComplexMatrix>,
}

impl GFrame {
    /// Frame from its operator blocks; map `j` must be `d_j x n`.
    pub fn new(domain_dim: usize, maps: Vec<ComplexMatrix>) -> Result<Self> {
        if domain_dim == 0 {
            return Err(FrameError::InvalidParameter(
                "ambient dimension must be positive".into(),
            ));
        }
        if maps.is_empty() {
            return Err(FrameError::InvalidInput("frame must contain at least one map".into()));
        }
        for (j, lam) in maps.iter().enumerate() {
            if lam.cols() != domain_dim {
                return Err(FrameError::Dimension(format!(
                    "operator {j} has {} columns, expected {domain_dim}",
                    lam.cols()
                )));
            }
            lam.ensure_finite("g-frame operator")?;
        }
        Ok(Self { domain_dim, maps })
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn map(&self, j: usize) -> &ComplexMatrix {
        &self.maps[j]
    }

    /// Target dimensions `d_j`.
    pub fn dims(&self) -> Vec<usize> {
        self.maps.iter().map(|m| m.rows()).collect()
    }

    /// Frame operator `S = sum_j Lambda_j^H Lambda_j`.
    pub fn frame_operator(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.domain_dim, self.domain_dim);
        for lam in &self.maps {
            acc = &acc + &(&lam.adjoint() * lam);
        }
        acc
    }

    /// Optimal frame bounds `(A, B)`.
    pub fn frame_bounds(&self) -> Result<(f64, f64)> {
        let eig = self.frame_operator().hermitian_eig()?;
        Ok((eig.min_eigenvalue(), eig.max_eigenvalue()))
    }
}

/// Embeds a g-frame as an HS frame with `m = max d_j`: the image of `f`
/// under map `j` carries `Lambda_j f` in the leading entries of its first
/// column, so all norms and Gram operators are preserved exactly.
pub fn embed_g_frame(frame: &GFrame) -> HSFrame {
    let n = frame.domain_dim();
    let m = frame.dims().into_iter().max().expect("frame is non-empty");
    let maps = frame
        .maps
        .iter()
        .map(|lam| {
            let coeff = ComplexMatrix::from_fn(m * m, n, |row, col| {
                if row < lam.rows() {
                    lam.entry(row, col)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            HSOperatorMap::new(n, m, coeff).expect("shape fixed by construction")
        })
        .collect();
    HSFrame::new(n, m, maps).expect("g-frame is non-empty")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HsMapWire {
    coeff: Vec<Vec<[f64; 2]>>,
}

impl HsMapWire {
    fn to_matrix(&self) -> Result<ComplexMatrix> {
        let rows: Vec<Vec<Complex64>> = self
            .coeff
            .iter()
            .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        ComplexMatrix::from_rows(&rows)
    }

    fn from_matrix(m: &ComplexMatrix) -> Self {
        let coeff = m
            .to_rows()
            .into_iter()
            .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
            .collect();
        Self { coeff }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HsFrameWire {
    n: usize,
    m: usize,
    maps: Vec<HsMapWire>,
}

impl TryFrom<HsFrameWire> for HSFrame {
    type Error = FrameError;

    fn try_from(wire: HsFrameWire) -> Result<Self> {
        let maps = wire
            .maps
            .iter()
            .map(|w| HSOperatorMap::new(wire.n, wire.m, w.to_matrix()?))
            .collect::<Result<Vec<_>>>()?;
        HSFrame::new(wire.n, wire.m, maps)
    }
}

impl From<HSFrame> for HsFrameWire {
    fn from(frame: HSFrame) -> Self {
        HsFrameWire {
            n: frame.domain_dim,
            m: frame.target_side,
            maps: frame.maps.iter().map(|g| HsMapWire::from_matrix(g.coeff())).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GFrameWire {
    n: usize,
    dims: Vec<usize>,
    maps: Vec<HsMapWire>,
}

impl TryFrom<GFrameWire> for GFrame {
    type Error = FrameError;

    fn try_from(wire: GFrameWire) -> Result<Self> {
        if wire.dims.len() != wire.maps.len() {
            return Err(FrameError::Dimension(format!(
                "{} target dimensions given for {} operators",
                wire.dims.len(),
                wire.maps.len()
            )));
        }
        let maps = wire
            .maps
            .iter()
            .zip(&wire.dims)
            .enumerate()
            .map(|(j, (w, &d))| {
                let m = w.to_matrix()?;
                if m.rows() != d {
                    return Err(FrameError::Dimension(format!(
                        "operator {j} has {} rows but declares dimension {d}",
                        m.rows()
                    )));
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?;
        GFrame::new(wire.n, maps)
    }
}

impl From<GFrame> for GFrameWire {
    fn from(frame: GFrame) -> Self {
        GFrameWire {
            n: frame.domain_dim,
            dims: frame.dims(),
            maps: frame.maps.iter().map(HsMapWire::from_matrix).collect(),
        }
    }
}
