//! Ordinary frames for `C^n`: finite sequences of vectors with frame
//! operator `S = sum_j f_j f_j^H`, canonical duals `S^{-1} f_j`, and
//! partial frame operators over index subsets.

use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::matrix::{ComplexMatrix, HermitianFn, PD_RTOL};
use crate::subset::SubsetMask;
use crate::Complex64;

/// Frame (or Bessel sequence) of column vectors in `C^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorFrameWire", into = "VectorFrameWire")]
pub struct VectorFrame {
    ambient_dim: usize,
    vectors: Vec<ComplexMatrix>,
}

/// Result of a dual-pair verification: the reconstruction residual
/// `||sum_j f_j g_j^H - I||_F` and its adjoint counterpart.
#[derive(Clone, Copy, Debug)]
pub struct DualityCheck {
    pub holds: bool,
    pub residual: f64,
    pub adjoint_residual: f64,
}

impl VectorFrame {
    /// Frame from its vectors. All must be `n x 1`.
    pub fn new(ambient_dim: usize, vectors: Vec<ComplexMatrix>) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(FrameError::InvalidParameter(
                "ambient dimension must be positive".into(),
            ));
        }
        if vectors.is_empty() {
            return Err(FrameError::InvalidInput("frame must contain at least one vector".into()));
        }
        for (j, v) in vectors.iter().enumerate() {
            if v.shape() != (ambient_dim, 1) {
                return Err(FrameError::Dimension(format!(
                    "frame vector {j} has shape {:?}, expected ({ambient_dim}, 1)",
                    v.shape()
                )));
            }
            v.ensure_finite("frame vector")?;
        }
        Ok(Self { ambient_dim, vectors })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Number of frame vectors.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vector(&self, j: usize) -> &ComplexMatrix {
        &self.vectors[j]
    }

    pub fn vectors(&self) -> &[ComplexMatrix] {
        &self.vectors
    }

    /// Frame with every vector multiplied by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            ambient_dim: self.ambient_dim,
            vectors: self.vectors.iter().map(|v| v.scale(c)).collect(),
        }
    }

    /// Analysis coefficients `c_j = <f, f_j>`.
    pub fn analysis(&self, f: &ComplexMatrix) -> Result<Vec<Complex64>> {
        self.check_vector(f)?;
        self.vectors.iter().map(|v| f.trace_inner(v)).collect()
    }

    /// Synthesis `sum_j c_j f_j`.
    pub fn synthesis(&self, coeffs: &[Complex64]) -> Result<ComplexMatrix> {
        if coeffs.len() != self.len() {
            return Err(FrameError::Dimension(format!(
                "got {} coefficients for a frame of {} vectors",
                coeffs.len(),
                self.len()
            )));
        }
        let mut acc = ComplexMatrix::zeros(self.ambient_dim, 1);
        for (c, v) in coeffs.iter().zip(&self.vectors) {
            acc = &acc + &v.scale(*c);
        }
        Ok(acc)
    }

    /// Frame operator `S = sum_j f_j f_j^H`.
    pub fn frame_operator(&self) -> ComplexMatrix {
        self.masked_operator(|_| true)
    }

    /// Partial frame operator `S_K = sum_{j in K} f_j f_j^H`.
    pub fn partial_operator(&self, k: &SubsetMask) -> Result<ComplexMatrix> {
        if k.len() != self.len() {
            return Err(FrameError::Dimension(format!(
                "subset over {} indices used with a frame of {} vectors",
                k.len(),
                self.len()
            )));
        }
        Ok(self.masked_operator(|j| k.contains(j)))
    }

    fn masked_operator(&self, keep: impl Fn(usize) -> bool) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.ambient_dim, self.ambient_dim);
        for (j, v) in self.vectors.iter().enumerate() {
            if keep(j) {
                acc = &acc + &(v * &v.adjoint());
            }
        }
        acc
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

    /// Canonical dual frame `(S^{-1} f_j)`.
    pub fn canonical_dual(&self) -> Result<VectorFrame> {
        let s_inv = self.frame_operator().hermitian_fn(HermitianFn::Inverse)?;
        let vectors = self.vectors.iter().map(|v| &s_inv * v).collect();
        VectorFrame::new(self.ambient_dim, vectors)
    }

    fn check_vector(&self, f: &ComplexMatrix) -> Result<()> {
        if f.shape() != (self.ambient_dim, 1) {
            return Err(FrameError::Dimension(format!(
                "vector of shape {:?} used with an ambient dimension of {}",
                f.shape(),
                self.ambient_dim
            )));
        }
        Ok(())
    }
}

/// Checks whether `(g_j)` is an alternate dual of `(f_j)`, i.e. whether
/// `f = sum_j <f, g_j> f_j` for all `f`. The residual is
/// `||sum_j f_j g_j^H - I||_F`; `adjoint_residual` covers the equivalent
/// reconstruction with the roles of analysis and synthesis swapped.
pub fn is_alternate_dual(
    candidate: &VectorFrame,
    frame: &VectorFrame,
    tol: f64,
) -> Result<DualityCheck> {
    if candidate.ambient_dim() != frame.ambient_dim() || candidate.len() != frame.len() {
        return Err(FrameError::Dimension(
            "dual candidate must match the frame in dimension and length".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(FrameError::InvalidParameter(format!(
            "duality tolerance must be positive, got {tol}"
        )));
    }
    let n = frame.ambient_dim();
    let mut synth = ComplexMatrix::zeros(n, n);
    let mut synth_adj = ComplexMatrix::zeros(n, n);
    for (f, g) in frame.vectors().iter().zip(candidate.vectors()) {
        synth = &synth + &(f * &g.adjoint());
        synth_adj = &synth_adj + &(g * &f.adjoint());
    }
    let eye = ComplexMatrix::identity(n);
    let residual = synth.distance(&eye);
    let adjoint_residual = synth_adj.distance(&eye);
    Ok(DualityCheck {
        holds: residual <= tol && adjoint_residual <= tol,
        residual,
        adjoint_residual,
    })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorFrameWire {
    n: usize,
    vectors: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<VectorFrameWire> for VectorFrame {
    type Error = FrameError;

    fn try_from(wire: VectorFrameWire) -> Result<Self> {
        let vectors = wire
            .vectors
            .iter()
            .map(|entries| {
                let rows: Vec<Vec<Complex64>> = entries
                    .iter()
                    .map(|&[re, im]| vec![Complex64::new(re, im)])
                    .collect();
                ComplexMatrix::from_rows(&rows)
            })
            .collect::<Result<Vec<_>>>()?;
        VectorFrame::new(wire.n, vectors)
    }
}

impl From<VectorFrame> for VectorFrameWire {
    fn from(frame: VectorFrame) -> Self {
        let vectors = frame
            .vectors
            .iter()
            .map(|v| (0..v.rows()).map(|i| [v.entry(i, 0).re, v.entry(i, 0).im]).collect())
            .collect();
        VectorFrameWire { n: frame.ambient_dim, vectors }
    }
}
