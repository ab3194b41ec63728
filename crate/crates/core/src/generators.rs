//! Seeded generators for random and structured frames, test vectors,
//! weights, and operators. All output is a pure function of the
//! parameters and the seed.

use serde::{Deserialize, Serialize};

use crate::error::{FrameError, Result};
use crate::hs_frame::{GFrame, HSFrame, HSOperatorMap};
use crate::matrix::{ComplexMatrix, HermitianFn};
use crate::rng::{complex_normal, gaussian_matrix, substream, Domain};
use crate::vector_frame::VectorFrame;
use crate::Complex64;

/// Attempts before giving up on drawing a family with an acceptable
/// lower frame bound.
const MAX_ATTEMPTS: u32 = 32;
/// Lower frame bound below which a random draw is rejected whenever the
/// family is large enough to span.
const MIN_LOWER_BOUND: f64 = 1e-8;

/// Declarative recipe for a generated frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GenSpec {
    /// `N` i.i.d. standard complex Gaussian vectors in `C^n`.
    GaussianVector {
        n: usize,
        #[serde(rename = "N")]
        count: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// Columns of the unitary `N x N` DFT truncated to the first `n`
    /// coordinates; a Parseval frame for `N >= n`.
    Harmonic {
        n: usize,
        #[serde(rename = "N")]
        count: usize,
    },
    /// `N` i.i.d. Gaussian maps `C^n -> C2(C^m)`.
    GaussianHs {
        n: usize,
        m: usize,
        #[serde(rename = "N")]
        count: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// Gaussian operator blocks with prescribed target dimensions.
    GaussianG {
        n: usize,
        dims: Vec<usize>,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// Another recipe post-composed with `S^{-1/2}`, making it Parseval.
    ParsevalizeOf { of: Box<GenSpec> },
}

impl GenSpec {
    /// Seed recorded in the recipe, or `fallback` when absent.
    pub fn seed_or(&self, fallback: u64) -> u64 {
        match self {
            GenSpec::GaussianVector { seed, .. }
            | GenSpec::GaussianHs { seed, .. }
            | GenSpec::GaussianG { seed, .. } => seed.unwrap_or(fallback),
            GenSpec::Harmonic { .. } => fallback,
            GenSpec::ParsevalizeOf { of } => of.seed_or(fallback),
        }
    }

    /// Copy with the seed replaced, recursing through wrappers.
    pub fn with_seed(&self, new_seed: u64) -> GenSpec {
        match self {
            GenSpec::GaussianVector { n, count, .. } => GenSpec::GaussianVector {
                n: *n,
                count: *count,
                seed: Some(new_seed),
            },
            GenSpec::Harmonic { .. } => self.clone(),
            GenSpec::GaussianHs { n, m, count, .. } => GenSpec::GaussianHs {
                n: *n,
                m: *m,
                count: *count,
                seed: Some(new_seed),
            },
            GenSpec::GaussianG { n, dims, .. } => GenSpec::GaussianG {
                n: *n,
                dims: dims.clone(),
                seed: Some(new_seed),
            },
            GenSpec::ParsevalizeOf { of } => GenSpec::ParsevalizeOf {
                of: Box::new(of.with_seed(new_seed)),
            },
        }
    }
}

/// A generated frame of any supported kind. The JSON form is the frame's
/// own wire format; the kinds are distinguished by their key sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyFrame {
    Hs(HSFrame),
    G(GFrame),
    Vector(VectorFrame),
}

impl AnyFrame {
    pub fn kind_name(&self) -> &'static str {
        match self {
            AnyFrame::Hs(_) => "hs",
            AnyFrame::G(_) => "g",
            AnyFrame::Vector(_) => "vector",
        }
    }

    pub fn domain_dim(&self) -> usize {
        match self {
            AnyFrame::Hs(f) => f.domain_dim(),
            AnyFrame::G(f) => f.domain_dim(),
            AnyFrame::Vector(f) => f.ambient_dim(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyFrame::Hs(f) => f.len(),
            AnyFrame::G(f) => f.len(),
            AnyFrame::Vector(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Optimal frame bounds of the family.
    pub fn frame_bounds(&self) -> Result<(f64, f64)> {
        match self {
            AnyFrame::Hs(f) => f.frame_bounds(),
            AnyFrame::G(f) => f.frame_bounds(),
            AnyFrame::Vector(f) => f.frame_bounds(),
        }
    }

    /// View in the Hilbert-Schmidt model, embedding when necessary. The
    /// embeddings preserve frame operators, bounds, and image norms.
    pub fn to_hs(&self) -> HSFrame {
        match self {
            AnyFrame::Hs(f) => f.clone(),
            AnyFrame::G(f) => crate::hs_frame::embed_g_frame(f),
            AnyFrame::Vector(f) => crate::hs_frame::embed_vector_frame(f),
        }
    }
}

/// Runs a recipe. Recipes without an explicit seed use `fallback_seed`.
pub fn generate(spec: &GenSpec, fallback_seed: u64) -> Result<AnyFrame> {
    match spec {
        GenSpec::GaussianVector { n, count, seed } => {
            gen_gaussian_vector(*n, *count, seed.unwrap_or(fallback_seed)).map(AnyFrame::Vector)
        }
        GenSpec::Harmonic { n, count } => gen_harmonic(*n, *count).map(AnyFrame::Vector),
        GenSpec::GaussianHs { n, m, count, seed } => {
            gen_gaussian_hs(*n, *m, *count, seed.unwrap_or(fallback_seed)).map(AnyFrame::Hs)
        }
        GenSpec::GaussianG { n, dims, seed } => {
            gen_gaussian_g(*n, dims, seed.unwrap_or(fallback_seed)).map(AnyFrame::G)
        }
        GenSpec::ParsevalizeOf { of } => match generate(of, fallback_seed)? {
            AnyFrame::Vector(f) => parsevalize_vector(&f).map(AnyFrame::Vector),
            AnyFrame::Hs(f) => parsevalize_hs(&f).map(AnyFrame::Hs),
            AnyFrame::G(_) => Err(FrameError::InvalidParameter(
                "parsevalize applies to vector and hs frames".into(),
            )),
        },
    }
}

fn check_positive(value: usize, what: &str) -> Result<()> {
    if value == 0 {
        return Err(FrameError::InvalidParameter(format!("{what} must be positive")));
    }
    Ok(())
}

/// `N` i.i.d. standard complex Gaussian vectors in `C^n`. Draws with a
/// deficient lower bound are rejected and redrawn whenever `N >= n`.
pub fn gen_gaussian_vector(n: usize, count: usize, seed: u64) -> Result<VectorFrame> {
    check_positive(n, "dimension n")?;
    check_positive(count, "frame size N")?;
    for attempt in 0..MAX_ATTEMPTS {
        let vectors: Vec<ComplexMatrix> = (0..count)
            .map(|j| {
                let mut rng = substream(seed, Domain::VectorFrame, attempt, j as u32);
                gaussian_matrix(&mut rng, n, 1)
            })
            .collect();
        let frame = VectorFrame::new(n, vectors)?;
        if count < n {
            return Ok(frame);
        }
        if frame.frame_bounds()?.0 > MIN_LOWER_BOUND {
            return Ok(frame);
        }
    }
    Err(FrameError::InvalidInput(
        "gaussian vector frame generation exhausted its retries".into(),
    ))
}

/// Harmonic frame: columns of the unitary `N x N` DFT truncated to the
/// first `n` coordinates. Parseval by construction; requires `N >= n`.
pub fn gen_harmonic(n: usize, count: usize) -> Result<VectorFrame> {
    check_positive(n, "dimension n")?;
    if count < n {
        return Err(FrameError::InvalidParameter(format!(
            "harmonic frame requires N >= n, got N={count}, n={n}"
        )));
    }
    let norm = 1.0 / (count as f64).sqrt();
    let vectors = (0..count)
        .map(|j| {
            let entries: Vec<Complex64> = (0..n)
                .map(|k| {
                    let phase =
                        -2.0 * std::f64::consts::PI * ((k * j) % count) as f64 / count as f64;
                    Complex64::new(phase.cos(), phase.sin()) * norm
                })
                .collect();
            ComplexMatrix::column(&entries)
        })
        .collect();
    VectorFrame::new(n, vectors)
}

/// `N` i.i.d. Gaussian Hilbert-Schmidt maps `C^n -> C2(C^m)`. Draws with
/// a deficient lower bound are rejected whenever `N m^2 >= n`.
pub fn gen_gaussian_hs(n: usize, m: usize, count: usize, seed: u64) -> Result<HSFrame> {
    check_positive(n, "dimension n")?;
    check_positive(m, "target side m")?;
    check_positive(count, "frame size N")?;
    for attempt in 0..MAX_ATTEMPTS {
        let maps: Vec<HSOperatorMap> = (0..count)
            .map(|j| {
                let mut rng = substream(seed, Domain::HsFrame, attempt, j as u32);
                HSOperatorMap::new(n, m, gaussian_matrix(&mut rng, m * m, n))
            })
            .collect::<Result<Vec<_>>>()?;
        let frame = HSFrame::new(n, m, maps)?;
        if count * m * m < n {
            return Ok(frame);
        }
        if frame.frame_bounds()?.0 > MIN_LOWER_BOUND {
            return Ok(frame);
        }
    }
    Err(FrameError::InvalidInput(
        "gaussian hs frame generation exhausted its retries".into(),
    ))
}

/// Gaussian g-frame with target dimensions `dims`. Draws with a deficient
/// lower bound are rejected whenever `sum_j d_j >= n`.
pub fn gen_gaussian_g(n: usize, dims: &[usize], seed: u64) -> Result<GFrame> {
    check_positive(n, "dimension n")?;
    if dims.is_empty() {
        return Err(FrameError::InvalidParameter("dims must be non-empty".into()));
    }
    for (j, &d) in dims.iter().enumerate() {
        if d == 0 {
            return Err(FrameError::InvalidParameter(format!(
                "target dimension {j} must be positive"
            )));
        }
    }
    let total: usize = dims.iter().sum();
    for attempt in 0..MAX_ATTEMPTS {
        let maps: Vec<ComplexMatrix> = dims
            .iter()
            .enumerate()
            .map(|(j, &d)| {
                let mut rng = substream(seed, Domain::GFrame, attempt, j as u32);
                gaussian_matrix(&mut rng, d, n)
            })
            .collect();
        let frame = GFrame::new(n, maps)?;
        if total < n {
            return Ok(frame);
        }
        if frame.frame_bounds()?.0 > MIN_LOWER_BOUND {
            return Ok(frame);
        }
    }
    Err(FrameError::InvalidInput(
        "gaussian g-frame generation exhausted its retries".into(),
    ))
}

/// Post-composes every vector with `S^{-1/2}`, producing a Parseval frame.
pub fn parsevalize_vector(frame: &VectorFrame) -> Result<VectorFrame> {
    let root_inv = frame.frame_operator().hermitian_fn(HermitianFn::InvSqrt)?;
    let vectors = frame.vectors().iter().map(|v| &root_inv * v).collect();
    VectorFrame::new(frame.ambient_dim(), vectors)
}

/// Post-composes every map with `S^{-1/2}`, producing a Parseval frame.
pub fn parsevalize_hs(frame: &HSFrame) -> Result<HSFrame> {
    let root_inv = frame.frame_operator().hermitian_fn(HermitianFn::InvSqrt)?;
    let maps = frame
        .maps()
        .iter()
        .map(|g| g.right_composed(&root_inv))
        .collect::<Result<Vec<_>>>()?;
    HSFrame::new(frame.domain_dim(), frame.target_side(), maps)
}

/// Deterministic test vectors: the standard basis first, then normalized
/// Gaussian draws.
pub fn gen_test_vectors(n: usize, count: usize, seed: u64) -> Vec<ComplexMatrix> {
    assert!(n > 0, "dimension must be positive");
    (0..count)
        .map(|i| {
            if i < n {
                ComplexMatrix::basis_vector(n, i)
            } else {
                for attempt in 0..MAX_ATTEMPTS {
                    let mut rng = substream(seed, Domain::TestVector, attempt, i as u32);
                    let v = gaussian_matrix(&mut rng, n, 1);
                    let norm = v.frobenius_norm();
                    if norm > 1e-6 {
                        return v.scale_re(1.0 / norm);
                    }
                }
                unreachable!("gaussian vectors of positive dimension are non-zero");
            }
        })
        .collect()
}

/// Deterministic complex weights drawn uniformly from the disc of radius
/// `max_modulus`.
pub fn gen_weights(count: usize, seed: u64, max_modulus: f64) -> Result<Vec<Complex64>> {
    if !(max_modulus > 0.0 && max_modulus.is_finite()) {
        return Err(FrameError::InvalidParameter(format!(
            "weight modulus bound must be positive and finite, got {max_modulus}"
        )));
    }
    Ok((0..count)
        .map(|j| {
            let mut rng = substream(seed, Domain::Weights, 0, j as u32);
            let u: f64 = rand::Rng::random(&mut rng);
            let v: f64 = rand::Rng::random(&mut rng);
            let r = max_modulus * u.sqrt();
            let theta = 2.0 * std::f64::consts::PI * v;
            Complex64::new(r * theta.cos(), r * theta.sin())
        })
        .collect())
}

/// Deterministic Gaussian matrix, for building test operators.
pub fn gen_gaussian_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
    let mut rng = substream(seed, Domain::Operator, 0, 0);
    gaussian_matrix(&mut rng, rows, cols)
}

/// Deterministic Gaussian Hermitian matrix.
pub fn gen_hermitian_matrix(n: usize, seed: u64) -> ComplexMatrix {
    gen_gaussian_matrix(n, n, seed).symmetrized()
}

/// One standard complex normal scalar stream, for ad hoc test data.
pub fn gen_complex_scalars(count: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = substream(seed, Domain::Operator, 0, 1);
    (0..count).map(|_| complex_normal(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_vector_frames_are_seed_deterministic() {
        let a = gen_gaussian_vector(3, 5, 42).unwrap();
        let b = gen_gaussian_vector(3, 5, 42).unwrap();
        let c = gen_gaussian_vector(3, 5, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn gaussian_vector_frame_spans_when_large_enough() {
        let frame = gen_gaussian_vector(4, 8, 1).unwrap();
        assert!(frame.is_frame().unwrap());
    }

    #[test]
    fn gaussian_vector_accepts_deficient_families() {
        let family = gen_gaussian_vector(5, 2, 1).unwrap();
        let (a, _) = family.frame_bounds().unwrap();
        assert!(a.abs() < 1e-10);
    }

    #[test]
    fn harmonic_frame_is_parseval_with_equal_norms() {
        let frame = gen_harmonic(2, 3).unwrap();
        let s = frame.frame_operator();
        assert!(s.distance(&ComplexMatrix::identity(2)) < 1e-12);
        for j in 0..3 {
            let norm_sq = frame.vector(j).frobenius_norm_sq();
            assert!((norm_sq - 2.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn harmonic_frame_rejects_too_few_vectors() {
        assert!(matches!(
            gen_harmonic(4, 3),
            Err(FrameError::InvalidParameter(_))
        ));
    }

    #[test]
    fn gaussian_hs_frame_spans_and_is_deterministic() {
        let a = gen_gaussian_hs(4, 2, 3, 7).unwrap();
        let b = gen_gaussian_hs(4, 2, 3, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.is_frame().unwrap());
    }

    #[test]
    fn gaussian_g_frame_respects_dims() {
        let frame = gen_gaussian_g(3, &[1, 2, 2], 5).unwrap();
        assert_eq!(frame.dims(), vec![1, 2, 2]);
        assert!(frame.frame_bounds().unwrap().0 > MIN_LOWER_BOUND);
    }

    #[test]
    fn parsevalize_gives_unit_bounds() {
        let frame = gen_gaussian_hs(3, 2, 4, 11).unwrap();
        let parseval = parsevalize_hs(&frame).unwrap();
        let (a, b) = parseval.frame_bounds().unwrap();
        assert!((a - 1.0).abs() < 1e-12, "lower bound {a}");
        assert!((b - 1.0).abs() < 1e-12, "upper bound {b}");
        let vec_frame = gen_gaussian_vector(3, 6, 11).unwrap();
        let vec_parseval = parsevalize_vector(&vec_frame).unwrap();
        let (a, b) = vec_parseval.frame_bounds().unwrap();
        assert!((a - 1.0).abs() < 1e-12);
        assert!((b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parsevalize_of_tight_frame_rescales() {
        // A tight frame with S = 2 I parsevalizes to itself over sqrt(2).
        let basis = VectorFrame::new(
            2,
            vec![
                ComplexMatrix::basis_vector(2, 0),
                ComplexMatrix::basis_vector(2, 0),
                ComplexMatrix::basis_vector(2, 1),
                ComplexMatrix::basis_vector(2, 1),
            ],
        )
        .unwrap();
        let parseval = parsevalize_vector(&basis).unwrap();
        for j in 0..4 {
            let expected = basis.vector(j).scale_re(1.0 / 2.0f64.sqrt());
            assert!(parseval.vector(j).distance(&expected) < 1e-12);
        }
    }

    #[test]
    fn test_vectors_start_with_basis_and_are_unit() {
        let vectors = gen_test_vectors(3, 6, 2);
        assert_eq!(vectors.len(), 6);
        for (k, v) in vectors.iter().take(3).enumerate() {
            assert!(v.distance(&ComplexMatrix::basis_vector(3, k)) < 1e-15);
        }
        for v in &vectors {
            assert!((v.frobenius_norm() - 1.0).abs() < 1e-12);
        }
        assert_eq!(gen_test_vectors(3, 6, 2), vectors);
    }

    #[test]
    fn weights_stay_in_the_disc() {
        let weights = gen_weights(64, 9, 2.0).unwrap();
        assert!(weights.iter().all(|w| w.norm() <= 2.0 + 1e-12));
        assert_eq!(gen_weights(64, 9, 2.0).unwrap(), weights);
        assert_ne!(gen_weights(64, 10, 2.0).unwrap(), weights);
    }

    #[test]
    fn genspec_json_uses_capital_n_and_nests() {
        let spec = GenSpec::ParsevalizeOf {
            of: Box::new(GenSpec::GaussianHs { n: 3, m: 2, count: 5, seed: Some(7) }),
        };
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains(r#""kind":"parsevalize_of""#), "{text}");
        assert!(text.contains(r#""N":5"#), "{text}");
        let back: GenSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let harmonic: GenSpec =
            serde_json::from_str(r#"{"kind": "harmonic", "n": 2, "N": 4}"#).unwrap();
        assert_eq!(harmonic, GenSpec::Harmonic { n: 2, count: 4 });
    }

    #[test]
    fn generate_dispatches_and_respects_fallback_seed() {
        let spec = GenSpec::GaussianVector { n: 2, count: 3, seed: None };
        let a = generate(&spec, 5).unwrap();
        let b = generate(&spec.with_seed(5), 0).unwrap();
        assert_eq!(a, b);
        assert_eq!(spec.seed_or(5), 5);
        assert_eq!(spec.with_seed(9).seed_or(0), 9);
    }

    #[test]
    fn any_frame_embeds_to_hs_preserving_bounds() {
        let spec = GenSpec::GaussianG { n: 3, dims: vec![2, 1, 2], seed: Some(3) };
        let frame = generate(&spec, 0).unwrap();
        let (a, b) = frame.frame_bounds().unwrap();
        let hs = frame.to_hs();
        let (ha, hb) = hs.frame_bounds().unwrap();
        assert!((a - ha).abs() < 1e-12);
        assert!((b - hb).abs() < 1e-12);
    }

    #[test]
    fn any_frame_json_distinguishes_kinds() {
        let vector = generate(&GenSpec::Harmonic { n: 2, count: 3 }, 0).unwrap();
        let text = serde_json::to_string(&vector).unwrap();
        let back: AnyFrame = serde_json::from_str(&text).unwrap();
        assert_eq!(back, vector);
        assert_eq!(back.kind_name(), "vector");

        let hs = generate(&GenSpec::GaussianHs { n: 2, m: 2, count: 2, seed: Some(1) }, 0).unwrap();
        let text = serde_json::to_string(&hs).unwrap();
        let back: AnyFrame = serde_json::from_str(&text).unwrap();
        assert_eq!(back.kind_name(), "hs");

        let g = generate(&GenSpec::GaussianG { n: 2, dims: vec![1, 2], seed: Some(1) }, 0).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        let back: AnyFrame = serde_json::from_str(&text).unwrap();
        assert_eq!(back.kind_name(), "g");
    }
}
