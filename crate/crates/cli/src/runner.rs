//! Sweep execution: expands a theorem over subsets, test vectors, and
//! the lambda grid, in a fixed emission order (trial, theorem, subset,
//! vector, lambda) that is independent of the thread count.

use hsframe_core::generators::{gen_test_vectors, gen_weights, generate, parsevalize_hs};
use hsframe_core::hs_frame::{make_alternate_dual, HSFrame};
use hsframe_core::identities::{
    lemma_pp, lemma_pq, prop_operator, prop_selfadjoint, CheckReport, Evaluator, Theorem,
    ToleranceConfig,
};
use hsframe_core::{ComplexMatrix, FrameError, Result, SubsetMask};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::SuiteConfig;

/// Largest modulus of the random weights drawn for the weighted check.
pub const MAX_WEIGHT_MODULUS: f64 = 2.0;

/// Perturbation scales cycled across trials when the suite builds
/// alternate duals; scale zero exercises the canonical dual through the
/// alternate-dual code path.
pub const DUAL_SCALE_CYCLE: [f64; 3] = [0.0, 0.1, 1.0];

/// One emitted check: the report plus its sweep coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub trial: usize,
    /// Subset as a bitstring, index 0 first.
    pub subset: String,
    pub f_index: usize,
    pub lambda: Option<f64>,
    pub report: CheckReport,
}

/// Inputs for one theorem sweep within a trial. `dual` is required
/// exactly when the theorem needs an alternate dual.
#[derive(Clone, Debug)]
pub struct SweepPlan<'a> {
    pub theorem: Theorem,
    pub frame: &'a HSFrame,
    pub dual: Option<&'a HSFrame>,
    pub subsets: &'a [SubsetMask],
    pub vectors: &'a [ComplexMatrix],
    pub lambda_grid: &'a [f64],
    /// Base seed for the per-subset weight draws of the weighted check.
    pub weights_seed: u64,
    pub tolerances: ToleranceConfig,
    pub trial: usize,
}

impl SweepPlan<'_> {
    fn row(&self, subset: &SubsetMask, f_index: usize, lambda: Option<f64>, report: CheckReport) -> SweepRow {
        SweepRow {
            trial: self.trial,
            subset: subset.to_string(),
            f_index,
            lambda,
            report,
        }
    }
}

/// Spreads per-subset seeds apart so each subset draws independent
/// weights from the shared base seed.
fn subset_seed(base: u64, subset_index: usize) -> u64 {
    base.wrapping_add((subset_index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs one theorem over the whole plan. Rows come back ordered by
/// subset, then vector, then lambda; subsets are processed in parallel.
pub fn run_theorem(plan: &SweepPlan<'_>) -> Result<Vec<SweepRow>> {
    let rows = match plan.theorem {
        Theorem::LemmaPp | Theorem::LemmaPq | Theorem::PropSelfadjoint | Theorem::PropOperator => {
            run_operator_theorem(plan)?
        }
        Theorem::ParsevalIdentity | Theorem::ParsevalInequality => {
            run_vector_theorem(plan, &Evaluator::parseval(plan.frame, plan.tolerances)?)?
        }
        Theorem::CanonicalDual => {
            run_vector_theorem(plan, &Evaluator::canonical(plan.frame, plan.tolerances)?)?
        }
        Theorem::AlternateDual | Theorem::ComplexIdentity | Theorem::WeightedIdentity => {
            let dual = plan.dual.ok_or_else(|| {
                FrameError::InvalidParameter(format!(
                    "{} requires a dual frame",
                    plan.theorem.name()
                ))
            })?;
            run_vector_theorem(plan, &Evaluator::alternate(plan.frame, dual, plan.tolerances)?)?
        }
    };
    Ok(rows)
}

/// The operator-level statements, instantiated with the partial frame
/// operators `P = S_K` and `Q = S_Kc`; these sum to the identity exactly
/// when the frame is Parseval.
fn run_operator_theorem(plan: &SweepPlan<'_>) -> Result<Vec<SweepRow>> {
    let per_subset: Vec<Vec<SweepRow>> = plan
        .subsets
        .par_iter()
        .map(|k| {
            let p = plan.frame.partial_operator(k)?;
            let q = plan.frame.partial_operator(&k.complement())?;
            let mut rows = Vec::new();
            match plan.theorem {
                Theorem::LemmaPp => {
                    rows.push(plan.row(k, 0, None, lemma_pp(&p, &q, &plan.tolerances)?));
                }
                Theorem::LemmaPq => {
                    rows.push(plan.row(k, 0, None, lemma_pq(&p, &q, &plan.tolerances)?));
                }
                Theorem::PropOperator => {
                    for &lambda in plan.lambda_grid {
                        let report = prop_operator(&p, &q, lambda, &plan.tolerances)?;
                        rows.push(plan.row(k, 0, Some(lambda), report));
                    }
                }
                Theorem::PropSelfadjoint => {
                    for (f_index, f) in plan.vectors.iter().enumerate() {
                        for &lambda in plan.lambda_grid {
                            let report = prop_selfadjoint(&p, &q, lambda, f, &plan.tolerances)?;
                            rows.push(plan.row(k, f_index, Some(lambda), report));
                        }
                    }
                }
                _ => unreachable!("not an operator theorem"),
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(per_subset.into_iter().flatten().collect())
}

/// The frame-level statements, evaluated through a prepared
/// [`Evaluator`]; per-vector state is computed once and shared across
/// subsets.
fn run_vector_theorem(plan: &SweepPlan<'_>, ev: &Evaluator<'_>) -> Result<Vec<SweepRow>> {
    let evals = plan
        .vectors
        .iter()
        .map(|f| ev.prepare(f))
        .collect::<Result<Vec<_>>>()?;
    let count = plan.frame.len();
    let per_subset: Vec<Vec<SweepRow>> = plan
        .subsets
        .par_iter()
        .enumerate()
        .map(|(ki, k)| {
            let mut rows = Vec::new();
            let weights = match plan.theorem {
                Theorem::WeightedIdentity => Some(gen_weights(
                    count,
                    subset_seed(plan.weights_seed, ki),
                    MAX_WEIGHT_MODULUS,
                )?),
                _ => None,
            };
            for (f_index, eval) in evals.iter().enumerate() {
                match plan.theorem {
                    Theorem::ParsevalIdentity => {
                        rows.push(plan.row(k, f_index, None, eval.parseval_identity(k)?));
                    }
                    Theorem::ParsevalInequality => {
                        rows.push(plan.row(k, f_index, None, eval.parseval_inequality(k)?));
                    }
                    Theorem::CanonicalDual => {
                        let reports = eval.canonical_dual_rows(k, plan.lambda_grid)?;
                        for (&lambda, report) in plan.lambda_grid.iter().zip(reports) {
                            rows.push(plan.row(k, f_index, Some(lambda), report));
                        }
                    }
                    Theorem::AlternateDual => {
                        let reports = eval.alternate_dual_rows(k, plan.lambda_grid)?;
                        for (&lambda, report) in plan.lambda_grid.iter().zip(reports) {
                            rows.push(plan.row(k, f_index, Some(lambda), report));
                        }
                    }
                    Theorem::ComplexIdentity => {
                        rows.push(plan.row(k, f_index, None, eval.complex_identity(k)?));
                    }
                    Theorem::WeightedIdentity => {
                        let weights = weights.as_deref().expect("weights drawn above");
                        rows.push(plan.row(k, f_index, None, eval.weighted_identity(weights)?));
                    }
                    _ => unreachable!("not a vector theorem"),
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(per_subset.into_iter().flatten().collect())
}

/// Runs every configured theorem across every trial. Per trial: the
/// recipe runs with seed `base + trial`, giving fresh frames, subsets,
/// vectors, and weights. Parseval and operator checks see the
/// parsevalized frame; the canonical check sees the frame as generated;
/// the alternate-dual family sees the parsevalized frame paired with a
/// perturbed dual whose scale cycles through [`DUAL_SCALE_CYCLE`].
pub fn run_suite(config: &SuiteConfig, master_seed: u64) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let base = config.gen.seed_or(master_seed);
    let mut all_rows = Vec::new();
    for trial in 0..config.trials {
        let trial_seed = base.wrapping_add(trial as u64);
        let spec = config.gen.with_seed(trial_seed);
        let any = generate(&spec, trial_seed)?;
        let hs = any.to_hs();
        let count = hs.len();
        let subsets = config.subset_mode.policy(count).enumerate(count, trial_seed)?;
        let vectors = gen_test_vectors(hs.domain_dim(), config.vectors, trial_seed);

        let mut parseval: Option<HSFrame> = None;
        let mut alt_dual: Option<HSFrame> = None;
        for &theorem in &config.theorems {
            let needs_parseval = !matches!(theorem, Theorem::CanonicalDual);
            if needs_parseval && parseval.is_none() {
                parseval = Some(parsevalize_hs(&hs)?);
            }
            if theorem.uses_dual() && alt_dual.is_none() {
                let scale = DUAL_SCALE_CYCLE[trial % DUAL_SCALE_CYCLE.len()];
                let built = make_alternate_dual(
                    parseval.as_ref().expect("parsevalized above"),
                    trial_seed,
                    scale,
                )?;
                alt_dual = Some(built.pair.dual().clone());
            }
            let frame = match theorem {
                Theorem::CanonicalDual => &hs,
                _ => parseval.as_ref().expect("parsevalized above"),
            };
            let plan = SweepPlan {
                theorem,
                frame,
                dual: if theorem.uses_dual() { alt_dual.as_ref() } else { None },
                subsets: &subsets,
                vectors: &vectors,
                lambda_grid: &config.lambda_grid,
                weights_seed: trial_seed,
                tolerances: config.tolerances,
                trial,
            };
            all_rows.extend(run_theorem(&plan)?);
        }
    }
    Ok(all_rows)
}

/// Per-theorem aggregate over a row set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremSummary {
    #[serde(skip)]
    pub theorem: Theorem,
    pub worst_residual: f64,
    /// Smallest margin seen; absent for pure-identity checks.
    pub worst_margin: Option<f64>,
    pub checks_run: usize,
    pub pass: bool,
}

/// Aggregates rows per theorem, in order of first appearance.
pub fn summarize(rows: &[SweepRow]) -> Vec<TheoremSummary> {
    let mut summaries: Vec<TheoremSummary> = Vec::new();
    for row in rows {
        let theorem = row.report.theorem;
        let entry = match summaries.iter_mut().find(|s| s.theorem == theorem) {
            Some(entry) => entry,
            None => {
                summaries.push(TheoremSummary {
                    theorem,
                    worst_residual: 0.0,
                    worst_margin: None,
                    checks_run: 0,
                    pass: true,
                });
                summaries.last_mut().expect("just pushed")
            }
        };
        entry.worst_residual = entry.worst_residual.max(row.report.residual);
        if let Some(margin) = row.report.margin {
            entry.worst_margin = Some(entry.worst_margin.map_or(margin, |m| m.min(margin)));
        }
        entry.checks_run += 1;
        entry.pass &= row.report.pass;
    }
    summaries
}
