//! Combination of binary experts by the weighted majority rule (WMR) and
//! the baseline combiners it is compared against.
//!
//! Treating the ensemble as a weighted voting game over a dichotomous
//! choice, the optimal weights have a closed form in the experts' prior
//! competencies `p_i` (their probabilities of voting correctly): with
//! log-odds weights `w_i = ln(p_i/(1−p_i))` and a prior term, the sign of
//! the weighted vote sum reproduces the Bayes-optimal decision exactly,
//! provided the experts err independently given the true class. The
//! brute-force Bayes oracle is implemented alongside as an independent
//! route so the equivalence is testable rather than assumed.
//!
//! Ties (an exactly zero weighted sum or equal posteriors) resolve to +1,
//! the positive/alarm class — a deterministic, fail-safe convention for
//! screening semantics.

use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float as _;
use thiserror::Error;

use crate::classify::{predict_matrix, ClassifierModel, ClassifyError};
use crate::features::FeatureMatrix;
use crate::Vote;

/// Competencies are clamped to `[ε, 1−ε]` so perfect validation accuracy
/// cannot produce infinite odds weights.
pub const COMPETENCY_EPS: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnsembleError {
    #[error("competency profile must contain at least one expert")]
    EmptyProfile,
    #[error("competencies must be finite")]
    NonFiniteCompetency,
    #[error("vote pattern length {votes} does not match {experts} experts")]
    LengthMismatch { votes: usize, experts: usize },
    #[error("class prior must lie strictly inside (0, 1)")]
    InvalidPrior,
    #[error("soft scores must lie in [0, 1]")]
    ScoreOutOfRange,
    #[error("validation matrix has no usable binary labels")]
    MissingLabels,
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// Per-expert competencies `p_i ∈ [ε, 1−ε]`: the probability that expert
/// `i` votes correctly, typically estimated as validation accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct CompetencyProfile {
    p: Vec<f64>,
}

impl CompetencyProfile {
    /// Clamps every competency into `[ε, 1−ε]`.
    pub fn new(p: Vec<f64>) -> Result<Self, EnsembleError> {
        if p.is_empty() {
            return Err(EnsembleError::EmptyProfile);
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(EnsembleError::NonFiniteCompetency);
        }
        Ok(CompetencyProfile {
            p: p.iter()
                .map(|v| v.clamp(COMPETENCY_EPS, 1.0 - COMPETENCY_EPS))
                .collect(),
        })
    }

    pub fn competencies(&self) -> &[f64] {
        &self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// The closed-form maps from competency to vote weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightProfile {
    /// `w_i = p_i`
    Direct,
    /// `w_i = p_i / (1 − p_i)`
    Odds,
    /// `w_i = ln(p_i / (1 − p_i))` — the Bayes-matching profile
    LogOdds,
}

impl WeightProfile {
    pub const ALL: [WeightProfile; 3] =
        [WeightProfile::Direct, WeightProfile::Odds, WeightProfile::LogOdds];

    pub fn name(&self) -> &'static str {
        match self {
            WeightProfile::Direct => "direct",
            WeightProfile::Odds => "odds",
            WeightProfile::LogOdds => "logodds",
        }
    }
}

/// Expert weights under the chosen profile. No normalization is applied:
/// WMR decisions are invariant to positive scaling of all weights.
pub fn wmr_weights(profile: &CompetencyProfile, kind: WeightProfile) -> Vec<f64> {
    profile
        .p
        .iter()
        .map(|&p| match kind {
            WeightProfile::Direct => p,
            WeightProfile::Odds => p / (1.0 - p),
            WeightProfile::LogOdds => (p / (1.0 - p)).ln(),
        })
        .collect()
}

/// Weighted majority decision: `sign(Σ w_i·v_i + prior_logodds)`, with an
/// exactly zero score resolving to +1.
pub fn wmr_decide(
    votes: &[Vote],
    weights: &[f64],
    prior_logodds: f64,
) -> Result<Vote, EnsembleError> {
    if votes.len() != weights.len() {
        return Err(EnsembleError::LengthMismatch {
            votes: votes.len(),
            experts: weights.len(),
        });
    }
    let score: f64 = votes
        .iter()
        .zip(weights)
        .map(|(&v, &w)| w * f64::from(v))
        .sum::<f64>()
        + prior_logodds;
    Ok(if score >= 0.0 { 1 } else { -1 })
}

/// Brute-force Bayes-optimal decision under conditional independence:
/// `argmax_y P(y)·Π_i P(v_i | y)` with `P(v_i = y | y) = p_i`. Posterior
/// ties resolve to +1. This is the independent oracle the log-odds WMR
/// must agree with.
pub fn bayes_optimal_decide(
    votes: &[Vote],
    profile: &CompetencyProfile,
    prior_pos: f64,
) -> Result<Vote, EnsembleError> {
    if votes.len() != profile.len() {
        return Err(EnsembleError::LengthMismatch {
            votes: votes.len(),
            experts: profile.len(),
        });
    }
    if !(prior_pos > 0.0 && prior_pos < 1.0) {
        return Err(EnsembleError::InvalidPrior);
    }
    let mut posterior_pos = prior_pos;
    let mut posterior_neg = 1.0 - prior_pos;
    for (&v, &p) in votes.iter().zip(&profile.p) {
        if v > 0 {
            posterior_pos *= p;
            posterior_neg *= 1.0 - p;
        } else {
            posterior_pos *= 1.0 - p;
            posterior_neg *= p;
        }
    }
    Ok(if posterior_pos >= posterior_neg { 1 } else { -1 })
}

/// Simple majority: sign of the vote sum, ties to +1.
pub fn majority_decide(votes: &[Vote]) -> Vote {
    let sum: i32 = votes.iter().map(|&v| i32::from(v)).sum();
    if sum >= 0 {
        1
    } else {
        -1
    }
}

/// Rank-based combination rules over soft scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankRule {
    Max,
    Min,
    Median,
}

impl RankRule {
    pub const ALL: [RankRule; 3] = [RankRule::Max, RankRule::Min, RankRule::Median];

    pub fn name(&self) -> &'static str {
        match self {
            RankRule::Max => "max",
            RankRule::Min => "min",
            RankRule::Median => "median",
        }
    }
}

/// Applies a rank rule to the score list and thresholds at 0.5 (a fused
/// score of exactly 0.5 votes +1). The median of an even count is the
/// mean of the two middle scores.
pub fn rank_decide(scores: &[f64], rule: RankRule) -> Result<Vote, EnsembleError> {
    if scores.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return Err(EnsembleError::ScoreOutOfRange);
    }
    if scores.is_empty() {
        return Err(EnsembleError::EmptyProfile);
    }
    let fused = match rule {
        RankRule::Max => scores.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        RankRule::Min => scores.iter().copied().fold(f64::INFINITY, f64::min),
        RankRule::Median => {
            let mut sorted = scores.to_vec();
            sorted.sort_unstable_by(f64::total_cmp);
            let n = sorted.len();
            if n % 2 == 1 {
                sorted[n / 2]
            } else {
                0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
            }
        }
    };
    Ok(if fused >= 0.5 { 1 } else { -1 })
}

/// Soft-output averaging: the unweighted mean of the scores, or the
/// competency-weighted mean with weights `p_i / Σp_j`. Returns the vote
/// (threshold 0.5) together with the fused score.
pub fn average_decide(
    scores: &[f64],
    profile: Option<&CompetencyProfile>,
) -> Result<(Vote, f64), EnsembleError> {
    if scores.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return Err(EnsembleError::ScoreOutOfRange);
    }
    if scores.is_empty() {
        return Err(EnsembleError::EmptyProfile);
    }
    let fused = match profile {
        None => scores.iter().sum::<f64>() / scores.len() as f64,
        Some(c) => {
            if c.len() != scores.len() {
                return Err(EnsembleError::LengthMismatch {
                    votes: scores.len(),
                    experts: c.len(),
                });
            }
            let total: f64 = c.p.iter().sum();
            scores.iter().zip(&c.p).map(|(s, p)| s * p).sum::<f64>() / total
        }
    };
    Ok((if fused >= 0.5 { 1 } else { -1 }, fused))
}

/// Estimates competencies as each model's accuracy on a labeled validation
/// matrix, clamped away from 0 and 1.
pub fn estimate_competencies(
    models: &[&ClassifierModel],
    validation: &FeatureMatrix,
) -> Result<CompetencyProfile, EnsembleError> {
    let signs = validation
        .binary_signs()
        .ok_or(EnsembleError::MissingLabels)?;
    if signs.is_empty() {
        return Err(EnsembleError::MissingLabels);
    }
    let mut p = Vec::with_capacity(models.len());
    for model in models {
        let preds = predict_matrix(model, validation)?;
        let correct = preds
            .iter()
            .zip(&signs)
            .filter(|(pred, &s)| pred.hard == s)
            .count();
        p.push(correct as f64 / signs.len() as f64);
    }
    CompetencyProfile::new(p)
}

/// Competencies from an already-materialized vote matrix: expert `i`'s
/// agreement rate with the truth column.
pub fn competencies_from_votes(
    votes: &[Vec<Vote>],
    truth: &[Vote],
) -> Result<CompetencyProfile, EnsembleError> {
    let k = votes.first().map_or(0, Vec::len);
    if k == 0 || truth.is_empty() {
        return Err(EnsembleError::EmptyProfile);
    }
    if votes.len() != truth.len() {
        return Err(EnsembleError::LengthMismatch {
            votes: votes.len(),
            experts: truth.len(),
        });
    }
    let mut correct = alloc::vec![0usize; k];
    for (pattern, &t) in votes.iter().zip(truth) {
        for (c, &v) in correct.iter_mut().zip(pattern) {
            if v == t {
                *c += 1;
            }
        }
    }
    CompetencyProfile::new(
        correct
            .iter()
            .map(|&c| c as f64 / truth.len() as f64)
            .collect(),
    )
}

/// `ln(p/(1−p))` — the prior term matching the Bayes oracle's class prior.
pub fn prior_logodds(prior_pos: f64) -> Result<f64, EnsembleError> {
    if !(prior_pos > 0.0 && prior_pos < 1.0) {
        return Err(EnsembleError::InvalidPrior);
    }
    Ok((prior_pos / (1.0 - prior_pos)).ln())
}

/// Enumerates all `2^k` vote patterns (k ≤ 20) in lexicographic order,
/// +1 in bit position 0 first.
pub fn all_vote_patterns(k: usize) -> impl Iterator<Item = Vec<Vote>> {
    assert!(k <= 20, "exhaustive enumeration limited to 2^20 patterns");
    (0u32..1 << k).map(move |bits| {
        (0..k)
            .map(|i| if bits & (1 << i) != 0 { 1 } else { -1 })
            .collect()
    })
}
