//! Feature significance ranking (Welch t), multivariate selection
//! (Wilks' Λ MANOVA with Rao's F approximation), dataset correlation
//! dimension, and greedy forward feature selection.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float as _;
use thiserror::Error;

use crate::classify::{fit, predict_matrix, ClassifierSpec, ClassifyError};
use crate::evaluation::stratified_split;
use crate::features::FeatureMatrix;
use crate::linalg;
use crate::rng::Rng;
use crate::special;

/// Sentinel magnitude for an infinite-equivalent t statistic (a
/// zero-variance feature with unequal class means); kept finite so report
/// sorting and serialization stay well-behaved.
pub const T_SENTINEL: f64 = 1e308;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("matrix labels are missing or unusable for this analysis")]
    MissingLabels,
    #[error("each class needs at least 2 samples")]
    DegenerateClass,
    #[error("need more samples than features + groups ({samples} <= {features} + {groups})")]
    InsufficientSamples {
        samples: usize,
        features: usize,
        groups: usize,
    },
    #[error("within-group scatter matrix is singular")]
    SingularScatter,
    #[error("correlation dimension needs at least {need} samples, got {got}")]
    TooFewSamples { got: usize, need: usize },
    #[error("requested {k} features but the matrix has {available}")]
    NotEnoughFeatures { k: usize, available: usize },
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// One ranked feature: its Welch t statistic and two-sided p-value.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedFeature {
    pub feature: String,
    pub statistic: f64,
    pub p_value: f64,
}

/// Features sorted by ascending p-value (ties broken by feature name).
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRanking {
    entries: Vec<RankedFeature>,
}

impl FeatureRanking {
    pub fn entries(&self) -> &[RankedFeature] {
        &self.entries
    }
}

/// Welch two-sample t statistic and two-sided p-value for one feature.
///
/// Zero-variance edge cases: equal class means give `t = 0, p = 1`;
/// unequal class means give the sentinel statistic and `p = 0`.
fn welch_t(values: &[f64], signs: &[crate::Vote]) -> (f64, f64) {
    let (mut n1, mut n2) = (0.0, 0.0);
    let (mut m1, mut m2) = (0.0, 0.0);
    for (&v, &s) in values.iter().zip(signs) {
        if s > 0 {
            n1 += 1.0;
            m1 += v;
        } else {
            n2 += 1.0;
            m2 += v;
        }
    }
    m1 /= n1;
    m2 /= n2;
    let (mut v1, mut v2) = (0.0, 0.0);
    for (&v, &s) in values.iter().zip(signs) {
        if s > 0 {
            v1 += (v - m1) * (v - m1);
        } else {
            v2 += (v - m2) * (v - m2);
        }
    }
    v1 /= n1 - 1.0; // sample variances
    v2 /= n2 - 1.0;
    let se2 = v1 / n1 + v2 / n2;
    if se2 <= 0.0 {
        return if m1 == m2 {
            (0.0, 1.0)
        } else {
            (T_SENTINEL.copysign(m1 - m2), 0.0)
        };
    }
    let t = (m1 - m2) / se2.sqrt();
    // Welch–Satterthwaite degrees of freedom
    let df = se2 * se2
        / ((v1 / n1) * (v1 / n1) / (n1 - 1.0) + (v2 / n2) * (v2 / n2) / (n2 - 1.0));
    (t, special::student_t_two_sided_p(t, df))
}

/// Ranks every feature by the two-sided p-value of its Welch t statistic
/// between the two diagnosis classes.
pub fn rank_features_ttest(m: &FeatureMatrix) -> Result<FeatureRanking, AnalysisError> {
    let signs = m.binary_signs().ok_or(AnalysisError::MissingLabels)?;
    let n_pos = signs.iter().filter(|&&s| s > 0).count();
    let n_neg = signs.len() - n_pos;
    if n_pos < 2 || n_neg < 2 {
        return Err(AnalysisError::DegenerateClass);
    }
    let mut entries: Vec<RankedFeature> = m
        .columns()
        .iter()
        .enumerate()
        .map(|(c, name)| {
            let values: Vec<f64> = m.column(c).collect();
            let (statistic, p_value) = welch_t(&values, &signs);
            RankedFeature {
                feature: name.clone(),
                statistic,
                p_value,
            }
        })
        .collect();
    entries.sort_by(|a, b| {
        a.p_value
            .total_cmp(&b.p_value)
            .then_with(|| a.feature.cmp(&b.feature))
    });
    Ok(FeatureRanking { entries })
}

/// Wilks' Λ with Rao's F approximation and its p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManovaResult {
    pub lambda: f64,
    pub f_statistic: f64,
    pub p_value: f64,
    pub df1: f64,
    pub df2: f64,
}

/// MANOVA over the matrix's label groups: `Λ = det(W) / det(W + B)` with
/// `W` the pooled within-group scatter and `B` the between-group scatter,
/// converted to an F statistic by Rao's approximation (exact for up to
/// two features or up to three groups).
pub fn manova_wilks(m: &FeatureMatrix) -> Result<ManovaResult, AnalysisError> {
    let (groups, present) = m.group_ids().ok_or(AnalysisError::MissingLabels)?;
    let g = present.len();
    let p = m.n_cols();
    let n = m.n_rows();
    if g < 2 {
        return Err(AnalysisError::DegenerateClass);
    }
    if n <= p + g {
        return Err(AnalysisError::InsufficientSamples {
            samples: n,
            features: p,
            groups: g,
        });
    }

    // group means and the grand mean
    let mut counts = vec![0.0; g];
    let mut means = vec![vec![0.0; p]; g];
    let mut grand = vec![0.0; p];
    for (row, &gi) in m.rows().iter().zip(&groups) {
        counts[gi] += 1.0;
        for (j, &v) in row.iter().enumerate() {
            means[gi][j] += v;
            grand[j] += v;
        }
    }
    for (mean, &c) in means.iter_mut().zip(&counts) {
        if c < 2.0 {
            return Err(AnalysisError::DegenerateClass);
        }
        for v in mean.iter_mut() {
            *v /= c;
        }
    }
    for v in grand.iter_mut() {
        *v /= n as f64;
    }

    // W = Σ_g Σ_{i∈g} (x−μ_g)(x−μ_g)ᵀ, B = Σ_g n_g (μ_g−μ)(μ_g−μ)ᵀ
    let mut w = vec![0.0; p * p];
    for (row, &gi) in m.rows().iter().zip(&groups) {
        for i in 0..p {
            let di = row[i] - means[gi][i];
            for j in 0..=i {
                w[i * p + j] += di * (row[j] - means[gi][j]);
            }
        }
    }
    let mut wb = w.clone();
    for (mean, &c) in means.iter().zip(&counts) {
        for i in 0..p {
            let di = mean[i] - grand[i];
            for j in 0..=i {
                wb[i * p + j] += c * di * (mean[j] - grand[j]);
            }
        }
    }
    for mat in [&mut w, &mut wb] {
        for i in 0..p {
            for j in 0..i {
                mat[j * p + i] = mat[i * p + j];
            }
        }
    }

    let lw = linalg::cholesky(&w, p).ok_or(AnalysisError::SingularScatter)?;
    let lwb = linalg::cholesky(&wb, p).ok_or(AnalysisError::SingularScatter)?;
    let lambda =
        (linalg::cholesky_logdet(&lw, p) - linalg::cholesky_logdet(&lwb, p)).exp();

    // Rao's F approximation
    let pf = p as f64;
    let gf = g as f64;
    let nf = n as f64;
    let m_h = gf - 1.0;
    let t = if pf * pf + m_h * m_h - 5.0 > 0.0 {
        ((pf * pf * m_h * m_h - 4.0) / (pf * pf + m_h * m_h - 5.0)).sqrt()
    } else {
        1.0
    };
    let df1 = pf * m_h;
    let df2 = t * (nf - 1.0 - (pf + gf) / 2.0) - (pf * m_h - 2.0) / 2.0;
    let lam_t = lambda.powf(1.0 / t);
    let f_statistic = if lam_t > 0.0 {
        (1.0 - lam_t) / lam_t * (df2 / df1)
    } else {
        f64::MAX
    };
    let p_value = 1.0 - special::f_cdf(f_statistic, df1, df2);
    Ok(ManovaResult {
        lambda,
        f_statistic,
        p_value,
        df1,
        df2,
    })
}

/// Correlation-dimension estimate with the log–log fit diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FractalEstimate {
    pub dimension: f64,
    /// Radius window the slope was fitted over.
    pub fit_range: (f64, f64),
    /// R² of the log C(r) vs log r least-squares fit.
    pub fit_r2: f64,
    /// The fitted (radius, correlation sum) points.
    pub curve: Vec<(f64, f64)>,
}

/// Percentiles of the pairwise-distance distribution bounding the
/// log–log fit window. The window sits in the small-radius scaling
/// region: wider windows (reaching the distribution median) drag the
/// slope down on bounded manifolds through edge saturation and
/// underestimate the dimension.
const FIT_LO_PERCENTILE: f64 = 0.005;
const FIT_HI_PERCENTILE: f64 = 0.08;

/// Grassberger–Procaccia correlation dimension of the row point cloud.
///
/// The correlation sum `C(r)` — the fraction of sample pairs closer than
/// `r` — is evaluated at `r_count` log-spaced radii between the 0.5th and
/// 8th percentiles of the pairwise distances, and the dimension is the
/// least-squares slope of log C(r) against log r. `fit_r2` is reported so
/// callers can reject bad fits. A fully degenerate cloud (all points
/// identical) returns dimension 0 with `fit_r2` 1 rather than an error.
pub fn correlation_dimension(
    m: &FeatureMatrix,
    r_count: usize,
) -> Result<FractalEstimate, AnalysisError> {
    let n = m.n_rows();
    if n < 100 {
        return Err(AnalysisError::TooFewSamples { got: n, need: 100 });
    }
    let r_count = r_count.max(2);
    let rows = m.rows();
    let mut dists = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let d2: f64 = rows[i]
                .iter()
                .zip(&rows[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            dists.push(d2.sqrt());
        }
    }
    dists.sort_unstable_by(f64::total_cmp);
    if *dists.last().expect("non-empty") <= 0.0 {
        // all points identical
        return Ok(FractalEstimate {
            dimension: 0.0,
            fit_range: (0.0, 0.0),
            fit_r2: 1.0,
            curve: Vec::new(),
        });
    }
    // duplicate points can push the low percentile to zero distance;
    // start the window at the smallest positive distance in that case
    let lo_idx = (dists.len() as f64 * FIT_LO_PERCENTILE) as usize;
    let r_min = if dists[lo_idx] > 0.0 {
        dists[lo_idx]
    } else {
        dists[dists.partition_point(|&d| d <= 0.0)]
    };
    let hi_idx = (dists.len() as f64 * FIT_HI_PERCENTILE) as usize;
    let r_max = if dists[hi_idx] > r_min {
        dists[hi_idx]
    } else {
        *dists.last().expect("non-empty")
    };

    let total_pairs = dists.len() as f64;
    let log_step = (r_max / r_min).ln() / (r_count - 1) as f64;
    let mut pts = Vec::with_capacity(r_count);
    for k in 0..r_count {
        let r = r_min * ((k as f64) * log_step).exp();
        // C(r): fraction of pairs with distance < r, via binary search
        let count = dists.partition_point(|&d| d < r);
        if count > 0 {
            pts.push((r, count as f64 / total_pairs));
        }
    }
    // least squares on (ln r, ln C)
    let k = pts.len() as f64;
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(r, c) in &pts {
        let x = r.ln();
        let y = c.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    let denom = k * sxx - sx * sx;
    let slope = (k * sxy - sx * sy) / denom;
    let ss_tot = syy - sy * sy / k;
    let intercept = (sy - slope * sx) / k;
    let ss_res: f64 = pts
        .iter()
        .map(|&(r, c)| {
            let e = c.ln() - (slope * r.ln() + intercept);
            e * e
        })
        .sum();
    let fit_r2 = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(FractalEstimate {
        dimension: slope,
        fit_range: (r_min, r_max),
        fit_r2,
        curve: pts,
    })
}

/// Criterion maximized by greedy forward selection. Scores are
/// higher-is-better: `1 − Λ` for Wilks, validation accuracy otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum SelectionCriterion {
    Wilks,
    ValidationAccuracy {
        spec: ClassifierSpec,
        train_fraction: f64,
        seed: u64,
    },
}

/// One selection step: the feature added and the criterion score of the
/// subset after adding it.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionStep {
    pub feature: String,
    pub score: f64,
}

fn criterion_score(
    criterion: &SelectionCriterion,
    m: &FeatureMatrix,
) -> Result<f64, AnalysisError> {
    match criterion {
        SelectionCriterion::Wilks => Ok(1.0 - manova_wilks(m)?.lambda),
        SelectionCriterion::ValidationAccuracy {
            spec,
            train_fraction,
            seed,
        } => {
            let signs = m.binary_signs().ok_or(AnalysisError::MissingLabels)?;
            let groups: Vec<usize> = signs.iter().map(|&s| usize::from(s > 0)).collect();
            let mut rng = Rng::new(*seed);
            let (train_idx, val_idx) = stratified_split(&groups, 2, *train_fraction, &mut rng);
            let train = m.select_rows(&train_idx);
            let val = m.select_rows(&val_idx);
            let train_signs: Vec<crate::Vote> = train_idx.iter().map(|&i| signs[i]).collect();
            let model = fit(*spec, &train, &train_signs)?;
            let preds = predict_matrix(&model, &val)?;
            let correct = val_idx
                .iter()
                .zip(&preds)
                .filter(|(&i, p)| p.hard == signs[i])
                .count();
            Ok(correct as f64 / val_idx.len() as f64)
        }
    }
}

/// Greedy forward selection of `k` features: each step adds the feature
/// whose addition yields the best criterion score, ties broken by feature
/// name. A candidate whose evaluation fails (e.g. a duplicate column that
/// makes the scatter singular) is treated as scoring worst rather than
/// aborting the search, so redundant copies are deferred instead of
/// crashing the selection.
pub fn select_features_forward(
    m: &FeatureMatrix,
    k: usize,
    criterion: &SelectionCriterion,
) -> Result<Vec<SelectionStep>, AnalysisError> {
    if k > m.n_cols() {
        return Err(AnalysisError::NotEnoughFeatures {
            k,
            available: m.n_cols(),
        });
    }
    let mut selected: Vec<String> = Vec::with_capacity(k);
    let mut steps = Vec::with_capacity(k);
    let mut remaining: Vec<String> = m.columns().to_vec();
    for _ in 0..k {
        let mut best: Option<(f64, usize)> = None;
        for (ci, candidate) in remaining.iter().enumerate() {
            let mut trial = selected.clone();
            trial.push(candidate.clone());
            let sub = m.select_columns(&trial).expect("columns exist");
            let score = criterion_score(criterion, &sub).unwrap_or(f64::NEG_INFINITY);
            let better = match best {
                None => true,
                // strict improvement wins; equal scores keep the earlier
                // (alphabetically first) candidate since `remaining`
                // preserves the matrix's column order — tie-break on name
                Some((bs, bi)) => {
                    score > bs || (score == bs && candidate < &remaining[bi])
                }
            };
            if better {
                best = Some((score, ci));
            }
        }
        let (score, ci) = best.expect("k <= column count");
        let feature = remaining.remove(ci);
        selected.push(feature.clone());
        steps.push(SelectionStep { feature, score });
    }
    Ok(steps)
}
