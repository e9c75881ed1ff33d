//! Classical classifiers behind one interface: Fisher LDA, the
//! least-squares minimum distance classifier (a linear discriminant fit by
//! least squares on ±1 targets) and k-NN. Every model standardizes its
//! inputs with parameters learned on the training data and produces both a
//! hard ±1 vote and a calibrated soft score in [0, 1].
//!
//! Soft scores for the linear models are a logistic squash of the signed
//! discriminant — a ranking-faithful monotone map, not a probability
//! calibration; rank-based ensemble rules only need monotonicity.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float as _;
use thiserror::Error;

use crate::features::FeatureMatrix;
use crate::features::FeatureVector;
use crate::linalg;
use crate::Vote;

/// Ridge added to scatter / normal matrices before inversion so that
/// duplicate-feature datasets (common in selection experiments) stay
/// solvable.
pub const RIDGE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("k-NN requires odd k >= 1, got {0}")]
    BadNeighborCount(usize),
    #[error("training labels must contain both classes")]
    DegenerateClass,
    #[error("{kind} needs at least {need} samples for {features} features, got {got}")]
    InsufficientSamples {
        kind: &'static str,
        need: usize,
        got: usize,
        features: usize,
    },
    #[error("within-class scatter matrix is singular even after ridging")]
    SingularWithinScatter,
    #[error("normal equations are singular even after ridging")]
    SingularNormalEquations,
    #[error("input columns do not match the model's feature columns")]
    ColumnMismatch,
    #[error("training matrix has no labels")]
    MissingLabels,
}

/// Which classifier to fit, with kind-specific hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassifierSpec {
    Lda,
    Lsmd,
    Knn { k: usize },
}

impl ClassifierSpec {
    pub fn knn(k: usize) -> Result<Self, ClassifyError> {
        if k == 0 || k % 2 == 0 {
            return Err(ClassifyError::BadNeighborCount(k));
        }
        Ok(ClassifierSpec::Knn { k })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassifierSpec::Lda => "lda",
            ClassifierSpec::Lsmd => "lsmd",
            ClassifierSpec::Knn { .. } => "knn",
        }
    }

    fn validate(&self) -> Result<(), ClassifyError> {
        if let ClassifierSpec::Knn { k } = self {
            if *k == 0 || *k % 2 == 0 {
                return Err(ClassifyError::BadNeighborCount(*k));
            }
        }
        Ok(())
    }
}

/// Per-feature z-score parameters learned on training data. Constant
/// features are flagged by a zero stored deviation and map to 0 in every
/// dataset they are applied to, held-out data included.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    means: Vec<f64>,
    stds: Vec<f64>,
}

impl Standardizer {
    pub fn fit(rows: &[Vec<f64>]) -> Standardizer {
        let n = rows.len() as f64;
        let p = rows.first().map_or(0, Vec::len);
        let mut means = vec![0.0; p];
        for row in rows {
            for (m, v) in means.iter_mut().zip(row) {
                *m += v;
            }
        }
        for m in &mut means {
            *m /= n;
        }
        let mut stds = vec![0.0; p];
        for row in rows {
            for ((s, v), m) in stds.iter_mut().zip(row).zip(&means) {
                *s += (v - m) * (v - m);
            }
        }
        for s in &mut stds {
            *s = (*s / n).sqrt();
        }
        Standardizer { means, stds }
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn stds(&self) -> &[f64] {
        &self.stds
    }

    /// Builds a standardizer from stored parameters (model persistence).
    pub fn from_parts(means: Vec<f64>, stds: Vec<f64>) -> Standardizer {
        Standardizer { means, stds }
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(&self.means)
            .zip(&self.stds)
            .map(|((v, m), s)| if *s > 0.0 { (v - m) / s } else { 0.0 })
            .collect()
    }

    pub fn transform_rows(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| self.transform_row(r)).collect()
    }
}

/// Learns z-score parameters on `train` only and applies them to `train`
/// and every matrix in `others`, returning the transformed row sets in
/// the same order (train first).
pub fn standardize_fit_apply(
    train: &FeatureMatrix,
    others: &[&FeatureMatrix],
) -> (Standardizer, Vec<Vec<Vec<f64>>>) {
    let standardizer = Standardizer::fit(train.rows());
    let mut transformed = Vec::with_capacity(others.len() + 1);
    transformed.push(standardizer.transform_rows(train.rows()));
    for m in others {
        transformed.push(standardizer.transform_rows(m.rows()));
    }
    (standardizer, transformed)
}

/// Kind-specific fitted parameters, in standardized feature space.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams {
    /// `d(x) = w·x + bias`; positive discriminant votes +1.
    Linear { weights: Vec<f64>, bias: f64 },
    /// Memorized standardized training set with ±1 labels.
    Knn {
        train: Vec<Vec<f64>>,
        labels: Vec<Vote>,
    },
}

/// A fitted classifier: spec, feature columns, standardization and
/// parameters. Immutable after fitting; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierModel {
    spec: ClassifierSpec,
    columns: Vec<String>,
    standardizer: Standardizer,
    params: ModelParams,
}

impl ClassifierModel {
    pub fn spec(&self) -> ClassifierSpec {
        self.spec
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn standardizer(&self) -> &Standardizer {
        &self.standardizer
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Rebuilds a model from persisted parts. No refitting is performed.
    pub fn from_parts(
        spec: ClassifierSpec,
        columns: Vec<String>,
        standardizer: Standardizer,
        params: ModelParams,
    ) -> ClassifierModel {
        ClassifierModel {
            spec,
            columns,
            standardizer,
            params,
        }
    }
}

/// A hard ±1 vote and its calibrated score; `hard = +1` iff `soft >= 0.5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub hard: Vote,
    pub soft: f64,
}

impl Prediction {
    fn from_soft(soft: f64) -> Prediction {
        Prediction {
            hard: if soft >= 0.5 { 1 } else { -1 },
            soft,
        }
    }
}

fn logistic(d: f64) -> f64 {
    1.0 / (1.0 + (-d).exp())
}

/// Fits a classifier to a labeled matrix; labels are ±1 votes aligned with
/// the rows (`signs`). Standardization is learned here on the training
/// rows and stored in the model.
pub fn fit(
    spec: ClassifierSpec,
    m: &FeatureMatrix,
    signs: &[Vote],
) -> Result<ClassifierModel, ClassifyError> {
    spec.validate()?;
    let n = m.n_rows();
    let p = m.n_cols();
    assert_eq!(signs.len(), n, "one label per row");
    let n_pos = signs.iter().filter(|&&s| s > 0).count();
    if n_pos == 0 || n_pos == n {
        return Err(ClassifyError::DegenerateClass);
    }
    if matches!(spec, ClassifierSpec::Lda | ClassifierSpec::Lsmd) && n < p + 2 {
        return Err(ClassifyError::InsufficientSamples {
            kind: spec.name(),
            need: p + 2,
            got: n,
            features: p,
        });
    }
    let standardizer = Standardizer::fit(m.rows());
    let x = standardizer.transform_rows(m.rows());

    let params = match spec {
        ClassifierSpec::Lda => fit_lda(&x, signs, p)?,
        ClassifierSpec::Lsmd => fit_lsmd(&x, signs, p)?,
        ClassifierSpec::Knn { .. } => ModelParams::Knn {
            train: x,
            labels: signs.to_vec(),
        },
    };
    Ok(ClassifierModel {
        spec,
        columns: m.columns().to_vec(),
        standardizer,
        params,
    })
}

/// Fisher direction `w = S_w⁻¹(μ₊ − μ₋)` with the threshold at the
/// projected class-mean midpoint.
fn fit_lda(x: &[Vec<f64>], signs: &[Vote], p: usize) -> Result<ModelParams, ClassifyError> {
    let mut mean_pos = vec![0.0; p];
    let mut mean_neg = vec![0.0; p];
    let mut n_pos = 0.0;
    let mut n_neg = 0.0;
    for (row, &s) in x.iter().zip(signs) {
        let (mean, count) = if s > 0 {
            (&mut mean_pos, &mut n_pos)
        } else {
            (&mut mean_neg, &mut n_neg)
        };
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
        *count += 1.0;
    }
    for m in &mut mean_pos {
        *m /= n_pos;
    }
    for m in &mut mean_neg {
        *m /= n_neg;
    }
    // pooled within-class scatter
    let mut scatter = vec![0.0; p * p];
    for (row, &s) in x.iter().zip(signs) {
        let mean = if s > 0 { &mean_pos } else { &mean_neg };
        for i in 0..p {
            let di = row[i] - mean[i];
            for j in 0..=i {
                scatter[i * p + j] += di * (row[j] - mean[j]);
            }
        }
    }
    for i in 0..p {
        for j in 0..i {
            scatter[j * p + i] = scatter[i * p + j];
        }
    }
    let diff: Vec<f64> = mean_pos.iter().zip(&mean_neg).map(|(a, b)| a - b).collect();
    let weights = linalg::solve_spd_ridge(&scatter, p, &diff, RIDGE)
        .ok_or(ClassifyError::SingularWithinScatter)?;
    let project = |m: &[f64]| weights.iter().zip(m).map(|(w, v)| w * v).sum::<f64>();
    let threshold = 0.5 * (project(&mean_pos) + project(&mean_neg));
    Ok(ModelParams::Linear {
        weights,
        bias: -threshold,
    })
}

/// Least-squares fit of ±1 targets via the ridged normal equations,
/// including a bias term.
fn fit_lsmd(x: &[Vec<f64>], signs: &[Vote], p: usize) -> Result<ModelParams, ClassifyError> {
    let q = p + 1; // augmented with the bias column
    let mut gram = vec![0.0; q * q];
    let mut rhs = vec![0.0; q];
    for (row, &s) in x.iter().zip(signs) {
        let target = f64::from(s);
        for i in 0..q {
            let xi = if i < p { row[i] } else { 1.0 };
            rhs[i] += xi * target;
            for j in 0..=i {
                let xj = if j < p { row[j] } else { 1.0 };
                gram[i * q + j] += xi * xj;
            }
        }
    }
    for i in 0..q {
        for j in 0..i {
            gram[j * q + i] = gram[i * q + j];
        }
    }
    let beta = linalg::solve_spd_ridge(&gram, q, &rhs, RIDGE)
        .ok_or(ClassifyError::SingularNormalEquations)?;
    Ok(ModelParams::Linear {
        weights: beta[..p].to_vec(),
        bias: beta[p],
    })
}

/// Prediction for one standardized row; `exclude` removes one training
/// index from the k-NN search (leave-one-out evaluation on the training
/// set itself).
fn predict_standardized(
    model: &ClassifierModel,
    z: &[f64],
    exclude: Option<usize>,
) -> Prediction {
    match &model.params {
        ModelParams::Linear { weights, bias } => {
            let d = weights.iter().zip(z).map(|(w, v)| w * v).sum::<f64>() + bias;
            Prediction::from_soft(logistic(d))
        }
        ModelParams::Knn { train, labels } => {
            let k = match model.spec {
                ClassifierSpec::Knn { k } => k,
                _ => unreachable!("knn params imply knn spec"),
            };
            // distance ties break toward the lower training-row index
            let mut dist: Vec<(f64, usize)> = train
                .iter()
                .enumerate()
                .filter(|(i, _)| Some(*i) != exclude)
                .map(|(i, row)| {
                    let d2 = row
                        .iter()
                        .zip(z)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>();
                    (d2, i)
                })
                .collect();
            dist.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let k = k.min(dist.len());
            let pos = dist[..k].iter().filter(|&&(_, i)| labels[i] > 0).count();
            Prediction::from_soft(pos as f64 / k as f64)
        }
    }
}

/// Predicts one sample, verifying its feature columns against the model.
pub fn predict(model: &ClassifierModel, x: &FeatureVector) -> Result<Prediction, ClassifyError> {
    if x.names() != model.columns {
        return Err(ClassifyError::ColumnMismatch);
    }
    let z = model.standardizer.transform_row(x.values());
    Ok(predict_standardized(model, &z, None))
}

/// Predicts every row of a matrix whose columns match the model's.
pub fn predict_matrix(
    model: &ClassifierModel,
    m: &FeatureMatrix,
) -> Result<Vec<Prediction>, ClassifyError> {
    if m.columns() != &model.columns[..] {
        return Err(ClassifyError::ColumnMismatch);
    }
    Ok(m.rows()
        .iter()
        .map(|row| {
            let z = model.standardizer.transform_row(row);
            predict_standardized(model, &z, None)
        })
        .collect())
}

/// Leave-one-out predictions over the model's own training matrix: for
/// k-NN, row `i` is excluded from its own neighbor search. Only meaningful
/// when `m` is the matrix the model was fitted on.
pub fn predict_training_loo(
    model: &ClassifierModel,
    m: &FeatureMatrix,
) -> Result<Vec<Prediction>, ClassifyError> {
    if m.columns() != &model.columns[..] {
        return Err(ClassifyError::ColumnMismatch);
    }
    Ok(m.rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let z = model.standardizer.transform_row(row);
            predict_standardized(model, &z, Some(i))
        })
        .collect())
}
