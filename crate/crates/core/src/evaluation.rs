//! Accuracy and ROC metrics, the repeated stratified train/validation
//! protocol, and one-vs-rest composition for the four-class shape-type
//! target.
//!
//! The ROC construction sweeps grouped thresholds (tied scores collapse
//! into one step, preventing optimistic AUC) and accumulates the area in
//! integer arithmetic, so perfect and inverted scorers give exactly 1 and
//! 0. An independent rank-based Mann–Whitney route is provided for
//! cross-checking: the two must agree to within round-off.

use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float as _;
use thiserror::Error;

use crate::classify::{fit, predict_matrix, ClassifierSpec, ClassifyError};
use crate::features::{FeatureMatrix, Label, ShapeType};
use crate::rng::{derive_seed, Rng};
use crate::Vote;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("prediction and truth lengths differ ({preds} vs {truth})")]
    LengthMismatch { preds: usize, truth: usize },
    #[error("ROC requires both classes in the truth labels")]
    SingleClass,
    #[error("matrix labels are missing or not binary")]
    MissingLabels,
    #[error("class '{class}' has {got} samples, need at least {need}")]
    TooFewPerClass {
        class: &'static str,
        got: usize,
        need: usize,
    },
    #[error("cross-validation plan is invalid: {0}")]
    InvalidPlan(&'static str),
    #[error("matrix labels must be shape types for one-vs-rest")]
    NotShapeLabels,
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// 2×2 tabulation of hard votes against truth (+1 = positive).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Confusion {
    pub true_pos: usize,
    pub false_pos: usize,
    pub true_neg: usize,
    pub false_neg: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.true_neg + self.false_neg
    }

    pub fn accuracy(&self) -> f64 {
        if self.total() == 0 {
            return 0.0;
        }
        (self.true_pos + self.true_neg) as f64 / self.total() as f64
    }

    /// TP / (TP + FN); 0 when no positives are present.
    pub fn sensitivity(&self) -> f64 {
        let denom = self.true_pos + self.false_neg;
        if denom == 0 {
            return 0.0;
        }
        self.true_pos as f64 / denom as f64
    }

    /// TN / (TN + FP); 0 when no negatives are present.
    pub fn specificity(&self) -> f64 {
        let denom = self.true_neg + self.false_pos;
        if denom == 0 {
            return 0.0;
        }
        self.true_neg as f64 / denom as f64
    }
}

/// Tabulates hard predictions against truth labels.
pub fn confusion(preds: &[Vote], truth: &[Vote]) -> Result<Confusion, EvalError> {
    if preds.len() != truth.len() {
        return Err(EvalError::LengthMismatch {
            preds: preds.len(),
            truth: truth.len(),
        });
    }
    let mut c = Confusion::default();
    for (&p, &t) in preds.iter().zip(truth) {
        match (p > 0, t > 0) {
            (true, true) => c.true_pos += 1,
            (true, false) => c.false_pos += 1,
            (false, false) => c.true_neg += 1,
            (false, true) => c.false_neg += 1,
        }
    }
    Ok(c)
}

/// ROC curve: (fpr, tpr) points from (0,0) to (1,1), non-decreasing in
/// both coordinates, with the trapezoidal area under it.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    points: Vec<(f64, f64)>,
    auc: f64,
}

impl RocCurve {
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn auc(&self) -> f64 {
        self.auc
    }

    /// Trapezoidal integral of the stored points; equals `auc` to within
    /// round-off (the stored value is computed in integer arithmetic).
    pub fn trapezoid_area(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[1].1 + w[0].1))
            .sum()
    }
}

/// Threshold-sweep ROC over descending distinct score values, tied scores
/// grouped into a single step.
pub fn roc(scores: &[f64], truth: &[Vote]) -> Result<RocCurve, EvalError> {
    if scores.len() != truth.len() {
        return Err(EvalError::LengthMismatch {
            preds: scores.len(),
            truth: truth.len(),
        });
    }
    let n_pos = truth.iter().filter(|&&t| t > 0).count();
    let n_neg = truth.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(EvalError::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = Vec::new();
    points.push((0.0, 0.0));
    let mut tp = 0u64;
    let mut fp = 0u64;
    let mut area2 = 0u128; // Σ Δfp·(tp_before + tp_after), halved at the end
    let mut i = 0;
    while i < order.len() {
        // group equal scores into one step
        let mut j = i;
        let (tp0, fp0) = (tp, fp);
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            if truth[order[j]] > 0 {
                tp += 1;
            } else {
                fp += 1;
            }
            j += 1;
        }
        area2 += u128::from(fp - fp0) * u128::from(tp0 + tp);
        points.push((fp as f64 / n_neg as f64, tp as f64 / n_pos as f64));
        i = j;
    }
    let auc = area2 as f64 / (2.0 * n_pos as f64 * n_neg as f64);
    Ok(RocCurve { points, auc })
}

/// AUC via the Mann–Whitney rank statistic with midranks for ties:
/// `P(score₊ > score₋) + ½·P(score₊ = score₋)`. An independent route to
/// the same quantity as [`roc`].
pub fn mann_whitney_auc(scores: &[f64], truth: &[Vote]) -> Result<f64, EvalError> {
    if scores.len() != truth.len() {
        return Err(EvalError::LengthMismatch {
            preds: scores.len(),
            truth: truth.len(),
        });
    }
    let n_pos = truth.iter().filter(|&&t| t > 0).count();
    let n_neg = truth.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(EvalError::SingleClass);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // midranks over tie groups
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let midrank = (i + 1 + j) as f64 / 2.0; // ranks are 1-based
        for &idx in &order[i..j] {
            if truth[idx] > 0 {
                rank_sum_pos += midrank;
            }
        }
        i = j;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// The repeated random-split protocol: `repetitions` stratified splits at
/// `train_fraction`, each seeded deterministically from `seed`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossValPlan {
    pub repetitions: usize,
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for CrossValPlan {
    fn default() -> Self {
        CrossValPlan {
            repetitions: 3,
            train_fraction: 0.7,
            seed: 0,
        }
    }
}

impl CrossValPlan {
    fn validate(&self) -> Result<(), EvalError> {
        if self.repetitions == 0 {
            return Err(EvalError::InvalidPlan("repetitions must be >= 1"));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(EvalError::InvalidPlan("train_fraction must be in (0, 1)"));
        }
        Ok(())
    }
}

/// Stratified split of `groups` (one group id per sample): each group is
/// shuffled and `round(fraction·n_g)` of it goes to the training side
/// (clamped so both sides stay non-empty), keeping class ratios within one
/// sample of the full dataset's.
pub fn stratified_split(
    groups: &[usize],
    n_groups: usize,
    train_fraction: f64,
    rng: &mut Rng,
) -> (Vec<usize>, Vec<usize>) {
    let mut per_group: Vec<Vec<usize>> = alloc::vec![Vec::new(); n_groups];
    for (i, &g) in groups.iter().enumerate() {
        per_group[g].push(i);
    }
    let mut train = Vec::new();
    let mut val = Vec::new();
    for indices in per_group.iter_mut() {
        if indices.is_empty() {
            continue;
        }
        rng.shuffle(indices);
        let n = indices.len();
        #[allow(clippy::cast_possible_truncation)]
        let take = ((train_fraction * n as f64).round() as usize).clamp(1, n.max(2) - 1);
        train.extend_from_slice(&indices[..take]);
        val.extend_from_slice(&indices[take..]);
    }
    train.sort_unstable();
    val.sort_unstable();
    (train, val)
}

/// Metrics for one repetition of the protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct RepReport {
    pub confusion: Confusion,
    pub accuracy: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    /// Absent when the validation scores cannot form a curve
    /// (single-class validation split).
    pub roc: Option<RocCurve>,
}

/// Mean and population standard deviation of a per-repetition metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub mean: f64,
    pub std: f64,
}

fn aggregate(values: impl Iterator<Item = f64> + Clone) -> Aggregate {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Aggregate {
        mean,
        std: var.sqrt(),
    }
}

/// Full report of a repeated-split evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub reps: Vec<RepReport>,
    pub accuracy: Aggregate,
    pub sensitivity: Aggregate,
    pub specificity: Aggregate,
    /// Mean AUC over repetitions that produced a curve.
    pub auc_mean: Option<f64>,
}

/// Runs the repeated stratified train/validation protocol for one
/// classifier spec over a binary-labeled matrix. Deterministic given the
/// plan: repetition `r` uses the derived seed `derive_seed(plan.seed, r)`.
pub fn crossval(
    plan: &CrossValPlan,
    spec: ClassifierSpec,
    m: &FeatureMatrix,
) -> Result<EvalReport, EvalError> {
    plan.validate()?;
    let signs = m.binary_signs().ok_or(EvalError::MissingLabels)?;
    let n_pos = signs.iter().filter(|&&s| s > 0).count();
    let n_neg = signs.len() - n_pos;
    if n_pos < 4 {
        return Err(EvalError::TooFewPerClass {
            class: "malignant",
            got: n_pos,
            need: 4,
        });
    }
    if n_neg < 4 {
        return Err(EvalError::TooFewPerClass {
            class: "benign",
            got: n_neg,
            need: 4,
        });
    }
    let groups: Vec<usize> = signs.iter().map(|&s| usize::from(s > 0)).collect();
    let mut reps = Vec::with_capacity(plan.repetitions);
    for rep in 0..plan.repetitions {
        let mut rng = Rng::new(derive_seed(plan.seed, rep as u64));
        let (train_idx, val_idx) = stratified_split(&groups, 2, plan.train_fraction, &mut rng);
        let train = m.select_rows(&train_idx);
        let val = m.select_rows(&val_idx);
        let train_signs: Vec<Vote> = train_idx.iter().map(|&i| signs[i]).collect();
        let val_signs: Vec<Vote> = val_idx.iter().map(|&i| signs[i]).collect();

        let model = fit(spec, &train, &train_signs)?;
        let preds = predict_matrix(&model, &val)?;
        let hard: Vec<Vote> = preds.iter().map(|p| p.hard).collect();
        let soft: Vec<f64> = preds.iter().map(|p| p.soft).collect();
        let c = confusion(&hard, &val_signs)?;
        reps.push(RepReport {
            confusion: c,
            accuracy: c.accuracy(),
            sensitivity: c.sensitivity(),
            specificity: c.specificity(),
            roc: roc(&soft, &val_signs).ok(),
        });
    }
    let auc_values: Vec<f64> = reps
        .iter()
        .filter_map(|r| r.roc.as_ref().map(RocCurve::auc))
        .collect();
    Ok(EvalReport {
        accuracy: aggregate(reps.iter().map(|r| r.accuracy)),
        sensitivity: aggregate(reps.iter().map(|r| r.sensitivity)),
        specificity: aggregate(reps.iter().map(|r| r.specificity)),
        auc_mean: if auc_values.is_empty() {
            None
        } else {
            Some(auc_values.iter().sum::<f64>() / auc_values.len() as f64)
        },
        reps,
    })
}

/// Index of the highest score; equal scores keep the earliest index, so
/// ties resolve in fixed class order.
pub(crate) fn argmax_class(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// One repetition of the one-vs-rest protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassRep {
    pub overall_accuracy: f64,
    /// Per-class recall, aligned with the report's class list.
    pub per_class_accuracy: Vec<f64>,
    /// Row = true class, column = predicted class.
    pub confusion: Vec<Vec<usize>>,
}

/// Repeated-split one-vs-rest report over the present shape classes.
#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassReport {
    pub classes: Vec<ShapeType>,
    pub reps: Vec<MulticlassRep>,
    pub overall_accuracy: Aggregate,
}

/// One-vs-rest composition over shape-type labels: one binary model per
/// present class (that class = +1, rest = −1); the prediction is the class
/// of the highest soft score, ties resolving in the fixed class order
/// round < lobulated < microlobulated < stellate. Evaluated with the same
/// repeated stratified-split protocol as [`crossval`].
pub fn one_vs_rest(
    spec: ClassifierSpec,
    m: &FeatureMatrix,
    plan: &CrossValPlan,
) -> Result<MulticlassReport, EvalError> {
    plan.validate()?;
    let labels = m.labels().ok_or(EvalError::MissingLabels)?;
    let types: Vec<ShapeType> = labels
        .iter()
        .map(|l| match l {
            Label::Shape(s) => Ok(*s),
            Label::Diagnosis(_) => Err(EvalError::NotShapeLabels),
        })
        .collect::<Result<_, _>>()?;
    let classes: Vec<ShapeType> = ShapeType::ALL
        .iter()
        .copied()
        .filter(|t| types.contains(t))
        .collect();
    if classes.len() < 2 {
        return Err(EvalError::SingleClass);
    }
    for &class in &classes {
        let count = types.iter().filter(|&&t| t == class).count();
        if count < 4 {
            return Err(EvalError::TooFewPerClass {
                class: class.name(),
                got: count,
                need: 4,
            });
        }
    }
    let groups: Vec<usize> = types
        .iter()
        .map(|t| classes.iter().position(|c| c == t).expect("present"))
        .collect();

    let mut reps = Vec::with_capacity(plan.repetitions);
    for rep in 0..plan.repetitions {
        let mut rng = Rng::new(derive_seed(plan.seed, rep as u64));
        let (train_idx, val_idx) =
            stratified_split(&groups, classes.len(), plan.train_fraction, &mut rng);
        let train = m.select_rows(&train_idx);
        let val = m.select_rows(&val_idx);

        // one binary model per class; soft scores collected per sample
        let mut soft_per_class: Vec<Vec<f64>> = Vec::with_capacity(classes.len());
        for (ci, _) in classes.iter().enumerate() {
            let train_signs: Vec<Vote> = train_idx
                .iter()
                .map(|&i| if groups[i] == ci { 1 } else { -1 })
                .collect();
            let model = fit(spec, &train, &train_signs)?;
            let preds = predict_matrix(&model, &val)?;
            soft_per_class.push(preds.iter().map(|p| p.soft).collect());
        }

        let k = classes.len();
        let mut conf = alloc::vec![alloc::vec![0usize; k]; k];
        for (vi, &sample_idx) in val_idx.iter().enumerate() {
            let scores: Vec<f64> = (0..k).map(|ci| soft_per_class[ci][vi]).collect();
            let predicted = argmax_class(&scores);
            conf[groups[sample_idx]][predicted] += 1;
        }
        let total: usize = conf.iter().flatten().sum();
        let correct: usize = (0..k).map(|i| conf[i][i]).sum();
        let per_class_accuracy = (0..k)
            .map(|i| {
                let row: usize = conf[i].iter().sum();
                if row == 0 {
                    0.0
                } else {
                    conf[i][i] as f64 / row as f64
                }
            })
            .collect();
        reps.push(MulticlassRep {
            overall_accuracy: correct as f64 / total as f64,
            per_class_accuracy,
            confusion: conf,
        });
    }
    Ok(MulticlassReport {
        classes,
        overall_accuracy: aggregate(reps.iter().map(|r| r.overall_accuracy)),
        reps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{Diagnosis, Label};
    use alloc::vec;

    fn labeled_matrix(rows: Vec<Vec<f64>>, labels: Vec<Label>) -> FeatureMatrix {
        let p = rows[0].len();
        let mut m = FeatureMatrix::new(
            (0..p).map(|i| alloc::format!("f{i}")).collect(),
        )
        .unwrap();
        for r in rows {
            m.push_row(r).unwrap();
        }
        m.set_labels(labels).unwrap();
        m
    }

    fn blobs_matrix(n_per_class: usize, center: f64, seed: u64) -> FeatureMatrix {
        let mut rng = Rng::new(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for &(sign, label) in &[
            (1.0, Label::Diagnosis(Diagnosis::Malignant)),
            (-1.0, Label::Diagnosis(Diagnosis::Benign)),
        ] {
            for _ in 0..n_per_class {
                rows.push(vec![
                    sign * center + rng.gauss(),
                    sign * center + rng.gauss(),
                ]);
                labels.push(label);
            }
        }
        labeled_matrix(rows, labels)
    }

    #[test]
    fn confusion_examples() {
        let truth = vec![1, 1, 1, 1, 1, -1, -1, -1, -1, -1];
        let c = confusion(&truth, &truth).unwrap();
        assert_eq!((c.false_pos, c.false_neg), (0, 0));
        assert_eq!(c.accuracy(), 1.0);

        let inverted: Vec<Vote> = truth.iter().map(|v| -v).collect();
        let c = confusion(&inverted, &truth).unwrap();
        assert_eq!((c.true_pos, c.true_neg), (0, 0));

        let all_pos = vec![1; 10];
        let c = confusion(&all_pos, &truth).unwrap();
        assert_eq!(c.true_pos, 5);
        assert_eq!(c.false_pos, 5);
        assert_eq!(c.true_neg, 0);
        assert_eq!(c.false_neg, 0);
        assert_eq!(c.sensitivity(), 1.0);
        assert_eq!(c.specificity(), 0.0);
    }

    #[test]
    fn roc_perfect_and_inverted_exact() {
        let truth = vec![1, 1, 1, -1, -1, -1, -1];
        let scores = vec![0.9, 0.8, 0.7, 0.3, 0.2, 0.1, 0.05];
        let curve = roc(&scores, &truth).unwrap();
        assert_eq!(curve.auc(), 1.0);
        assert_eq!(curve.points().first(), Some(&(0.0, 0.0)));
        assert_eq!(curve.points().last(), Some(&(1.0, 1.0)));

        let inverted: Vec<f64> = scores.iter().map(|s| 1.0 - s).collect();
        assert_eq!(roc(&inverted, &truth).unwrap().auc(), 0.0);
    }

    #[test]
    fn roc_single_class_rejected() {
        assert!(matches!(
            roc(&[0.1, 0.9], &[1, 1]),
            Err(EvalError::SingleClass)
        ));
    }

    #[test]
    fn roc_known_small_case() {
        // classic 4-point example: AUC = 0.75
        let truth = vec![-1, -1, 1, 1];
        let scores = vec![0.1, 0.4, 0.35, 0.8];
        let curve = roc(&scores, &truth).unwrap();
        assert!((curve.auc() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn roc_matches_mann_whitney_with_ties() {
        let mut rng = Rng::new(60);
        for trial in 0..20 {
            let n = 200;
            // coarse quantization forces plenty of ties
            let scores: Vec<f64> = (0..n)
                .map(|_| (rng.next_f64() * 8.0).floor() / 8.0)
                .collect();
            let truth: Vec<Vote> = (0..n)
                .map(|i| if rng.next_f64() < 0.4 + scores[i] * 0.2 { 1 } else { -1 })
                .collect();
            if truth.iter().all(|&t| t == 1) || truth.iter().all(|&t| t == -1) {
                continue;
            }
            let a = roc(&scores, &truth).unwrap().auc();
            let b = mann_whitney_auc(&scores, &truth).unwrap();
            assert!((a - b).abs() < 1e-9, "trial {trial}: {a} vs {b}");
        }
    }

    #[test]
    fn roc_brute_force_pair_count_oracle() {
        let mut rng = Rng::new(61);
        let n = 150;
        let scores: Vec<f64> = (0..n).map(|_| (rng.next_f64() * 10.0).floor()).collect();
        let truth: Vec<Vote> = (0..n).map(|_| if rng.bernoulli(0.5) { 1 } else { -1 }).collect();
        let mut num = 0.0;
        let mut pairs = 0.0;
        for i in 0..n {
            for j in 0..n {
                if truth[i] > 0 && truth[j] < 0 {
                    pairs += 1.0;
                    if scores[i] > scores[j] {
                        num += 1.0;
                    } else if scores[i] == scores[j] {
                        num += 0.5;
                    }
                }
            }
        }
        let expected = num / pairs;
        assert!((roc(&scores, &truth).unwrap().auc() - expected).abs() < 1e-12);
        assert!((mann_whitney_auc(&scores, &truth).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn auc_invariant_under_monotone_transforms() {
        let mut rng = Rng::new(62);
        let n = 300;
        let scores: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
        let truth: Vec<Vote> = (0..n).map(|_| if rng.bernoulli(0.5) { 1 } else { -1 }).collect();
        let base = roc(&scores, &truth).unwrap().auc();
        let squashed: Vec<f64> = scores.iter().map(|s| 1.0 / (1.0 + (-5.0 * s).exp())).collect();
        let cubed: Vec<f64> = scores.iter().map(|s| s * s * s).collect();
        assert_eq!(roc(&squashed, &truth).unwrap().auc(), base);
        assert_eq!(roc(&cubed, &truth).unwrap().auc(), base);
    }

    #[test]
    fn trapezoid_matches_integer_auc() {
        let mut rng = Rng::new(63);
        let n = 500;
        let scores: Vec<f64> = (0..n).map(|_| (rng.next_f64() * 16.0).floor()).collect();
        let truth: Vec<Vote> = (0..n).map(|_| if rng.bernoulli(0.3) { 1 } else { -1 }).collect();
        let curve = roc(&scores, &truth).unwrap();
        assert!((curve.trapezoid_area() - curve.auc()).abs() < 1e-12);
    }

    #[test]
    fn stratification_within_one_sample() {
        let mut rng = Rng::new(64);
        let groups: Vec<usize> = (0..103).map(|i| usize::from(i % 3 == 0)).collect();
        let n1: usize = groups.iter().sum();
        let n0 = groups.len() - n1;
        let (train, val) = stratified_split(&groups, 2, 0.7, &mut rng);
        assert_eq!(train.len() + val.len(), groups.len());
        let train1 = train.iter().filter(|&&i| groups[i] == 1).count();
        let train0 = train.len() - train1;
        assert!((train1 as f64 - 0.7 * n1 as f64).abs() <= 0.5 + 1e-12);
        assert!((train0 as f64 - 0.7 * n0 as f64).abs() <= 0.5 + 1e-12);
    }

    #[test]
    fn crossval_deterministic_and_sized() {
        let m = blobs_matrix(30, 3.0, 65);
        let plan = CrossValPlan {
            repetitions: 3,
            train_fraction: 0.7,
            seed: 9,
        };
        let a = crossval(&plan, ClassifierSpec::Lda, &m).unwrap();
        let b = crossval(&plan, ClassifierSpec::Lda, &m).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.reps.len(), 3);
        for rep in &a.reps {
            assert_eq!(rep.confusion.total(), 18); // 30% of 60
        }
    }

    #[test]
    fn crossval_separable_accuracy() {
        let m = blobs_matrix(100, 3.0, 66);
        let plan = CrossValPlan {
            repetitions: 3,
            train_fraction: 0.7,
            seed: 4,
        };
        let report = crossval(&plan, ClassifierSpec::Lda, &m).unwrap();
        assert!(report.accuracy.mean >= 0.97, "mean {}", report.accuracy.mean);
        assert!(report.auc_mean.unwrap() > 0.99);
    }

    #[test]
    fn crossval_requires_both_classes() {
        let rows = vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0], vec![4.0]];
        let labels = vec![Label::Diagnosis(Diagnosis::Benign); 5];
        let m = labeled_matrix(rows, labels);
        assert!(matches!(
            crossval(&CrossValPlan::default(), ClassifierSpec::Lda, &m),
            Err(EvalError::TooFewPerClass { .. })
        ));
    }

    #[test]
    fn argmax_tie_keeps_first() {
        assert_eq!(argmax_class(&[0.5, 0.5, 0.5, 0.5]), 0);
        assert_eq!(argmax_class(&[0.2, 0.7, 0.7]), 1);
    }

    #[test]
    fn one_vs_rest_separable_clusters() {
        let mut rng = Rng::new(67);
        let centers = [(0.0, 0.0), (6.0, 0.0), (0.0, 6.0), (6.0, 6.0)];
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (ci, &(cx, cy)) in centers.iter().enumerate() {
            for _ in 0..40 {
                rows.push(vec![cx + rng.gauss() * 0.5, cy + rng.gauss() * 0.5]);
                labels.push(Label::Shape(ShapeType::ALL[ci]));
            }
        }
        let m = labeled_matrix(rows, labels);
        let plan = CrossValPlan {
            repetitions: 3,
            train_fraction: 0.7,
            seed: 5,
        };
        let report = one_vs_rest(ClassifierSpec::Lda, &m, &plan).unwrap();
        assert_eq!(report.classes, ShapeType::ALL);
        assert!(report.overall_accuracy.mean >= 0.95);
    }

    #[test]
    fn one_vs_rest_two_classes_matches_binary_path() {
        // with only two classes present, argmax over the two mirrored
        // models must reproduce the direct binary decision
        let mut rng = Rng::new(68);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        let mut signs = Vec::new();
        for &(c, label, s) in &[
            (2.0, Label::Shape(ShapeType::Round), -1i8),
            (-2.0, Label::Shape(ShapeType::Stellate), 1i8),
        ] {
            for _ in 0..30 {
                rows.push(vec![c + rng.gauss(), c + rng.gauss()]);
                labels.push(label);
                signs.push(s);
            }
        }
        let m = labeled_matrix(rows, labels.clone());

        for spec in [ClassifierSpec::Lda, ClassifierSpec::knn(3).unwrap()] {
            // fit both one-vs-rest models on the full data
            let round_signs: Vec<Vote> = labels
                .iter()
                .map(|l| if *l == Label::Shape(ShapeType::Round) { 1 } else { -1 })
                .collect();
            let stellate_signs: Vec<Vote> = round_signs.iter().map(|s| -s).collect();
            let round_model = fit(spec, &m, &round_signs).unwrap();
            let stellate_model = fit(spec, &m, &stellate_signs).unwrap();
            let pr = predict_matrix(&round_model, &m).unwrap();
            let ps = predict_matrix(&stellate_model, &m).unwrap();
            for i in 0..m.n_rows() {
                let ovr_is_round = argmax_class(&[pr[i].soft, ps[i].soft]) == 0;
                let binary_is_round = pr[i].hard == 1;
                assert_eq!(ovr_is_round, binary_is_round, "{spec:?} row {i}");
            }
        }
        let _ = signs;
    }

    #[test]
    fn reports_are_reproducible() {
        let m = blobs_matrix(20, 1.0, 69);
        let plan = CrossValPlan {
            repetitions: 5,
            train_fraction: 0.6,
            seed: 77,
        };
        assert_eq!(
            crossval(&plan, ClassifierSpec::knn(3).unwrap(), &m).unwrap(),
            crossval(&plan, ClassifierSpec::knn(3).unwrap(), &m).unwrap()
        );
    }
}
