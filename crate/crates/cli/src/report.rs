//! JSON report documents emitted by the analysis, evaluation and
//! combination commands, plus their CSV companions.

use masskit_core::analysis::{FeatureRanking, FractalEstimate, ManovaResult};
use masskit_core::evaluation::{EvalReport, MulticlassReport};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct RankEntryDoc {
    pub feature: String,
    pub statistic: f64,
    pub p_value: f64,
    pub rank: usize,
}

#[derive(Debug, Serialize)]
pub struct RankReportDoc {
    pub entries: Vec<RankEntryDoc>,
}

impl RankReportDoc {
    pub fn new(ranking: &FeatureRanking) -> Self {
        RankReportDoc {
            entries: ranking
                .entries()
                .iter()
                .enumerate()
                .map(|(i, e)| RankEntryDoc {
                    feature: e.feature.clone(),
                    statistic: e.statistic,
                    p_value: e.p_value,
                    rank: i + 1,
                })
                .collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("feature,statistic,p_value,rank\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{}\n",
                e.feature, e.statistic, e.p_value, e.rank
            ));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct ManovaReportDoc {
    pub columns: Vec<String>,
    pub lambda: f64,
    pub f_statistic: f64,
    pub p_value: f64,
    pub df1: f64,
    pub df2: f64,
}

impl ManovaReportDoc {
    pub fn new(columns: Vec<String>, r: &ManovaResult) -> Self {
        ManovaReportDoc {
            columns,
            lambda: r.lambda,
            f_statistic: r.f_statistic,
            p_value: r.p_value,
            df1: r.df1,
            df2: r.df2,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FractalReportDoc {
    pub dimension: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub fit_r2: f64,
}

impl FractalReportDoc {
    pub fn new(est: &FractalEstimate) -> Self {
        FractalReportDoc {
            dimension: est.dimension,
            r_min: est.fit_range.0,
            r_max: est.fit_range.1,
            fit_r2: est.fit_r2,
        }
    }

    pub fn curve_csv(est: &FractalEstimate) -> String {
        let mut out = String::from("radius,correlation_sum\n");
        for (r, c) in &est.curve {
            out.push_str(&format!("{r},{c}\n"));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct ConfusionDoc {
    pub true_pos: usize,
    pub false_pos: usize,
    pub true_neg: usize,
    pub false_neg: usize,
}

#[derive(Debug, Serialize)]
pub struct RepDoc {
    pub accuracy: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub confusion: ConfusionDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auc: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct AggregateDoc {
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Serialize)]
pub struct EvalReportDoc {
    pub classifier: String,
    pub repetitions: usize,
    pub train_fraction: f64,
    pub seed: u64,
    pub reps: Vec<RepDoc>,
    pub accuracy: AggregateDoc,
    pub sensitivity: AggregateDoc,
    pub specificity: AggregateDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub auc_mean: Option<f64>,
}

impl EvalReportDoc {
    pub fn new(
        classifier: String,
        repetitions: usize,
        train_fraction: f64,
        seed: u64,
        report: &EvalReport,
    ) -> Self {
        EvalReportDoc {
            classifier,
            repetitions,
            train_fraction,
            seed,
            reps: report
                .reps
                .iter()
                .map(|r| RepDoc {
                    accuracy: r.accuracy,
                    sensitivity: r.sensitivity,
                    specificity: r.specificity,
                    confusion: ConfusionDoc {
                        true_pos: r.confusion.true_pos,
                        false_pos: r.confusion.false_pos,
                        true_neg: r.confusion.true_neg,
                        false_neg: r.confusion.false_neg,
                    },
                    auc: r.roc.as_ref().map(|c| c.auc()),
                })
                .collect(),
            accuracy: AggregateDoc {
                mean: report.accuracy.mean,
                std: report.accuracy.std,
            },
            sensitivity: AggregateDoc {
                mean: report.sensitivity.mean,
                std: report.sensitivity.std,
            },
            specificity: AggregateDoc {
                mean: report.specificity.mean,
                std: report.specificity.std,
            },
            auc_mean: report.auc_mean,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MulticlassRepDoc {
    pub overall_accuracy: f64,
    pub per_class_accuracy: Vec<f64>,
    pub confusion: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize)]
pub struct MulticlassReportDoc {
    pub classifier: String,
    pub classes: Vec<String>,
    pub repetitions: usize,
    pub train_fraction: f64,
    pub seed: u64,
    pub reps: Vec<MulticlassRepDoc>,
    pub overall_accuracy: AggregateDoc,
}

impl MulticlassReportDoc {
    pub fn new(
        classifier: String,
        repetitions: usize,
        train_fraction: f64,
        seed: u64,
        report: &MulticlassReport,
    ) -> Self {
        MulticlassReportDoc {
            classifier,
            classes: report.classes.iter().map(|c| c.name().to_string()).collect(),
            repetitions,
            train_fraction,
            seed,
            reps: report
                .reps
                .iter()
                .map(|r| MulticlassRepDoc {
                    overall_accuracy: r.overall_accuracy,
                    per_class_accuracy: r.per_class_accuracy.clone(),
                    confusion: r.confusion.clone(),
                })
                .collect(),
            overall_accuracy: AggregateDoc {
                mean: report.overall_accuracy.mean,
                std: report.overall_accuracy.std,
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RuleAccuracyDoc {
    pub rule: String,
    pub accuracy: f64,
}

#[derive(Debug, Serialize)]
pub struct CombineReportDoc {
    pub experts: usize,
    pub trials: usize,
    pub competencies: Vec<f64>,
    pub prior_pos: f64,
    pub rules: Vec<RuleAccuracyDoc>,
    /// Fraction of decisions where log-odds WMR matches the Bayes oracle
    /// over the exhaustive pattern enumeration (present with --check-bayes).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bayes_agreement: Option<f64>,
}

impl CombineReportDoc {
    pub fn rules_csv(&self) -> String {
        let mut out = String::from("rule,accuracy\n");
        for r in &self.rules {
            out.push_str(&format!("{},{}\n", r.rule, r.accuracy));
        }
        out
    }
}

/// ROC points as a two-column CSV for external plotting.
pub fn roc_points_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("fpr,tpr\n");
    for (fpr, tpr) in points {
        out.push_str(&format!("{fpr},{tpr}\n"));
    }
    out
}
