//! Classifier model persistence as a JSON document: spec, feature
//! columns, standardization arrays and kind-specific parameters (k-NN
//! stores its standardized training matrix inline).

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use masskit_core::classify::{ClassifierModel, ClassifierSpec, ModelParams, Standardizer};
use masskit_core::Vote;
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
struct SpecDoc {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct StandardizationDoc {
    means: Vec<f64>,
    stds: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ParamsDoc {
    Linear {
        weights: Vec<f64>,
        bias: f64,
    },
    Knn {
        train: Vec<Vec<f64>>,
        labels: Vec<Vote>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelDoc {
    spec: SpecDoc,
    columns: Vec<String>,
    standardization: StandardizationDoc,
    parameters: ParamsDoc,
}

pub fn model_to_json(model: &ClassifierModel) -> Result<String> {
    let spec = match model.spec() {
        ClassifierSpec::Lda => SpecDoc {
            kind: "lda".into(),
            k: None,
        },
        ClassifierSpec::Lsmd => SpecDoc {
            kind: "lsmd".into(),
            k: None,
        },
        ClassifierSpec::Knn { k } => SpecDoc {
            kind: "knn".into(),
            k: Some(k),
        },
    };
    let parameters = match model.params() {
        ModelParams::Linear { weights, bias } => ParamsDoc::Linear {
            weights: weights.clone(),
            bias: *bias,
        },
        ModelParams::Knn { train, labels } => ParamsDoc::Knn {
            train: train.clone(),
            labels: labels.clone(),
        },
    };
    let doc = ModelDoc {
        spec,
        columns: model.columns().to_vec(),
        standardization: StandardizationDoc {
            means: model.standardizer().means().to_vec(),
            stds: model.standardizer().stds().to_vec(),
        },
        parameters,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn model_from_json(path: &Path) -> Result<ClassifierModel> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let doc: ModelDoc =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let spec = match doc.spec.kind.as_str() {
        "lda" => ClassifierSpec::Lda,
        "lsmd" => ClassifierSpec::Lsmd,
        "knn" => {
            let k = doc
                .spec
                .k
                .ok_or_else(|| anyhow!("{}: knn model lacks k", path.display()))?;
            ClassifierSpec::knn(k).map_err(|e| anyhow!("{}: {e}", path.display()))?
        }
        other => bail!("{}: unknown classifier kind '{other}'", path.display()),
    };
    let params = match doc.parameters {
        ParamsDoc::Linear { weights, bias } => ModelParams::Linear { weights, bias },
        ParamsDoc::Knn { train, labels } => ModelParams::Knn { train, labels },
    };
    Ok(ClassifierModel::from_parts(
        spec,
        doc.columns,
        Standardizer::from_parts(doc.standardization.means, doc.standardization.stds),
        params,
    ))
}
