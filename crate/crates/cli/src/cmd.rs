//! Implementations of the `masskit` subcommands. Argument parsing lives
//! in the binary; these functions take validated values, do the work and
//! write the declared file formats.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use masskit_core::analysis::{correlation_dimension, manova_wilks, rank_features_ttest};
use masskit_core::classify::{fit, ClassifierSpec, Standardizer};
use masskit_core::ensemble::{
    all_vote_patterns, average_decide, bayes_optimal_decide, competencies_from_votes,
    majority_decide, prior_logodds, rank_decide, wmr_decide, wmr_weights, CompetencyProfile,
    RankRule, WeightProfile,
};
use masskit_core::evaluation::{crossval, one_vs_rest, CrossValPlan};
use masskit_core::features::{
    aggregate_mass_texture, box_feature_map, reduce_map_to_curves, shape_descriptor,
    FeatureMatrix, Label, Rect, ShapeDescriptorConfig,
};
use masskit_core::rng::{derive_seed, Rng};
use masskit_core::synth::{
    gen_expert_votes, gen_shape_dataset, gen_texture_image, ExpertGenConfig, ShapeGenConfig,
    TextureClass,
};
use masskit_core::transforms::Wavelet;
use masskit_core::Vote;

use crate::io;
use crate::model::model_to_json;
use crate::report::{
    roc_points_csv, CombineReportDoc, EvalReportDoc, FractalReportDoc, ManovaReportDoc,
    MulticlassReportDoc, RankReportDoc, RuleAccuracyDoc,
};

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct ManifestSample {
    file: String,
    shape_type: String,
    diagnosis: String,
    seed: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    seed: u64,
    type_priors: [f64; 4],
    samples: Vec<ManifestSample>,
}

pub fn synth_shapes(n: usize, seed: u64, out_dir: &Path, priors: [f64; 4]) -> Result<()> {
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    let cfg = ShapeGenConfig::default();
    let samples = gen_shape_dataset(n, &cfg, &priors, seed)?;
    let mut manifest = Manifest {
        seed,
        type_priors: priors,
        samples: Vec::with_capacity(n),
    };
    for (i, sample) in samples.iter().enumerate() {
        let file = format!("contour_{i:05}.csv");
        io::write_atomic(
            &out_dir.join(&file),
            io::contour_to_csv(&sample.contour).as_bytes(),
        )?;
        manifest.samples.push(ManifestSample {
            file,
            shape_type: sample.shape_type.name().to_string(),
            diagnosis: sample.diagnosis.name().to_string(),
            seed: sample.seed,
        });
    }
    let json = serde_json::to_string_pretty(&manifest)?;
    io::write_atomic(&out_dir.join("manifest.json"), json.as_bytes())?;
    println!(
        "wrote {} contours and manifest.json to {}",
        n,
        out_dir.display()
    );
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct CompetenciesDoc {
    competencies: Vec<f64>,
}

pub fn synth_experts(
    k: usize,
    trials: usize,
    seed: u64,
    competencies: Option<Vec<f64>>,
    prior_pos: f64,
    out: &Path,
    competencies_out: Option<&Path>,
) -> Result<()> {
    let competencies = match competencies {
        Some(c) => {
            if c.len() != k {
                bail!("--competencies must list exactly {k} values");
            }
            c
        }
        None => {
            // default panel: competencies drawn uniformly from [0.6, 0.9]
            let mut rng = Rng::new(derive_seed(seed, 1000));
            (0..k).map(|_| rng.uniform(0.6, 0.9)).collect()
        }
    };
    let cfg = ExpertGenConfig {
        competencies: competencies.clone(),
        prior_pos,
        trials,
    };
    let votes = gen_expert_votes(&cfg, seed)?;
    io::write_atomic(out, io::votes_to_csv(&votes.votes, &votes.truth).as_bytes())?;
    if let Some(path) = competencies_out {
        let doc = CompetenciesDoc { competencies };
        io::write_atomic(path, serde_json::to_string_pretty(&doc)?.as_bytes())?;
    }
    println!("wrote {} trials x {} experts to {}", trials, k, out.display());
    Ok(())
}

pub fn synth_textures(class: &str, size: usize, seed: u64, out: &Path) -> Result<()> {
    let class = TextureClass::from_name(class)
        .ok_or_else(|| anyhow!("unknown texture class '{class}' (benign_like | malignant_like)"))?;
    let img = gen_texture_image(class, size, seed)?;
    io::write_atomic(out, &io::pgm_to_bytes(&img))?;
    println!("wrote {}x{} {} field to {}", size, size, class.name(), out.display());
    Ok(())
}

// ---------------------------------------------------------------------------
// extract
// ---------------------------------------------------------------------------

/// Writes one carrier signal as CSV, one coefficient per line.
fn write_carrier(dir: &Path, name: &str, signal: &[f64]) -> Result<()> {
    let mut out = String::new();
    for v in signal {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    io::write_atomic(&dir.join(format!("{name}.csv")), out.as_bytes())
}

/// Dumps every carrier of one contour (normalized radial signal, DFT
/// envelope, DWT bands) into `dir`.
fn dump_carriers(contour_path: &Path, config: &ShapeDescriptorConfig, dir: &Path) -> Result<()> {
    use masskit_core::geometry::radial_distance_signal;
    use masskit_core::transforms::{dft_envelope, dwt_decompose};

    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let contour = io::read_contour_csv(contour_path)?;
    let signal = radial_distance_signal(&contour, config.samples)
        .and_then(|s| s.normalized())
        .map_err(|e| anyhow!("{}: {e}", contour_path.display()))?;
    write_carrier(dir, "raw", signal.samples())?;
    let envelope = dft_envelope(signal.samples())?;
    write_carrier(dir, "dft_envelope", envelope.magnitudes())?;
    let decomp = dwt_decompose(signal.samples(), config.levels, config.wavelet)?;
    for (j, band) in decomp.detail_bands().iter().enumerate() {
        write_carrier(dir, &format!("dwt_d{}", j + 1), band)?;
    }
    write_carrier(dir, &format!("dwt_a{}", config.levels), decomp.approx_band())?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn extract_shapes(
    manifest: Option<&Path>,
    contour: Option<&Path>,
    out: &Path,
    samples: usize,
    wavelet: &str,
    levels: usize,
    label_kind: &str,
    carriers_out: Option<&Path>,
) -> Result<()> {
    let config = ShapeDescriptorConfig {
        samples,
        wavelet: Wavelet::from_name(wavelet)?,
        levels,
    };
    if let Some(dir) = carriers_out {
        let path = contour.ok_or_else(|| {
            anyhow!("--carriers-out requires single-contour mode (--contour)")
        })?;
        dump_carriers(path, &config, dir)?;
        println!("wrote carrier dumps to {}", dir.display());
    }
    let mut matrix = FeatureMatrix::new(config.feature_names())
        .map_err(|e| anyhow!("descriptor columns: {e}"))?;

    match (manifest, contour) {
        (Some(manifest_path), None) => {
            let text = std::fs::read_to_string(manifest_path)
                .with_context(|| format!("reading {}", manifest_path.display()))?;
            let manifest: Manifest = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", manifest_path.display()))?;
            let base = manifest_path.parent().unwrap_or(Path::new("."));
            let mut labels = Vec::with_capacity(manifest.samples.len());
            for sample in &manifest.samples {
                let path = base.join(&sample.file);
                let contour = io::read_contour_csv(&path)?;
                let fv = shape_descriptor(&contour, &config)
                    .map_err(|e| anyhow!("{}: {e}", path.display()))?;
                matrix.push_vector(&fv).map_err(|e| anyhow!("{e}"))?;
                let label = match label_kind {
                    "diagnosis" => Label::parse(&sample.diagnosis),
                    "shape" => Label::parse(&sample.shape_type),
                    other => bail!("unknown label kind '{other}' (diagnosis | shape)"),
                }
                .ok_or_else(|| anyhow!("{}: bad label in manifest", sample.file))?;
                labels.push(label);
            }
            matrix.set_labels(labels).map_err(|e| anyhow!("{e}"))?;
        }
        (None, Some(contour_path)) => {
            let c = io::read_contour_csv(contour_path)?;
            let fv = shape_descriptor(&c, &config)
                .map_err(|e| anyhow!("{}: {e}", contour_path.display()))?;
            matrix.push_vector(&fv).map_err(|e| anyhow!("{e}"))?;
        }
        _ => bail!("exactly one of --manifest or --contour is required"),
    }
    io::write_atomic(out, io::feature_matrix_to_csv(&matrix).as_bytes())?;
    println!(
        "wrote {} x {} descriptor matrix to {}",
        matrix.n_rows(),
        matrix.n_cols(),
        out.display()
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn extract_texture(
    image: &Path,
    roi: Option<Rect>,
    box_size: usize,
    out_map: Option<&Path>,
    out_aggregate: Option<&Path>,
    out_curves: Option<&Path>,
    label: Option<&str>,
) -> Result<()> {
    if out_map.is_none() && out_aggregate.is_none() && out_curves.is_none() {
        bail!("at least one of --out, --aggregate or --curves is required");
    }
    let img = io::read_pgm(image)?;
    let roi = roi.unwrap_or_else(|| Rect::new(0, 0, img.width(), img.height()));
    let map = box_feature_map(&img, roi, box_size)
        .map_err(|e| anyhow!("{}: {e}", image.display()))?;
    if let Some(path) = out_map {
        io::write_atomic(path, io::feature_matrix_to_csv(&map).as_bytes())?;
        println!("wrote {} box rows to {}", map.n_rows(), path.display());
    }
    if let Some(path) = out_aggregate {
        let fv = aggregate_mass_texture(&map).map_err(|e| anyhow!("{e}"))?;
        let mut agg = FeatureMatrix::new(fv.names().to_vec()).map_err(|e| anyhow!("{e}"))?;
        agg.push_vector(&fv).map_err(|e| anyhow!("{e}"))?;
        if let Some(raw) = label {
            let label = Label::parse(raw)
                .ok_or_else(|| anyhow!("unknown label '{raw}'"))?;
            agg.set_labels(vec![label]).map_err(|e| anyhow!("{e}"))?;
        }
        io::write_atomic(path, io::feature_matrix_to_csv(&agg).as_bytes())?;
        println!("wrote aggregated per-mass row to {}", path.display());
    }
    if let Some(path) = out_curves {
        let curves = reduce_map_to_curves(&map).map_err(|e| anyhow!("{e}"))?;
        let mut out = String::from("row");
        for (name, _) in &curves {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        let rows = curves.first().map_or(0, |(_, c)| c.len());
        for r in 0..rows {
            out.push_str(&r.to_string());
            for (_, curve) in &curves {
                out.push(',');
                out.push_str(&curve[r].to_string());
            }
            out.push('\n');
        }
        io::write_atomic(path, out.as_bytes())?;
        println!("wrote {} scan-line curves to {}", curves.len(), path.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

pub fn analyze_rank(features: &Path, out_json: &Path, out_csv: &Path) -> Result<()> {
    let m = io::read_feature_csv(features)?;
    let ranking = rank_features_ttest(&m).map_err(|e| anyhow!("{}: {e}", features.display()))?;
    let doc = RankReportDoc::new(&ranking);
    io::write_atomic(out_json, serde_json::to_string_pretty(&doc)?.as_bytes())?;
    io::write_atomic(out_csv, doc.to_csv().as_bytes())?;
    println!(
        "ranked {} features; best: {}",
        doc.entries.len(),
        doc.entries.first().map_or("-", |e| e.feature.as_str())
    );
    Ok(())
}

pub fn analyze_manova(
    features: &Path,
    columns: Option<Vec<String>>,
    out_json: &Path,
) -> Result<()> {
    let m = io::read_feature_csv(features)?;
    let (subset, names) = match columns {
        Some(names) => {
            let sub = m
                .select_columns(&names)
                .ok_or_else(|| anyhow!("--columns contains unknown feature names"))?;
            (sub, names)
        }
        None => (m.clone(), m.columns().to_vec()),
    };
    let result = manova_wilks(&subset).map_err(|e| anyhow!("{}: {e}", features.display()))?;
    let doc = ManovaReportDoc::new(names, &result);
    io::write_atomic(out_json, serde_json::to_string_pretty(&doc)?.as_bytes())?;
    println!(
        "Wilks lambda = {}, F = {}, p = {}",
        doc.lambda, doc.f_statistic, doc.p_value
    );
    Ok(())
}

pub fn analyze_fractal(
    features: &Path,
    r_count: usize,
    raw: bool,
    out_json: &Path,
    out_csv: &Path,
) -> Result<()> {
    let m = io::read_feature_csv(features)?;
    let m = if raw {
        m
    } else {
        // estimator precondition: standardized features
        let standardizer = Standardizer::fit(m.rows());
        let mut std_m = FeatureMatrix::new(m.columns().to_vec()).map_err(|e| anyhow!("{e}"))?;
        for row in standardizer.transform_rows(m.rows()) {
            std_m.push_row(row).map_err(|e| anyhow!("{e}"))?;
        }
        std_m
    };
    let est = correlation_dimension(&m, r_count)
        .map_err(|e| anyhow!("{}: {e}", features.display()))?;
    let doc = FractalReportDoc::new(&est);
    io::write_atomic(out_json, serde_json::to_string_pretty(&doc)?.as_bytes())?;
    io::write_atomic(out_csv, FractalReportDoc::curve_csv(&est).as_bytes())?;
    println!("correlation dimension = {} (fit r2 = {})", doc.dimension, doc.fit_r2);
    Ok(())
}

// ---------------------------------------------------------------------------
// train-eval
// ---------------------------------------------------------------------------

pub fn parse_classifier(name: &str, k: usize) -> Result<ClassifierSpec> {
    match name {
        "lda" => Ok(ClassifierSpec::Lda),
        "lsmd" => Ok(ClassifierSpec::Lsmd),
        "knn" => ClassifierSpec::knn(k).map_err(|e| anyhow!("{e}")),
        other => bail!("unknown classifier '{other}' (lda | lsmd | knn)"),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn train_eval(
    features: &Path,
    classifier: &str,
    k: usize,
    reps: usize,
    train_fraction: f64,
    seed: u64,
    target: &str,
    out_report: &Path,
    out_model: Option<&Path>,
    out_roc_prefix: Option<&Path>,
) -> Result<()> {
    let m = io::read_feature_csv(features)?;
    let spec = parse_classifier(classifier, k)?;
    let plan = CrossValPlan {
        repetitions: reps,
        train_fraction,
        seed,
    };
    match target {
        "diagnosis" => {
            let report =
                crossval(&plan, spec, &m).map_err(|e| anyhow!("{}: {e}", features.display()))?;
            if let Some(prefix) = out_roc_prefix {
                for (i, rep) in report.reps.iter().enumerate() {
                    if let Some(curve) = &rep.roc {
                        let path = roc_path(prefix, i);
                        io::write_atomic(&path, roc_points_csv(curve.points()).as_bytes())?;
                    }
                }
            }
            let doc = EvalReportDoc::new(
                classifier.to_string(),
                reps,
                train_fraction,
                seed,
                &report,
            );
            io::write_atomic(out_report, serde_json::to_string_pretty(&doc)?.as_bytes())?;
            if let Some(model_path) = out_model {
                let signs = m
                    .binary_signs()
                    .ok_or_else(|| anyhow!("{}: diagnosis labels required", features.display()))?;
                // the persisted model is fitted on the full dataset
                let model = fit(spec, &m, &signs)?;
                io::write_atomic(model_path, model_to_json(&model)?.as_bytes())?;
            }
            println!(
                "mean accuracy {} (sensitivity {}, specificity {})",
                doc.accuracy.mean, doc.sensitivity.mean, doc.specificity.mean
            );
        }
        "shape" => {
            if out_model.is_some() {
                bail!("--out-model is only available for --target diagnosis");
            }
            let report = one_vs_rest(spec, &m, &plan)
                .map_err(|e| anyhow!("{}: {e}", features.display()))?;
            let doc = MulticlassReportDoc::new(
                classifier.to_string(),
                reps,
                train_fraction,
                seed,
                &report,
            );
            io::write_atomic(out_report, serde_json::to_string_pretty(&doc)?.as_bytes())?;
            println!("mean overall accuracy {}", doc.overall_accuracy.mean);
        }
        other => bail!("unknown target '{other}' (diagnosis | shape)"),
    }
    Ok(())
}

fn roc_path(prefix: &Path, rep: usize) -> PathBuf {
    let mut name = prefix
        .file_name()
        .map_or_else(|| "roc".to_string(), |n| n.to_string_lossy().into_owned());
    name.push_str(&format!("_rep{rep}.csv"));
    prefix.with_file_name(name)
}

// ---------------------------------------------------------------------------
// combine
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum CompetenciesInput {
    Wrapped { competencies: Vec<f64> },
    Bare(Vec<f64>),
}

#[allow(clippy::too_many_arguments)]
pub fn combine(
    votes_path: &Path,
    competencies_path: Option<&Path>,
    estimate_from: Option<&Path>,
    prior_pos: f64,
    check_bayes: bool,
    out_json: &Path,
    out_csv: &Path,
    out_decisions: Option<&Path>,
) -> Result<()> {
    let matrix = io::read_votes_csv(votes_path)?;
    let k = matrix.experts();

    let profile = match (competencies_path, estimate_from) {
        (Some(_), Some(_)) => bail!("--competencies and --estimate-from are mutually exclusive"),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let parsed: CompetenciesInput = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            let p = match parsed {
                CompetenciesInput::Wrapped { competencies } => competencies,
                CompetenciesInput::Bare(c) => c,
            };
            if p.len() != k {
                bail!(
                    "{}: {} competencies for {} experts",
                    path.display(),
                    p.len(),
                    k
                );
            }
            CompetencyProfile::new(p)?
        }
        (None, Some(path)) => {
            let validation = io::read_votes_csv(path)?;
            if validation.experts() != k {
                bail!(
                    "{}: expert count {} does not match the input matrix's {}",
                    path.display(),
                    validation.experts(),
                    k
                );
            }
            competencies_from_votes(&validation.votes, &validation.truth)?
        }
        // fall back to self-estimation on the input matrix
        (None, None) => competencies_from_votes(&matrix.votes, &matrix.truth)?,
    };

    let pl = prior_logodds(prior_pos)?;
    let mut per_rule: Vec<(String, Vec<Vote>)> = Vec::new();
    for weight_kind in WeightProfile::ALL {
        let weights = wmr_weights(&profile, weight_kind);
        let prior = if weight_kind == WeightProfile::LogOdds { pl } else { 0.0 };
        let decisions: Vec<Vote> = matrix
            .votes
            .iter()
            .map(|v| wmr_decide(v, &weights, prior))
            .collect::<Result<_, _>>()?;
        per_rule.push((format!("wmr_{}", weight_kind.name()), decisions));
    }
    per_rule.push((
        "majority".into(),
        matrix.votes.iter().map(|v| majority_decide(v)).collect(),
    ));
    for rank_rule in RankRule::ALL {
        let decisions: Vec<Vote> = matrix
            .scores
            .iter()
            .map(|s| rank_decide(s, rank_rule))
            .collect::<Result<_, _>>()?;
        per_rule.push((rank_rule.name().into(), decisions));
    }
    per_rule.push((
        "average".into(),
        matrix
            .scores
            .iter()
            .map(|s| average_decide(s, None).map(|(v, _)| v))
            .collect::<Result<_, _>>()?,
    ));
    per_rule.push((
        "weighted_average".into(),
        matrix
            .scores
            .iter()
            .map(|s| average_decide(s, Some(&profile)).map(|(v, _)| v))
            .collect::<Result<_, _>>()?,
    ));

    let accuracy_of = |decisions: &[Vote]| -> f64 {
        decisions
            .iter()
            .zip(&matrix.truth)
            .filter(|(d, t)| d == t)
            .count() as f64
            / matrix.trials() as f64
    };
    let rules: Vec<RuleAccuracyDoc> = per_rule
        .iter()
        .map(|(rule, decisions)| RuleAccuracyDoc {
            rule: rule.clone(),
            accuracy: accuracy_of(decisions),
        })
        .collect();

    if let Some(path) = out_decisions {
        let mut out = per_rule
            .iter()
            .map(|(rule, _)| rule.as_str())
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(",truth\n");
        for trial in 0..matrix.trials() {
            for (_, decisions) in &per_rule {
                out.push_str(&decisions[trial].to_string());
                out.push(',');
            }
            out.push_str(&matrix.truth[trial].to_string());
            out.push('\n');
        }
        io::write_atomic(path, out.as_bytes())?;
    }

    let bayes_agreement = if check_bayes {
        if k > 7 {
            bail!("--check-bayes enumerates 2^K patterns and requires K <= 7, got {k}");
        }
        let weights = wmr_weights(&profile, WeightProfile::LogOdds);
        let mut agree = 0usize;
        let mut total = 0usize;
        for pattern in all_vote_patterns(k) {
            let wmr = wmr_decide(&pattern, &weights, pl)?;
            let bayes = bayes_optimal_decide(&pattern, &profile, prior_pos)?;
            agree += usize::from(wmr == bayes);
            total += 1;
        }
        Some(agree as f64 / total as f64)
    } else {
        None
    };

    let doc = CombineReportDoc {
        experts: k,
        trials: matrix.trials(),
        competencies: profile.competencies().to_vec(),
        prior_pos,
        rules,
        bayes_agreement,
    };
    io::write_atomic(out_json, serde_json::to_string_pretty(&doc)?.as_bytes())?;
    io::write_atomic(out_csv, doc.rules_csv().as_bytes())?;
    for r in &doc.rules {
        println!("{}: {}", r.rule, r.accuracy);
    }
    if let Some(agreement) = doc.bayes_agreement {
        println!("bayes_agreement: {agreement}");
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// shared parsing helpers
// ---------------------------------------------------------------------------

pub fn parse_priors(s: &str) -> Result<[f64; 4]> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| anyhow!("bad prior '{p}'")))
        .collect::<Result<_>>()?;
    if parts.len() != 4 {
        bail!("--priors needs exactly 4 comma-separated values (round,lobulated,microlobulated,stellate)");
    }
    Ok([parts[0], parts[1], parts[2], parts[3]])
}

pub fn parse_competency_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("bad competency '{p}'"))
        })
        .collect()
}

pub fn parse_roi(s: &str) -> Result<Rect> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| anyhow!("bad ROI field '{p}'")))
        .collect::<Result<_>>()?;
    if parts.len() != 4 {
        bail!("--roi must be x,y,w,h");
    }
    Ok(Rect::new(parts[0], parts[1], parts[2], parts[3]))
}
