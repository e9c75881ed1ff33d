//! The 20-function texture bank over image sampling boxes, the
//! non-overlapping box tiling of a region of interest, the reduction of a
//! box grid to per-feature scan-line curves, and per-mass aggregation.
//!
//! The bank covers three groups:
//!
//! * 8 first-order statistics of the box (moments plus histogram measures
//!   on a 16-level quantization of the box range);
//! * 8 co-occurrence features from a symmetric, normalized gray-level
//!   co-occurrence matrix at 16 levels, pooled over the (1,0) and (0,1)
//!   offsets — the pooling makes them invariant to 90° rotation;
//! * 4 roughness metrics from first differences and the 4-neighbor
//!   Laplacian.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float as _;

use super::{BoxOrigin, FeatureError, FeatureMatrix, FeatureVector, GrayImage, Rect};

/// Names of the 20 texture features, in emission order.
pub const TEXTURE_FEATURE_NAMES: [&str; 20] = [
    "fo_mean",
    "fo_variance",
    "fo_skewness",
    "fo_kurtosis",
    "fo_energy",
    "fo_entropy",
    "fo_smoothness",
    "fo_coeff_variation",
    "glcm_contrast",
    "glcm_correlation",
    "glcm_asm",
    "glcm_idm",
    "glcm_entropy",
    "glcm_dissimilarity",
    "glcm_max_prob",
    "glcm_cluster_shade",
    "grad_mean_abs",
    "grad_variance",
    "laplacian_mean_abs",
    "edge_density",
];

const GLCM_LEVELS: usize = 16;
const EDGE_THRESHOLD: f64 = 0.1;
const MIN_BOX_AREA: usize = 16;

/// Computes the 20-function texture bank over one sampling box.
pub fn texture_features(img: &GrayImage, rect: Rect) -> Result<FeatureVector, FeatureError> {
    if !rect.fits_in(img) {
        return Err(FeatureError::BoxOutOfBounds);
    }
    if rect.area() < MIN_BOX_AREA {
        return Err(FeatureError::BoxTooSmall(rect.area()));
    }

    let values: Vec<f64> = (rect.y..rect.y + rect.h)
        .flat_map(|y| (rect.x..rect.x + rect.w).map(move |x| img.get(x, y)))
        .collect();
    let n = values.len() as f64;

    // --- first-order statistics ---
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let constant = max <= min;
    let mean = if constant {
        min
    } else {
        values.iter().sum::<f64>() / n
    };
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    if !constant {
        for &v in &values {
            let d = v - mean;
            m2 += d * d;
            m3 += d * d * d;
            m4 += d * d * d * d;
        }
        m2 /= n;
        m3 /= n;
        m4 /= n;
    }
    let std = m2.sqrt();
    // variance-zero guards keep constant boxes finite
    let skewness = if m2 > 0.0 { m3 / (std * std * std) } else { 0.0 };
    let kurtosis = if m2 > 0.0 { m4 / (m2 * m2) - 3.0 } else { 0.0 };
    let smoothness = 1.0 - 1.0 / (1.0 + m2);
    let coeff_variation = if mean > 0.0 { std / mean } else { 0.0 };

    let levels = quantize(&values);
    let mut hist = [0usize; GLCM_LEVELS];
    for &l in &levels {
        hist[l] += 1;
    }
    let mut fo_energy = 0.0;
    let mut fo_entropy = 0.0;
    for &c in &hist {
        if c > 0 {
            let p = c as f64 / n;
            fo_energy += p * p;
            fo_entropy -= p * p.log2();
        }
    }

    // --- co-occurrence features ---
    let glcm = cooccurrence_pooled(&levels, rect.w, rect.h);
    let g = glcm_features(&glcm);

    // --- roughness metrics ---
    let mut grads = Vec::new();
    for y in rect.y..rect.y + rect.h {
        for x in rect.x..rect.x + rect.w {
            if x + 1 < rect.x + rect.w && y + 1 < rect.y + rect.h {
                let gx = img.get(x + 1, y) - img.get(x, y);
                let gy = img.get(x, y + 1) - img.get(x, y);
                grads.push((gx * gx + gy * gy).sqrt());
            }
        }
    }
    let (grad_mean, grad_var, edge_density) = if grads.is_empty() {
        (0.0, 0.0, 0.0)
    } else {
        let gn = grads.len() as f64;
        let gm = grads.iter().sum::<f64>() / gn;
        let gv = grads.iter().map(|g| (g - gm) * (g - gm)).sum::<f64>() / gn;
        let ed = grads.iter().filter(|&&g| g > EDGE_THRESHOLD).count() as f64 / gn;
        (gm, gv, ed)
    };
    let mut lap_sum = 0.0;
    let mut lap_count = 0usize;
    for y in rect.y + 1..(rect.y + rect.h).saturating_sub(1) {
        for x in rect.x + 1..(rect.x + rect.w).saturating_sub(1) {
            let lap = img.get(x + 1, y) + img.get(x - 1, y) + img.get(x, y + 1)
                + img.get(x, y - 1)
                - 4.0 * img.get(x, y);
            lap_sum += lap.abs();
            lap_count += 1;
        }
    }
    let laplacian_mean = if lap_count > 0 {
        lap_sum / lap_count as f64
    } else {
        0.0
    };

    FeatureVector::new(
        TEXTURE_FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        vec![
            mean,
            m2,
            skewness,
            kurtosis,
            fo_energy,
            fo_entropy,
            smoothness,
            coeff_variation,
            g.contrast,
            g.correlation,
            g.asm,
            g.idm,
            g.entropy,
            g.dissimilarity,
            g.max_prob,
            g.cluster_shade,
            grad_mean,
            grad_var,
            laplacian_mean,
            edge_density,
        ],
    )
}

/// 16-level quantization over the box's own [min, max] range; a constant
/// box maps everything to level 0.
fn quantize(values: &[f64]) -> Vec<usize> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max <= min {
        return vec![0; values.len()];
    }
    let scale = GLCM_LEVELS as f64 / (max - min);
    values
        .iter()
        .map(|&v| (((v - min) * scale) as usize).min(GLCM_LEVELS - 1))
        .collect()
}

/// Symmetric, normalized co-occurrence matrix pooled over offsets (1,0)
/// and (0,1). Offsets that yield no pairs (degenerate box shapes) are
/// skipped.
fn cooccurrence_pooled(levels: &[usize], w: usize, h: usize) -> Vec<f64> {
    let mut counts = vec![0u64; GLCM_LEVELS * GLCM_LEVELS];
    let mut total = 0u64;
    let at = |x: usize, y: usize| levels[y * w + x];
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                let (a, b) = (at(x, y), at(x + 1, y));
                counts[a * GLCM_LEVELS + b] += 1;
                counts[b * GLCM_LEVELS + a] += 1;
                total += 2;
            }
            if y + 1 < h {
                let (a, b) = (at(x, y), at(x, y + 1));
                counts[a * GLCM_LEVELS + b] += 1;
                counts[b * GLCM_LEVELS + a] += 1;
                total += 2;
            }
        }
    }
    if total == 0 {
        return vec![0.0; GLCM_LEVELS * GLCM_LEVELS];
    }
    counts.iter().map(|&c| c as f64 / total as f64).collect()
}

struct GlcmFeatures {
    contrast: f64,
    correlation: f64,
    asm: f64,
    idm: f64,
    entropy: f64,
    dissimilarity: f64,
    max_prob: f64,
    cluster_shade: f64,
}

fn glcm_features(p: &[f64]) -> GlcmFeatures {
    let l = GLCM_LEVELS;
    let mut mu_i = 0.0;
    let mut mu_j = 0.0;
    for i in 0..l {
        for j in 0..l {
            mu_i += i as f64 * p[i * l + j];
            mu_j += j as f64 * p[i * l + j];
        }
    }
    let mut var_i = 0.0;
    let mut var_j = 0.0;
    let mut contrast = 0.0;
    let mut correlation_num = 0.0;
    let mut asm = 0.0;
    let mut idm = 0.0;
    let mut entropy = 0.0;
    let mut dissimilarity = 0.0;
    let mut max_prob: f64 = 0.0;
    let mut cluster_shade = 0.0;
    for i in 0..l {
        for j in 0..l {
            let pij = p[i * l + j];
            let (fi, fj) = (i as f64, j as f64);
            let d = fi - fj;
            var_i += (fi - mu_i) * (fi - mu_i) * pij;
            var_j += (fj - mu_j) * (fj - mu_j) * pij;
            contrast += d * d * pij;
            correlation_num += (fi - mu_i) * (fj - mu_j) * pij;
            asm += pij * pij;
            idm += pij / (1.0 + d * d);
            if pij > 0.0 {
                entropy -= pij * pij.log2();
            }
            dissimilarity += d.abs() * pij;
            max_prob = max_prob.max(pij);
            let s = fi + fj - mu_i - mu_j;
            cluster_shade += s * s * s * pij;
        }
    }
    let denom = (var_i * var_j).sqrt();
    let correlation = if denom > 0.0 {
        correlation_num / denom
    } else {
        0.0
    };
    GlcmFeatures {
        contrast,
        correlation,
        asm,
        idm,
        entropy,
        dissimilarity,
        max_prob,
        cluster_shade,
    }
}

/// Tiles the region of interest with non-overlapping `box_size × box_size`
/// boxes (partial edge boxes dropped) and computes the texture bank for
/// each, one row per box in scan-line order. Box origins (absolute image
/// pixels) are retained as row metadata.
pub fn box_feature_map(
    img: &GrayImage,
    roi: Rect,
    box_size: usize,
) -> Result<FeatureMatrix, FeatureError> {
    if !roi.fits_in(img) {
        return Err(FeatureError::BoxOutOfBounds);
    }
    if box_size * box_size < MIN_BOX_AREA {
        return Err(FeatureError::BoxTooSmall(box_size * box_size));
    }
    let cols = roi.w / box_size;
    let rows = roi.h / box_size;
    if cols == 0 || rows == 0 {
        return Err(FeatureError::EmptyTiling);
    }
    let mut m = FeatureMatrix::new(
        TEXTURE_FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
    )?;
    let mut boxes = Vec::with_capacity(cols * rows);
    for by in 0..rows {
        for bx in 0..cols {
            let rect = Rect::new(
                roi.x + bx * box_size,
                roi.y + by * box_size,
                box_size,
                box_size,
            );
            let fv = texture_features(img, rect)?;
            m.push_vector(&fv)?;
            boxes.push(BoxOrigin {
                x: rect.x,
                y: rect.y,
            });
        }
    }
    m.set_boxes(boxes)?;
    Ok(m)
}

/// Reduces a rectangular box-grid feature map to one 1-D curve per
/// feature: the values of each grid row are averaged, producing signals in
/// scan-line order (mirroring line-scanning acquisition).
pub fn reduce_map_to_curves(
    m: &FeatureMatrix,
) -> Result<Vec<(alloc::string::String, Vec<f64>)>, FeatureError> {
    let boxes = m.boxes().ok_or(FeatureError::MissingBoxMetadata)?;
    if boxes.is_empty() {
        return Err(FeatureError::EmptyMatrix);
    }
    // group row indices by box y, ascending
    let mut ys: Vec<usize> = boxes.iter().map(|b| b.y).collect();
    ys.sort_unstable();
    ys.dedup();
    let mut grid: Vec<Vec<usize>> = vec![Vec::new(); ys.len()];
    for (i, b) in boxes.iter().enumerate() {
        let gi = ys.binary_search(&b.y).expect("y present");
        grid[gi].push(i);
    }
    // rectangularity: every grid row has the same x positions
    let mut first_xs: Vec<usize> = grid[0].iter().map(|&i| boxes[i].x).collect();
    first_xs.sort_unstable();
    for row in &grid {
        let mut xs: Vec<usize> = row.iter().map(|&i| boxes[i].x).collect();
        xs.sort_unstable();
        if xs != first_xs {
            return Err(FeatureError::NonRectangularGrid);
        }
    }
    let curves = m
        .columns()
        .iter()
        .enumerate()
        .map(|(c, name)| {
            let curve = grid
                .iter()
                .map(|row| {
                    row.iter().map(|&i| m.rows()[i][c]).sum::<f64>() / row.len() as f64
                })
                .collect();
            (name.clone(), curve)
        })
        .collect();
    Ok(curves)
}

/// Pools box rows into one per-mass feature vector: mean, standard
/// deviation, min and max of every feature across boxes (4 × the bank).
pub fn aggregate_mass_texture(m: &FeatureMatrix) -> Result<FeatureVector, FeatureError> {
    if m.n_rows() == 0 {
        return Err(FeatureError::EmptyMatrix);
    }
    let n = m.n_rows() as f64;
    let mut names = Vec::with_capacity(m.n_cols() * 4);
    let mut values = Vec::with_capacity(m.n_cols() * 4);
    for (c, col_name) in m.columns().iter().enumerate() {
        let mut mean = 0.0;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in m.column(c) {
            mean += v;
            min = min.min(v);
            max = max.max(v);
        }
        mean /= n;
        let var = m.column(c).map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        for (suffix, v) in [
            ("mean", mean),
            ("std", var.sqrt()),
            ("min", min),
            ("max", max),
        ] {
            names.push(alloc::format!("{col_name}_{suffix}"));
            values.push(v);
        }
    }
    FeatureVector::new(names, values)
}
