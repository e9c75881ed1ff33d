//! On-disk formats: contour CSV, binary PGM (P5), feature-matrix CSV and
//! vote/score matrices.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use masskit_core::features::{BoxOrigin, FeatureMatrix, GrayImage, Label};
use masskit_core::geometry::{Contour, Point2};
use masskit_core::Vote;

/// Writes through a sibling temp file and renames into place, so readers
/// never observe a partially written file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| anyhow!("invalid output path {}", path.display()))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Contour CSV: one `x,y` pair per line, vertices in traversal order.
// ---------------------------------------------------------------------------

pub fn read_contour_csv(path: &Path) -> Result<Contour> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut points = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (x, y) = line
            .split_once(',')
            .ok_or_else(|| anyhow!("{}:{}: expected `x,y`", path.display(), lineno + 1))?;
        let parse = |s: &str, what: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| anyhow!("{}:{}: bad {what} value '{s}'", path.display(), lineno + 1))
        };
        points.push(Point2::new(parse(x, "x")?, parse(y, "y")?));
    }
    Contour::new(points).map_err(|e| anyhow!("{}: invalid contour: {e}", path.display()))
}

pub fn contour_to_csv(contour: &Contour) -> String {
    let mut out = String::new();
    for p in contour.points() {
        out.push_str(&format!("{},{}\n", p.x, p.y));
    }
    out
}

// ---------------------------------------------------------------------------
// Binary PGM (P5), 8-bit or 16-bit, rescaled to [0, 1] on ingestion.
// ---------------------------------------------------------------------------

pub fn read_pgm(path: &Path) -> Result<GrayImage> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let err = |msg: &str| anyhow!("{}: {msg}", path.display());
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        bail!(err("not a binary PGM (missing P5 magic)"));
    }
    // header tokens: width, height, maxval; `#` comments allowed
    let mut pos = 2;
    let mut tokens = Vec::with_capacity(3);
    while tokens.len() < 3 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            bail!(err("truncated header"));
        }
        let token = std::str::from_utf8(&bytes[start..pos]).map_err(|_| err("bad header"))?;
        tokens.push(
            token
                .parse::<usize>()
                .map_err(|_| err("non-numeric header field"))?,
        );
    }
    pos += 1; // single whitespace after maxval
    let (width, height, maxval) = (tokens[0], tokens[1], tokens[2]);
    if maxval == 0 || maxval > 65535 {
        bail!(err("maxval must be in 1..=65535"));
    }
    let count = width * height;
    let data = &bytes[pos..];
    let pixels: Vec<f64> = if maxval < 256 {
        if data.len() < count {
            bail!(err("pixel data shorter than width*height"));
        }
        data[..count]
            .iter()
            .map(|&b| f64::from(b) / maxval as f64)
            .collect()
    } else {
        if data.len() < 2 * count {
            bail!(err("pixel data shorter than 2*width*height"));
        }
        (0..count)
            .map(|i| {
                let v = u16::from_be_bytes([data[2 * i], data[2 * i + 1]]);
                f64::from(v) / maxval as f64
            })
            .collect()
    };
    GrayImage::new(width, height, pixels).map_err(|e| anyhow!("{}: {e}", path.display()))
}

/// Serializes as 16-bit big-endian P5 with maxval 65535.
pub fn pgm_to_bytes(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n65535\n", img.width(), img.height()).into_bytes();
    for &p in img.pixels() {
        let v = (p * 65535.0).round() as u16;
        out.extend_from_slice(&v.to_be_bytes());
    }
    out
}

// ---------------------------------------------------------------------------
// Feature-matrix CSV: header of feature names, with optional leading
// `box_x,box_y` metadata columns and an optional trailing `label` column.
// ---------------------------------------------------------------------------

pub fn feature_matrix_to_csv(m: &FeatureMatrix) -> String {
    let mut out = String::new();
    let mut header = Vec::new();
    if m.boxes().is_some() {
        header.push("box_x".to_string());
        header.push("box_y".to_string());
    }
    header.extend(m.columns().iter().cloned());
    if m.labels().is_some() {
        header.push("label".to_string());
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for (i, row) in m.rows().iter().enumerate() {
        let mut fields = Vec::with_capacity(header.len());
        if let Some(boxes) = m.boxes() {
            fields.push(boxes[i].x.to_string());
            fields.push(boxes[i].y.to_string());
        }
        fields.extend(row.iter().map(|v| v.to_string()));
        if let Some(labels) = m.labels() {
            fields.push(labels[i].name().to_string());
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn read_feature_csv(path: &Path) -> Result<FeatureMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| anyhow!("{}: empty file", path.display()))?;
    let fields: Vec<&str> = header.split(',').map(str::trim).collect();
    let has_boxes = fields.len() >= 2 && fields[0] == "box_x" && fields[1] == "box_y";
    let has_label = fields.last() == Some(&"label");
    let start = if has_boxes { 2 } else { 0 };
    let end = fields.len() - usize::from(has_label);
    if start >= end {
        bail!("{}: no feature columns in header", path.display());
    }
    let columns: Vec<String> = fields[start..end].iter().map(|s| s.to_string()).collect();

    let mut m = FeatureMatrix::new(columns.clone())
        .map_err(|e| anyhow!("{}: {e}", path.display()))?;
    let mut boxes = Vec::new();
    let mut labels = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let values: Vec<&str> = line.split(',').map(str::trim).collect();
        if values.len() != fields.len() {
            bail!(
                "{}:{}: expected {} fields, found {}",
                path.display(),
                lineno + 1,
                fields.len(),
                values.len()
            );
        }
        if has_boxes {
            let bx = values[0].parse::<usize>().map_err(|_| {
                anyhow!("{}:{}: bad box_x '{}'", path.display(), lineno + 1, values[0])
            })?;
            let by = values[1].parse::<usize>().map_err(|_| {
                anyhow!("{}:{}: bad box_y '{}'", path.display(), lineno + 1, values[1])
            })?;
            boxes.push(BoxOrigin { x: bx, y: by });
        }
        let row: Vec<f64> = values[start..end]
            .iter()
            .map(|s| {
                s.parse::<f64>().map_err(|_| {
                    anyhow!("{}:{}: bad numeric value '{s}'", path.display(), lineno + 1)
                })
            })
            .collect::<Result<_>>()?;
        m.push_row(row).map_err(|e| anyhow!("{}: {e}", path.display()))?;
        if has_label {
            let raw = values[fields.len() - 1];
            labels.push(Label::parse(raw).ok_or_else(|| {
                anyhow!("{}:{}: unknown label '{raw}'", path.display(), lineno + 1)
            })?);
        }
    }
    if has_boxes {
        m.set_boxes(boxes)
            .map_err(|e| anyhow!("{}: {e}", path.display()))?;
    }
    if has_label {
        m.set_labels(labels)
            .map_err(|e| anyhow!("{}: {e}", path.display()))?;
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// Vote/score matrix CSV: rows = instances, columns = experts, final
// column = truth label (±1).
// ---------------------------------------------------------------------------

/// A combiner input matrix: per-instance expert outputs plus ground truth.
/// Hard ±1 inputs are mapped to {0, 1} scores; soft [0, 1] inputs derive
/// hard votes by thresholding at 0.5.
#[derive(Debug, Clone, PartialEq)]
pub struct VoteMatrix {
    pub votes: Vec<Vec<Vote>>,
    pub scores: Vec<Vec<f64>>,
    pub truth: Vec<Vote>,
}

impl VoteMatrix {
    pub fn experts(&self) -> usize {
        self.votes.first().map_or(0, Vec::len)
    }

    pub fn trials(&self) -> usize {
        self.truth.len()
    }
}

pub fn votes_to_csv(votes: &[Vec<Vote>], truth: &[Vote]) -> String {
    let k = votes.first().map_or(0, Vec::len);
    let mut header: Vec<String> = (1..=k).map(|i| format!("expert_{i}")).collect();
    header.push("truth".to_string());
    let mut out = header.join(",");
    out.push('\n');
    for (row, t) in votes.iter().zip(truth) {
        let mut fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        fields.push(t.to_string());
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn read_votes_csv(path: &Path) -> Result<VoteMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| anyhow!("{}: empty file", path.display()))?;
    let n_fields = header.split(',').count();
    if n_fields < 2 {
        bail!("{}: need at least one expert column plus truth", path.display());
    }
    let k = n_fields - 1;
    let mut raw: Vec<Vec<f64>> = Vec::new();
    let mut truth = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let values: Vec<&str> = line.split(',').map(str::trim).collect();
        if values.len() != n_fields {
            bail!(
                "{}:{}: expected {} fields, found {}",
                path.display(),
                lineno + 1,
                n_fields,
                values.len()
            );
        }
        let nums: Vec<f64> = values
            .iter()
            .map(|s| {
                s.parse::<f64>().map_err(|_| {
                    anyhow!("{}:{}: bad numeric value '{s}'", path.display(), lineno + 1)
                })
            })
            .collect::<Result<_>>()?;
        let t = nums[k];
        if t != 1.0 && t != -1.0 {
            bail!("{}:{}: truth must be +1 or -1", path.display(), lineno + 1);
        }
        truth.push(if t > 0.0 { 1 } else { -1 });
        raw.push(nums[..k].to_vec());
    }
    if raw.is_empty() {
        bail!("{}: no data rows", path.display());
    }
    let hard_input = raw
        .iter()
        .flatten()
        .all(|&v| v == 1.0 || v == -1.0);
    let (votes, scores) = if hard_input {
        let votes: Vec<Vec<Vote>> = raw
            .iter()
            .map(|r| r.iter().map(|&v| if v > 0.0 { 1 } else { -1 }).collect())
            .collect();
        let scores = raw
            .iter()
            .map(|r| r.iter().map(|&v| (v + 1.0) / 2.0).collect())
            .collect();
        (votes, scores)
    } else {
        if raw.iter().flatten().any(|&v| !(0.0..=1.0).contains(&v)) {
            bail!(
                "{}: expert outputs must be hard votes (±1) or soft scores in [0, 1]",
                path.display()
            );
        }
        let votes = raw
            .iter()
            .map(|r| r.iter().map(|&s| if s >= 0.5 { 1 } else { -1 }).collect())
            .collect();
        (votes, raw)
    };
    Ok(VoteMatrix {
        votes,
        scores,
        truth,
    })
}
