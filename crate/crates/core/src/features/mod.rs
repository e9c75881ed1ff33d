//! Feature extraction: named feature vectors and matrices, the seven
//! uniresolution curve features over 1-D carrier signals, shape
//! descriptors combining all carriers, and the 20-function texture bank
//! over image sampling boxes.

mod curve;
mod descriptor;
mod texture;

pub use curve::{curve_features, CURVE_FEATURE_NAMES};
pub use descriptor::{shape_descriptor, ShapeDescriptorConfig};
pub use texture::{
    aggregate_mass_texture, box_feature_map, reduce_map_to_curves, texture_features,
    TEXTURE_FEATURE_NAMES,
};

use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

use crate::geometry::GeometryError;
use crate::transforms::TransformError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FeatureError {
    #[error("signal too short: {0} samples (need at least 4)")]
    SignalTooShort(usize),
    #[error("sampling box exceeds the image bounds")]
    BoxOutOfBounds,
    #[error("sampling box area {0} is below the 16-pixel minimum")]
    BoxTooSmall(usize),
    #[error("region of interest is smaller than one sampling box")]
    EmptyTiling,
    #[error("box rows do not form a rectangular grid")]
    NonRectangularGrid,
    #[error("feature matrix has no rows")]
    EmptyMatrix,
    #[error("feature matrix rows lack box metadata")]
    MissingBoxMetadata,
    #[error("duplicate feature name '{0}'")]
    DuplicateFeatureName(String),
    #[error("row length {got} does not match {expected} columns")]
    RowLengthMismatch { got: usize, expected: usize },
    #[error("label count {got} does not match {expected} rows")]
    LabelCountMismatch { got: usize, expected: usize },
    #[error("non-finite feature value in '{0}'")]
    NonFiniteValue(String),
    #[error("image pixel data does not match width*height")]
    BadImageDimensions,
    #[error("image pixel values must lie in [0, 1]")]
    PixelOutOfRange,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// Histologically verified diagnosis of a mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Diagnosis {
    Benign,
    Malignant,
}

impl Diagnosis {
    pub fn name(&self) -> &'static str {
        match self {
            Diagnosis::Benign => "benign",
            Diagnosis::Malignant => "malignant",
        }
    }

    /// Malignant is the positive / alarm class.
    pub fn sign(&self) -> crate::Vote {
        match self {
            Diagnosis::Benign => -1,
            Diagnosis::Malignant => 1,
        }
    }
}

/// The four morphological categories of mass outline, in fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShapeType {
    Round,
    Lobulated,
    Microlobulated,
    Stellate,
}

impl ShapeType {
    pub const ALL: [ShapeType; 4] = [
        ShapeType::Round,
        ShapeType::Lobulated,
        ShapeType::Microlobulated,
        ShapeType::Stellate,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ShapeType::Round => "round",
            ShapeType::Lobulated => "lobulated",
            ShapeType::Microlobulated => "microlobulated",
            ShapeType::Stellate => "stellate",
        }
    }

    pub fn index(&self) -> usize {
        *self as usize
    }
}

/// A per-sample class label: either a diagnosis or a shape type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Diagnosis(Diagnosis),
    Shape(ShapeType),
}

impl Label {
    pub fn name(&self) -> &'static str {
        match self {
            Label::Diagnosis(d) => d.name(),
            Label::Shape(s) => s.name(),
        }
    }

    pub fn parse(s: &str) -> Option<Label> {
        match s {
            "benign" => Some(Label::Diagnosis(Diagnosis::Benign)),
            "malignant" => Some(Label::Diagnosis(Diagnosis::Malignant)),
            "round" => Some(Label::Shape(ShapeType::Round)),
            "lobulated" => Some(Label::Shape(ShapeType::Lobulated)),
            "microlobulated" => Some(Label::Shape(ShapeType::Microlobulated)),
            "stellate" => Some(Label::Shape(ShapeType::Stellate)),
            _ => None,
        }
    }
}

/// Named scalar features for one sample. Names are unique, values finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    names: Vec<String>,
    values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(names: Vec<String>, values: Vec<f64>) -> Result<Self, FeatureError> {
        if names.len() != values.len() {
            return Err(FeatureError::RowLengthMismatch {
                got: values.len(),
                expected: names.len(),
            });
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(FeatureError::DuplicateFeatureName(n.clone()));
            }
        }
        for (n, v) in names.iter().zip(&values) {
            if !v.is_finite() {
                return Err(FeatureError::NonFiniteValue(n.clone()));
            }
        }
        Ok(FeatureVector { names, values })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.values[i])
    }
}

/// Pixel origin of the sampling box a feature row was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxOrigin {
    pub x: usize,
    pub y: usize,
}

/// Rectangular matrix of named feature columns over labeled samples —
/// the interchange currency of the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    labels: Option<Vec<Label>>,
    boxes: Option<Vec<BoxOrigin>>,
}

impl FeatureMatrix {
    pub fn new(columns: Vec<String>) -> Result<Self, FeatureError> {
        for (i, n) in columns.iter().enumerate() {
            if columns[..i].contains(n) {
                return Err(FeatureError::DuplicateFeatureName(n.clone()));
            }
        }
        Ok(FeatureMatrix {
            columns,
            rows: Vec::new(),
            labels: None,
            boxes: None,
        })
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<(), FeatureError> {
        if row.len() != self.columns.len() {
            return Err(FeatureError::RowLengthMismatch {
                got: row.len(),
                expected: self.columns.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn push_vector(&mut self, v: &FeatureVector) -> Result<(), FeatureError> {
        if v.names() != &self.columns[..] {
            return Err(FeatureError::RowLengthMismatch {
                got: v.len(),
                expected: self.columns.len(),
            });
        }
        self.rows.push(v.values().to_vec());
        Ok(())
    }

    pub fn set_labels(&mut self, labels: Vec<Label>) -> Result<(), FeatureError> {
        if labels.len() != self.rows.len() {
            return Err(FeatureError::LabelCountMismatch {
                got: labels.len(),
                expected: self.rows.len(),
            });
        }
        self.labels = Some(labels);
        Ok(())
    }

    pub fn set_boxes(&mut self, boxes: Vec<BoxOrigin>) -> Result<(), FeatureError> {
        if boxes.len() != self.rows.len() {
            return Err(FeatureError::LabelCountMismatch {
                got: boxes.len(),
                expected: self.rows.len(),
            });
        }
        self.boxes = Some(boxes);
        Ok(())
    }

    /// Builds a matrix with box metadata (used when ingesting persisted maps).
    pub fn with_boxes(
        columns: Vec<String>,
        rows: Vec<Vec<f64>>,
        boxes: Vec<BoxOrigin>,
    ) -> Result<Self, FeatureError> {
        let mut m = FeatureMatrix::new(columns)?;
        for row in rows {
            m.push_row(row)?;
        }
        m.set_boxes(boxes)?;
        Ok(m)
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    pub fn boxes(&self) -> Option<&[BoxOrigin]> {
        self.boxes.as_deref()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, index: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(move |r| r[index])
    }

    /// Class labels mapped to ±1 votes; requires diagnosis labels
    /// (malignant = +1).
    pub fn binary_signs(&self) -> Option<Vec<crate::Vote>> {
        let labels = self.labels.as_ref()?;
        labels
            .iter()
            .map(|l| match l {
                Label::Diagnosis(d) => Some(d.sign()),
                Label::Shape(_) => None,
            })
            .collect()
    }

    /// Group ids for grouped analyses: distinct labels in fixed order
    /// (benign, malignant, round, lobulated, microlobulated, stellate)
    /// remapped to consecutive ids for the labels actually present.
    pub fn group_ids(&self) -> Option<(Vec<usize>, Vec<Label>)> {
        let labels = self.labels.as_ref()?;
        const ORDER: [Label; 6] = [
            Label::Diagnosis(Diagnosis::Benign),
            Label::Diagnosis(Diagnosis::Malignant),
            Label::Shape(ShapeType::Round),
            Label::Shape(ShapeType::Lobulated),
            Label::Shape(ShapeType::Microlobulated),
            Label::Shape(ShapeType::Stellate),
        ];
        let present: Vec<Label> = ORDER
            .iter()
            .copied()
            .filter(|o| labels.contains(o))
            .collect();
        let ids = labels
            .iter()
            .map(|l| present.iter().position(|p| p == l))
            .collect::<Option<Vec<usize>>>()?;
        Some((ids, present))
    }

    /// New matrix restricted to the named columns (in the given order),
    /// keeping labels and box metadata.
    pub fn select_columns(&self, names: &[String]) -> Option<FeatureMatrix> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| self.column_index(n))
            .collect::<Option<_>>()?;
        let rows = self
            .rows
            .iter()
            .map(|r| idx.iter().map(|&i| r[i]).collect())
            .collect();
        Some(FeatureMatrix {
            columns: names.to_vec(),
            rows,
            labels: self.labels.clone(),
            boxes: self.boxes.clone(),
        })
    }

    /// New matrix containing the given row indices, keeping labels/boxes.
    pub fn select_rows(&self, indices: &[usize]) -> FeatureMatrix {
        FeatureMatrix {
            columns: self.columns.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: self
                .labels
                .as_ref()
                .map(|l| indices.iter().map(|&i| l[i]).collect()),
            boxes: self
                .boxes
                .as_ref()
                .map(|b| indices.iter().map(|&i| b[i]).collect()),
        }
    }
}

/// Row-major grayscale image with pixel values in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self, FeatureError> {
        if pixels.len() != width * height {
            return Err(FeatureError::BadImageDimensions);
        }
        if pixels.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(FeatureError::PixelOutOfRange);
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }
}

/// Axis-aligned pixel rectangle (origin top-left, width × height).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rect {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl Rect {
    pub fn new(x: usize, y: usize, w: usize, h: usize) -> Self {
        Rect { x, y, w, h }
    }

    pub fn area(&self) -> usize {
        self.w * self.h
    }

    pub fn fits_in(&self, img: &GrayImage) -> bool {
        self.x + self.w <= img.width() && self.y + self.h <= img.height()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn feature_vector_rejects_duplicates_and_nan() {
        assert!(matches!(
            FeatureVector::new(vec!["a".to_string(), "a".to_string()], vec![1.0, 2.0]),
            Err(FeatureError::DuplicateFeatureName(_))
        ));
        assert!(matches!(
            FeatureVector::new(vec!["a".to_string()], vec![f64::NAN]),
            Err(FeatureError::NonFiniteValue(_))
        ));
    }

    #[test]
    fn matrix_shape_checks() {
        let mut m = FeatureMatrix::new(vec!["a".to_string(), "b".to_string()]).unwrap();
        m.push_row(vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            m.push_row(vec![1.0]),
            Err(FeatureError::RowLengthMismatch { got: 1, expected: 2 })
        ));
        assert!(m.set_labels(vec![]).is_err());
        m.set_labels(vec![Label::Diagnosis(Diagnosis::Benign)]).unwrap();
        assert_eq!(m.binary_signs(), Some(vec![-1]));
    }

    #[test]
    fn group_ids_follow_fixed_order() {
        let mut m = FeatureMatrix::new(vec!["a".to_string()]).unwrap();
        for _ in 0..3 {
            m.push_row(vec![0.0]).unwrap();
        }
        m.set_labels(vec![
            Label::Shape(ShapeType::Stellate),
            Label::Shape(ShapeType::Round),
            Label::Shape(ShapeType::Stellate),
        ])
        .unwrap();
        let (ids, present) = m.group_ids().unwrap();
        assert_eq!(present.len(), 2);
        assert_eq!(present[0], Label::Shape(ShapeType::Round));
        assert_eq!(ids, vec![1, 0, 1]);
    }

    #[test]
    fn image_validation() {
        assert!(GrayImage::new(2, 2, vec![0.0, 0.5, 1.0]).is_err());
        assert!(GrayImage::new(2, 2, vec![0.0, 0.5, 1.0, 1.5]).is_err());
        let img = GrayImage::new(2, 2, vec![0.0, 0.25, 0.5, 1.0]).unwrap();
        assert_eq!(img.get(1, 1), 1.0);
    }
}
