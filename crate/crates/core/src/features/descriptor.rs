//! Multi-carrier shape descriptors: the seven curve features applied to
//! the normalized radial signal, its spectrum envelope and every wavelet
//! band, concatenated with carrier-prefixed names.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{curve_features, FeatureError, FeatureVector};
use crate::geometry::{radial_distance_signal, Contour};
use crate::transforms::{dft_envelope, dwt_decompose, TransformError, Wavelet};

/// Carrier selection and transform parameters for [`shape_descriptor`].
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeDescriptorConfig {
    /// Radial samples per contour (power of two ≥ 8).
    pub samples: usize,
    /// Wavelet family for the multi-scale bands.
    pub wavelet: Wavelet,
    /// Decomposition depth; every band must keep ≥ 4 coefficients.
    pub levels: usize,
}

impl Default for ShapeDescriptorConfig {
    fn default() -> Self {
        ShapeDescriptorConfig {
            samples: 256,
            wavelet: Wavelet::Db4,
            levels: 4,
        }
    }
}

impl ShapeDescriptorConfig {
    /// Number of features the descriptor will emit:
    /// 7 × (raw + envelope + levels detail bands + 1 approximation band).
    pub fn feature_count(&self) -> usize {
        7 * (2 + self.levels + 1)
    }

    /// Column names in emission order.
    pub fn feature_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.feature_count());
        let mut push_carrier = |prefix: &str| {
            for f in super::CURVE_FEATURE_NAMES {
                names.push(format!("{prefix}_{f}"));
            }
        };
        push_carrier("raw");
        push_carrier("dft");
        for level in 1..=self.levels {
            push_carrier(&format!("dwt_d{level}"));
        }
        push_carrier(&format!("dwt_a{}", self.levels));
        names
    }
}

/// Computes the full multi-carrier descriptor of a contour:
///
/// * `raw_*` — curve features of the normalized radial signal;
/// * `dft_*` — curve features of the spectrum envelope, DC excluded
///   (after normalization the DC bin duplicates the raw-carrier mean);
/// * `dwt_d1_*` … `dwt_dL_*`, `dwt_aL_*` — curve features of each wavelet
///   band, finest detail first.
pub fn shape_descriptor(
    contour: &Contour,
    config: &ShapeDescriptorConfig,
) -> Result<FeatureVector, FeatureError> {
    // every band needs ≥ 4 coefficients for the curve features
    if config.samples >> config.levels < 4 {
        return Err(FeatureError::Transform(TransformError::TooManyLevels {
            levels: config.levels,
            max: config.samples.trailing_zeros().saturating_sub(2) as usize,
            n: config.samples,
        }));
    }
    let signal = radial_distance_signal(contour, config.samples)?.normalized()?;

    let mut names = Vec::with_capacity(config.feature_count());
    let mut values = Vec::with_capacity(config.feature_count());
    let mut append = |prefix: &str, fv: FeatureVector| {
        for (n, v) in fv.names().iter().zip(fv.values()) {
            names.push(format!("{prefix}_{n}"));
            values.push(*v);
        }
    };

    append("raw", curve_features(signal.samples())?);

    let envelope = dft_envelope(signal.samples())?;
    append("dft", curve_features(envelope.without_dc())?);

    let decomp = dwt_decompose(signal.samples(), config.levels, config.wavelet)?;
    for (j, band) in decomp.detail_bands().iter().enumerate() {
        append(&format!("dwt_d{}", j + 1), curve_features(band)?);
    }
    append(
        &format!("dwt_a{}", config.levels),
        curve_features(decomp.approx_band())?,
    );

    FeatureVector::new(names, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{centroid, Point2};
    use alloc::vec::Vec;

    fn polygon(n: usize, f: impl Fn(f64) -> f64) -> Contour {
        let pts: Vec<Point2> = (0..n)
            .map(|i| {
                let t = 2.0 * core::f64::consts::PI * i as f64 / n as f64;
                let r = f(t);
                Point2::new(r * t.cos(), r * t.sin())
            })
            .collect();
        Contour::new(pts).unwrap()
    }

    #[test]
    fn default_config_emits_49_named_features() {
        let cfg = ShapeDescriptorConfig::default();
        assert_eq!(cfg.feature_count(), 49);
        let c = polygon(64, |_| 1.0);
        let fv = shape_descriptor(&c, &cfg).unwrap();
        assert_eq!(fv.len(), 49);
        assert_eq!(fv.names(), &cfg.feature_names()[..]);
        assert!(fv.names()[0].starts_with("raw_"));
        assert!(fv.names()[7].starts_with("dft_"));
        assert!(fv.names()[14].starts_with("dwt_d1_"));
        assert!(fv.names()[42].starts_with("dwt_a4_"));
    }

    #[test]
    fn circle_raw_carrier_is_flat() {
        let c = polygon(64, |_| 1.0);
        let fv = shape_descriptor(&c, &ShapeDescriptorConfig::default()).unwrap();
        assert!(fv.get("raw_roughness_index").unwrap() < 1e-3);
        assert!(fv.get("raw_circularity").unwrap() < 1e-3);
        assert!((fv.get("raw_mean_value").unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rotation_leaves_envelope_features_unchanged() {
        let c = polygon(256, |t| 10.0 * (1.0 + 0.15 * (5.0 * t).sin()));
        let cfg = ShapeDescriptorConfig::default();
        let base = shape_descriptor(&c, &cfg).unwrap();
        let g = centroid(&c).unwrap();
        let j = 9;
        let rot = c.rotated(2.0 * core::f64::consts::PI * j as f64 / 256.0, g);
        let rotated = shape_descriptor(&rot, &cfg).unwrap();
        for (name, (a, b)) in base
            .names()
            .iter()
            .zip(base.values().iter().zip(rotated.values()))
        {
            if name.starts_with("dft_") {
                assert!((a - b).abs() < 1e-6, "{name}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn too_deep_decomposition_rejected() {
        let cfg = ShapeDescriptorConfig {
            samples: 32,
            wavelet: Wavelet::Haar,
            levels: 4, // 32 >> 4 = 2 < 4 coefficients
        };
        let c = polygon(64, |_| 1.0);
        assert!(shape_descriptor(&c, &cfg).is_err());
    }
}
