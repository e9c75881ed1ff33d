//! The seven uniresolution curve feature functions, applicable to any 1-D
//! carrier signal (raw radial signal, spectrum envelope, wavelet band).
//!
//! Every feature treats the signal as circular, so all seven are invariant
//! to circular shifts. Sums are accumulated over sorted values, which makes
//! that invariance bit-exact rather than merely within round-off.

use alloc::string::ToString;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float as _;

use super::{FeatureError, FeatureVector};

/// Names of the seven curve features, in emission order.
pub const CURVE_FEATURE_NAMES: [&str; 7] = [
    "mean_value",
    "std_dev",
    "zero_cross_count",
    "roughness_index",
    "area_ratio",
    "circularity",
    "histogram_entropy",
];

const ENTROPY_BINS: usize = 16;

/// Shift-invariant sum: accumulates in ascending value order so the result
/// depends only on the multiset of addends.
fn sorted_sum(values: &mut [f64]) -> f64 {
    values.sort_unstable_by(f64::total_cmp);
    values.iter().sum()
}

/// Computes the seven curve features of a signal (length ≥ 4):
///
/// * `mean_value` — μ
/// * `std_dev` — population standard deviation σ
/// * `zero_cross_count` — sign changes of s−μ over the circular traversal;
///   a zero sample adopts the sign of its predecessor
/// * `roughness_index` — mean absolute circular first difference
/// * `area_ratio` — Σ of excesses above μ, normalized by μ·N (0 when μ ≤ 0)
/// * `circularity` — σ/μ, the radial coefficient of variation (lower =
///   rounder; 0 when μ ≤ 0)
/// * `histogram_entropy` — Shannon entropy (bits) of a 16-bin histogram
///   spanning [min, max]
pub fn curve_features(signal: &[f64]) -> Result<FeatureVector, FeatureError> {
    let n = signal.len();
    if n < 4 {
        return Err(FeatureError::SignalTooShort(n));
    }
    let nf = n as f64;

    let mut vals: Vec<f64> = signal.to_vec();
    let mean = sorted_sum(&mut vals) / nf;

    let mut sq_dev: Vec<f64> = signal.iter().map(|s| (s - mean) * (s - mean)).collect();
    let variance = sorted_sum(&mut sq_dev) / nf;
    let std_dev = variance.sqrt();

    let zero_cross = zero_cross_count(signal, mean);

    let mut diffs: Vec<f64> = (0..n)
        .map(|k| (signal[(k + 1) % n] - signal[k]).abs())
        .collect();
    let roughness = sorted_sum(&mut diffs) / nf;

    let area_ratio = if mean > 0.0 {
        let mut excess: Vec<f64> = signal
            .iter()
            .filter(|&&s| s > mean)
            .map(|s| s - mean)
            .collect();
        sorted_sum(&mut excess) / (mean * nf)
    } else {
        0.0
    };

    let circularity = if mean > 0.0 { std_dev / mean } else { 0.0 };

    let entropy = histogram_entropy(signal);

    FeatureVector::new(
        CURVE_FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        alloc::vec![
            mean,
            std_dev,
            zero_cross as f64,
            roughness,
            area_ratio,
            circularity,
            entropy,
        ],
    )
}

fn zero_cross_count(signal: &[f64], mean: f64) -> usize {
    let n = signal.len();
    // resolved sign of each sample: zero adopts the predecessor's sign
    let raw: Vec<i8> = signal
        .iter()
        .map(|&s| {
            if s > mean {
                1
            } else if s < mean {
                -1
            } else {
                0
            }
        })
        .collect();
    if raw.iter().all(|&s| s == 0) {
        return 0;
    }
    let mut resolved = raw.clone();
    // fix point: sweep until every zero inherits a non-zero predecessor
    // (at most n sweeps; in practice one or two)
    loop {
        let mut changed = false;
        for k in 0..n {
            if resolved[k] == 0 {
                let prev = resolved[(k + n - 1) % n];
                if prev != 0 {
                    resolved[k] = prev;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..n)
        .filter(|&k| resolved[k] != resolved[(k + 1) % n])
        .count()
}

fn histogram_entropy(signal: &[f64]) -> f64 {
    let min = signal.iter().copied().fold(f64::INFINITY, f64::min);
    let max = signal.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max <= min {
        return 0.0;
    }
    let mut counts = [0usize; ENTROPY_BINS];
    let scale = ENTROPY_BINS as f64 / (max - min);
    for &s in signal {
        let b = (((s - min) * scale) as usize).min(ENTROPY_BINS - 1);
        counts[b] += 1;
    }
    let n = signal.len() as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn feats(signal: &[f64]) -> FeatureVector {
        curve_features(signal).unwrap()
    }

    #[test]
    fn constant_signal_degenerates() {
        let f = feats(&[3.0; 16]);
        assert_eq!(f.get("zero_cross_count"), Some(0.0));
        assert_eq!(f.get("roughness_index"), Some(0.0));
        assert_eq!(f.get("area_ratio"), Some(0.0));
        assert_eq!(f.get("circularity"), Some(0.0));
        assert_eq!(f.get("std_dev"), Some(0.0));
        assert_eq!(f.get("histogram_entropy"), Some(0.0));
        assert_eq!(f.get("mean_value"), Some(3.0));
    }

    #[test]
    fn alternating_signal_arithmetic() {
        let f = feats(&[1.0, -1.0, 1.0, -1.0]);
        assert_eq!(f.get("zero_cross_count"), Some(4.0));
        assert_eq!(f.get("roughness_index"), Some(2.0));
        assert_eq!(f.get("mean_value"), Some(0.0));
        // μ = 0: ratio features fall back to 0
        assert_eq!(f.get("area_ratio"), Some(0.0));
        assert_eq!(f.get("circularity"), Some(0.0));
    }

    #[test]
    fn two_level_signal_arithmetic() {
        let f = feats(&[2.0, 0.0, 2.0, 0.0]);
        assert_eq!(f.get("mean_value"), Some(1.0));
        assert_eq!(f.get("std_dev"), Some(1.0));
        assert_eq!(f.get("area_ratio"), Some(0.5));
        assert_eq!(f.get("circularity"), Some(1.0));
    }

    #[test]
    fn zero_sample_adopts_predecessor_sign() {
        // s - μ = [1, 0, -1, 0] around μ=0: the zero at index 1 inherits +,
        // the zero at index 3 inherits −, giving transitions at 1→2 and 3→0.
        let f = feats(&[1.0, 0.0, -1.0, 0.0]);
        assert_eq!(f.get("zero_cross_count"), Some(2.0));
    }

    #[test]
    fn too_short_rejected() {
        assert!(matches!(
            curve_features(&[1.0, 2.0, 3.0]),
            Err(FeatureError::SignalTooShort(3))
        ));
    }

    #[test]
    fn circular_shift_invariance_is_exact() {
        let mut rng = Rng::new(77);
        let signal: Vec<f64> = (0..64).map(|_| rng.uniform(0.2, 3.0)).collect();
        let base = feats(&signal);
        for shift in [1usize, 7, 31, 63] {
            let mut shifted = signal.clone();
            shifted.rotate_left(shift);
            let f = feats(&shifted);
            for name in CURVE_FEATURE_NAMES {
                let (a, b) = (base.get(name).unwrap(), f.get(name).unwrap());
                if name == "histogram_entropy" {
                    assert!((a - b).abs() <= 1e-12, "{name}: {a} vs {b}");
                } else {
                    assert_eq!(a, b, "{name} changed under shift {shift}");
                }
            }
        }
    }

    #[test]
    fn scaling_behaviour() {
        let mut rng = Rng::new(78);
        let signal: Vec<f64> = (0..32).map(|_| rng.uniform(0.5, 2.0)).collect();
        let scaled: Vec<f64> = signal.iter().map(|s| 3.0 * s).collect();
        let (f, g) = (feats(&signal), feats(&scaled));
        // linear features scale, dimensionless features do not
        assert!((g.get("mean_value").unwrap() - 3.0 * f.get("mean_value").unwrap()).abs() < 1e-12);
        assert!((g.get("std_dev").unwrap() - 3.0 * f.get("std_dev").unwrap()).abs() < 1e-12);
        assert!((g.get("circularity").unwrap() - f.get("circularity").unwrap()).abs() < 1e-12);
        assert!((g.get("area_ratio").unwrap() - f.get("area_ratio").unwrap()).abs() < 1e-12);
    }

    #[test]
    fn entropy_of_uniform_spread() {
        // 16 values exactly filling 16 bins → entropy = 4 bits
        let signal: Vec<f64> = (0..16).map(|i| i as f64).collect();
        let f = feats(&signal);
        assert!((f.get("histogram_entropy").unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn names_are_stable() {
        let f = feats(&[0.4, 0.5, 0.6, 0.7]);
        let names: Vec<&str> = f.names().iter().map(|s| s.as_str()).collect();
        assert_eq!(names, CURVE_FEATURE_NAMES);
    }
}
