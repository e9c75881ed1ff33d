//! Spectral and multi-scale carrier signals derived from a radial distance
//! signal: the DFT magnitude envelope and the periodic orthonormal DWT.
//!
//! DFT scaling is 1/n on analysis so the DC bin equals the signal mean and
//! envelope features stay scale-comparable with raw-signal features. The
//! DWT uses periodic boundary extension because the radial signal is
//! intrinsically circular.

use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("signal length {0} must be a power of two >= 8")]
    LengthNotPowerOfTwo(usize),
    #[error("{levels} levels exceed the maximum {max} for length {n}")]
    TooManyLevels { levels: usize, max: usize, n: usize },
    #[error("decomposition needs at least one level")]
    NoLevels,
    #[error("unknown wavelet '{0}'")]
    UnknownWavelet(alloc::string::String),
    #[error("decomposition bands have inconsistent lengths")]
    MalformedDecomposition,
}

// ---------------------------------------------------------------------------
// DFT spectrum envelope
// ---------------------------------------------------------------------------

/// Magnitudes of the non-redundant half-spectrum of a real signal,
/// scaled by 1/n: `magnitudes[k] = |Σ_m s(m)·e^(−i2πkm/n)| / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEnvelope {
    magnitudes: Vec<f64>,
}

impl SpectrumEnvelope {
    /// `n/2 + 1` magnitudes; index 0 is the DC bin (= the signal mean).
    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// Magnitudes with the DC bin dropped.
    pub fn without_dc(&self) -> &[f64] {
        &self.magnitudes[1..]
    }

    /// Signal energy `Σ s²/n` recovered from the half-spectrum under the
    /// 1/n scaling: `m₀² + 2·Σ_mid m_k² + m_{n/2}²` (Parseval).
    pub fn energy(&self) -> f64 {
        let m = &self.magnitudes;
        let last = m.len() - 1;
        let mid: f64 = m[1..last].iter().map(|v| v * v).sum();
        m[0] * m[0] + 2.0 * mid + m[last] * m[last]
    }
}

/// Iterative radix-2 FFT, decimation in time. Length must be a power of two.
fn fft_in_place(re: &mut [f64], im: &mut [f64]) {
    let n = re.len();
    debug_assert!(n.is_power_of_two());
    // bit reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            re.swap(i, j);
            im.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = -2.0 * core::f64::consts::PI / len as f64;
        let (ws, wc) = ang.sin_cos();
        let mut i = 0;
        while i < n {
            let mut wr = 1.0;
            let mut wi = 0.0;
            for k in 0..len / 2 {
                let ur = re[i + k];
                let ui = im[i + k];
                let vr = re[i + k + len / 2] * wr - im[i + k + len / 2] * wi;
                let vi = re[i + k + len / 2] * wi + im[i + k + len / 2] * wr;
                re[i + k] = ur + vr;
                im[i + k] = ui + vi;
                re[i + k + len / 2] = ur - vr;
                im[i + k + len / 2] = ui - vi;
                let nwr = wr * wc - wi * ws;
                wi = wr * ws + wi * wc;
                wr = nwr;
            }
            i += len;
        }
        len <<= 1;
    }
}

/// Computes the DFT spectrum envelope of a real signal whose length is a
/// power of two, at least 8. Only the non-redundant half-spectrum is kept.
pub fn dft_envelope(signal: &[f64]) -> Result<SpectrumEnvelope, TransformError> {
    let n = signal.len();
    if n < 8 || !n.is_power_of_two() {
        return Err(TransformError::LengthNotPowerOfTwo(n));
    }
    let mut re = signal.to_vec();
    let mut im = vec![0.0; n];
    fft_in_place(&mut re, &mut im);
    let scale = 1.0 / n as f64;
    let magnitudes = (0..=n / 2)
        .map(|k| (re[k] * re[k] + im[k] * im[k]).sqrt() * scale)
        .collect();
    Ok(SpectrumEnvelope { magnitudes })
}

// ---------------------------------------------------------------------------
// Discrete wavelet transform
// ---------------------------------------------------------------------------

/// Orthonormal wavelet families supported by the decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wavelet {
    /// 2-tap Haar filter; analytically checkable.
    Haar,
    /// 8-tap Daubechies filter with 4 vanishing moments.
    Db4,
}

/// db4 scaling filter, computed by spectral factorization of the
/// Daubechies polynomial and verified orthonormal to ~1e-16
/// (Σh = √2, Σh² = 1, even-shift autocorrelations vanish).
const DB4_LOWPASS: [f64; 8] = [
    0.230_377_813_308_896_5,
    0.714_846_570_552_915_6,
    0.630_880_767_929_858_9,
    -0.027_983_769_416_859_854,
    -0.187_034_811_719_093_08,
    0.030_841_381_835_560_764,
    0.032_883_011_666_885_2,
    -0.010_597_401_785_069_032,
];

const HAAR_LOWPASS: [f64; 2] = [core::f64::consts::FRAC_1_SQRT_2, core::f64::consts::FRAC_1_SQRT_2];

impl Wavelet {
    pub fn from_name(name: &str) -> Result<Wavelet, TransformError> {
        match name {
            "haar" => Ok(Wavelet::Haar),
            "db4" => Ok(Wavelet::Db4),
            other => Err(TransformError::UnknownWavelet(other.into())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Wavelet::Haar => "haar",
            Wavelet::Db4 => "db4",
        }
    }

    fn lowpass(&self) -> &'static [f64] {
        match self {
            Wavelet::Haar => &HAAR_LOWPASS,
            Wavelet::Db4 => &DB4_LOWPASS,
        }
    }

    /// Quadrature mirror highpass: `g[m] = (−1)^m h[L−1−m]`.
    fn highpass(&self) -> Vec<f64> {
        let h = self.lowpass();
        let l = h.len();
        (0..l)
            .map(|m| {
                let v = h[l - 1 - m];
                if m % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect()
    }
}

/// Pyramidal multi-level decomposition with periodic boundary extension.
///
/// Detail bands are ordered finest first (length n/2) to coarsest last
/// (length n/2^L); the approximation band matches the coarsest detail.
/// The total coefficient count equals the input length and, the filters
/// being orthonormal, total energy is conserved.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletDecomposition {
    wavelet: Wavelet,
    detail_bands: Vec<Vec<f64>>,
    approx_band: Vec<f64>,
}

impl WaveletDecomposition {
    pub fn wavelet(&self) -> Wavelet {
        self.wavelet
    }

    pub fn levels(&self) -> usize {
        self.detail_bands.len()
    }

    /// Detail bands, coarsest last; band at index `j` has length `n/2^(j+1)`.
    pub fn detail_bands(&self) -> &[Vec<f64>] {
        &self.detail_bands
    }

    pub fn approx_band(&self) -> &[f64] {
        &self.approx_band
    }

    /// Reconstructed signal length.
    pub fn signal_len(&self) -> usize {
        self.detail_bands.first().map_or(0, |b| b.len() * 2)
    }

    pub fn total_coefficients(&self) -> usize {
        self.detail_bands.iter().map(Vec::len).sum::<usize>() + self.approx_band.len()
    }

    /// Builds a decomposition from raw bands, validating the dyadic sizing.
    pub fn from_bands(
        wavelet: Wavelet,
        detail_bands: Vec<Vec<f64>>,
        approx_band: Vec<f64>,
    ) -> Result<Self, TransformError> {
        if detail_bands.is_empty() {
            return Err(TransformError::NoLevels);
        }
        let n = detail_bands[0].len() * 2;
        if !n.is_power_of_two() {
            return Err(TransformError::LengthNotPowerOfTwo(n));
        }
        for (j, band) in detail_bands.iter().enumerate() {
            if band.len() != n >> (j + 1) {
                return Err(TransformError::MalformedDecomposition);
            }
        }
        if approx_band.len() != detail_bands.last().map_or(0, Vec::len) {
            return Err(TransformError::MalformedDecomposition);
        }
        Ok(WaveletDecomposition {
            wavelet,
            detail_bands,
            approx_band,
        })
    }
}

/// One analysis step: periodic convolution with the low/high filters and
/// dyadic downsampling. `a[k] = Σ_m h[m]·s[(2k+m) mod n]`.
fn analysis_step(signal: &[f64], h: &[f64], g: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = signal.len();
    let half = n / 2;
    let mut approx = vec![0.0; half];
    let mut detail = vec![0.0; half];
    for k in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        for (m, (&hm, &gm)) in h.iter().zip(g).enumerate() {
            let s = signal[(2 * k + m) % n];
            a += hm * s;
            d += gm * s;
        }
        approx[k] = a;
        detail[k] = d;
    }
    (approx, detail)
}

/// One synthesis step: upsample and periodically convolve with the same
/// filter pair (orthonormal filters are self-inverting).
fn synthesis_step(approx: &[f64], detail: &[f64], h: &[f64], g: &[f64]) -> Vec<f64> {
    let half = approx.len();
    let n = half * 2;
    let mut out = vec![0.0; n];
    for k in 0..half {
        for (m, (&hm, &gm)) in h.iter().zip(g).enumerate() {
            out[(2 * k + m) % n] += hm * approx[k] + gm * detail[k];
        }
    }
    out
}

/// Multi-level pyramidal analysis. Requires a power-of-two length and
/// `levels ≤ log2(n) − 1` so every band keeps at least two coefficients.
pub fn dwt_decompose(
    signal: &[f64],
    levels: usize,
    wavelet: Wavelet,
) -> Result<WaveletDecomposition, TransformError> {
    let n = signal.len();
    if n < 2 || !n.is_power_of_two() {
        return Err(TransformError::LengthNotPowerOfTwo(n));
    }
    if levels == 0 {
        return Err(TransformError::NoLevels);
    }
    let max = n.trailing_zeros() as usize - 1;
    if levels > max {
        return Err(TransformError::TooManyLevels { levels, max, n });
    }
    let h = wavelet.lowpass();
    let g = wavelet.highpass();
    let mut detail_bands = Vec::with_capacity(levels);
    let mut current = signal.to_vec();
    for _ in 0..levels {
        let (approx, detail) = analysis_step(&current, h, &g);
        detail_bands.push(detail);
        current = approx;
    }
    Ok(WaveletDecomposition {
        wavelet,
        detail_bands,
        approx_band: current,
    })
}

/// Inverse pyramidal synthesis; exact (to round-off) for any decomposition
/// produced by [`dwt_decompose`].
pub fn dwt_reconstruct(d: &WaveletDecomposition) -> Vec<f64> {
    let h = d.wavelet.lowpass();
    let g = d.wavelet.highpass();
    let mut current = d.approx_band.clone();
    for detail in d.detail_bands.iter().rev() {
        current = synthesis_step(&current, detail, h, &g);
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    /// Direct O(n²) two-sided DFT; the independent oracle for the FFT path.
    fn dft_direct(signal: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = signal.len();
        let mut re = vec![0.0; n];
        let mut im = vec![0.0; n];
        for (k, (rk, ik)) in re.iter_mut().zip(im.iter_mut()).enumerate() {
            for (m, &s) in signal.iter().enumerate() {
                let ang = -2.0 * core::f64::consts::PI * (k * m) as f64 / n as f64;
                *rk += s * ang.cos();
                *ik += s * ang.sin();
            }
        }
        (re, im)
    }

    fn random_signal(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = Rng::new(seed);
        (0..n).map(|_| rng.uniform(-1.0, 1.0)).collect()
    }

    #[test]
    fn envelope_of_constant_is_dc_only() {
        let c = 3.25;
        let env = dft_envelope(&[c; 8]).unwrap();
        assert!((env.magnitudes()[0] - c).abs() < 1e-12);
        for &m in &env.magnitudes()[1..] {
            assert!(m.abs() < 1e-12);
        }
    }

    #[test]
    fn envelope_of_single_tone() {
        let n = 8;
        let s: Vec<f64> = (0..n)
            .map(|m| (2.0 * core::f64::consts::PI * m as f64 / n as f64).cos())
            .collect();
        let env = dft_envelope(&s).unwrap();
        assert!((env.magnitudes()[1] - 0.5).abs() < 1e-12);
        for (k, &m) in env.magnitudes().iter().enumerate() {
            if k != 1 {
                assert!(m.abs() < 1e-12, "bin {k} = {m}");
            }
        }
    }

    #[test]
    fn fft_matches_direct_dft() {
        for &n in &[8usize, 64, 256] {
            let s = random_signal(n, 100 + n as u64);
            let (dre, dim) = dft_direct(&s);
            let mut re = s.clone();
            let mut im = vec![0.0; n];
            fft_in_place(&mut re, &mut im);
            for k in 0..n {
                assert!((re[k] - dre[k]).abs() < 1e-9, "re[{k}]");
                assert!((im[k] - dim[k]).abs() < 1e-9, "im[{k}]");
            }
        }
    }

    #[test]
    fn parseval_identity() {
        let s = random_signal(256, 7);
        let env = dft_envelope(&s).unwrap();
        let time_energy: f64 = s.iter().map(|v| v * v).sum::<f64>() / 256.0;
        assert!((env.energy() - time_energy).abs() < 1e-9);
    }

    #[test]
    fn dc_bin_equals_signal_mean() {
        let s: Vec<f64> = random_signal(128, 8).iter().map(|v| v + 2.0).collect();
        let env = dft_envelope(&s).unwrap();
        let mean = s.iter().sum::<f64>() / 128.0;
        assert!((env.magnitudes()[0] - mean).abs() < 1e-9);
        assert_eq!(env.without_dc().len(), 64);
    }

    #[test]
    fn envelope_shift_invariance() {
        let s = random_signal(256, 9);
        let env = dft_envelope(&s).unwrap();
        let mut shifted = s.clone();
        shifted.rotate_left(37);
        let env2 = dft_envelope(&shifted).unwrap();
        for (a, b) in env.magnitudes().iter().zip(env2.magnitudes()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn dft_linearity_of_complex_transform() {
        let s1 = random_signal(64, 21);
        let s2 = random_signal(64, 22);
        let (a, b) = (1.7, -0.4);
        let combo: Vec<f64> = s1.iter().zip(&s2).map(|(x, y)| a * x + b * y).collect();
        let mut re = combo;
        let mut im = vec![0.0; 64];
        fft_in_place(&mut re, &mut im);
        let (mut r1, mut i1) = (s1, vec![0.0; 64]);
        fft_in_place(&mut r1, &mut i1);
        let (mut r2, mut i2) = (s2, vec![0.0; 64]);
        fft_in_place(&mut r2, &mut i2);
        for k in 0..64 {
            assert!((re[k] - (a * r1[k] + b * r2[k])).abs() < 1e-9);
            assert!((im[k] - (a * i1[k] + b * i2[k])).abs() < 1e-9);
        }
    }

    #[test]
    fn envelope_rejects_bad_lengths() {
        assert!(matches!(
            dft_envelope(&[1.0; 12]),
            Err(TransformError::LengthNotPowerOfTwo(12))
        ));
        assert!(matches!(
            dft_envelope(&[1.0; 4]),
            Err(TransformError::LengthNotPowerOfTwo(4))
        ));
    }

    #[test]
    fn haar_constant_pairs() {
        let d = dwt_decompose(&[1.0, 1.0, 1.0, 1.0], 1, Wavelet::Haar).unwrap();
        let r2 = 2.0f64.sqrt();
        assert!((d.approx_band()[0] - r2).abs() < 1e-12);
        assert!((d.approx_band()[1] - r2).abs() < 1e-12);
        assert!(d.detail_bands()[0].iter().all(|&x| x.abs() < 1e-12));
    }

    #[test]
    fn haar_known_arithmetic() {
        let d = dwt_decompose(&[1.0, 2.0, 3.0, 4.0], 1, Wavelet::Haar).unwrap();
        let r2 = 2.0f64.sqrt();
        assert!((d.approx_band()[0] - 3.0 / r2).abs() < 1e-12);
        assert!((d.approx_band()[1] - 7.0 / r2).abs() < 1e-12);
        assert!((d.detail_bands()[0][0] + 1.0 / r2).abs() < 1e-12);
        assert!((d.detail_bands()[0][1] + 1.0 / r2).abs() < 1e-12);
    }

    #[test]
    fn db4_band_sizing() {
        let s = random_signal(256, 3);
        let d = dwt_decompose(&s, 4, Wavelet::Db4).unwrap();
        let lens: Vec<usize> = d.detail_bands().iter().map(Vec::len).collect();
        assert_eq!(lens, [128, 64, 32, 16]);
        assert_eq!(d.approx_band().len(), 16);
        assert_eq!(d.total_coefficients(), 256);
    }

    #[test]
    fn round_trip_both_wavelets() {
        for &wavelet in &[Wavelet::Haar, Wavelet::Db4] {
            let s = random_signal(256, 40);
            let d = dwt_decompose(&s, 4, wavelet).unwrap();
            let r = dwt_reconstruct(&d);
            for (a, b) in r.iter().zip(&s) {
                assert!((a - b).abs() < 1e-9, "{:?}", wavelet);
            }
        }
    }

    #[test]
    fn energy_conservation() {
        for &wavelet in &[Wavelet::Haar, Wavelet::Db4] {
            let s = random_signal(256, 41);
            let d = dwt_decompose(&s, 5, wavelet).unwrap();
            let in_energy: f64 = s.iter().map(|v| v * v).sum();
            let out_energy: f64 = d
                .detail_bands()
                .iter()
                .flatten()
                .chain(d.approx_band())
                .map(|v| v * v)
                .sum();
            assert!((in_energy - out_energy).abs() < 1e-9);
        }
    }

    #[test]
    fn dwt_linearity_via_reconstruction() {
        let s1 = random_signal(128, 50);
        let s2 = random_signal(128, 51);
        let (a, b) = (0.3, 2.1);
        let combo: Vec<f64> = s1.iter().zip(&s2).map(|(x, y)| a * x + b * y).collect();
        let d1 = dwt_decompose(&s1, 3, Wavelet::Db4).unwrap();
        let d2 = dwt_decompose(&s2, 3, Wavelet::Db4).unwrap();
        // linear combination of coefficient sets reconstructs the combination
        let mixed = WaveletDecomposition::from_bands(
            Wavelet::Db4,
            d1.detail_bands()
                .iter()
                .zip(d2.detail_bands())
                .map(|(x, y)| x.iter().zip(y).map(|(u, v)| a * u + b * v).collect())
                .collect(),
            d1.approx_band()
                .iter()
                .zip(d2.approx_band())
                .map(|(u, v)| a * u + b * v)
                .collect(),
        )
        .unwrap();
        let r = dwt_reconstruct(&mixed);
        for (x, y) in r.iter().zip(&combo) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn all_zero_decomposition_reconstructs_zero() {
        let d = WaveletDecomposition::from_bands(
            Wavelet::Haar,
            vec![vec![0.0; 4], vec![0.0; 2]],
            vec![0.0; 2],
        )
        .unwrap();
        assert!(dwt_reconstruct(&d).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn haar_single_approx_coefficient() {
        let d =
            WaveletDecomposition::from_bands(Wavelet::Haar, vec![vec![0.0]], vec![1.0]).unwrap();
        let r = dwt_reconstruct(&d);
        let e = core::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(r.len(), 2);
        assert!((r[0] - e).abs() < 1e-12);
        assert!((r[1] - e).abs() < 1e-12);
    }

    #[test]
    fn level_and_wavelet_validation() {
        let s = [0.0; 16];
        assert!(matches!(
            dwt_decompose(&s, 4, Wavelet::Haar),
            Err(TransformError::TooManyLevels { levels: 4, max: 3, n: 16 })
        ));
        assert!(matches!(
            dwt_decompose(&s, 0, Wavelet::Haar),
            Err(TransformError::NoLevels)
        ));
        assert!(Wavelet::from_name("haar").is_ok());
        assert!(Wavelet::from_name("db4").is_ok());
        assert!(matches!(
            Wavelet::from_name("sym5"),
            Err(TransformError::UnknownWavelet(_))
        ));
    }

    #[test]
    fn db4_filter_orthonormality() {
        let h = Wavelet::Db4.lowpass();
        let sum: f64 = h.iter().sum();
        assert!((sum - 2.0f64.sqrt()).abs() < 1e-12);
        let sumsq: f64 = h.iter().map(|v| v * v).sum();
        assert!((sumsq - 1.0).abs() < 1e-12);
        for shift in [2usize, 4, 6] {
            let dot: f64 = (0..h.len() - shift).map(|i| h[i] * h[i + shift]).sum();
            assert!(dot.abs() < 1e-12, "shift {shift}: {dot}");
        }
    }
}
