//! JSON file formats for states, spectra, density targets, and qudit
//! states, plus helpers for emitting reports with stable (sorted) keys.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::explorer::QuditState;
use crate::spectra::Spectrum;
use crate::statevec::{PureState, QubitDensity};
use crate::tol;

#[derive(Serialize, Deserialize)]
struct StateFile {
    n: usize,
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct SpectrumFile {
    lambdas: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct QuditStateFile {
    d: usize,
    n: usize,
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct DensityTargetsFile {
    rhos: Vec<[[[f64; 2]; 2]; 2]>,
}

fn pairs_to_amps(pairs: &[[f64; 2]]) -> Vec<Complex64> {
    pairs
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect()
}

fn amps_to_pairs(amps: &[Complex64]) -> Vec<[f64; 2]> {
    amps.iter().map(|z| [z.re, z.im]).collect()
}

/// Gate raw amplitudes on the file norm tolerance, then bring them to the
/// exact unit norm the in-memory types require. Rescaling only happens
/// when the deviation exceeds the type tolerance, and rejection happens
/// beyond [`tol::FILE_NORM_TOL`].
fn gate_norm(amps: &mut [Complex64]) -> Result<()> {
    let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let deviation = (norm_sqr - 1.0).abs();
    if deviation > tol::FILE_NORM_TOL {
        return Err(Error::NotNormalized { deviation });
    }
    if deviation > tol::NORM_TOL {
        let norm = norm_sqr.sqrt();
        for a in amps.iter_mut() {
            *a /= norm;
        }
    }
    Ok(())
}

pub fn state_to_json(state: &PureState) -> serde_json::Value {
    serde_json::to_value(StateFile {
        n: state.n(),
        amplitudes: amps_to_pairs(state.amplitudes()),
    })
    .expect("plain numeric struct serializes")
}

pub fn state_from_str(text: &str) -> Result<PureState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::InvalidConfig {
        reason: format!("bad state file: {e}"),
    })?;
    let mut amps = pairs_to_amps(&file.amplitudes);
    let expected = 1usize
        .checked_shl(file.n as u32)
        .filter(|_| file.n >= 1 && file.n <= tol::DEFAULT_QUBIT_CAP)
        .ok_or(Error::CapExceeded {
            n: file.n,
            cap: tol::DEFAULT_QUBIT_CAP,
        })?;
    if amps.len() != expected {
        return Err(Error::LengthMismatch {
            n: file.n,
            got: amps.len(),
            expected,
        });
    }
    gate_norm(&mut amps)?;
    PureState::new(file.n, amps)
}

pub fn spectrum_to_json(spec: &Spectrum) -> serde_json::Value {
    serde_json::to_value(SpectrumFile {
        lambdas: spec.lambdas().to_vec(),
    })
    .expect("plain numeric struct serializes")
}

pub fn spectrum_from_str(text: &str) -> Result<Spectrum> {
    let file: SpectrumFile = serde_json::from_str(text).map_err(|e| Error::InvalidConfig {
        reason: format!("bad spectrum file: {e}"),
    })?;
    Spectrum::new(file.lambdas)
}

pub fn qudit_state_to_json(state: &QuditState) -> serde_json::Value {
    serde_json::to_value(QuditStateFile {
        d: state.d(),
        n: state.n(),
        amplitudes: amps_to_pairs(state.amplitudes()),
    })
    .expect("plain numeric struct serializes")
}

pub fn qudit_state_from_str(text: &str) -> Result<QuditState> {
    let file: QuditStateFile = serde_json::from_str(text).map_err(|e| Error::InvalidConfig {
        reason: format!("bad qudit state file: {e}"),
    })?;
    let mut amps = pairs_to_amps(&file.amplitudes);
    gate_norm(&mut amps)?;
    QuditState::new(file.d, file.n, amps)
}

pub fn density_targets_to_json(targets: &[QubitDensity]) -> serde_json::Value {
    let rhos: Vec<[[[f64; 2]; 2]; 2]> = targets
        .iter()
        .map(|t| {
            let mut out = [[[0.0; 2]; 2]; 2];
            for (r, row) in out.iter_mut().enumerate() {
                for (c, cell) in row.iter_mut().enumerate() {
                    *cell = [t.entry(r, c).re, t.entry(r, c).im];
                }
            }
            out
        })
        .collect();
    serde_json::to_value(DensityTargetsFile { rhos }).expect("plain numeric struct serializes")
}

pub fn density_targets_from_str(text: &str) -> Result<Vec<QubitDensity>> {
    let file: DensityTargetsFile =
        serde_json::from_str(text).map_err(|e| Error::InvalidConfig {
            reason: format!("bad density targets file: {e}"),
        })?;
    file.rhos
        .iter()
        .map(|raw| {
            let mut entries = [[Complex64::new(0.0, 0.0); 2]; 2];
            for r in 0..2 {
                for c in 0..2 {
                    entries[r][c] = Complex64::new(raw[r][c][0], raw[r][c][1]);
                }
            }
            QubitDensity::new(entries)
        })
        .collect()
}

/// Serialize any report with deterministic key order. `serde_json`'s
/// default map is a BTreeMap, so routing through `Value` sorts keys.
pub fn to_sorted_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("reports are plain data")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_round_trip_is_exact() {
        let s = PureState::haar(3, 4).unwrap();
        let text = serde_json::to_string(&state_to_json(&s)).unwrap();
        let back = state_from_str(&text).unwrap();
        assert_eq!(s.amplitudes(), back.amplitudes());
    }

    #[test]
    fn state_rejects_wrong_length() {
        let text = r#"{"n": 2, "amplitudes": [[1.0, 0.0], [0.0, 0.0]]}"#;
        assert!(matches!(
            state_from_str(text),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn state_rejects_norm_beyond_gate() {
        let text = r#"{"n": 1, "amplitudes": [[1.0, 0.0], [0.001, 0.0]]}"#;
        assert!(matches!(
            state_from_str(text),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn state_accepts_small_norm_slack() {
        // deviation ~2e-9: inside the file gate, outside the type tolerance
        let text = r#"{"n": 1, "amplitudes": [[1.000000001, 0.0], [0.0, 0.0]]}"#;
        let s = state_from_str(text).unwrap();
        let norm: f64 = s.amplitudes().iter().map(|a| a.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_round_trip() {
        let spec = Spectrum::new(vec![0.5, 0.25, 0.1]).unwrap();
        let text = serde_json::to_string(&spectrum_to_json(&spec)).unwrap();
        assert_eq!(spectrum_from_str(&text).unwrap(), spec);
    }

    #[test]
    fn qudit_round_trip() {
        let s = QuditState::haar(3, 2, 8).unwrap();
        let text = serde_json::to_string(&qudit_state_to_json(&s)).unwrap();
        assert_eq!(qudit_state_from_str(&text).unwrap(), s);
    }

    #[test]
    fn density_targets_round_trip() {
        let t = vec![QubitDensity::totally_mixed(), QubitDensity::totally_mixed()];
        let text = serde_json::to_string(&density_targets_to_json(&t)).unwrap();
        let back = density_targets_from_str(&text).unwrap();
        assert_eq!(back.len(), 2);
        assert!(back[0].max_entry_distance(&t[0]) < 1e-15);
    }

    #[test]
    fn sorted_keys_are_stable() {
        #[derive(Serialize)]
        struct Zed {
            zeta: f64,
            alpha: f64,
        }
        let v = to_sorted_json(&Zed {
            zeta: 1.0,
            alpha: 2.0,
        });
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.find("alpha").unwrap() < text.find("zeta").unwrap());
    }
}
