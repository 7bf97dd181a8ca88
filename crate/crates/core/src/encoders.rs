//! Conversions between task data and spike times.
//!
//! XOR bits use a fixed latency table with a reference neuron. Real-valued
//! iris features go through a population of Gaussian receptive fields: each
//! field's response `phi` in `(0, 1]` becomes a spike at `(1 - phi) * window`,
//! so strong responses fire early, and fields responding below the fire line
//! stay silent. Output spikes are mapped back to classes by the nearest target
//! within a tolerance window.

use serde::{Deserialize, Serialize};

use crate::datasets::IrisClass;
use crate::error::{Error, Result};
use crate::ga::{Pattern, Target};
use crate::srm::{grid_time, SpikeTrain};

/// Spike time of every reference neuron, in ms.
pub const REFERENCE_SPIKE_MS: f64 = 1.0;

const XOR_LOW_MS: f64 = 1.0;
const XOR_HIGH_MS: f64 = 7.0;
const XOR_OUT_ZERO_MS: f64 = 17.0;
const XOR_OUT_ONE_MS: f64 = 10.0;

/// How the XOR output is coded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum XorCoding {
    /// 17 ms for logic zero, 10 ms for logic one.
    HiddenLayer,
    /// No spike for logic zero, 10 ms for logic one.
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XorPattern {
    pub bits: (bool, bool),
    /// Reference, first input, second input.
    pub input_times: [f64; 3],
    pub target: Target,
}

impl XorPattern {
    pub fn inputs(&self) -> Vec<SpikeTrain> {
        self.input_times
            .iter()
            .map(|&t| SpikeTrain::single(t).expect("XOR latencies are valid"))
            .collect()
    }

    pub fn to_pattern(&self) -> Pattern {
        Pattern {
            inputs: self.inputs(),
            target: self.target,
        }
    }

    pub fn expected_output(&self) -> bool {
        self.bits.0 ^ self.bits.1
    }
}

pub fn encode_xor(b1: bool, b2: bool, coding: XorCoding) -> XorPattern {
    let latency = |b: bool| if b { XOR_HIGH_MS } else { XOR_LOW_MS };
    let target = match (b1 ^ b2, coding) {
        (true, _) => Target::At(XOR_OUT_ONE_MS),
        (false, XorCoding::HiddenLayer) => Target::At(XOR_OUT_ZERO_MS),
        (false, XorCoding::Binary) => Target::Silent,
    };
    XorPattern {
        bits: (b1, b2),
        input_times: [REFERENCE_SPIKE_MS, latency(b1), latency(b2)],
        target,
    }
}

/// The four XOR patterns in truth-table order 00, 01, 10, 11.
pub fn xor_patterns(coding: XorCoding) -> [XorPattern; 4] {
    [(false, false), (false, true), (true, false), (true, true)]
        .map(|(a, b)| encode_xor(a, b, coding))
}

/// Gaussian receptive field population settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrfParams {
    pub m: usize,
    pub i_min: f64,
    pub i_max: f64,
    pub gamma: f64,
    pub fire_threshold: f64,
    /// Latency span in ms: a response of 1 fires at 0, a response near 0 near the window end.
    pub encode_window: f64,
}

impl Default for GrfParams {
    fn default() -> Self {
        GrfParams {
            m: 8,
            i_min: 0.0,
            i_max: 50.0,
            gamma: 1.5,
            fire_threshold: 0.1,
            encode_window: 10.0,
        }
    }
}

impl GrfParams {
    pub fn validate(&self) -> Result<()> {
        if self.m < 3 {
            return Err(Error::Parameter(format!(
                "need at least 3 receptive fields, got {}",
                self.m
            )));
        }
        if !(self.i_max > self.i_min) {
            return Err(Error::Parameter(format!(
                "i_max ({}) must exceed i_min ({})",
                self.i_max, self.i_min
            )));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::Parameter(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if !(self.fire_threshold > 0.0 && self.fire_threshold < 1.0) {
            return Err(Error::Parameter(format!(
                "fire_threshold must lie in (0, 1), got {}",
                self.fire_threshold
            )));
        }
        if !(self.encode_window > 0.0) {
            return Err(Error::Parameter(format!(
                "encode_window must be positive, got {}",
                self.encode_window
            )));
        }
        Ok(())
    }
}

/// Centre and width of fields `i = 1..=m`.
pub fn grf_centers_widths(p: &GrfParams) -> Vec<(f64, f64)> {
    let spacing = (p.i_max - p.i_min) / (p.m as f64 - 2.0);
    let sigma = spacing / p.gamma;
    (1..=p.m)
        .map(|i| (p.i_min + ((2.0 * i as f64 - 3.0) / 2.0) * spacing, sigma))
        .collect()
}

/// Spike latency of each field for feature value `x`, rounded half-up to the
/// `sim_dt` grid. `None` marks a field below the fire line.
pub fn grf_spike_times(x: f64, p: &GrfParams, sim_dt: f64) -> Vec<Option<f64>> {
    grf_centers_widths(p)
        .into_iter()
        .map(|(c, sigma)| {
            let phi = (-(x - c).powi(2) / (2.0 * sigma * sigma)).exp();
            (phi >= p.fire_threshold).then(|| {
                let t = (1.0 - phi) * p.encode_window;
                grid_time(sim_dt, (t / sim_dt + 0.5).floor() as usize)
            })
        })
        .collect()
}

/// Input trains for one iris sample: `4 x m` field neurons (feature-major)
/// followed by the reference neuron.
pub fn encode_iris_sample(features: &[f64], p: &GrfParams, sim_dt: f64) -> Result<Vec<SpikeTrain>> {
    if features.len() != 4 {
        return Err(Error::Structural(format!(
            "iris samples have 4 features, got {}",
            features.len()
        )));
    }
    p.validate()?;
    let mut trains = Vec::with_capacity(4 * p.m + 1);
    for &x in features {
        for t in grf_spike_times(x, p, sim_dt) {
            trains.push(match t {
                Some(t) => SpikeTrain::single(t)?,
                None => SpikeTrain::empty(),
            });
        }
    }
    trains.push(SpikeTrain::single(REFERENCE_SPIKE_MS)?);
    Ok(trains)
}

/// Target output time per class plus the classification tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassTargets<C> {
    targets: Vec<(C, f64)>,
    tolerance_ms: f64,
}

impl<C: Copy + PartialEq> ClassTargets<C> {
    /// Fails unless the `±tolerance` windows around the targets are pairwise disjoint.
    pub fn new(targets: Vec<(C, f64)>, tolerance_ms: f64) -> Result<Self> {
        if !(tolerance_ms >= 0.0) {
            return Err(Error::Parameter(format!(
                "tolerance must be >= 0, got {tolerance_ms}"
            )));
        }
        for (i, (_, a)) in targets.iter().enumerate() {
            for (_, b) in &targets[i + 1..] {
                if (a - b).abs() <= 2.0 * tolerance_ms {
                    return Err(Error::Parameter(format!(
                        "target windows around {a} and {b} ms overlap at tolerance {tolerance_ms}"
                    )));
                }
            }
        }
        Ok(ClassTargets {
            targets,
            tolerance_ms,
        })
    }

    pub fn target_of(&self, class: C) -> Option<f64> {
        self.targets
            .iter()
            .find(|(c, _)| *c == class)
            .map(|&(_, t)| t)
    }

    pub fn tolerance_ms(&self) -> f64 {
        self.tolerance_ms
    }

    pub fn targets(&self) -> &[(C, f64)] {
        &self.targets
    }
}

/// 15 / 20 / 25 ms for setosa / versicolor / virginica, 2 ms tolerance.
pub fn iris_class_targets() -> ClassTargets<IrisClass> {
    ClassTargets::new(
        vec![
            (IrisClass::Setosa, 15.0),
            (IrisClass::Versicolor, 20.0),
            (IrisClass::Virginica, 25.0),
        ],
        2.0,
    )
    .expect("iris windows are disjoint")
}

/// Class whose window contains the first spike; `None` when the train is
/// silent or the spike falls outside every window.
pub fn decode_output_class<C: Copy + PartialEq>(
    train: &SpikeTrain,
    targets: &ClassTargets<C>,
) -> Option<C> {
    decode_first_spike(train.first(), targets)
}

pub fn decode_first_spike<C: Copy + PartialEq>(
    first: Option<f64>,
    targets: &ClassTargets<C>,
) -> Option<C> {
    let t = first?;
    let mut hits = targets
        .targets
        .iter()
        .filter(|(_, target)| (t - target).abs() <= targets.tolerance_ms);
    match (hits.next(), hits.next()) {
        (Some(&(c, _)), None) => Some(c),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_hidden_layer_table() {
        let rows = xor_patterns(XorCoding::HiddenLayer);
        let expected = [
            ([1.0, 1.0, 1.0], 17.0),
            ([1.0, 1.0, 7.0], 10.0),
            ([1.0, 7.0, 1.0], 10.0),
            ([1.0, 7.0, 7.0], 17.0),
        ];
        for (row, (inputs, target)) in rows.iter().zip(expected) {
            assert_eq!(row.input_times, inputs);
            assert_eq!(row.target, Target::At(target));
        }
    }

    #[test]
    fn xor_binary_coding() {
        let p = encode_xor(true, true, XorCoding::Binary);
        assert_eq!(p.input_times, [1.0, 7.0, 7.0]);
        assert_eq!(p.target, Target::Silent);
        assert_eq!(
            encode_xor(false, true, XorCoding::Binary).target,
            Target::At(10.0)
        );
        assert_eq!(
            encode_xor(false, false, XorCoding::Binary).target,
            Target::Silent
        );
    }

    #[test]
    fn xor_patterns_are_distinct() {
        for coding in [XorCoding::HiddenLayer, XorCoding::Binary] {
            let rows = xor_patterns(coding);
            for i in 0..4 {
                for j in i + 1..4 {
                    assert_ne!(rows[i].input_times, rows[j].input_times);
                }
            }
        }
    }

    #[test]
    fn grf_table_values() {
        let cw = grf_centers_widths(&GrfParams::default());
        assert_eq!(cw.len(), 8);
        assert!((cw[0].0 - (-25.0 / 6.0)).abs() < 1e-12);
        assert!((cw[7].0 - 325.0 / 6.0).abs() < 1e-12);
        for (i, &(c, sigma)) in cw.iter().enumerate() {
            assert!((sigma - 50.0 / 9.0).abs() < 1e-12);
            assert!((c - (cw[0].0 + i as f64 * 50.0 / 6.0)).abs() < 1e-9);
        }
    }

    #[test]
    fn grf_spike_examples() {
        let p = GrfParams::default();
        let cw = grf_centers_widths(&p);
        let at_center = grf_spike_times(cw[2].0, &p, 1.0);
        assert_eq!(at_center[2], Some(0.0));

        let (c, sigma) = cw[3];
        let one_width = grf_spike_times(c + sigma, &p, 1.0);
        assert_eq!(one_width[3], Some(4.0));
        let fine = grf_spike_times(c + sigma, &p, 0.01);
        assert_eq!(fine[3], Some(3.93));

        // phi = 0.05 at distance sigma * sqrt(2 ln 20)
        let far = c + sigma * (2.0 * 20f64.ln()).sqrt();
        assert_eq!(grf_spike_times(far, &p, 1.0)[3], None);
    }

    #[test]
    fn iris_sample_encoding() {
        let p = GrfParams::default();
        let trains = encode_iris_sample(&[5.1, 3.5, 1.4, 0.2], &p, 1.0).unwrap();
        assert_eq!(trains.len(), 33);
        assert!(trains.iter().all(|t| t.len() <= 1));
        assert_eq!(trains[32].times(), &[1.0]);
        assert!(matches!(
            encode_iris_sample(&[1.0, 2.0], &p, 1.0),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn iris_sample_at_centers() {
        let p = GrfParams::default();
        let cw = grf_centers_widths(&p);
        let k = 2;
        let x = cw[k].0;
        let trains = encode_iris_sample(&[x, x, x, x], &p, 1.0).unwrap();
        for f in 0..4 {
            let block = &trains[f * 8..(f + 1) * 8];
            assert_eq!(block[k].times(), &[0.0]);
            // neighbours sit one spacing away: phi = exp(-gamma^2 / 2) = 0.3247 -> 6.75 -> 7 ms
            assert_eq!(block[k - 1].times(), &[7.0]);
            assert_eq!(block[k + 1].times(), &[7.0]);
            // two spacings: phi = exp(-2 gamma^2) = 0.011 < 0.1
            assert!(block[k + 2].is_empty());
            assert!(block[k - 2].is_empty());
        }
    }

    #[test]
    fn class_decoding() {
        let targets = iris_class_targets();
        let train = |t: f64| SpikeTrain::single(t).unwrap();
        assert_eq!(
            decode_output_class(&train(16.2), &targets),
            Some(IrisClass::Setosa)
        );
        assert_eq!(decode_output_class(&train(17.5), &targets), None);
        assert_eq!(
            decode_output_class(&train(22.0), &targets),
            Some(IrisClass::Versicolor)
        );
        assert_eq!(
            decode_output_class(&train(27.0), &targets),
            Some(IrisClass::Virginica)
        );
        assert_eq!(decode_output_class(&SpikeTrain::empty(), &targets), None);
    }

    #[test]
    fn overlapping_windows_are_rejected() {
        assert!(ClassTargets::new(vec![(0u8, 15.0), (1u8, 18.0)], 2.0).is_err());
        assert!(ClassTargets::new(vec![(0u8, 15.0), (1u8, 20.0)], 2.0).is_ok());
    }
}
