//! Reference results shown beside our own in the summary tables.

use lpsnn_core::WeightScheme;

/// Best XOR MSE reported for an architecture, scheme and time step.
pub fn xor_reference_mse(architecture: &str, scheme: WeightScheme, dt: f64) -> Option<f64> {
    use WeightScheme::*;
    let fine = dt == 0.01;
    let coarse = dt == 1.0;
    match (architecture, scheme) {
        ("3-5-1", HalfStep) if fine => Some(0.09505),
        ("3-5-1", HalfStep) if coarse => Some(0.0),
        ("3-5-1", Integer) if fine => Some(0.07135),
        ("3-5-1", Integer) if coarse => Some(0.0),
        ("3-2-1", HalfStep) if fine => Some(0.2501),
        ("3-2-1", HalfStep) if coarse => Some(0.25),
        ("3-2-1", Integer) if fine => Some(0.112625),
        ("3-2-1", Integer) if coarse => Some(0.0),
        ("3-1", HalfStep) if coarse => Some(0.5),
        ("3-1", Integer) if coarse => Some(1.0),
        _ => None,
    }
}

/// One row of reference iris accuracies, in percent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrisReference {
    pub label: &'static str,
    pub spikeprop: f64,
    pub quickprop: f64,
    pub rprop: f64,
    pub half_step: f64,
    pub integer: f64,
}

impl IrisReference {
    pub fn for_scheme(&self, scheme: WeightScheme) -> f64 {
        match scheme {
            WeightScheme::HalfStep => self.half_step,
            WeightScheme::Integer => self.integer,
        }
    }
}

pub const IRIS_REFERENCE: [IrisReference; 5] = [
    IrisReference {
        label: "30",
        spikeprop: 92.7,
        quickprop: 85.2,
        rprop: 90.3,
        half_step: 91.46,
        integer: 91.6,
    },
    IrisReference {
        label: "60A",
        spikeprop: 91.9,
        quickprop: 91.0,
        rprop: 94.8,
        half_step: 96.89,
        integer: 95.56,
    },
    IrisReference {
        label: "60B",
        spikeprop: 91.9,
        quickprop: 91.0,
        rprop: 94.8,
        half_step: 97.0,
        integer: 95.66,
    },
    IrisReference {
        label: "75",
        spikeprop: 85.2,
        quickprop: 92.3,
        rprop: 93.2,
        half_step: 96.0,
        integer: 95.0,
    },
    IrisReference {
        label: "90",
        spikeprop: 86.2,
        quickprop: 91.7,
        rprop: 93.5,
        half_step: 96.66,
        integer: 97.0,
    },
];

pub fn iris_reference(label: &str) -> Option<&'static IrisReference> {
    IRIS_REFERENCE.iter().find(|r| r.label == label)
}
