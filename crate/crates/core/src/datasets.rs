//! Fisher's iris data and class-stratified K-fold plans.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BUNDLED_IRIS: &str = include_str!("../data/iris.csv");
const SAMPLES_PER_CLASS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IrisClass {
    Setosa,
    Versicolor,
    Virginica,
}

impl IrisClass {
    pub const ALL: [IrisClass; 3] = [
        IrisClass::Setosa,
        IrisClass::Versicolor,
        IrisClass::Virginica,
    ];
}

impl fmt::Display for IrisClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IrisClass::Setosa => "Iris-setosa",
            IrisClass::Versicolor => "Iris-versicolor",
            IrisClass::Virginica => "Iris-virginica",
        })
    }
}

impl FromStr for IrisClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Iris-setosa" | "setosa" => Ok(IrisClass::Setosa),
            "Iris-versicolor" | "versicolor" => Ok(IrisClass::Versicolor),
            "Iris-virginica" | "virginica" => Ok(IrisClass::Virginica),
            other => Err(Error::Dataset(format!("unknown iris label {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IrisSample {
    /// Sepal length, sepal width, petal length, petal width (cm).
    pub features: [f64; 4],
    pub label: IrisClass,
}

/// Parses UCI-style `f1,f2,f3,f4,label` lines. Blank lines are skipped; the
/// result must hold exactly 50 samples of each class.
pub fn load_iris<R: BufRead>(source: R) -> Result<Vec<IrisSample>> {
    let mut samples = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(Error::parse(
                lineno,
                format!("expected 5 fields, found {}", fields.len()),
            ));
        }
        let mut features = [0.0; 4];
        for (slot, raw) in features.iter_mut().zip(&fields[..4]) {
            let v: f64 = raw
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad feature value {raw:?}")))?;
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::parse(
                    lineno,
                    format!("feature {v} must be finite and positive"),
                ));
            }
            *slot = v;
        }
        let label = fields[4]
            .parse()
            .map_err(|e: Error| Error::parse(lineno, e.to_string()))?;
        samples.push(IrisSample { features, label });
    }
    if samples.is_empty() {
        return Err(Error::Dataset("no samples".into()));
    }
    for class in IrisClass::ALL {
        let n = samples.iter().filter(|s| s.label == class).count();
        if n != SAMPLES_PER_CLASS {
            return Err(Error::Dataset(format!(
                "expected {SAMPLES_PER_CLASS} samples of {class}, found {n}"
            )));
        }
    }
    Ok(samples)
}

/// The 150-sample dataset shipped with the crate.
pub fn bundled_iris() -> Vec<IrisSample> {
    load_iris(BUNDLED_IRIS.as_bytes()).expect("bundled iris data is well-formed")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub train_size_per_class: usize,
    pub folds: Vec<Fold>,
}

impl FoldPlan {
    /// Writes `fold_id,role,sample_index` rows with role `train` or `val`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "fold_id,role,sample_index")?;
        for (k, fold) in self.folds.iter().enumerate() {
            for &i in &fold.train {
                writeln!(out, "{k},train,{i}")?;
            }
            for &i in &fold.validation {
                writeln!(out, "{k},val,{i}")?;
            }
        }
        Ok(())
    }
}

/// Stratified block folds: each class's sample indices are shuffled once by
/// `seed`, then fold `k` trains on block `k` of `train_size_per_class` indices
/// from every class and validates on all remaining samples.
/// The number of folds is `floor(class size / train_size_per_class)`.
pub fn make_fold_plan(
    samples: &[IrisSample],
    train_size_per_class: usize,
    seed: u64,
) -> Result<FoldPlan> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_class = Vec::with_capacity(IrisClass::ALL.len());
    for class in IrisClass::ALL {
        let mut idx: Vec<usize> = samples
            .iter()
            .enumerate()
            .filter(|(_, s)| s.label == class)
            .map(|(i, _)| i)
            .collect();
        idx.shuffle(&mut rng);
        per_class.push(idx);
    }
    let smallest = per_class.iter().map(Vec::len).min().unwrap_or(0);
    if train_size_per_class == 0 || train_size_per_class >= smallest {
        return Err(Error::Parameter(format!(
            "train size per class must be in 1..{smallest} to leave validation samples, got {train_size_per_class}"
        )));
    }
    let k = smallest / train_size_per_class;
    let folds = (0..k)
        .map(|fold| {
            let range = fold * train_size_per_class..(fold + 1) * train_size_per_class;
            let mut train: Vec<usize> = per_class
                .iter()
                .flat_map(|idx| idx[range.clone()].iter().copied())
                .collect();
            train.sort_unstable();
            let validation = (0..samples.len())
                .filter(|i| train.binary_search(i).is_err())
                .collect();
            Fold { train, validation }
        })
        .collect();
    Ok(FoldPlan {
        train_size_per_class,
        folds,
    })
}

/// Mean of the per-fold validation errors.
pub fn mean_validation_error(per_fold_errors: &[f64]) -> Result<f64> {
    if per_fold_errors.is_empty() {
        return Err(Error::Parameter("no fold errors to average".into()));
    }
    Ok(per_fold_errors.iter().sum::<f64>() / per_fold_errors.len() as f64)
}
