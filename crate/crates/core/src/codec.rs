//! Limited-precision synapse codebooks and the chromosome layout.
//!
//! A synapse is a 6-bit gene `[w2 w1 w0 d2 d1 d0]`, most significant bit
//! first: three bits index the ascending weight codebook and three bits index
//! the delay codebook `{1, ..., 8}` ms. A chromosome concatenates the genes of
//! every synapse in canonical order (see [`Topology::connections`]).

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::srm::{SynapseValue, Topology};

pub const GENE_BITS: usize = 6;
const FIELD_BITS: usize = 3;

const HALF_STEP_WEIGHTS: [f64; 8] = [-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0];
const INTEGER_WEIGHTS: [f64; 8] = [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0];
const DELAYS_MS: [f64; 8] = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];

/// Which 3-bit weight codebook a genome uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WeightScheme {
    /// Steps of 0.5 from -1.5 to 2.
    HalfStep,
    /// Integers from -3 to 4.
    Integer,
}

impl WeightScheme {
    pub const ALL: [WeightScheme; 2] = [WeightScheme::HalfStep, WeightScheme::Integer];
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightScheme::HalfStep => "HalfStep",
            WeightScheme::Integer => "Integer",
        })
    }
}

impl FromStr for WeightScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "HalfStep" => Ok(WeightScheme::HalfStep),
            "Integer" => Ok(WeightScheme::Integer),
            other => Err(Error::Domain(format!("unknown weight scheme {other:?}"))),
        }
    }
}

pub fn weight_codebook(scheme: WeightScheme) -> [f64; 8] {
    match scheme {
        WeightScheme::HalfStep => HALF_STEP_WEIGHTS,
        WeightScheme::Integer => INTEGER_WEIGHTS,
    }
}

pub fn delay_codebook() -> [f64; 8] {
    DELAYS_MS
}

/// Codebook indices of one synapse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SynapseGene {
    weight_idx: u8,
    delay_idx: u8,
}

impl SynapseGene {
    pub fn new(weight_idx: u8, delay_idx: u8) -> Result<Self> {
        if weight_idx > 7 || delay_idx > 7 {
            return Err(Error::Domain(format!(
                "gene indices must fit in 3 bits, got ({weight_idx}, {delay_idx})"
            )));
        }
        Ok(SynapseGene {
            weight_idx,
            delay_idx,
        })
    }

    pub fn weight_idx(&self) -> u8 {
        self.weight_idx
    }

    pub fn delay_idx(&self) -> u8 {
        self.delay_idx
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.len() != GENE_BITS {
            return Err(Error::Structural(format!(
                "a gene has {GENE_BITS} bits, got {}",
                bits.len()
            )));
        }
        let field = |b: &[bool]| b.iter().fold(0u8, |acc, &bit| (acc << 1) | u8::from(bit));
        Ok(SynapseGene {
            weight_idx: field(&bits[..FIELD_BITS]),
            delay_idx: field(&bits[FIELD_BITS..]),
        })
    }

    pub fn to_bits(self) -> [bool; GENE_BITS] {
        let mut bits = [false; GENE_BITS];
        for k in 0..FIELD_BITS {
            let shift = FIELD_BITS - 1 - k;
            bits[k] = (self.weight_idx >> shift) & 1 == 1;
            bits[FIELD_BITS + k] = (self.delay_idx >> shift) & 1 == 1;
        }
        bits
    }

    pub fn value(self, scheme: WeightScheme) -> SynapseValue {
        SynapseValue::new(
            weight_codebook(scheme)[self.weight_idx as usize],
            DELAYS_MS[self.delay_idx as usize],
        )
    }

    pub fn from_value(value: SynapseValue, scheme: WeightScheme) -> Result<Self> {
        let weight_idx = weight_codebook(scheme)
            .iter()
            .position(|&w| w == value.weight)
            .ok_or_else(|| {
                Error::Domain(format!(
                    "weight {} is not in the {scheme} codebook",
                    value.weight
                ))
            })?;
        let delay_idx = DELAYS_MS
            .iter()
            .position(|&d| d == value.delay)
            .ok_or_else(|| {
                Error::Domain(format!(
                    "delay {} ms is not in the delay codebook",
                    value.delay
                ))
            })?;
        Ok(SynapseGene {
            weight_idx: weight_idx as u8,
            delay_idx: delay_idx as u8,
        })
    }
}

pub fn decode_gene(bits: &[bool], scheme: WeightScheme) -> Result<SynapseValue> {
    Ok(SynapseGene::from_bits(bits)?.value(scheme))
}

pub fn encode_gene(value: SynapseValue, scheme: WeightScheme) -> Result<[bool; GENE_BITS]> {
    Ok(SynapseGene::from_value(value, scheme)?.to_bits())
}

/// Packed genome: the GA's unit of search.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Chromosome {
    bits: Vec<bool>,
}

impl Chromosome {
    pub fn new(bits: Vec<bool>) -> Self {
        Chromosome { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Chromosome {
            bits: vec![false; len],
        }
    }

    /// The `len`-bit chromosome whose bit string, read MSB-first, equals `index`.
    pub fn from_index(index: u64, len: usize) -> Self {
        assert!(len <= 64, "from_index supports at most 64 bits");
        Chromosome {
            bits: (0..len)
                .map(|k| (index >> (len - 1 - k)) & 1 == 1)
                .collect(),
        }
    }

    pub fn from_genes(genes: &[SynapseGene]) -> Self {
        Chromosome {
            bits: genes.iter().flat_map(|g| g.to_bits()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    pub fn genes(&self) -> Result<Vec<SynapseGene>> {
        if !self.bits.len().is_multiple_of(GENE_BITS) {
            return Err(Error::Structural(format!(
                "chromosome length {} is not a multiple of {GENE_BITS}",
                self.bits.len()
            )));
        }
        self.bits
            .chunks(GENE_BITS)
            .map(SynapseGene::from_bits)
            .collect()
    }
}

impl fmt::Display for Chromosome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        f.write_str(&s)
    }
}

impl FromStr for Chromosome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Domain(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Chromosome::new)
    }
}

pub fn decode_chromosome(
    c: &Chromosome,
    topology: &Topology,
    scheme: WeightScheme,
) -> Result<Vec<SynapseValue>> {
    let expected = GENE_BITS * topology.synapse_count();
    if c.len() != expected {
        return Err(Error::Structural(format!(
            "topology {topology} needs a {expected}-bit chromosome, got {} bits",
            c.len()
        )));
    }
    Ok(c.genes()?.into_iter().map(|g| g.value(scheme)).collect())
}

/// A chromosome bound to its scheme and topology; the on-disk genome format.
///
/// ```text
/// Integer
/// 3-5-1
/// 010011...   (6 x synapse count characters)
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Genome {
    pub scheme: WeightScheme,
    pub topology: Topology,
    pub chromosome: Chromosome,
}

impl Genome {
    pub fn new(scheme: WeightScheme, topology: Topology, chromosome: Chromosome) -> Result<Self> {
        let expected = GENE_BITS * topology.synapse_count();
        if chromosome.len() != expected {
            return Err(Error::Structural(format!(
                "topology {topology} needs a {expected}-bit chromosome, got {} bits",
                chromosome.len()
            )));
        }
        Ok(Genome {
            scheme,
            topology,
            chromosome,
        })
    }

    pub fn synapses(&self) -> Vec<SynapseValue> {
        decode_chromosome(&self.chromosome, &self.topology, self.scheme)
            .expect("length checked on construction")
    }

    pub fn read(path: &Path) -> std::result::Result<Self, GenomeFileError> {
        let text = fs::read_to_string(path)
            .map_err(|e| GenomeFileError::Io(path.display().to_string(), e))?;
        text.parse().map_err(GenomeFileError::Format)
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, self.to_string())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum GenomeFileError {
    #[error("cannot read genome file {0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error(transparent)]
    Format(#[from] Error),
}

impl fmt::Display for Genome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.scheme)?;
        writeln!(f, "{}", self.topology)?;
        writeln!(f, "{}", self.chromosome)
    }
}

impl FromStr for Genome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let mut next = |line: usize, what: &str| {
            lines
                .next()
                .map(str::trim)
                .ok_or_else(|| Error::parse(line, format!("missing {what}")))
        };
        let scheme = next(1, "weight scheme")?
            .parse()
            .map_err(|e: Error| Error::parse(1, e.to_string()))?;
        let topology = next(2, "topology")?
            .parse()
            .map_err(|e: Error| Error::parse(2, e.to_string()))?;
        let chromosome = next(3, "bit string")?
            .parse()
            .map_err(|e: Error| Error::parse(3, e.to_string()))?;
        Genome::new(scheme, topology, chromosome)
    }
}
