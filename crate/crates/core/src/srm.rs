//! Spike Response Model neurons and a time-stepped feed-forward simulator.
//!
//! The membrane potential of a neuron is the sum of weighted, delayed
//! postsynaptic kernels for every presynaptic spike plus a refractory kernel
//! anchored at the neuron's most recent own spike:
//!
//! ```text
//! u_j(t) = rho(t - t_last) + sum_i sum_g w_ji * eps(t - t_i^g - d_ji)
//! eps(s) = (s / tau) * exp(-s / tau)       for s > 0, else 0
//! rho(s) = -4 * theta * exp(-s / tau_r)    for s > 0, else 0
//! ```
//!
//! With [`PspShape::PeakNormalized`] the postsynaptic kernel is scaled by `e`
//! so that a single PSP peaks at exactly 1 (the SpikeProp convention).
//!
//! A neuron fires at grid time `t` when `u(t) >= theta` and `u(t) > u(t - dt)`.
//! Each connection between adjacent layers carries exactly one synapse.
//!
//! All spike times handled by the simulator live on the grid `{0, dt, ..., T}`
//! and are tracked internally as step indices, so kernel values come from
//! tables and are bit-reproducible.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const GRID_TOLERANCE: f64 = 1e-9;

/// Scaling of the postsynaptic kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PspShape {
    /// `(t/tau) e^{-t/tau}`, peak value `1/e`.
    #[default]
    Standard,
    /// `(t/tau) e^{1-t/tau}`, peak value 1.
    PeakNormalized,
}

impl PspShape {
    pub fn scale(self) -> f64 {
        match self {
            PspShape::Standard => 1.0,
            PspShape::PeakNormalized => std::f64::consts::E,
        }
    }
}

/// Constants of the neuron model and the simulation grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    pub sim_time_ms: f64,
    pub dt: f64,
    pub tau: f64,
    pub tau_r: f64,
    pub threshold: f64,
    #[serde(default)]
    pub psp_shape: PspShape,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            sim_time_ms: 50.0,
            dt: 1.0,
            tau: 3.0,
            tau_r: 20.0,
            threshold: 1.5,
            psp_shape: PspShape::Standard,
        }
    }
}

impl SimParams {
    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn with_psp_shape(mut self, shape: PspShape) -> Self {
        self.psp_shape = shape;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Parameter(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        positive("sim_time_ms", self.sim_time_ms)?;
        positive("dt", self.dt)?;
        positive("tau", self.tau)?;
        positive("tau_r", self.tau_r)?;
        positive("threshold", self.threshold)?;
        if self.dt > self.sim_time_ms {
            return Err(Error::Parameter(format!(
                "dt ({}) exceeds sim_time_ms ({})",
                self.dt, self.sim_time_ms
            )));
        }
        let ratio = self.sim_time_ms / self.dt;
        if (ratio - ratio.round()).abs() > GRID_TOLERANCE * ratio {
            return Err(Error::Parameter(format!(
                "sim_time_ms ({}) is not an integer multiple of dt ({})",
                self.sim_time_ms, self.dt
            )));
        }
        Ok(())
    }

    /// Index of the last grid point; the grid has `steps() + 1` points.
    pub fn steps(&self) -> usize {
        (self.sim_time_ms / self.dt).round() as usize
    }

    /// Time in ms of grid point `step`.
    pub fn time_at(&self, step: usize) -> f64 {
        grid_time(self.dt, step)
    }

    /// Grid index of time `t`, or `None` if `t` is negative or off the grid.
    pub fn step_of(&self, t: f64) -> Option<usize> {
        if !t.is_finite() || t < 0.0 {
            return None;
        }
        let s = (t / self.dt).round();
        let step = s as usize;
        ((self.time_at(step) - t).abs() <= GRID_TOLERANCE * t.abs().max(1.0)).then_some(step)
    }
}

/// Time in ms of grid point `step` for spacing `dt`.
///
/// When `1 / dt` is integral the division form is used so that e.g. step 1700
/// at dt = 0.01 is exactly 17.0.
pub(crate) fn grid_time(dt: f64, step: usize) -> f64 {
    let q = 1.0 / dt;
    let r = q.round();
    if r >= 1.0 && (q - r).abs() <= GRID_TOLERANCE * q {
        step as f64 / r
    } else {
        step as f64 * dt
    }
}

/// Layer sizes from input to output; adjacent layers are fully connected.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Topology {
    layer_sizes: Vec<usize>,
}

impl Topology {
    pub fn new(layer_sizes: Vec<usize>) -> Result<Self> {
        if layer_sizes.len() < 2 {
            return Err(Error::Structural(format!(
                "a topology needs at least 2 layers, got {}",
                layer_sizes.len()
            )));
        }
        if layer_sizes.contains(&0) {
            return Err(Error::Structural(
                "every layer needs at least one neuron".into(),
            ));
        }
        Ok(Topology { layer_sizes })
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn input_size(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn output_size(&self) -> usize {
        *self.layer_sizes.last().unwrap()
    }

    pub fn neuron_count(&self) -> usize {
        self.layer_sizes.iter().sum()
    }

    pub fn synapse_count(&self) -> usize {
        self.layer_sizes.windows(2).map(|w| w[0] * w[1]).sum()
    }

    /// Global index of the first neuron of `layer`.
    pub fn layer_offset(&self, layer: usize) -> usize {
        self.layer_sizes[..layer].iter().sum()
    }

    /// Connections in canonical order: `(layer, post, pre)` lexicographic,
    /// where the connection runs from `layer` to `layer + 1`.
    pub fn connections(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.layer_sizes
            .windows(2)
            .enumerate()
            .flat_map(|(layer, w)| {
                let (pre_n, post_n) = (w[0], w[1]);
                (0..post_n).flat_map(move |post| (0..pre_n).map(move |pre| (layer, post, pre)))
            })
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.layer_sizes.iter().map(|n| n.to_string()).collect();
        f.write_str(&parts.join("-"))
    }
}

impl FromStr for Topology {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .trim()
            .split('-')
            .map(|p| {
                p.trim().parse::<usize>().map_err(|_| {
                    Error::Structural(format!("bad layer size {p:?} in topology {s:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Topology::new(sizes)
    }
}

/// Strictly increasing, non-negative spike times in ms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpikeTrain {
    times: Vec<f64>,
}

impl SpikeTrain {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::Parameter(format!(
                "spike times must be finite and >= 0: {times:?}"
            )));
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter(format!(
                "spike times must be strictly increasing: {times:?}"
            )));
        }
        Ok(SpikeTrain { times })
    }

    pub fn empty() -> Self {
        SpikeTrain::default()
    }

    pub fn single(t: f64) -> Result<Self> {
        SpikeTrain::new(vec![t])
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn first(&self) -> Option<f64> {
        self.times.first().copied()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Decoded synapse: weight (sign sets the excitatory/inhibitory role) and delay in ms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynapseValue {
    pub weight: f64,
    pub delay: f64,
}

impl SynapseValue {
    pub fn new(weight: f64, delay: f64) -> Self {
        SynapseValue { weight, delay }
    }
}

#[inline]
fn eps(t_e: f64, tau: f64) -> f64 {
    if t_e > 0.0 {
        let s = t_e / tau;
        s * (-s).exp()
    } else {
        0.0
    }
}

#[inline]
fn rho(t_p: f64, threshold: f64, tau_r: f64) -> f64 {
    if t_p > 0.0 {
        -4.0 * threshold * (-t_p / tau_r).exp()
    } else {
        0.0
    }
}

/// Unweighted postsynaptic potential `(t/tau) e^{-t/tau}`, zero for `t <= 0`.
pub fn psp_kernel(t_e: f64, tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::Parameter(format!("tau must be positive, got {tau}")));
    }
    Ok(eps(t_e, tau))
}

/// Spike-after potential `-4 theta e^{-t/tau_r}`, zero for `t <= 0`.
pub fn refractory_kernel(t_p: f64, threshold: f64, tau_r: f64) -> Result<f64> {
    if !(threshold > 0.0) || !(tau_r > 0.0) {
        return Err(Error::Parameter(format!(
            "threshold and tau_r must be positive, got {threshold} and {tau_r}"
        )));
    }
    Ok(rho(t_p, threshold, tau_r))
}

/// Membrane potential at time `t` evaluated directly in continuous time.
///
/// `own_last_spike` is the neuron's most recent spike before `t`, if any.
pub fn membrane_potential(
    t: f64,
    inputs: &[(SynapseValue, &SpikeTrain)],
    own_last_spike: Option<f64>,
    params: &SimParams,
) -> Result<f64> {
    params.validate()?;
    let scale = params.psp_shape.scale();
    let mut u = 0.0;
    for (syn, train) in inputs {
        for &s in train.times() {
            u += syn.weight * scale * eps(t - s - syn.delay, params.tau);
        }
    }
    if let Some(last) = own_last_spike {
        u += rho(t - last, params.threshold, params.tau_r);
    }
    Ok(u)
}

/// A network bound to a simulator: incoming synapses per non-input neuron,
/// with delays converted to grid steps.
#[derive(Debug, Clone)]
pub struct Wiring {
    topology: Topology,
    // incoming[j - n_inputs] = (presynaptic global index, weight, delay steps)
    incoming: Vec<Vec<(usize, f64, usize)>>,
}

impl Wiring {
    pub fn topology(&self) -> &Topology {
        &self.topology
    }
}

/// Input spike trains converted to grid steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Stimulus {
    steps: Vec<Vec<usize>>,
}

impl Stimulus {
    pub fn input_count(&self) -> usize {
        self.steps.len()
    }
}

/// One grid sample of one neuron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub t_ms: f64,
    pub neuron: usize,
    pub u: f64,
    pub spiked: bool,
}

/// Membrane potential of every non-input neuron at every grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub threshold: f64,
    pub rows: Vec<TraceRow>,
}

impl Trace {
    /// Writes `t_ms,neuron_id,u,spiked` rows, step-major.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t_ms,neuron_id,u,spiked")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                r.t_ms,
                r.neuron,
                r.u,
                u8::from(r.spiked)
            )?;
        }
        Ok(())
    }

    /// Global indices of the traced neurons, ascending.
    pub fn neurons(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.rows.iter().map(|r| r.neuron).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Stop {
    AtEnd,
    AllOutputsFired,
}

/// Grid simulator with precomputed kernel tables.
///
/// Construction is the only costly part; a `Simulator` is immutable and can be
/// shared across threads.
#[derive(Debug, Clone)]
pub struct Simulator {
    params: SimParams,
    steps: usize,
    psp: Vec<f64>,
    refractory: Vec<f64>,
}

impl Simulator {
    pub fn new(params: SimParams) -> Result<Self> {
        params.validate()?;
        let steps = params.steps();
        let scale = params.psp_shape.scale();
        let psp = (0..=steps)
            .map(|k| scale * eps(params.time_at(k), params.tau))
            .collect();
        let refractory = (0..=steps)
            .map(|k| rho(params.time_at(k), params.threshold, params.tau_r))
            .collect();
        Ok(Simulator {
            params,
            steps,
            psp,
            refractory,
        })
    }

    pub fn params(&self) -> &SimParams {
        &self.params
    }

    pub fn wire(&self, topology: &Topology, synapses: &[SynapseValue]) -> Result<Wiring> {
        let expected = topology.synapse_count();
        if synapses.len() != expected {
            return Err(Error::Structural(format!(
                "topology {topology} needs {expected} synapses, got {}",
                synapses.len()
            )));
        }
        let n_inputs = topology.input_size();
        let mut incoming = vec![Vec::new(); topology.neuron_count() - n_inputs];
        for ((layer, post, pre), syn) in topology.connections().zip(synapses) {
            if !syn.weight.is_finite() {
                return Err(Error::Parameter(format!(
                    "non-finite weight {}",
                    syn.weight
                )));
            }
            let delay = self.params.step_of(syn.delay).ok_or_else(|| {
                Error::Parameter(format!(
                    "delay {} ms is negative or not on the dt = {} grid",
                    syn.delay, self.params.dt
                ))
            })?;
            if syn.weight == 0.0 {
                continue;
            }
            let post_global = topology.layer_offset(layer + 1) + post;
            let pre_global = topology.layer_offset(layer) + pre;
            incoming[post_global - n_inputs].push((pre_global, syn.weight, delay));
        }
        Ok(Wiring {
            topology: topology.clone(),
            incoming,
        })
    }

    pub fn stimulus(&self, input_trains: &[SpikeTrain]) -> Result<Stimulus> {
        let steps = input_trains
            .iter()
            .map(|train| {
                train
                    .times()
                    .iter()
                    .map(|&t| {
                        if t > self.params.sim_time_ms {
                            return Err(Error::Parameter(format!(
                                "input spike at {t} ms is past the {} ms simulation window",
                                self.params.sim_time_ms
                            )));
                        }
                        self.params.step_of(t).ok_or_else(|| {
                            Error::Parameter(format!(
                                "input spike at {t} ms is not on the dt = {} grid",
                                self.params.dt
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Stimulus { steps })
    }

    fn check_inputs(&self, wiring: &Wiring, stimulus: &Stimulus) -> Result<()> {
        let n = wiring.topology.input_size();
        if stimulus.input_count() != n {
            return Err(Error::Structural(format!(
                "topology {} has {n} inputs, got {} input trains",
                wiring.topology,
                stimulus.input_count()
            )));
        }
        Ok(())
    }

    /// Spike trains of every non-input neuron, in global neuron order.
    pub fn run(&self, wiring: &Wiring, stimulus: &Stimulus) -> Result<Vec<SpikeTrain>> {
        self.check_inputs(wiring, stimulus)?;
        let spikes = self.sweep(wiring, stimulus, Stop::AtEnd, |_, _, _, _| {});
        let n_inputs = wiring.topology.input_size();
        Ok(spikes[n_inputs..]
            .iter()
            .map(|s| SpikeTrain {
                times: s.iter().map(|&k| self.params.time_at(k)).collect(),
            })
            .collect())
    }

    /// First spike time of each output neuron. The sweep stops as soon as
    /// every output neuron has fired.
    pub fn first_output_spikes(
        &self,
        wiring: &Wiring,
        stimulus: &Stimulus,
    ) -> Result<Vec<Option<f64>>> {
        self.check_inputs(wiring, stimulus)?;
        let spikes = self.sweep(wiring, stimulus, Stop::AllOutputsFired, |_, _, _, _| {});
        let first_output = wiring.topology.neuron_count() - wiring.topology.output_size();
        Ok(spikes[first_output..]
            .iter()
            .map(|s| s.first().map(|&k| self.params.time_at(k)))
            .collect())
    }

    pub fn trace(&self, wiring: &Wiring, stimulus: &Stimulus) -> Result<Trace> {
        self.check_inputs(wiring, stimulus)?;
        let mut rows = Vec::with_capacity((self.steps + 1) * wiring.incoming.len());
        self.sweep(wiring, stimulus, Stop::AtEnd, |step, neuron, u, spiked| {
            rows.push(TraceRow {
                t_ms: self.params.time_at(step),
                neuron,
                u,
                spiked,
            })
        });
        Ok(Trace {
            threshold: self.params.threshold,
            rows,
        })
    }

    /// Layer-synchronous sweep over the grid. Returns spike steps of every
    /// neuron (inputs included).
    fn sweep<F>(
        &self,
        wiring: &Wiring,
        stimulus: &Stimulus,
        stop: Stop,
        mut observe: F,
    ) -> Vec<Vec<usize>>
    where
        F: FnMut(usize, usize, f64, bool),
    {
        let topo = &wiring.topology;
        let n_inputs = topo.input_size();
        let n_total = topo.neuron_count();
        let first_output = n_total - topo.output_size();
        let theta = self.params.threshold;

        let mut spikes: Vec<Vec<usize>> = Vec::with_capacity(n_total);
        spikes.extend(stimulus.steps.iter().cloned());
        spikes.resize(n_total, Vec::new());
        let mut prev_u = vec![0.0; n_total - n_inputs];
        let mut outputs_silent = topo.output_size();

        for step in 0..=self.steps {
            for j in n_inputs..n_total {
                let local = j - n_inputs;
                let mut u = match spikes[j].last() {
                    Some(&last) => self.refractory[step - last],
                    None => 0.0,
                };
                for &(pre, w, delay) in &wiring.incoming[local] {
                    for &s in &spikes[pre] {
                        let arrival = s + delay;
                        if arrival >= step {
                            break;
                        }
                        u += w * self.psp[step - arrival];
                    }
                }
                let fired = step > 0 && u >= theta && u > prev_u[local];
                prev_u[local] = u;
                if fired {
                    if j >= first_output && spikes[j].is_empty() {
                        outputs_silent -= 1;
                    }
                    spikes[j].push(step);
                }
                observe(step, j, u, fired);
            }
            if stop == Stop::AllOutputsFired && outputs_silent == 0 {
                break;
            }
        }
        spikes
    }
}

/// One-shot simulation returning the spike train of every non-input neuron.
pub fn simulate_network(
    topology: &Topology,
    synapses: &[SynapseValue],
    input_trains: &[SpikeTrain],
    params: &SimParams,
) -> Result<Vec<SpikeTrain>> {
    let sim = Simulator::new(*params)?;
    let wiring = sim.wire(topology, synapses)?;
    let stimulus = sim.stimulus(input_trains)?;
    sim.run(&wiring, &stimulus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn psp_kernel_examples() {
        assert!(close(psp_kernel(3.0, 3.0).unwrap(), (-1.0f64).exp(), 1e-12));
        assert_eq!(psp_kernel(-1.0, 3.0).unwrap(), 0.0);
        assert_eq!(psp_kernel(0.0, 3.0).unwrap(), 0.0);
        assert!(close(
            psp_kernel(6.0, 3.0).unwrap(),
            0.270_670_566_473_225_4,
            1e-12
        ));
        assert!(matches!(psp_kernel(1.0, 0.0), Err(Error::Parameter(_))));
        assert!(matches!(psp_kernel(1.0, -2.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn refractory_kernel_examples() {
        assert!(close(
            refractory_kernel(0.0001, 1.5, 20.0).unwrap(),
            -6.0,
            1e-4
        ));
        assert_eq!(refractory_kernel(-5.0, 1.5, 20.0).unwrap(), 0.0);
        assert_eq!(refractory_kernel(0.0, 1.5, 20.0).unwrap(), 0.0);
        assert!(close(
            refractory_kernel(20.0, 1.5, 20.0).unwrap(),
            -2.207_276_647_028_654,
            1e-12
        ));
        assert!(refractory_kernel(1.0, 0.0, 20.0).is_err());
        assert!(refractory_kernel(1.0, 1.5, -1.0).is_err());
    }

    #[test]
    fn membrane_potential_single_term() {
        let params = SimParams::default();
        let train = SpikeTrain::single(1.0).unwrap();
        let syn = SynapseValue::new(2.0, 3.0);
        let u = membrane_potential(7.0, &[(syn, &train)], None, &params).unwrap();
        assert!(close(u, 0.735_758_882_342_884_7, 1e-12));
    }

    #[test]
    fn peak_normalized_shape() {
        let params = SimParams::default().with_psp_shape(PspShape::PeakNormalized);
        let train = SpikeTrain::single(1.0).unwrap();
        let u = membrane_potential(5.0, &[(SynapseValue::new(1.0, 1.0), &train)], None, &params)
            .unwrap();
        assert!(close(u, 1.0, 1e-12));
        let sim = Simulator::new(params).unwrap();
        assert!(close(sim.psp[3], 1.0, 1e-12));
    }

    #[test]
    fn membrane_potential_empty_and_zero_weight() {
        let params = SimParams::default();
        for t in [0.0, 3.5, 50.0] {
            assert_eq!(membrane_potential(t, &[], None, &params).unwrap(), 0.0);
        }
        let train = SpikeTrain::new(vec![1.0, 4.0]).unwrap();
        let syn = SynapseValue::new(0.0, 2.0);
        let u = membrane_potential(10.0, &[(syn, &train)], Some(6.0), &params).unwrap();
        assert_eq!(u, refractory_kernel(4.0, 1.5, 20.0).unwrap());
    }

    #[test]
    fn sim_params_validation() {
        assert!(SimParams::default().validate().is_ok());
        assert!(SimParams::default().with_dt(0.01).validate().is_ok());
        assert!(SimParams::default().with_dt(0.0).validate().is_err());
        assert!(SimParams::default().with_dt(60.0).validate().is_err());
        assert!(SimParams::default().with_dt(0.3).validate().is_err());
        assert!(SimParams::default()
            .with_threshold(-1.0)
            .validate()
            .is_err());
    }

    #[test]
    fn grid_times_are_exact() {
        let p = SimParams::default().with_dt(0.01);
        assert_eq!(p.steps(), 5000);
        assert_eq!(p.time_at(1700), 17.0);
        assert_eq!(p.step_of(17.0), Some(1700));
        assert_eq!(p.step_of(0.005), None);
        assert_eq!(p.step_of(-1.0), None);
    }

    #[test]
    fn topology_counts_and_order() {
        let t: Topology = "3-5-1".parse().unwrap();
        assert_eq!(t.synapse_count(), 20);
        assert_eq!(t.neuron_count(), 9);
        assert_eq!(t.to_string(), "3-5-1");
        let conns: Vec<_> = t.connections().collect();
        assert_eq!(conns.len(), 20);
        assert_eq!(conns[0], (0, 0, 0));
        assert_eq!(conns[1], (0, 0, 1));
        assert_eq!(conns[3], (0, 1, 0));
        assert_eq!(conns[15], (1, 0, 0));
        assert!(Topology::new(vec![3]).is_err());
        assert!(Topology::new(vec![3, 0, 1]).is_err());
        assert!("3-x-1".parse::<Topology>().is_err());
    }

    #[test]
    fn spike_train_validation() {
        assert!(SpikeTrain::new(vec![1.0, 1.0]).is_err());
        assert!(SpikeTrain::new(vec![2.0, 1.0]).is_err());
        assert!(SpikeTrain::new(vec![-1.0]).is_err());
        assert!(SpikeTrain::new(vec![0.0, 1.0]).is_ok());
    }

    #[test]
    fn zero_weights_are_silent() {
        let topo: Topology = "3-5-1".parse().unwrap();
        let syn = vec![SynapseValue::new(0.0, 1.0); 20];
        let inputs: Vec<_> = [1.0, 7.0, 7.0]
            .iter()
            .map(|&t| SpikeTrain::single(t).unwrap())
            .collect();
        let out = simulate_network(&topo, &syn, &inputs, &SimParams::default()).unwrap();
        assert_eq!(out.len(), 6);
        assert!(out.iter().all(SpikeTrain::is_empty));
    }

    #[test]
    fn single_max_weight_spike_cannot_reach_threshold_three() {
        // peak of 2 * eps is 2/e < 3
        let topo: Topology = "1-1".parse().unwrap();
        let params = SimParams::default().with_threshold(3.0);
        let input = [SpikeTrain::single(1.0).unwrap()];
        for weight in [2.0, 4.0] {
            let out = simulate_network(&topo, &[SynapseValue::new(weight, 1.0)], &input, &params)
                .unwrap();
            assert!(out[0].is_empty());
        }
    }

    #[test]
    fn single_input_fires_at_first_crossing() {
        // weight 8, delay 2, input at 1: u(t) = 8 eps(t - 3); eps(1) = e^{-1/3}/3 = 0.2388,
        // 8 * 0.2388 = 1.91 >= 1.5 and rising, so the spike lands at t = 4.
        let topo: Topology = "1-1".parse().unwrap();
        let input = [SpikeTrain::single(1.0).unwrap()];
        let out = simulate_network(
            &topo,
            &[SynapseValue::new(8.0, 2.0)],
            &input,
            &SimParams::default(),
        )
        .unwrap();
        assert_eq!(out[0].times(), &[4.0]);
    }

    #[test]
    fn structural_errors() {
        let topo: Topology = "2-1".parse().unwrap();
        let params = SimParams::default();
        let one = SpikeTrain::single(1.0).unwrap();
        let syn = vec![SynapseValue::new(1.0, 1.0); 2];
        assert!(matches!(
            simulate_network(&topo, &syn[..1], &[one.clone(), one.clone()], &params),
            Err(Error::Structural(_))
        ));
        assert!(matches!(
            simulate_network(&topo, &syn, std::slice::from_ref(&one), &params),
            Err(Error::Structural(_))
        ));
        assert!(matches!(
            simulate_network(
                &topo,
                &syn,
                &[one.clone(), SpikeTrain::single(60.0).unwrap()],
                &params
            ),
            Err(Error::Parameter(_))
        ));
        let off_grid = vec![SynapseValue::new(1.0, 1.5); 2];
        assert!(simulate_network(&topo, &off_grid, &[one.clone(), one], &params).is_err());
    }

    #[test]
    fn trace_shape_and_agreement_with_run() {
        let topo: Topology = "2-2-1".parse().unwrap();
        let params = SimParams::default();
        let sim = Simulator::new(params).unwrap();
        let syn: Vec<_> = [
            (4.0, 1.0),
            (3.0, 2.0),
            (2.0, 1.0),
            (4.0, 3.0),
            (4.0, 1.0),
            (3.0, 2.0),
        ]
        .iter()
        .map(|&(w, d)| SynapseValue::new(w, d))
        .collect();
        let wiring = sim.wire(&topo, &syn).unwrap();
        let stim = sim
            .stimulus(&[
                SpikeTrain::single(1.0).unwrap(),
                SpikeTrain::single(2.0).unwrap(),
            ])
            .unwrap();
        let trace = sim.trace(&wiring, &stim).unwrap();
        assert_eq!(trace.rows.len(), 51 * 3);
        assert_eq!(trace.neurons(), vec![2, 3, 4]);
        let run = sim.run(&wiring, &stim).unwrap();
        for (k, train) in run.iter().enumerate() {
            let traced: Vec<f64> = trace
                .rows
                .iter()
                .filter(|r| r.neuron == k + 2 && r.spiked)
                .map(|r| r.t_ms)
                .collect();
            assert_eq!(traced, train.times());
        }
        let first = sim.first_output_spikes(&wiring, &stim).unwrap();
        assert_eq!(first, vec![run[2].first()]);
    }

    #[test]
    fn grid_simulation_matches_direct_potential() {
        let topo: Topology = "2-1".parse().unwrap();
        let params = SimParams::default().with_dt(0.5);
        let sim = Simulator::new(params).unwrap();
        let syn = [SynapseValue::new(1.5, 2.0), SynapseValue::new(-0.5, 4.0)];
        let trains = [
            SpikeTrain::new(vec![1.0, 3.5]).unwrap(),
            SpikeTrain::single(2.0).unwrap(),
        ];
        let wiring = sim.wire(&topo, &syn).unwrap();
        let stim = sim.stimulus(&trains).unwrap();
        let trace = sim.trace(&wiring, &stim).unwrap();
        let mut last = None;
        for row in &trace.rows {
            let inputs = [(syn[0], &trains[0]), (syn[1], &trains[1])];
            let direct = membrane_potential(row.t_ms, &inputs, last, &params).unwrap();
            assert!(close(row.u, direct, 1e-12), "t = {}", row.t_ms);
            if row.spiked {
                last = Some(row.t_ms);
            }
        }
    }
}
