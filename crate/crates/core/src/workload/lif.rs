use alloc::vec;
use alloc::vec::Vec;

use super::{check_train, Network, SpikeDb};
use crate::error::{Error, Result};

/// Discrete-time leaky integrate-and-fire parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifParams {
    /// Simulation step.
    pub dt_ms: f64,
    /// Membrane time constant; `None` disables the leak.
    pub tau_ms: Option<f64>,
    pub threshold: f64,
    /// Post-spike and resting potential.
    pub reset: f64,
    /// Absolute refractory period after a spike.
    pub refractory_ms: f64,
    pub horizon_ms: f64,
}

impl Default for LifParams {
    fn default() -> Self {
        Self {
            dt_ms: 0.1,
            tau_ms: Some(20.0),
            threshold: 1.0,
            reset: 0.0,
            refractory_ms: 2.0,
            horizon_ms: 1000.0,
        }
    }
}

impl LifParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt_ms.is_finite() && self.dt_ms > 0.0) {
            return Err(Error::InvalidLifParams("dt_ms must be positive"));
        }
        if let Some(tau) = self.tau_ms {
            if !(tau.is_finite() && tau > 0.0) {
                return Err(Error::InvalidLifParams("tau_ms must be positive"));
            }
        }
        if !(self.threshold.is_finite() && self.reset.is_finite()) {
            return Err(Error::InvalidLifParams("threshold and reset must be finite"));
        }
        if self.threshold <= self.reset {
            return Err(Error::InvalidLifParams("threshold must exceed reset"));
        }
        if !(self.refractory_ms.is_finite() && self.refractory_ms >= 0.0) {
            return Err(Error::InvalidLifParams("refractory_ms must be non-negative"));
        }
        if !(self.horizon_ms.is_finite() && self.horizon_ms > 0.0) {
            return Err(Error::InvalidHorizon(self.horizon_ms));
        }
        Ok(())
    }
}

// Guards floor() against representation error, e.g. 0.3 / 0.1.
const STEP_EPS: f64 = 1e-9;

fn bucket(t: f64, dt: f64) -> usize {
    libm::floor(t / dt + STEP_EPS) as usize
}

/// Runs the network forward from externally driven input neurons.
///
/// `inputs` holds one train per neuron; non-empty trains mark driven neurons,
/// which must have no incoming synapses and fire exactly at the given times.
/// Step `k` sits at `k * dt`. A spike emitted during `[k*dt, (k+1)*dt)` is
/// integrated by its targets at step `k + 1`, so a forced crossing fires one
/// step after the causing spike.
pub fn simulate_lif(net: &Network, inputs: &[Vec<f64>], params: &LifParams) -> Result<SpikeDb> {
    params.validate()?;
    if inputs.len() != net.neuron_count() {
        return Err(Error::TrainCountMismatch {
            expected: net.neuron_count(),
            got: inputs.len(),
        });
    }
    let in_deg = net.in_degrees();
    for (neuron, train) in inputs.iter().enumerate() {
        check_train(neuron, train, params.horizon_ms)?;
        if !train.is_empty() && in_deg[neuron] > 0 {
            return Err(Error::DrivenNeuronHasInputs { neuron });
        }
    }

    let n = net.neuron_count();
    let dt = params.dt_ms;
    let steps = bucket(params.horizon_ms, dt);
    let driven: Vec<bool> = inputs.iter().map(|t| !t.is_empty()).collect();

    // Driven spikes grouped by emission bucket.
    let mut driven_at: Vec<Vec<usize>> = vec![Vec::new(); steps + 1];
    for (neuron, train) in inputs.iter().enumerate() {
        for &t in train {
            driven_at[bucket(t, dt).min(steps)].push(neuron);
        }
    }

    let decay = params.tau_ms.map(|tau| libm::exp(-dt / tau));
    let outgoing = net.outgoing();
    let synapses = net.synapses();

    let mut v = vec![params.reset; n];
    let mut refractory_until = vec![f64::NEG_INFINITY; n];
    let mut current = vec![0.0; n];
    let mut fired_prev: Vec<usize> = Vec::new();
    let mut fired_now: Vec<usize> = Vec::new();
    let mut out: Vec<Vec<f64>> = inputs.to_vec();

    for (k, driven_now) in driven_at.iter().enumerate() {
        let t = (k as f64 * dt).min(params.horizon_ms);
        current.iter_mut().for_each(|c| *c = 0.0);
        for &src in &fired_prev {
            for &s in &outgoing[src] {
                current[synapses[s].post] += synapses[s].weight;
            }
        }

        fired_now.clear();
        for neuron in 0..n {
            if driven[neuron] {
                continue;
            }
            if t < refractory_until[neuron] {
                v[neuron] = params.reset;
                continue;
            }
            if let Some(d) = decay {
                v[neuron] = params.reset + (v[neuron] - params.reset) * d;
            }
            v[neuron] += current[neuron];
            if v[neuron] >= params.threshold {
                out[neuron].push(t);
                v[neuron] = params.reset;
                refractory_until[neuron] = t + params.refractory_ms;
                fired_now.push(neuron);
            }
        }
        fired_now.extend_from_slice(driven_now);
        core::mem::swap(&mut fired_prev, &mut fired_now);
    }

    SpikeDb::new(params.horizon_ms, out)
}
