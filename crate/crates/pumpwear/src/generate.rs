//! Synthetic workload recipes.

use pumpwear_core::workload::{
    gen_poisson, random_driven_network, random_network, simulate_lif, LifParams, RateProfile,
};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trace::Trace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Independent Poisson trains on every neuron.
    #[default]
    Poisson,
    /// Poisson-driven source neurons feeding a LIF network.
    Lif,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenSpec {
    pub model: Model,
    pub neurons: usize,
    pub synapses: usize,
    pub horizon_ms: f64,
    /// Uniform rate when `skew_exponent` is 0, else the peak rate.
    pub rate_hz: f64,
    pub skew_exponent: f64,
    /// Fraction of neurons driven externally (LIF only).
    pub source_fraction: f64,
}

impl Default for GenSpec {
    fn default() -> Self {
        Self {
            model: Model::Poisson,
            neurons: 60,
            synapses: 600,
            horizon_ms: 1000.0,
            rate_hz: 20.0,
            skew_exponent: 0.0,
            source_fraction: 0.2,
        }
    }
}

impl GenSpec {
    pub fn rate_profile(&self) -> RateProfile {
        if self.skew_exponent == 0.0 {
            RateProfile::Uniform { hz: self.rate_hz }
        } else {
            RateProfile::Skewed {
                max_hz: self.rate_hz,
                exponent: self.skew_exponent,
            }
        }
    }

    /// Deterministic in `(self, seed)`.
    pub fn build(&self, seed: u64) -> Result<Trace> {
        if !(self.skew_exponent.is_finite() && self.skew_exponent >= 0.0) {
            return Err(Error::Config(format!(
                "skew_exponent must be non-negative, got {}",
                self.skew_exponent
            )));
        }
        // Separate streams so network and spikes do not share draws.
        let net_seed = seed;
        let rate_seed = seed ^ 0x9E37_79B9_7F4A_7C15;
        let spike_seed = seed.rotate_left(17) ^ 0xD1B5_4A32_D192_ED03;
        let rates = self.rate_profile().rates(self.neurons, rate_seed);
        match self.model {
            Model::Poisson => {
                let network = random_network(self.neurons, self.synapses, net_seed)?;
                let spikes = gen_poisson(&network, &rates, self.horizon_ms, spike_seed)?;
                Ok(Trace { network, spikes })
            }
            Model::Lif => {
                if !(self.source_fraction > 0.0 && self.source_fraction < 1.0) {
                    return Err(Error::Config(format!(
                        "source_fraction must be in (0, 1), got {}",
                        self.source_fraction
                    )));
                }
                let sources = ((self.neurons as f64 * self.source_fraction).round() as usize).clamp(1, self.neurons.max(2) - 1);
                let network = random_driven_network(self.neurons, self.synapses, sources, net_seed)?;
                let mut inputs = gen_poisson(&network, &rates, self.horizon_ms, spike_seed)?.into_trains();
                for t in &mut inputs[sources..] {
                    t.clear();
                }
                let params = LifParams {
                    horizon_ms: self.horizon_ms,
                    ..LifParams::default()
                };
                let spikes = simulate_lif(&network, &inputs, &params)?;
                Ok(Trace { network, spikes })
            }
        }
    }
}
