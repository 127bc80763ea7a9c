use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Average inter-spike interval of a sorted train: the mean of consecutive
/// gaps. Undefined below two spikes.
pub fn compute_isi(train: &[f64]) -> Result<f64> {
    let k = train.len();
    if k < 2 {
        return Err(Error::UndefinedIsi { spikes: k });
    }
    let sum: f64 = train.windows(2).map(|w| w[1] - w[0]).sum();
    Ok(sum / (k - 1) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsiStats {
    /// `None` for neurons with fewer than two spikes.
    pub per_neuron: Vec<Option<f64>>,
    /// Mean over defined neurons; 0 when none is defined.
    pub mean: f64,
    pub undefined: usize,
}

impl IsiStats {
    pub fn from_trains<T: AsRef<[f64]>>(trains: &[T]) -> Self {
        let per_neuron: Vec<Option<f64>> = trains.iter().map(|t| compute_isi(t.as_ref()).ok()).collect();
        let defined: Vec<f64> = per_neuron.iter().flatten().copied().collect();
        let mean = if defined.is_empty() {
            0.0
        } else {
            defined.iter().sum::<f64>() / defined.len() as f64
        };
        Self {
            undefined: per_neuron.len() - defined.len(),
            per_neuron,
            mean,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsiChange {
    /// `|I_obs - I_ref| / I_ref`; `None` where either side is undefined.
    pub per_neuron: Vec<Option<f64>>,
    /// Mean over neurons defined on both sides; 0 when there are none.
    pub mean: f64,
    /// Neurons defined on exactly one side.
    pub excluded: Vec<usize>,
}

/// Fractional ISI change of `observed` relative to `reference`.
pub fn isi_change(reference: &IsiStats, observed: &IsiStats) -> Result<IsiChange> {
    if reference.per_neuron.len() != observed.per_neuron.len() {
        return Err(Error::Inconsistent(format!(
            "ISI stats cover {} vs {} neurons",
            reference.per_neuron.len(),
            observed.per_neuron.len()
        )));
    }
    let mut excluded = Vec::new();
    let per_neuron: Vec<Option<f64>> = reference
        .per_neuron
        .iter()
        .zip(&observed.per_neuron)
        .enumerate()
        .map(|(n, pair)| match pair {
            (Some(r), Some(o)) => Some((o - r).abs() / r),
            (None, None) => None,
            _ => {
                excluded.push(n);
                None
            }
        })
        .collect();
    let defined: Vec<f64> = per_neuron.iter().flatten().copied().collect();
    let mean = if defined.is_empty() {
        0.0
    } else {
        defined.iter().sum::<f64>() / defined.len() as f64
    };
    Ok(IsiChange {
        per_neuron,
        mean,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn uniform_train() {
        assert_eq!(compute_isi(&[1.0, 2.0, 3.0]).unwrap(), 1.0);
    }

    #[test]
    fn undefined_below_two() {
        assert_eq!(compute_isi(&[7.0]), Err(Error::UndefinedIsi { spikes: 1 }));
        assert_eq!(compute_isi(&[]), Err(Error::UndefinedIsi { spikes: 0 }));
    }

    #[test]
    fn uneven_train() {
        // Gaps 10, 15, 20.
        assert_eq!(compute_isi(&[0.0, 10.0, 25.0, 45.0]).unwrap(), 15.0);
    }

    #[test]
    fn change_identical_is_zero() {
        let s = IsiStats::from_trains(&[vec![0.0, 2.0, 5.0], vec![1.0]]);
        let c = isi_change(&s, &s).unwrap();
        assert_eq!(c.mean, 0.0);
        assert!(c.excluded.is_empty());
        assert_eq!(s.undefined, 1);
    }

    #[test]
    fn change_from_5_9_to_7_4() {
        let r = IsiStats {
            per_neuron: vec![Some(5.9)],
            mean: 5.9,
            undefined: 0,
        };
        let o = IsiStats {
            per_neuron: vec![Some(7.4)],
            mean: 7.4,
            undefined: 0,
        };
        let c = isi_change(&r, &o).unwrap();
        assert!((c.mean - 0.254_237).abs() < 1e-6);
    }

    #[test]
    fn one_sided_neurons_excluded() {
        let r = IsiStats::from_trains(&[vec![0.0, 1.0], vec![0.0, 1.0]]);
        let o = IsiStats::from_trains(&[vec![0.0, 2.0], vec![0.0]]);
        let c = isi_change(&r, &o).unwrap();
        assert_eq!(c.excluded, vec![1]);
        assert_eq!(c.mean, 1.0);
    }
}
