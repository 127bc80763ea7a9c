use alloc::vec::Vec;

use crate::hardware::{DischargePolicy, HardwareSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start_ms: f64,
    pub end_ms: f64,
    pub volts: f64,
}

impl Segment {
    pub fn duration(&self) -> f64 {
        self.end_ms - self.start_ms
    }
}

/// Piecewise-constant pump voltage over `[0, horizon]` in merged form.
#[derive(Debug, Clone, PartialEq)]
pub struct VoltageSchedule {
    horizon_ms: f64,
    segments: Vec<Segment>,
}

impl VoltageSchedule {
    /// Builds a schedule from raw pieces, dropping empty ones and merging
    /// equal-voltage neighbours. The pieces must tile `[0, horizon]` in order.
    pub fn from_pieces<I: IntoIterator<Item = Segment>>(horizon_ms: f64, pieces: I) -> Self {
        let mut segments: Vec<Segment> = Vec::new();
        for seg in pieces {
            if seg.end_ms <= seg.start_ms {
                continue;
            }
            match segments.last_mut() {
                Some(last) if last.volts == seg.volts => last.end_ms = seg.end_ms,
                _ => segments.push(seg),
            }
        }
        Self {
            horizon_ms,
            segments,
        }
    }

    pub fn constant(horizon_ms: f64, volts: f64) -> Self {
        Self::from_pieces(
            horizon_ms,
            [Segment {
                start_ms: 0.0,
                end_ms: horizon_ms,
                volts,
            }],
        )
    }

    pub fn horizon_ms(&self) -> f64 {
        self.horizon_ms
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Total time spent at exactly `volts`.
    pub fn time_at(&self, volts: f64) -> f64 {
        self.segments
            .iter()
            .filter(|s| s.volts == volts)
            .map(Segment::duration)
            .sum()
    }

    /// Contiguous cover of `[0, horizon]`, positive lengths, only the given
    /// levels, and no two equal neighbours.
    pub fn is_well_formed(&self, levels: &[f64]) -> bool {
        if self.horizon_ms == 0.0 {
            return self.segments.is_empty();
        }
        let (Some(first), Some(last)) = (self.segments.first(), self.segments.last()) else {
            return false;
        };
        if first.start_ms != 0.0 || last.end_ms != self.horizon_ms {
            return false;
        }
        let shapes_ok = self
            .segments
            .iter()
            .all(|s| s.end_ms > s.start_ms && levels.contains(&s.volts));
        let links_ok = self
            .segments
            .windows(2)
            .all(|w| w[0].end_ms == w[1].start_ms && w[0].volts != w[1].volts);
        shapes_ok && links_ok
    }
}

/// Turns served boost pulses (sorted, disjoint, served-time ms) into the
/// pump's schedule under `policy`, clipped to `[0, horizon]`.
///
/// Never: idle baseline with boosts. PerSpike: idle until the first boost,
/// then discharged between boosts (recovery included). FixedInterval:
/// discharge windows `[iΔ, iΔ + t_recover)` for `i >= 1` override everything.
pub(crate) fn assemble(
    pulses: &[(f64, f64)],
    policy: &DischargePolicy,
    spec: &HardwareSpec,
    horizon_ms: f64,
) -> VoltageSchedule {
    let windows: Vec<(f64, f64)> = match *policy {
        DischargePolicy::FixedInterval { interval_ms } if spec.t_recover_ms > 0.0 => {
            let mut w = Vec::new();
            let mut i = 1u64;
            loop {
                let start = i as f64 * interval_ms;
                if start >= horizon_ms {
                    break;
                }
                w.push((start, (start + spec.t_recover_ms).min(horizon_ms)));
                i += 1;
            }
            w
        }
        _ => Vec::new(),
    };
    let idle_until = match policy {
        DischargePolicy::PerSpike => pulses.first().map_or(f64::INFINITY, |p| p.0),
        _ => f64::INFINITY,
    };

    let mut cuts: Vec<f64> = Vec::with_capacity(2 * (pulses.len() + windows.len()) + 3);
    cuts.push(0.0);
    cuts.push(horizon_ms);
    if idle_until < horizon_ms {
        cuts.push(idle_until);
    }
    for &(a, b) in pulses.iter().chain(&windows) {
        for x in [a, b] {
            if x > 0.0 && x < horizon_ms {
                cuts.push(x);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let (mut pi, mut wi) = (0usize, 0usize);
    let pieces = cuts.windows(2).map(|c| {
        let (x, y) = (c[0], c[1]);
        while pi < pulses.len() && pulses[pi].1 <= x {
            pi += 1;
        }
        while wi < windows.len() && windows[wi].1 <= x {
            wi += 1;
        }
        let in_window = wi < windows.len() && windows[wi].0 <= x;
        let in_pulse = pi < pulses.len() && pulses[pi].0 <= x;
        let volts = if in_window {
            spec.v_discharge
        } else if in_pulse {
            spec.v_boost
        } else if x >= idle_until {
            spec.v_discharge
        } else {
            spec.v_idle
        };
        Segment {
            start_ms: x,
            end_ms: y,
            volts,
        }
    });
    VoltageSchedule::from_pieces(horizon_ms, pieces.collect::<Vec<_>>())
}
