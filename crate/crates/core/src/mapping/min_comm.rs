//! Communication-minimizing mapping: Kernighan-Lin style local search over
//! single-neuron moves, followed by a greedy move/swap descent so the result
//! is a local minimum of the cut spike count. A few seeded kick-and-descend
//! rounds then try to escape that minimum; only strict improvements stick.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{map_round_robin, NeuronPartition, Usage};
use crate::error::Result;
use crate::hardware::HardwareSpec;
use crate::workload::{Network, SpikeDb};

const MAX_PASSES: usize = 64;
const KICKS: usize = 24;

/// Round-robin start refined by [`refine_min_comm`].
pub fn map_min_comm(net: &Network, db: &SpikeDb, spec: &HardwareSpec, seed: u64) -> Result<NeuronPartition> {
    let start = map_round_robin(net, spec)?;
    refine_min_comm(start, net, db, spec, seed)
}

/// Lowers the cut spike count of a feasible partition without breaking
/// capacity. Never increases the cut; an optimal partition comes back
/// unchanged. The seed drives the visit order and the kicks.
pub fn refine_min_comm(
    start: NeuronPartition,
    net: &Network,
    db: &SpikeDb,
    spec: &HardwareSpec,
    seed: u64,
) -> Result<NeuronPartition> {
    start.check(net, spec)?;
    db.check_against(net)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..net.neuron_count()).collect();
    order.shuffle(&mut rng);

    let mut best = Search::new(start.into_vec(), net, db, spec);
    best.refine(&order);
    if best.cut() == 0 {
        return Ok(NeuronPartition(best.part));
    }
    let kick_size = (order.len() / 6).max(2);
    for _ in 0..KICKS {
        let mut trial = best.clone();
        trial.kick(kick_size, &mut rng);
        trial.descend(&order);
        if trial.cut() < best.cut() {
            best = trial;
        }
    }
    Ok(NeuronPartition(best.part))
}

#[derive(Clone)]
struct Search {
    crossbars: usize,
    part: Vec<usize>,
    /// Undirected neighbours with the spike count of the connecting synapse.
    adj: Vec<Vec<(usize, i64)>>,
    /// `conn[n * C + c]`: cut weight between `n` and crossbar `c`.
    conn: Vec<i64>,
    usage: Usage,
}

impl Search {
    fn new(part: Vec<usize>, net: &Network, db: &SpikeDb, spec: &HardwareSpec) -> Self {
        let n = net.neuron_count();
        let crossbars = spec.crossbar_count;
        let mut adj = vec![Vec::new(); n];
        for syn in net.synapses() {
            let w = db.train(syn.pre).len() as i64;
            if w > 0 {
                adj[syn.pre].push((syn.post, w));
                adj[syn.post].push((syn.pre, w));
            }
        }
        let mut conn = vec![0i64; n * crossbars];
        for (u, nbrs) in adj.iter().enumerate() {
            for &(v, w) in nbrs {
                conn[u * crossbars + part[v]] += w;
            }
        }
        let mut usage = Usage::new(net, spec);
        for (neuron, &j) in part.iter().enumerate() {
            usage.add(j, neuron);
        }
        Self {
            crossbars,
            part,
            adj,
            conn,
            usage,
        }
    }

    /// Twice the cut spike count (each cut edge is seen from both ends).
    fn cut(&self) -> i64 {
        self.part
            .iter()
            .enumerate()
            .map(|(n, &c)| {
                let row = &self.conn[n * self.crossbars..(n + 1) * self.crossbars];
                row.iter().sum::<i64>() - row[c]
            })
            .sum()
    }

    fn refine(&mut self, order: &[usize]) {
        for _ in 0..MAX_PASSES {
            if !self.kl_pass(order) {
                break;
            }
        }
        self.descend(order);
    }

    /// Random feasible moves of up to `count` neurons.
    fn kick(&mut self, count: usize, rng: &mut ChaCha8Rng) {
        let n = self.part.len();
        for _ in 0..count {
            let v = rng.random_range(0..n);
            let to = rng.random_range(0..self.crossbars);
            if self.can_move(v, to) {
                self.apply(v, to);
            }
        }
    }

    /// Cut reduction from moving `n` to `to`.
    fn gain(&self, n: usize, to: usize) -> i64 {
        let base = n * self.crossbars;
        self.conn[base + to] - self.conn[base + self.part[n]]
    }

    fn apply(&mut self, n: usize, to: usize) {
        let from = self.part[n];
        self.usage.remove(from, n);
        self.usage.add(to, n);
        self.part[n] = to;
        for &(v, w) in &self.adj[n] {
            self.conn[v * self.crossbars + from] -= w;
            self.conn[v * self.crossbars + to] += w;
        }
    }

    fn can_move(&self, n: usize, to: usize) -> bool {
        to != self.part[n] && self.usage.fits(to, n)
    }

    /// One KL pass: greedily apply the best feasible move of each unlocked
    /// neuron, gains possibly negative, then roll back to the best prefix.
    /// Returns whether the cut strictly decreased.
    fn kl_pass(&mut self, order: &[usize]) -> bool {
        let n = self.part.len();
        let mut locked = vec![false; n];
        let mut history: Vec<(usize, usize)> = Vec::new();
        let (mut total, mut best, mut best_len) = (0i64, 0i64, 0usize);

        loop {
            let mut pick: Option<(i64, usize, usize)> = None;
            for &v in order {
                if locked[v] {
                    continue;
                }
                for to in 0..self.crossbars {
                    if !self.can_move(v, to) {
                        continue;
                    }
                    let g = self.gain(v, to);
                    if pick.is_none_or(|(bg, _, _)| g > bg) {
                        pick = Some((g, v, to));
                    }
                }
            }
            let Some((g, v, to)) = pick else { break };
            history.push((v, self.part[v]));
            self.apply(v, to);
            locked[v] = true;
            total += g;
            if total > best {
                best = total;
                best_len = history.len();
            }
        }

        while history.len() > best_len {
            let (v, from) = history.pop().expect("non-empty");
            self.apply(v, from);
        }
        best > 0
    }

    /// Applies strictly improving moves and swaps until none is left.
    fn descend(&mut self, order: &[usize]) {
        loop {
            let mut improved = false;
            for &v in order {
                for to in 0..self.crossbars {
                    if self.can_move(v, to) && self.gain(v, to) > 0 {
                        self.apply(v, to);
                        improved = true;
                    }
                }
            }
            for (i, &a) in order.iter().enumerate() {
                for &b in &order[i + 1..] {
                    if self.try_swap(a, b) {
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }

    fn try_swap(&mut self, a: usize, b: usize) -> bool {
        let (pa, pb) = (self.part[a], self.part[b]);
        if pa == pb {
            return false;
        }
        let between: i64 = self.adj[a].iter().filter(|&&(v, _)| v == b).map(|&(_, w)| w).sum();
        let gain = self.gain(a, pb) + self.gain(b, pa) - 2 * between;
        if gain <= 0 {
            return false;
        }
        self.usage.remove(pa, a);
        self.usage.remove(pb, b);
        let ok = self.usage.fits(pb, a) && {
            self.usage.add(pb, a);
            let fits = self.usage.fits(pa, b);
            self.usage.remove(pb, a);
            fits
        };
        self.usage.add(pa, a);
        self.usage.add(pb, b);
        if ok {
            self.apply(a, pb);
            self.apply(b, pa);
        }
        ok
    }
}
