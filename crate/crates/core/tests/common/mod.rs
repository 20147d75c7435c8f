#![allow(dead_code)]

use champ::{CoefficientTriple, MultilayerBuilder, MultilayerNetwork, Network};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random weighted graph on `n` nodes with at least one edge.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Network {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(density) {
                edges.push((i, j, rng.gen_range(0.5..2.0)));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1, 1.0));
    }
    Network::with_node_count(n, edges).unwrap()
}

/// Random graph with exactly `m` distinct unit-weight edges on `n` nodes.
pub fn sparse_graph(seed: u64, n: usize, m: usize) -> Network {
    let mut r = rng(seed);
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(m);
    while edges.len() < m {
        let i = r.gen_range(0..n);
        let j = r.gen_range(0..n);
        if i != j && seen.insert((i.min(j), i.max(j))) {
            edges.push((i, j, 1.0));
        }
    }
    Network::with_node_count(n, edges).unwrap()
}

/// Planes tangent to a convex surface over the box (so most are admissible),
/// mixed with planes pushed below it and a few exact duplicates.
pub fn envelope_triples(rng: &mut ChaCha8Rng, count: usize, g: (f64, f64), w: (f64, f64), with_c: bool) -> Vec<CoefficientTriple> {
    let mut out: Vec<CoefficientTriple> = Vec::with_capacity(count);
    while out.len() < count {
        let id = out.len();
        if id > 3 && rng.gen_bool(0.05) {
            let mut dup = out[rng.gen_range(0..id)];
            dup.partition_id = id;
            out.push(dup);
            continue;
        }
        // Surface F(γ, ω) = γ² + 0.5ω² + 0.3γω, touched at (g0, w0).
        let g0 = rng.gen_range(g.0 - 0.5..g.1 + 0.5);
        let w0 = if with_c { rng.gen_range(w.0 - 0.5..w.1 + 0.5) } else { 0.0 };
        let f = g0 * g0 + 0.5 * w0 * w0 + 0.3 * g0 * w0;
        let dg = 2.0 * g0 + 0.3 * w0;
        let dw = if with_c { w0 + 0.3 * g0 } else { 0.0 };
        let drop = if rng.gen_bool(0.3) { rng.gen_range(0.0..2.0) } else { 0.0 };
        // Tangent plane a − γp + ωc; adding 10 to p lowers every plane by 10γ,
        // which leaves the envelope unchanged and keeps p positive.
        let a_hat = f - dg * g0 - dw * w0 - drop + 50.0;
        out.push(CoefficientTriple::new(id, a_hat, 10.0 - dg, dw));
    }
    out
}

pub struct Planted {
    pub network: MultilayerNetwork,
    /// Planted block per node-layer, indexed like the network's node-layers.
    pub labels: Vec<usize>,
}

/// `layers` layers of `actors` actors in two equal blocks; from layer
/// `switch_layer` on, the `switchers` last actors of block 0 belong to block 1.
/// Consecutive layers are coupled by identity edges of weight 1.
pub fn planted_temporal(
    seed: u64,
    actors: usize,
    layers: usize,
    p_in: f64,
    p_out: f64,
    switch_layer: usize,
    switchers: usize,
) -> Planted {
    let mut r = rng(seed);
    let half = actors / 2;
    let block = |a: usize, l: usize| {
        if a >= half {
            1
        } else if l >= switch_layer && a >= half - switchers {
            1
        } else {
            0
        }
    };
    let mut b = MultilayerBuilder::new();
    for l in 0..layers {
        for a in 0..actors {
            b.add_nodelayer(a, l);
        }
        for i in 0..actors {
            for j in (i + 1)..actors {
                let p = if block(i, l) == block(j, l) { p_in } else { p_out };
                if r.gen_bool(p) {
                    b.add_intralayer(i, j, l, 1.0).unwrap();
                }
            }
        }
    }
    b.couple_temporal(1.0).unwrap();
    let network = b.build().unwrap();
    let labels = (0..network.nodelayer_count())
        .map(|i| block(network.actor_of()[i], network.layer_of()[i]))
        .collect();
    Planted { network, labels }
}
