//! Immutable weighted networks.
//!
//! Both representations store every undirected edge once. Coefficient sums run
//! over ordered node pairs, so a within-community edge of weight `w`
//! contributes `2w` and a self-loop of weight `w` contributes `2w` to its
//! endpoint's strength.

use std::collections::{BTreeMap, HashMap};

use crate::error::{ChampError, Result};
use crate::partition::Partition;

/// An undirected weighted edge with `source <= target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

impl Edge {
    pub fn is_self_loop(&self) -> bool {
        self.source == self.target
    }
}

/// Compressed symmetric adjacency without self-loops.
#[derive(Debug, Clone, Default)]
pub(crate) struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
}

impl Adjacency {
    fn from_edges(node_count: usize, edges: &[Edge]) -> Self {
        let mut degree = vec![0usize; node_count + 1];
        for e in edges.iter().filter(|e| !e.is_self_loop()) {
            degree[e.source + 1] += 1;
            degree[e.target + 1] += 1;
        }
        for i in 0..node_count {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let total = offsets[node_count];
        let mut cursor = offsets.clone();
        let mut targets = vec![0usize; total];
        let mut weights = vec![0.0; total];
        for e in edges.iter().filter(|e| !e.is_self_loop()) {
            targets[cursor[e.source]] = e.target;
            weights[cursor[e.source]] = e.weight;
            cursor[e.source] += 1;
            targets[cursor[e.target]] = e.source;
            weights[cursor[e.target]] = e.weight;
            cursor[e.target] += 1;
        }
        Adjacency {
            offsets,
            targets,
            weights,
        }
    }

    pub(crate) fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[node]..self.offsets[node + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }
}

fn check_weight(weight: f64, what: &str) -> Result<()> {
    if !weight.is_finite() {
        return Err(ChampError::validation(format!(
            "{what} weight {weight} is not finite"
        )));
    }
    if weight < 0.0 {
        return Err(ChampError::validation(format!(
            "{what} weight {weight} is negative"
        )));
    }
    Ok(())
}

/// Sorts, orients (`source <= target`) and merges duplicate edges by summing weights.
fn merge_edges(mut edges: Vec<Edge>) -> Vec<Edge> {
    for e in edges.iter_mut() {
        if e.source > e.target {
            std::mem::swap(&mut e.source, &mut e.target);
        }
    }
    edges.sort_by(|a, b| (a.source, a.target).cmp(&(b.source, b.target)));
    let mut merged: Vec<Edge> = Vec::with_capacity(edges.len());
    for e in edges {
        match merged.last_mut() {
            Some(last) if last.source == e.source && last.target == e.target => {
                last.weight += e.weight
            }
            _ => merged.push(e),
        }
    }
    merged
}

/// A weighted undirected single-layer network.
#[derive(Debug, Clone)]
pub struct Network {
    node_count: usize,
    edges: Vec<Edge>,
    strength: Vec<f64>,
    total_weight: f64,
    self_loops: Vec<f64>,
    adjacency: Adjacency,
    node_names: Option<Vec<String>>,
    metadata: Option<Vec<String>>,
}

impl Network {
    /// Builds a network over integer node ids `0..=max_id`.
    pub fn from_edges<I>(edges: I) -> Result<Network>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let edges: Vec<(usize, usize, f64)> = edges.into_iter().collect();
        let node_count = edges
            .iter()
            .map(|&(i, j, _)| i.max(j) + 1)
            .max()
            .unwrap_or(0);
        Network::with_node_count(node_count, edges)
    }

    /// Builds a network with an explicit node count, allowing isolated nodes.
    pub fn with_node_count<I>(node_count: usize, edges: I) -> Result<Network>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut raw = Vec::new();
        for (i, j, w) in edges {
            check_weight(w, "edge")?;
            if i >= node_count || j >= node_count {
                return Err(ChampError::validation(format!(
                    "edge ({i}, {j}) references a node outside 0..{node_count}"
                )));
            }
            raw.push(Edge {
                source: i,
                target: j,
                weight: w,
            });
        }
        if raw.is_empty() {
            return Err(ChampError::validation("edge list is empty"));
        }
        let edges = merge_edges(raw);

        let mut strength = vec![0.0; node_count];
        let mut self_loops = vec![0.0; node_count];
        for e in &edges {
            strength[e.source] += e.weight;
            strength[e.target] += e.weight;
            if e.is_self_loop() {
                self_loops[e.source] += e.weight;
            }
        }
        let total_weight = 0.5 * strength.iter().sum::<f64>();
        let adjacency = Adjacency::from_edges(node_count, &edges);
        Ok(Network {
            node_count,
            edges,
            strength,
            total_weight,
            self_loops,
            adjacency,
            node_names: None,
            metadata: None,
        })
    }

    /// Builds a network from string-labelled edges. Names are mapped to dense ids
    /// in order of first appearance.
    pub fn from_named_edges<I, S>(edges: I) -> Result<Network>
    where
        I: IntoIterator<Item = (S, S, f64)>,
        S: AsRef<str>,
    {
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut names: Vec<String> = Vec::new();
        let mut intern = |name: &str| -> usize {
            if let Some(&id) = ids.get(name) {
                return id;
            }
            let id = names.len();
            ids.insert(name.to_string(), id);
            names.push(name.to_string());
            id
        };
        let mut numbered = Vec::new();
        for (a, b, w) in edges {
            let i = intern(a.as_ref());
            let j = intern(b.as_ref());
            numbered.push((i, j, w));
        }
        let mut network = Network::with_node_count(names.len(), numbered)?;
        network.node_names = Some(names);
        Ok(network)
    }

    /// Attaches categorical metadata (e.g. a conference or party label) to every node.
    pub fn with_metadata(mut self, labels: Vec<String>) -> Result<Network> {
        if labels.len() != self.node_count {
            return Err(ChampError::LengthMismatch {
                expected: self.node_count,
                actual: labels.len(),
            });
        }
        self.metadata = Some(labels);
        Ok(self)
    }

    pub fn with_node_names(mut self, names: Vec<String>) -> Result<Network> {
        if names.len() != self.node_count {
            return Err(ChampError::LengthMismatch {
                expected: self.node_count,
                actual: names.len(),
            });
        }
        self.node_names = Some(names);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Node strengths `k_i`.
    pub fn strength(&self) -> &[f64] {
        &self.strength
    }

    /// Total edge weight `m`, half the sum of strengths.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// True when the network carries no weight, so the null model is undefined.
    pub fn is_degenerate(&self) -> bool {
        self.total_weight <= 0.0
    }

    pub fn self_loop_weight(&self, node: usize) -> f64 {
        self.self_loops[node]
    }

    pub fn node_names(&self) -> Option<&[String]> {
        self.node_names.as_deref()
    }

    pub fn metadata(&self) -> Option<&[String]> {
        self.metadata.as_deref()
    }

    /// Index of a named node, if the network was built from names.
    pub fn node_id(&self, name: &str) -> Option<usize> {
        self.node_names
            .as_ref()
            .and_then(|names| names.iter().position(|n| n == name))
    }

    /// Neighbors of `node` (self-loops excluded) with edge weights.
    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adjacency.neighbors(node)
    }

    /// Connected components as a partition, components numbered by smallest member.
    /// Zero-weight edges still connect their endpoints.
    pub fn connected_components(&self) -> Partition {
        let mut label = vec![usize::MAX; self.node_count];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..self.node_count {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for (v, _) in self.adjacency.neighbors(u) {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        Partition::new(label)
    }
}

/// Whether an edge connects node-layers within one layer or across layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Intra,
    Inter,
}

/// A node in a specific layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeLayer {
    pub actor: usize,
    pub layer: usize,
}

impl NodeLayer {
    pub fn new(actor: usize, layer: usize) -> Self {
        NodeLayer { actor, layer }
    }
}

/// Accumulates node-layers and edges for a [`MultilayerNetwork`].
#[derive(Debug, Clone, Default)]
pub struct MultilayerBuilder {
    nodelayers: BTreeMap<(usize, usize), ()>,
    intra: Vec<(NodeLayer, NodeLayer, f64)>,
    inter: Vec<(NodeLayer, NodeLayer, f64)>,
    actor_names: Option<Vec<String>>,
    layer_names: Option<Vec<String>>,
}

impl MultilayerBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn touch(&mut self, nl: NodeLayer) {
        self.nodelayers.insert((nl.layer, nl.actor), ());
    }

    /// Registers a node-layer that may have no edges.
    pub fn add_nodelayer(&mut self, actor: usize, layer: usize) -> &mut Self {
        self.touch(NodeLayer::new(actor, layer));
        self
    }

    pub fn add_intralayer(&mut self, actor_i: usize, actor_j: usize, layer: usize, weight: f64) -> Result<&mut Self> {
        self.add_edge(
            NodeLayer::new(actor_i, layer),
            NodeLayer::new(actor_j, layer),
            weight,
            EdgeKind::Intra,
        )
    }

    pub fn add_interlayer(&mut self, from: NodeLayer, to: NodeLayer, weight: f64) -> Result<&mut Self> {
        self.add_edge(from, to, weight, EdgeKind::Inter)
    }

    /// Adds an edge, checking that its kind agrees with the layers it joins.
    pub fn add_edge(&mut self, from: NodeLayer, to: NodeLayer, weight: f64, kind: EdgeKind) -> Result<&mut Self> {
        check_weight(weight, "multilayer edge")?;
        match kind {
            EdgeKind::Intra if from.layer != to.layer => {
                return Err(ChampError::validation(format!(
                    "intralayer edge joins layers {} and {}",
                    from.layer, to.layer
                )))
            }
            EdgeKind::Inter if from.layer == to.layer => {
                return Err(ChampError::validation(format!(
                    "interlayer edge stays within layer {}",
                    from.layer
                )))
            }
            _ => {}
        }
        self.touch(from);
        self.touch(to);
        match kind {
            EdgeKind::Intra => self.intra.push((from, to, weight)),
            EdgeKind::Inter => self.inter.push((from, to, weight)),
        }
        Ok(self)
    }

    /// Couples every actor to itself in consecutive layers `l` and `l + 1`
    /// (ordered by layer id) wherever it is present in both.
    pub fn couple_temporal(&mut self, weight: f64) -> Result<&mut Self> {
        let mut by_layer: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(layer, actor) in self.nodelayers.keys() {
            by_layer.entry(layer).or_default().push(actor);
        }
        let layers: Vec<(usize, Vec<usize>)> = by_layer.into_iter().collect();
        for pair in layers.windows(2) {
            let (l0, ref actors0) = pair[0];
            let (l1, ref actors1) = pair[1];
            for &a in actors0 {
                if actors1.binary_search(&a).is_ok() {
                    self.add_interlayer(NodeLayer::new(a, l0), NodeLayer::new(a, l1), weight)?;
                }
            }
        }
        Ok(self)
    }

    pub fn actor_names(&mut self, names: Vec<String>) -> &mut Self {
        self.actor_names = Some(names);
        self
    }

    pub fn layer_names(&mut self, names: Vec<String>) -> &mut Self {
        self.layer_names = Some(names);
        self
    }

    pub fn build(&self) -> Result<MultilayerNetwork> {
        if self.nodelayers.is_empty() {
            return Err(ChampError::validation("multilayer network has no node-layers"));
        }
        // Flattened supra-adjacency order: by layer, then by actor.
        let keys: Vec<(usize, usize)> = self.nodelayers.keys().copied().collect();
        let index: HashMap<(usize, usize), usize> =
            keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let layer_of: Vec<usize> = keys.iter().map(|&(l, _)| l).collect();
        let actor_of: Vec<usize> = keys.iter().map(|&(_, a)| a).collect();
        let layer_count = layer_of.iter().max().map_or(0, |&l| l + 1);
        let actor_count = actor_of.iter().max().map_or(0, |&a| a + 1);
        let id = |nl: &NodeLayer| index[&(nl.layer, nl.actor)];

        let mut dropped_self_loops = 0;
        let mut intra = Vec::with_capacity(self.intra.len());
        for (a, b, w) in &self.intra {
            let (i, j) = (id(a), id(b));
            if i == j {
                dropped_self_loops += 1;
                continue;
            }
            intra.push(Edge {
                source: i,
                target: j,
                weight: *w,
            });
        }
        let intra = merge_edges(intra);
        let inter = merge_edges(
            self.inter
                .iter()
                .map(|(a, b, w)| Edge {
                    source: id(a),
                    target: id(b),
                    weight: *w,
                })
                .collect(),
        );

        let n = keys.len();
        let mut strength = vec![0.0; n];
        for e in &intra {
            strength[e.source] += e.weight;
            strength[e.target] += e.weight;
        }
        let mut layer_total_weight = vec![0.0; layer_count];
        for (i, &k) in strength.iter().enumerate() {
            layer_total_weight[layer_of[i]] += 0.5 * k;
        }
        let intra_adjacency = Adjacency::from_edges(n, &intra);
        let inter_adjacency = Adjacency::from_edges(n, &inter);

        Ok(MultilayerNetwork {
            layer_of,
            actor_of,
            layer_count,
            actor_count,
            intralayer: intra,
            interlayer: inter,
            strength,
            layer_total_weight,
            intra_adjacency,
            inter_adjacency,
            dropped_self_loops,
            actor_names: self.actor_names.clone(),
            layer_names: self.layer_names.clone(),
        })
    }
}

/// A multilayer network in flattened node-layer indexing.
///
/// The null model is Newman–Girvan within each layer,
/// `P_ij = k_i k_j / (2 m_s)` for node-layers `i`, `j` in layer `s`, using
/// intralayer strengths only. Interlayer edges form the coupling tensor `C`.
#[derive(Debug, Clone)]
pub struct MultilayerNetwork {
    layer_of: Vec<usize>,
    actor_of: Vec<usize>,
    layer_count: usize,
    actor_count: usize,
    intralayer: Vec<Edge>,
    interlayer: Vec<Edge>,
    strength: Vec<f64>,
    layer_total_weight: Vec<f64>,
    intra_adjacency: Adjacency,
    inter_adjacency: Adjacency,
    dropped_self_loops: usize,
    actor_names: Option<Vec<String>>,
    layer_names: Option<Vec<String>>,
}

impl MultilayerNetwork {
    /// Builds from `(actor_i, actor_j, layer, weight)` intralayer edges and
    /// `(from, to, weight)` interlayer edges.
    pub fn from_edges(
        intralayer: &[(usize, usize, usize, f64)],
        interlayer: &[(NodeLayer, NodeLayer, f64)],
    ) -> Result<MultilayerNetwork> {
        let mut builder = MultilayerBuilder::new();
        for &(i, j, layer, w) in intralayer {
            builder.add_intralayer(i, j, layer, w)?;
        }
        for &(a, b, w) in interlayer {
            builder.add_interlayer(a, b, w)?;
        }
        builder.build()
    }

    pub fn nodelayer_count(&self) -> usize {
        self.layer_of.len()
    }

    pub fn layer_count(&self) -> usize {
        self.layer_count
    }

    pub fn actor_count(&self) -> usize {
        self.actor_count
    }

    pub fn layer_of(&self) -> &[usize] {
        &self.layer_of
    }

    pub fn actor_of(&self) -> &[usize] {
        &self.actor_of
    }

    /// Flattened index of `(actor, layer)`, if present.
    pub fn nodelayer_index(&self, actor: usize, layer: usize) -> Option<usize> {
        let key = (layer, actor);
        let (mut lo, mut hi) = (0, self.layer_of.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match (self.layer_of[mid], self.actor_of[mid]).cmp(&key) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn intralayer_edges(&self) -> &[Edge] {
        &self.intralayer
    }

    pub fn interlayer_edges(&self) -> &[Edge] {
        &self.interlayer
    }

    /// Intralayer strength of every node-layer.
    pub fn strength(&self) -> &[f64] {
        &self.strength
    }

    /// Total intralayer weight `m_s` of each layer.
    pub fn layer_total_weight(&self) -> &[f64] {
        &self.layer_total_weight
    }

    /// Layers with zero intralayer weight; they contribute nothing to `p_hat`.
    pub fn empty_layers(&self) -> Vec<usize> {
        let mut present = vec![false; self.layer_count];
        for &l in &self.layer_of {
            present[l] = true;
        }
        (0..self.layer_count)
            .filter(|&l| present[l] && self.layer_total_weight[l] <= 0.0)
            .collect()
    }

    /// Number of intralayer self-loops removed during construction.
    pub fn dropped_self_loops(&self) -> usize {
        self.dropped_self_loops
    }

    pub fn is_degenerate(&self) -> bool {
        self.layer_total_weight.iter().all(|&m| m <= 0.0)
    }

    pub fn actor_names(&self) -> Option<&[String]> {
        self.actor_names.as_deref()
    }

    pub fn layer_names(&self) -> Option<&[String]> {
        self.layer_names.as_deref()
    }

    pub(crate) fn intra_adjacency(&self) -> &Adjacency {
        &self.intra_adjacency
    }

    pub(crate) fn inter_adjacency(&self) -> &Adjacency {
        &self.inter_adjacency
    }
}
