use std::collections::{BTreeSet, HashMap};

use crate::error::Result;
use crate::network::{EdgeKind, MultilayerBuilder, MultilayerNetwork, Network, NodeLayer};

use super::{data_lines, parse_error};

fn parse_weight(token: Option<&&str>, source: &str, line: usize) -> Result<f64> {
    match token {
        None => Ok(1.0),
        Some(t) => t
            .parse::<f64>()
            .map_err(|_| parse_error(source, line, format!("invalid weight {t:?}"))),
    }
}

/// Whitespace-delimited `src dst [weight]` lines. Node names map to ids in
/// order of first appearance; the names are kept on the network.
pub fn parse_edge_list(text: &str, source: &str) -> Result<Network> {
    let mut edges = Vec::new();
    for (line, fields) in data_lines(text) {
        if fields.len() < 2 || fields.len() > 3 {
            return Err(parse_error(source, line, "expected `src dst [weight]`"));
        }
        let w = parse_weight(fields.get(2), source, line)?;
        edges.push((fields[0].to_string(), fields[1].to_string(), w));
    }
    if edges.is_empty() {
        return Err(parse_error(source, 0, "no edges"));
    }
    Network::from_named_edges(edges)
}

/// Two-column `node label` lines, aligned to `node_names`. Every node must have a label.
pub fn parse_metadata(text: &str, source: &str, node_names: &[String]) -> Result<Vec<String>> {
    let index: HashMap<&str, usize> = node_names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut labels: Vec<Option<String>> = vec![None; node_names.len()];
    for (line, fields) in data_lines(text) {
        if fields.len() != 2 {
            return Err(parse_error(source, line, "expected `node label`"));
        }
        if let Some(&i) = index.get(fields[0]) {
            labels[i] = Some(fields[1].to_string());
        }
    }
    collect_labels(labels, source, |i| node_names[i].clone())
}

fn collect_labels(labels: Vec<Option<String>>, source: &str, name: impl Fn(usize) -> String) -> Result<Vec<String>> {
    labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.ok_or_else(|| parse_error(source, 0, format!("no label for {}", name(i)))))
        .collect()
}

/// Orders names numerically when all are non-negative integers, otherwise by first appearance.
fn name_ids(names: &[String]) -> (Vec<String>, HashMap<String, usize>) {
    let mut ordered: Vec<String> = Vec::new();
    let mut seen = BTreeSet::new();
    for n in names {
        if seen.insert(n.clone()) {
            ordered.push(n.clone());
        }
    }
    if ordered.iter().all(|n| n.parse::<u64>().is_ok()) {
        ordered.sort_by_key(|n| n.parse::<u64>().unwrap());
    }
    let ids = ordered.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
    (ordered, ids)
}

/// `i_actor i_layer j_actor j_layer weight kind` lines, `kind` being `intra` or
/// `inter`. An `intra` self-loop of weight 0 registers an isolated node-layer.
pub fn parse_multilayer(text: &str, source: &str) -> Result<MultilayerNetwork> {
    let mut rows = Vec::new();
    for (line, fields) in data_lines(text) {
        if fields.len() != 6 {
            return Err(parse_error(
                source,
                line,
                "expected `i_actor i_layer j_actor j_layer weight kind`",
            ));
        }
        let w = parse_weight(fields.get(4), source, line)?;
        let kind = match fields[5] {
            "intra" => EdgeKind::Intra,
            "inter" => EdgeKind::Inter,
            other => return Err(parse_error(source, line, format!("unknown edge kind {other:?}"))),
        };
        rows.push((line, [fields[0], fields[1], fields[2], fields[3]].map(String::from), w, kind));
    }
    if rows.is_empty() {
        return Err(parse_error(source, 0, "no edges"));
    }
    let actors: Vec<String> = rows.iter().flat_map(|r| [r.1[0].clone(), r.1[2].clone()]).collect();
    let layers: Vec<String> = rows.iter().flat_map(|r| [r.1[1].clone(), r.1[3].clone()]).collect();
    let (actor_names, actor_ids) = name_ids(&actors);
    let (layer_names, layer_ids) = name_ids(&layers);
    let mut b = MultilayerBuilder::new();
    for (line, f, w, kind) in rows {
        let from = NodeLayer::new(actor_ids[&f[0]], layer_ids[&f[1]]);
        let to = NodeLayer::new(actor_ids[&f[2]], layer_ids[&f[3]]);
        if kind == EdgeKind::Intra && from == to && w == 0.0 {
            b.add_nodelayer(from.actor, from.layer);
            continue;
        }
        b.add_edge(from, to, w, kind)
            .map_err(|e| parse_error(source, line, e.to_string()))?;
    }
    b.actor_names(actor_names).layer_names(layer_names);
    b.build()
}

/// Labels per node-layer from `actor layer label` lines, or `actor label`
/// lines that apply to every layer of the actor. Three-column lines take precedence.
pub fn parse_multilayer_metadata(text: &str, source: &str, network: &MultilayerNetwork) -> Result<Vec<String>> {
    let default_names = |n: usize| (0..n).map(|i| i.to_string()).collect::<Vec<_>>();
    let actors = network
        .actor_names()
        .map(<[String]>::to_vec)
        .unwrap_or_else(|| default_names(network.actor_count()));
    let layers = network
        .layer_names()
        .map(<[String]>::to_vec)
        .unwrap_or_else(|| default_names(network.layer_count()));
    let actor_ids: HashMap<&str, usize> = actors.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let layer_ids: HashMap<&str, usize> = layers.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();

    let n = network.nodelayer_count();
    let mut specific: Vec<Option<String>> = vec![None; n];
    let mut by_actor: HashMap<usize, String> = HashMap::new();
    for (line, fields) in data_lines(text) {
        match fields.len() {
            2 => {
                if let Some(&a) = actor_ids.get(fields[0]) {
                    by_actor.insert(a, fields[1].to_string());
                }
            }
            3 => {
                if let (Some(&a), Some(&l)) = (actor_ids.get(fields[0]), layer_ids.get(fields[1])) {
                    if let Some(i) = network.nodelayer_index(a, l) {
                        specific[i] = Some(fields[2].to_string());
                    }
                }
            }
            _ => return Err(parse_error(source, line, "expected `actor layer label` or `actor label`")),
        }
    }
    let labels = (0..n)
        .map(|i| specific[i].take().or_else(|| by_actor.get(&network.actor_of()[i]).cloned()))
        .collect();
    collect_labels(labels, source, |i| {
        format!("{} in layer {}", actors[network.actor_of()[i]], layers[network.layer_of()[i]])
    })
}
