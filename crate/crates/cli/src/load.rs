use std::path::Path;

use champ::io::{self, parse_ensemble, EnsembleRecord};
use champ::similarity::label_ids;
use champ::{Ensemble, MultilayerNetwork, Network, QualityModel};

use crate::{usage, CliResult, NetworkArgs, RangeArgs};

pub(crate) enum Loaded {
    Single(Network),
    Multi(MultilayerNetwork),
}

impl Loaded {
    pub(crate) fn model(&self) -> &dyn QualityModel {
        match self {
            Loaded::Single(n) => n,
            Loaded::Multi(n) => n,
        }
    }

    pub(crate) fn is_multilayer(&self) -> bool {
        matches!(self, Loaded::Multi(_))
    }
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

pub(crate) fn require_file(path: &Path, flag: &str) -> CliResult<()> {
    if !path.is_file() {
        return Err(usage(format!("{flag}: no such file {}", path.display())));
    }
    Ok(())
}

/// Loads the network named by `--network` or `--multilayer`, if either was given.
pub(crate) fn network(args: &NetworkArgs) -> CliResult<Option<Loaded>> {
    if let Some(path) = &args.network {
        require_file(path, "--network")?;
        let text = io::read_text(path)?;
        let is_gml = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("gml"));
        let net = if is_gml {
            io::parse_gml(&text, &display(path))?
        } else {
            io::parse_edge_list(&text, &display(path))?
        };
        return Ok(Some(Loaded::Single(net)));
    }
    if let Some(path) = &args.multilayer {
        require_file(path, "--multilayer")?;
        let text = io::read_text(path)?;
        return Ok(Some(Loaded::Multi(io::parse_multilayer(&text, &display(path))?)));
    }
    Ok(None)
}

pub(crate) fn required_network(args: &NetworkArgs) -> CliResult<Loaded> {
    network(args)?.ok_or_else(|| usage("one of --network or --multilayer is required"))
}

pub(crate) fn records(path: &Path) -> CliResult<Vec<EnsembleRecord>> {
    require_file(path, "--ensemble")?;
    let text = io::read_text(path)?;
    Ok(parse_ensemble(&text, &display(path))?)
}

/// Reads an ensemble and puts it in canonical order, so partition ids do not
/// depend on the order of the input lines.
pub(crate) fn ensemble<'a>(model: &'a dyn QualityModel, path: &Path) -> CliResult<Ensemble<'a>> {
    let recs = records(path)?;
    let mut ens = io::ensemble_from_records(model, &recs)?;
    if ens.is_empty() {
        return Err(crate::CliError::Runtime(format!("{}: empty ensemble", path.display())));
    }
    ens.canonicalize();
    Ok(ens)
}

fn pair(values: &Option<Vec<f64>>, flag: &str) -> CliResult<Option<(f64, f64)>> {
    let Some(v) = values else { return Ok(None) };
    let (lo, hi) = (v[0], v[1]);
    if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || lo > hi {
        return Err(usage(format!(
            "{flag} {lo} {hi}: bounds must be finite, non-negative and ordered"
        )));
    }
    Ok(Some((lo, hi)))
}

pub(crate) fn gamma_range(r: &RangeArgs) -> CliResult<(f64, f64)> {
    pair(&r.gamma_range, "--gamma-range")?.ok_or_else(|| usage("--gamma-range is required"))
}

pub(crate) fn omega_range(r: &RangeArgs) -> CliResult<Option<(f64, f64)>> {
    pair(&r.omega_range, "--omega-range")
}

/// Metadata as dense label ids per element, from `--metadata` or from node
/// values embedded in the network file.
pub(crate) fn metadata(net: &Loaded, path: Option<&Path>) -> CliResult<Option<Vec<usize>>> {
    let labels = match (net, path) {
        (Loaded::Single(n), Some(p)) => {
            require_file(p, "--metadata")?;
            let text = io::read_text(p)?;
            let fallback: Vec<String>;
            let names = match n.node_names() {
                Some(names) => names,
                None => {
                    fallback = (0..n.node_count()).map(|i| i.to_string()).collect();
                    &fallback
                }
            };
            io::parse_metadata(&text, &display(p), names)?
        }
        (Loaded::Multi(n), Some(p)) => {
            require_file(p, "--metadata")?;
            let text = io::read_text(p)?;
            io::parse_multilayer_metadata(&text, &display(p), n)?
        }
        (Loaded::Single(n), None) => match n.metadata() {
            Some(m) => m.to_vec(),
            None => return Ok(None),
        },
        (Loaded::Multi(_), None) => return Ok(None),
    };
    Ok(Some(label_ids(&labels)))
}
