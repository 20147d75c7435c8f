use std::path::Path;
use std::time::Instant;

use champ::envelope::{brute_force_envelope, prune_1d, prune_2d, Domain2D, Point, ParamBox};
use champ::io::{
    self, ami_matrix_csv, coefficients_csv, domain_document_1d, domain_document_2d, parse_coefficients_csv,
    render_svg, scatter_csv, write_ensemble_string, ColorKey, DomainDocument, ScatterRow,
};
use champ::partition::SetPartitions;
use champ::similarity::{ami, ami_matrix, layer_averaged_ami, neighbor_weighted_ami};
use champ::sweep::{ensemble_sweep, multilayer_sweep, Placement, SweepSpec};
use champ::{CoefficientTriple, Ensemble, Partition};

use crate::load::{self, Loaded};
use crate::{usage, AnalyzeArgs, CliError, CliResult, CoeffsArgs, Mode, OracleArgs, PruneArgs, SweepArgs};

/// Largest element count for which `oracle` enumerates all set partitions.
const MAX_EXHAUSTIVE: usize = 10;

fn runtime(msg: impl std::fmt::Display) -> CliError {
    CliError::Runtime(msg.to_string())
}

fn write_or_print(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => Ok(io::write_text(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"))
}

pub(crate) fn sweep(a: SweepArgs) -> CliResult<()> {
    if a.runs == 0 {
        return Err(usage("--runs must be at least 1"));
    }
    let gamma_range = load::gamma_range(&a.ranges)?;
    let omega_range = load::omega_range(&a.ranges)?;
    if a.input.multilayer.is_some() && omega_range.is_none() {
        return Err(usage("multilayer input requires --omega-range"));
    }
    if a.input.network.is_some() && omega_range.is_some() {
        return Err(usage("--omega-range requires --multilayer input"));
    }
    let placement = match &a.grid {
        None => Placement::Uniform,
        Some(v) => {
            let n_gamma = v[0];
            let n_omega = v.get(1).copied().unwrap_or(1);
            if n_gamma == 0 || n_omega == 0 {
                return Err(usage("--grid dimensions must be at least 1"));
            }
            if omega_range.is_none() && n_omega != 1 {
                return Err(usage("--grid with an omega dimension requires --omega-range"));
            }
            Placement::Grid { n_gamma, n_omega }
        }
    };
    let spec = SweepSpec {
        gamma_range,
        omega_range,
        placement,
        runs: a.runs,
        master_seed: a.seed,
    };
    spec.validate().map_err(usage)?;
    let net = load::required_network(&a.input)?;

    let start = Instant::now();
    let ens = match &net {
        Loaded::Single(n) => ensemble_sweep(n, &spec)?,
        Loaded::Multi(n) => multilayer_sweep(n, &spec)?,
    };
    let elapsed = start.elapsed().as_secs_f64();
    io::write_text(&a.out, &write_ensemble_string(&ens)?)?;
    println!("runs: {}", spec.runs);
    println!("unique partitions: {}", ens.len());
    println!("elapsed: {elapsed:.3} s");
    Ok(())
}

pub(crate) fn coeffs(a: CoeffsArgs) -> CliResult<()> {
    let net = load::required_network(&a.input)?;
    let ens = load::ensemble(net.model(), &a.ensemble)?;
    write_or_print(a.out.as_deref(), &coefficients_csv(&ens.triples()))
}

fn choose_mode(mode: Option<Mode>, multilayer: bool, omega: Option<(f64, f64)>) -> Mode {
    mode.unwrap_or(if multilayer || omega.is_some() { Mode::TwoD } else { Mode::OneD })
}

fn param_box(gamma: (f64, f64), omega: Option<(f64, f64)>) -> CliResult<ParamBox> {
    let (w0, w1) = omega.ok_or_else(|| usage("2d mode requires --omega-range"))?;
    ParamBox::new(gamma.0, gamma.1, w0, w1).map_err(usage)
}

/// Coefficients from `--coeffs`, from an ensemble, or (when `exhaustive`) from
/// every set partition of the network.
fn gather_triples(
    net: Option<&Loaded>,
    ensemble: Option<&Path>,
    coeffs: Option<&Path>,
    exhaustive: bool,
) -> CliResult<Vec<CoefficientTriple>> {
    if let Some(path) = coeffs {
        load::require_file(path, "--coeffs")?;
        let text = io::read_text(path)?;
        return Ok(parse_coefficients_csv(&text, &path.display().to_string())?);
    }
    let net = net.ok_or_else(|| usage("--network or --multilayer is required without --coeffs"))?;
    match ensemble {
        Some(path) => Ok(load::ensemble(net.model(), path)?.triples()),
        None if exhaustive => {
            let n = net.model().element_count();
            if n > MAX_EXHAUSTIVE {
                return Err(usage(format!(
                    "exhaustive enumeration is limited to {MAX_EXHAUSTIVE} elements (network has {n}); pass --ensemble"
                )));
            }
            let mut ens = Ensemble::new(net.model());
            for p in SetPartitions::new(n) {
                ens.insert(p, None)?;
            }
            Ok(ens.triples())
        }
        None => Err(usage("one of --ensemble or --coeffs is required")),
    }
}

pub(crate) fn prune(a: PruneArgs) -> CliResult<()> {
    let gamma = load::gamma_range(&a.ranges)?;
    let omega = load::omega_range(&a.ranges)?;
    let key: ColorKey = a.color_key.parse().map_err(usage)?;
    if a.svg.is_some() && key != ColorKey::Communities {
        return Err(usage(format!(
            "--color-key {} needs per-domain AMI values; render it with `analyze --svg`",
            a.color_key
        )));
    }
    let net = load::network(&a.input)?;
    let multilayer = net.as_ref().is_some_and(Loaded::is_multilayer);
    let mode = choose_mode(a.mode, multilayer, omega);
    let bbox = match mode {
        Mode::TwoD => Some(param_box(gamma, omega)?),
        Mode::OneD => None,
    };
    let triples = gather_triples(net.as_ref(), a.ensemble.as_deref(), a.coeffs.as_deref(), false)?;

    let doc = match bbox {
        None => domain_document_1d(&prune_1d(&triples, gamma.0, gamma.1)?),
        Some(b) => domain_document_2d(&prune_2d(&triples, b)?),
    };
    io::write_text(&a.out, &doc.to_json()?)?;
    if let Some(svg) = &a.svg {
        io::write_text(svg, &render_svg(&doc, key)?)?;
    }
    println!("unique partitions: {}", triples.len());
    println!("admissible partitions: {}", doc.domains.len());
    if doc.is_2d() {
        println!("outside box: {}", doc.outside_box.len());
    }
    Ok(())
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0)
}

fn check_domains(doc: &DomainDocument, ens: &Ensemble<'_>) -> CliResult<()> {
    for d in &doc.domains {
        let matches = d.partition_id < ens.len() && {
            let t = &ens.entries()[d.partition_id].triple;
            close(t.a_hat, d.a_hat) && close(t.p_hat, d.p_hat) && close(t.c_hat, d.c_hat)
        };
        if !matches {
            return Err(runtime(format!(
                "domain file does not match the ensemble (partition {})",
                d.partition_id
            )));
        }
    }
    Ok(())
}

fn domains_2d(doc: &DomainDocument, ens: &Ensemble<'_>) -> Vec<Domain2D> {
    doc.domains
        .iter()
        .map(|d| Domain2D {
            partition_id: d.partition_id,
            polygon: d
                .polygon
                .as_deref()
                .unwrap_or_default()
                .iter()
                .map(|&[x, y]| Point::new(x, y))
                .collect(),
            area: d.extent,
            triple: ens.entries()[d.partition_id].triple,
            aliases: d.aliases.clone(),
        })
        .collect()
}

fn scatter_rows(ens: &Ensemble<'_>) -> Vec<ScatterRow> {
    let mut rows: Vec<ScatterRow> = ens
        .entries()
        .iter()
        .flat_map(|e| {
            e.provenance.iter().map(move |p| ScatterRow {
                run_id: p.run_id,
                partition_id: e.triple.partition_id,
                gamma: p.gamma,
                omega: p.omega,
                modularity: e.triple.modularity(p.gamma, p.omega.unwrap_or(0.0)),
                n_communities: e.triple.community_count,
                n_communities_ge5: e.triple.community_count_ge5,
            })
        })
        .collect();
    rows.sort_by_key(|r| r.run_id);
    rows
}

pub(crate) fn analyze(a: AnalyzeArgs) -> CliResult<()> {
    let key: ColorKey = a.color_key.parse().map_err(usage)?;
    let net = load::required_network(&a.input)?;
    load::require_file(&a.domains, "--domains")?;
    let mut doc = DomainDocument::from_json(&io::read_text(&a.domains)?)?;
    if a.svg.is_some() && key == ColorKey::NeighborAmi && !doc.is_2d() {
        return Err(usage("--color-key neighbor-ami applies to 2d domain files"));
    }
    let metadata = load::metadata(&net, a.metadata.as_deref())?;
    if a.svg.is_some() && key == ColorKey::MetadataAmi && metadata.is_none() {
        return Err(usage("--color-key metadata-ami requires --metadata"));
    }
    let ens = load::ensemble(net.model(), &a.ensemble)?;
    check_domains(&doc, &ens)?;
    let parts: Vec<&Partition> = doc.domains.iter().map(|d| ens.partition(d.partition_id)).collect();

    if let Some(path) = &a.ami_matrix {
        let ids: Vec<usize> = doc.domains.iter().map(|d| d.partition_id).collect();
        io::write_text(path, &ami_matrix_csv(&ids, &ami_matrix(&parts)?))?;
    }
    if doc.is_2d() {
        let values = neighbor_weighted_ami(&domains_2d(&doc, &ens), &parts)?;
        for (d, v) in doc.domains.iter_mut().zip(values) {
            d.neighbor_ami = v;
        }
    }
    if let Some(meta) = &metadata {
        let truth = Partition::new(meta.clone());
        for (d, p) in doc.domains.iter_mut().zip(&parts) {
            d.metadata_ami = match &net {
                Loaded::Single(_) => Some(ami(p, &truth)?),
                Loaded::Multi(n) => layer_averaged_ami(p, meta, n.layer_of())?.mean,
            };
        }
    }
    if let Some(path) = &a.scatter {
        io::write_text(path, &scatter_csv(&scatter_rows(&ens)))?;
    }
    if let Some(path) = &a.out {
        io::write_text(path, &doc.to_json()?)?;
    }
    if let Some(path) = &a.svg {
        io::write_text(path, &render_svg(&doc, key)?)?;
    }

    println!("label\tpartition_id\textent\tn_communities\tneighbor_ami\tmetadata_ami");
    for d in &doc.domains {
        println!(
            "{}\t{}\t{:.6}\t{}\t{}\t{}",
            d.label,
            d.partition_id,
            d.extent,
            d.n_communities,
            fmt_opt(d.neighbor_ami),
            fmt_opt(d.metadata_ami)
        );
    }
    Ok(())
}

struct OracleReport {
    checked: usize,
    skipped: usize,
    mismatches: usize,
    area_error: Option<f64>,
}

fn oracle_1d(triples: &[CoefficientTriple], gamma: (f64, f64), samples: usize, border: f64) -> CliResult<OracleReport> {
    let env = prune_1d(triples, gamma.0, gamma.1)?;
    let transitions = env.transitions();
    let width = gamma.1 - gamma.0;
    let points: Vec<Point> = (0..samples)
        .map(|i| Point::new(gamma.0 + width * (i as f64 + 0.5) / samples as f64, 0.0))
        .filter(|p| transitions.iter().all(|t| (p.x - t).abs() >= border))
        .collect();
    let truth = brute_force_envelope(triples, &points);
    let mismatches = points
        .iter()
        .zip(&truth)
        .filter(|(p, ids)| env.owner_at(p.x).map_or(true, |d| !ids.contains(&d.partition_id)))
        .count();
    Ok(OracleReport {
        checked: points.len(),
        skipped: samples - points.len(),
        mismatches,
        area_error: None,
    })
}

fn oracle_2d(triples: &[CoefficientTriple], bbox: ParamBox, per_axis: usize, border: f64) -> CliResult<OracleReport> {
    let env = prune_2d(triples, bbox)?;
    let (gw, ow) = (bbox.gamma_max - bbox.gamma_min, bbox.omega_max - bbox.omega_min);
    let mut points = Vec::with_capacity(per_axis * per_axis);
    for i in 0..per_axis {
        for j in 0..per_axis {
            let p = Point::new(
                bbox.gamma_min + gw * (i as f64 + 0.5) / per_axis as f64,
                bbox.omega_min + ow * (j as f64 + 0.5) / per_axis as f64,
            );
            if env.border_distance(p) >= border {
                points.push(p);
            }
        }
    }
    let truth = brute_force_envelope(triples, &points);
    let mismatches = points
        .iter()
        .zip(&truth)
        .filter(|(p, ids)| env.owner_at(**p).map_or(true, |d| !ids.contains(&d.partition_id)))
        .count();
    let total: f64 = env.domains.iter().map(|d| d.area).sum();
    Ok(OracleReport {
        checked: points.len(),
        skipped: per_axis * per_axis - points.len(),
        mismatches,
        area_error: Some((total - bbox.area()).abs() / bbox.area()),
    })
}

pub(crate) fn oracle(a: OracleArgs) -> CliResult<()> {
    let gamma = load::gamma_range(&a.ranges)?;
    let omega = load::omega_range(&a.ranges)?;
    if !(a.border.is_finite() && a.border >= 0.0) {
        return Err(usage("--border must be a non-negative number"));
    }
    if a.samples == Some(0) {
        return Err(usage("--samples must be at least 1"));
    }
    let net = load::network(&a.input)?;
    let multilayer = net.as_ref().is_some_and(Loaded::is_multilayer);
    let mode = choose_mode(a.mode, multilayer, omega);
    let bbox = match mode {
        Mode::TwoD => Some(param_box(gamma, omega)?),
        Mode::OneD => None,
    };
    let triples = gather_triples(net.as_ref(), a.ensemble.as_deref(), a.coeffs.as_deref(), true)?;

    let report = match bbox {
        None => oracle_1d(&triples, gamma, a.samples.unwrap_or(1000), a.border)?,
        Some(b) => oracle_2d(&triples, b, a.samples.unwrap_or(200), a.border)?,
    };
    println!("partitions: {}", triples.len());
    println!("points checked: {}", report.checked);
    println!("points skipped near borders: {}", report.skipped);
    println!("mismatches: {}", report.mismatches);
    if let Some(err) = report.area_error {
        println!("relative area error: {err:e}");
    }
    let area_ok = report.area_error.map_or(true, |e| e <= 1e-6);
    if report.mismatches > 0 || !area_ok {
        return Err(runtime("envelope disagrees with brute-force evaluation"));
    }
    println!("ok");
    Ok(())
}
