//! Text, JSON, CSV and SVG formats.
//!
//! Floating-point values are written in shortest round-trip form, so reading a
//! file back reproduces the exact doubles.

use std::fs;
use std::path::Path;

use crate::error::{ChampError, Result};

mod domains;
mod ensemble;
mod gml;
mod networks;
mod svg;
mod tables;

pub use domains::{
    domain_document_1d, domain_document_2d, BoxRecord, DomainDocument, DomainRecord, OutsideRecord,
};
pub use ensemble::{ensemble_from_records, ensemble_records, parse_ensemble, write_ensemble_string, EnsembleRecord};
pub use gml::parse_gml;
pub use networks::{
    parse_edge_list, parse_metadata, parse_multilayer, parse_multilayer_metadata,
};
pub use svg::{render_svg, ColorKey};
pub use tables::{coefficients_csv, parse_coefficients_csv, ami_matrix_csv, scatter_csv, ScatterRow};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| ChampError::io(path, e))
}

pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| ChampError::io(path, e))
}

pub(crate) fn parse_error(source_name: &str, line: usize, message: impl Into<String>) -> ChampError {
    ChampError::Parse {
        source_name: source_name.to_string(),
        line,
        message: message.into(),
    }
}

/// Non-empty, non-comment lines with 1-based line numbers and whitespace-split fields.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}
