//! Reading event files and writing CSV exports.

use std::fs;
use std::io::Write;
use std::path::Path;

use tiedecay_core::aggregate::AggregateNetwork;
use tiedecay_core::{parse_events, EventStream, Matrix, ParseOptions};

use crate::error::{Error, Result};

pub fn read_stream(path: &Path, options: ParseOptions) -> Result<EventStream> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_events(&text, options).map_err(|source| Error::Input { path: path.to_path_buf(), source })
}

/// Writes `s` in the `t i j` text format with its original node labels.
pub fn write_stream(path: &Path, s: &EventStream) -> Result<()> {
    fs::write(path, s.to_text()).map_err(|e| Error::io(path, e))
}

pub(crate) fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

fn create(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv_writer(file))
}

/// Nonzero entries of a weight matrix as `i,j,weight` rows.
pub fn write_weights<W: Write>(w: W, weights: &Matrix) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["i", "j", "weight"])?;
    for i in 0..weights.rows() {
        for j in 0..weights.cols() {
            let x = weights[(i, j)];
            if x != 0.0 {
                out.write_record([i.to_string(), j.to_string(), x.to_string()])?;
            }
        }
    }
    out.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn write_weights_file(path: &Path, weights: &Matrix) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_weights(file, weights)
}

/// Undirected aggregate networks are written once per pair (`i < j`).
pub fn write_aggregate_edges(path: &Path, agg: &AggregateNetwork, directed: bool) -> Result<()> {
    let mut out = create(path)?;
    out.write_record(["i", "j", "w"])?;
    let n = agg.weights.rows();
    for i in 0..n {
        for j in 0..n {
            let w = agg.weights[(i, j)];
            if w != 0.0 && (directed || i < j) {
                out.write_record([i.to_string(), j.to_string(), w.to_string()])?;
            }
        }
    }
    out.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Opinion trajectory as `t,x0,x1,...` rows.
pub fn write_trajectory(path: &Path, trajectory: &[(f64, Vec<f64>)]) -> Result<()> {
    let mut out = create(path)?;
    let n = trajectory.first().map_or(0, |(_, x)| x.len());
    let mut header = vec!["t".to_string()];
    header.extend((0..n).map(|i| format!("x{i}")));
    out.write_record(&header)?;
    for (t, x) in trajectory {
        let mut row = vec![t.to_string()];
        row.extend(x.iter().map(f64::to_string));
        out.write_record(&row)?;
    }
    out.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
