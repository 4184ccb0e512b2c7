//! Travel-time matrix ingestion (first line n, then n rows of n entries)
//! and the one-id-one-weight-per-line weight file.

use std::path::Path;

use patrol_core::MonitorGraph;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixMode {
    /// Input must already be symmetric.
    Symmetric,
    /// Replace each pair by the mean of the two directed entries.
    Average,
}

pub fn parse(path: &Path, mode: MatrixMode) -> Result<MonitorGraph> {
    let text = std::fs::read_to_string(path)?;
    parse_str(&text, path, mode)
}

pub fn parse_str(text: &str, path: &Path, mode: MatrixMode) -> Result<MonitorGraph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (ln, first) = lines
        .next()
        .ok_or_else(|| Error::parse(path, 1, 1, "empty matrix file"))?;
    let n: usize = first
        .trim()
        .parse()
        .map_err(|_| Error::parse(path, ln + 1, 1, format!("expected vertex count, got {first:?}")))?;
    if n == 0 {
        return Err(Error::parse(path, ln + 1, 1, "vertex count must be positive"));
    }
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
    for _ in 0..n {
        let (ln, line) = lines.next().ok_or_else(|| {
            Error::parse(path, ln + 1, 1, format!("expected {n} matrix rows"))
        })?;
        let mut row = Vec::with_capacity(n);
        for (col, tok) in line.split_whitespace().enumerate() {
            row.push(tok.parse::<f64>().map_err(|_| {
                Error::parse(path, ln + 1, col + 1, format!("bad entry {tok:?}"))
            })?);
        }
        if row.len() != n {
            return Err(Error::NonSquareMatrix { rows: n, cols: row.len(), bad_row: rows.len() + 1 });
        }
        rows.push(row);
    }
    build(rows, mode)
}

/// Builds the graph from an in-memory matrix, symmetrizing per `mode`.
/// Weights are unit pending a separate weight assignment.
pub fn build(rows: Vec<Vec<f64>>, mode: MatrixMode) -> Result<MonitorGraph> {
    let n = rows.len();
    let mut sym = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            match mode {
                MatrixMode::Average => sym[i][j] = (rows[i][j] + rows[j][i]) / 2.0,
                MatrixMode::Symmetric => {
                    if rows[i][j] != rows[j][i] {
                        return Err(Error::AsymmetricMatrix(i, j));
                    }
                    sym[i][j] = rows[i][j];
                }
            }
        }
        sym[i][i] = 0.0;
    }
    let labels = (1..=n).map(|i| i.to_string()).collect();
    Ok(MonitorGraph::from_matrix(labels, vec![1.0; n], &sym)?)
}

/// Parses a weight file: one `id weight` pair per non-empty line.
pub fn parse_weights(path: &Path) -> Result<Vec<(String, f64)>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let id = parts
            .next()
            .ok_or_else(|| Error::parse(path, ln + 1, 1, "expected vertex id"))?;
        let w: f64 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(path, ln + 1, 2, "expected numeric weight"))?;
        if parts.next().is_some() {
            return Err(Error::parse(path, ln + 1, 3, "trailing tokens"));
        }
        out.push((id.to_string(), w));
    }
    Ok(out)
}

/// Applies a parsed weight file to a graph, matching on labels.
pub fn apply_weights(g: MonitorGraph, pairs: &[(String, f64)]) -> Result<MonitorGraph> {
    let mut raw: Vec<f64> = (0..g.len()).map(|v| g.raw_weight(v)).collect();
    for (id, w) in pairs {
        let v = g
            .index_of(id)
            .ok_or_else(|| patrol_core::Error::UnknownVertex(id.clone()))?;
        raw[v] = *w;
    }
    Ok(g.with_weights(raw)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn p() -> PathBuf {
        PathBuf::from("m.txt")
    }

    #[test]
    fn averages_directed_entries() {
        let text = "2\n0 274\n220 0\n";
        let g = parse_str(text, &p(), MatrixMode::Average).unwrap();
        let mg = patrol_core::MetricGraph::close(g).unwrap();
        assert_eq!(mg.dist(0, 1), 247.0);
    }

    #[test]
    fn symmetric_mode_accepts_and_rejects() {
        assert!(parse_str("2\n0 5\n5 0\n", &p(), MatrixMode::Symmetric).is_ok());
        assert!(matches!(
            parse_str("2\n0 5\n6 0\n", &p(), MatrixMode::Symmetric).unwrap_err(),
            Error::AsymmetricMatrix(..)
        ));
    }

    #[test]
    fn non_square_detected() {
        let err = parse_str("2\n0 1 2\n1 0\n", &p(), MatrixMode::Average).unwrap_err();
        assert!(matches!(err, Error::NonSquareMatrix { cols: 3, .. }));
    }

    #[test]
    fn weight_file_round_trip() {
        let g = build(vec![vec![0.0, 2.0], vec![2.0, 0.0]], MatrixMode::Symmetric).unwrap();
        let g = apply_weights(g, &[("1".into(), 10.0), ("2".into(), 5.0)]).unwrap();
        assert_eq!(g.weight(0), 1.0);
        assert_eq!(g.weight(1), 0.5);
        assert_eq!(g.raw_weight(0), 10.0);
    }

    #[test]
    fn unknown_weight_id_is_an_error() {
        let g = build(vec![vec![0.0, 2.0], vec![2.0, 0.0]], MatrixMode::Symmetric).unwrap();
        let err = apply_weights(g, &[("zz".into(), 1.0)]).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
