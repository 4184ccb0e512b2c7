//! Reader/writer for the EUC_2D subset of the TSPLIB format:
//! header key/value lines, a NODE_COORD_SECTION of `id x y` triples, and
//! an EOF terminator.

use std::path::Path;

use patrol_core::MonitorGraph;

use crate::error::{Error, Result};

/// Parses a TSPLIB file into a complete Euclidean graph with unit
/// weights. Only EDGE_WEIGHT_TYPE EUC_2D is supported.
pub fn parse(path: &Path) -> Result<MonitorGraph> {
    let text = std::fs::read_to_string(path)?;
    parse_str(&text, path)
}

fn parse_str(text: &str, path: &Path) -> Result<MonitorGraph> {
    let mut dimension: Option<usize> = None;
    let mut coords: Vec<[f64; 2]> = Vec::new();
    let mut in_coords = false;
    let mut saw_section = false;
    for (ln, raw) in text.lines().enumerate() {
        let lineno = ln + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if !in_coords {
            let (key, value) = match line.split_once(':') {
                Some((k, v)) => (k.trim(), v.trim()),
                None => (line, ""),
            };
            match key {
                "NODE_COORD_SECTION" => {
                    in_coords = true;
                    saw_section = true;
                }
                "EDGE_WEIGHT_TYPE" => {
                    if value != "EUC_2D" {
                        return Err(Error::UnsupportedEdgeWeightType(value.to_string()));
                    }
                }
                "DIMENSION" => {
                    dimension = Some(value.parse().map_err(|_| {
                        Error::parse(path, lineno, 1, format!("bad DIMENSION value {value:?}"))
                    })?);
                }
                "NAME" | "TYPE" | "COMMENT" => {}
                "EOF" => break,
                other => {
                    return Err(Error::parse(path, lineno, 1, format!("unknown header {other:?}")));
                }
            }
        } else {
            if line == "EOF" {
                in_coords = false;
                continue;
            }
            let mut parts = line.split_whitespace();
            let id: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::parse(path, lineno, 1, "expected integer node id"))?;
            let mut coord = [0.0f64; 2];
            for (slot, c) in coord.iter_mut().enumerate() {
                let tok = parts.next().ok_or_else(|| {
                    Error::parse(path, lineno, line.len(), "missing coordinate")
                })?;
                *c = tok.parse().map_err(|_| {
                    Error::parse(path, lineno, slot + 2, format!("bad coordinate {tok:?}"))
                })?;
            }
            if parts.next().is_some() {
                return Err(Error::parse(path, lineno, line.len(), "trailing tokens"));
            }
            if id != coords.len() + 1 {
                return Err(Error::parse(
                    path,
                    lineno,
                    1,
                    format!("node ids must be consecutive from 1; got {id}"),
                ));
            }
            coords.push(coord);
        }
    }
    if !saw_section {
        return Err(Error::parse(path, 1, 1, "missing NODE_COORD_SECTION"));
    }
    if let Some(d) = dimension {
        if d != coords.len() {
            return Err(Error::parse(
                path,
                1,
                1,
                format!("DIMENSION {d} but {} coordinates", coords.len()),
            ));
        }
    }
    Ok(MonitorGraph::from_points(coords)?)
}

/// Writes points in the same subset; `parse` of the output reproduces
/// the coordinates bit-exactly (shortest round-trip float formatting).
pub fn emit(name: &str, points: &[[f64; 2]]) -> String {
    let mut out = String::new();
    out.push_str(&format!("NAME : {name}\n"));
    out.push_str("TYPE : TSP\n");
    out.push_str(&format!("DIMENSION : {}\n", points.len()));
    out.push_str("EDGE_WEIGHT_TYPE : EUC_2D\n");
    out.push_str("NODE_COORD_SECTION\n");
    for (i, p) in points.iter().enumerate() {
        out.push_str(&format!("{} {} {}\n", i + 1, p[0], p[1]));
    }
    out.push_str("EOF\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use patrol_core::MetricGraph;
    use std::path::PathBuf;

    fn p() -> PathBuf {
        PathBuf::from("test.tsp")
    }

    #[test]
    fn parses_triangle() {
        let text = "NAME : tri\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 0\n3 0 4\nEOF\n";
        let g = parse_str(text, &p()).unwrap();
        assert_eq!(g.len(), 3);
        let mg = MetricGraph::close(g).unwrap();
        assert_eq!(mg.dist(0, 1), 3.0);
        assert_eq!(mg.dist(1, 2), 5.0);
    }

    #[test]
    fn missing_section_is_parse_error() {
        let err = parse_str("NAME : x\nEOF\n", &p()).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn rejects_non_euclidean() {
        let err = parse_str("EDGE_WEIGHT_TYPE : EXPLICIT\n", &p()).unwrap_err();
        assert!(matches!(err, Error::UnsupportedEdgeWeightType(_)));
    }

    #[test]
    fn reports_bad_coordinate_position() {
        let text = "NODE_COORD_SECTION\n1 0 zero\nEOF\n";
        match parse_str(text, &p()).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let pts = vec![[0.1234567890123, 9.87654321], [1.0 / 3.0, 2.0f64.sqrt()]];
        let text = emit("rt", &pts);
        let g = parse_str(&text, &p()).unwrap();
        let again = emit("rt", &[[0.1234567890123, 9.87654321], [1.0 / 3.0, 2.0f64.sqrt()]]);
        assert_eq!(text, again);
        let mg = MetricGraph::close(g).unwrap();
        let d = ((pts[0][0] - pts[1][0]).powi(2) + (pts[0][1] - pts[1][1]).powi(2)).sqrt();
        assert_eq!(mg.dist(0, 1), d);
    }
}
