//! Solution files: the tour as 0-based node indices on the first line and
//! its weight on the second.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::instance::Instance;
use crate::tour::Tour;

#[derive(Debug, Error)]
pub enum SolutionError {
    #[error("empty solution file")]
    Empty,
    #[error("bad node index {token:?}")]
    BadIndex { token: String },
    #[error("node {index} does not exist in an instance with {nodes} nodes")]
    OutOfRange { index: usize, nodes: usize },
    #[error("bad weight {0:?}")]
    BadWeight(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn write_solution<W: Write>(mut out: W, tour: &Tour, weight: f64) -> io::Result<()> {
    writeln!(out, "{tour}")?;
    writeln!(out, "{weight:.2}")
}

pub fn solution_text(tour: &Tour, weight: f64) -> String {
    format!("{tour}\n{weight:.2}\n")
}

/// Parses a solution; indices may be separated by whitespace or commas. The
/// weight line is optional.
pub fn parse_solution(text: &str) -> Result<(Tour, Option<f64>), SolutionError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let first = lines.next().ok_or(SolutionError::Empty)?;
    let indices = first
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>().map_err(|_| SolutionError::BadIndex {
                token: t.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let weight = lines
        .next()
        .map(|l| {
            l.parse::<f64>()
                .map_err(|_| SolutionError::BadWeight(l.to_string()))
        })
        .transpose()?;
    Ok((Tour::from_indices(&indices), weight))
}

/// Reads a solution and checks that every index names a node of `inst`.
pub fn read_solution(
    path: impl AsRef<Path>,
    inst: &Instance,
) -> Result<(Tour, Option<f64>), SolutionError> {
    let (tour, w) = parse_solution(&fs::read_to_string(path)?)?;
    if let Some(v) = tour.nodes().iter().find(|v| v.index() >= inst.node_count()) {
        return Err(SolutionError::OutOfRange {
            index: v.index(),
            nodes: inst.node_count(),
        });
    }
    Ok((tour, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let t = Tour::from_indices(&[0, 3, 1, 0, 2, 0]);
        let text = solution_text(&t, 123.456);
        assert_eq!(text, "0 3 1 0 2 0\n123.46\n");
        let (back, w) = parse_solution(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(w, Some(123.46));
    }

    #[test]
    fn commas_and_missing_weight() {
        let (t, w) = parse_solution("0, 2, 1, 0\n").unwrap();
        assert_eq!(t.indices(), vec![0, 2, 1, 0]);
        assert_eq!(w, None);
        assert!(matches!(parse_solution(""), Err(SolutionError::Empty)));
        assert!(matches!(
            parse_solution("0 x 0"),
            Err(SolutionError::BadIndex { .. })
        ));
        assert!(matches!(
            parse_solution("0 1 0\nabc"),
            Err(SolutionError::BadWeight(_))
        ));
    }
}
