//! Append-only JSON-lines store of verified acute configurations.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::AcuteWitness;
use crate::error::{Error, Result};
use crate::point::PointSet;
use crate::predicates::all_angles_acute;
use crate::search::acute_margin;
use crate::tolerance::Tolerance;

/// One line of the results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcuteRecord {
    pub dim: usize,
    pub size: usize,
    pub margin: f64,
    pub seed: u64,
    pub points: Vec<Vec<f64>>,
}

impl AcuteRecord {
    pub fn new(points: &PointSet, seed: u64) -> Result<Self> {
        Ok(Self {
            dim: points.dim(),
            size: points.len(),
            margin: acute_margin(points)?,
            seed,
            points: points.to_rows(),
        })
    }

    /// Rebuilds the configuration and re-runs the acute check.
    pub fn verify(&self, tol: &Tolerance) -> Result<bool> {
        let ps = PointSet::new(self.dim, self.points.clone())?;
        Ok(ps.len() == self.size && all_angles_acute(&ps, tol)?)
    }
}

pub fn append_record(path: &Path, record: &AcuteRecord) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    let mut line = serde_json::to_string(record)?;
    line.push('\n');
    f.write_all(line.as_bytes())?;
    Ok(())
}

/// Reads every record; blank lines are skipped. A missing file is empty.
pub fn read_records(path: &Path) -> Result<Vec<AcuteRecord>> {
    let f = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let mut out = Vec::new();
    for (lineno, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line)
            .map_err(|e| Error::Parse(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
        out.push(rec);
    }
    Ok(out)
}

/// Witnesses from the records that survive re-verification.
pub fn verified_witnesses(records: &[AcuteRecord], tol: &Tolerance) -> Vec<AcuteWitness> {
    records
        .iter()
        .filter(|r| r.verify(tol).unwrap_or(false))
        .map(|r| AcuteWitness {
            size: r.size as u64,
            dim: r.dim as u64,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::regular_simplex;

    #[test]
    fn append_and_read_back() {
        let dir = std::env::temp_dir().join(format!("dnormal-results-{}", std::process::id()));
        let path = dir.join("acute.jsonl");
        let _ = std::fs::remove_file(&path);
        let tet = regular_simplex(4).unwrap();
        let rec = AcuteRecord::new(&tet, 11).unwrap();
        append_record(&path, &rec).unwrap();
        append_record(&path, &rec).unwrap();
        let back = read_records(&path).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0], rec);
        let w = verified_witnesses(&back, &Tolerance::default());
        assert_eq!(w, vec![AcuteWitness { size: 4, dim: 3 }; 2]);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn forged_records_are_dropped() {
        let square = AcuteRecord {
            dim: 2,
            size: 4,
            margin: 0.1,
            seed: 0,
            points: vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 1.0],
            ],
        };
        assert!(verified_witnesses(&[square], &Tolerance::default()).is_empty());
    }
}
