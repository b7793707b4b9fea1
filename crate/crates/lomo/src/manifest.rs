//! JSON dataset manifests pointing at LSEQ files.
//!
//! ```json
//! {"version": 1, "dim": 16, "entries": [
//!   {"path": "a.lseq", "label": 1, "group": "s01", "fold": 0}
//! ]}
//! ```
//!
//! Paths are relative to the manifest's directory. An entry's label must
//! match every sequence in its file; `group` and `fold`, when present, apply
//! to all of them.

use std::path::{Path, PathBuf};

use lomo_core::SequenceSample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lseq::read_lseq;

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: u32,
    pub dim: usize,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub path: String,
    pub label: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fold: Option<usize>,
}

/// Samples of a manifest in entry order, with the fold of each.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub dim: usize,
    pub samples: Vec<SequenceSample>,
    pub folds: Vec<Option<usize>>,
}

impl Dataset {
    pub fn has_folds(&self) -> bool {
        self.folds.iter().any(Option::is_some)
    }
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })?;
    if manifest.version != MANIFEST_VERSION {
        return Err(Error::format(path, format!("unsupported manifest version {}", manifest.version)));
    }
    if manifest.dim == 0 {
        return Err(Error::format(path, "dim must be positive"));
    }
    Ok(manifest)
}

pub fn write_manifest(path: impl AsRef<Path>, manifest: &Manifest) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn resolve(base: &Path, entry: &str) -> PathBuf {
    let p = Path::new(entry);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Reads a manifest and every file it references.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let manifest = read_manifest(path)?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut samples = Vec::new();
    let mut folds = Vec::new();
    for entry in &manifest.entries {
        let file = resolve(base, &entry.path);
        for s in read_lseq(&file)? {
            if s.dim() != manifest.dim {
                return Err(Error::format(&file, format!("dimension {} but manifest says {}", s.dim(), manifest.dim)));
            }
            if s.label() != entry.label {
                return Err(Error::format(
                    &file,
                    format!("sequence `{}` has label {} but its entry says {}", s.id(), s.label(), entry.label),
                ));
            }
            let s = match &entry.group {
                Some(g) => s.with_group(Some(g.clone())),
                None => s,
            };
            samples.push(s);
            folds.push(entry.fold);
        }
    }
    if samples.is_empty() {
        return Err(Error::format(path, "manifest lists no sequences"));
    }
    let mut seen = std::collections::BTreeSet::new();
    if let Some(dup) = samples.iter().find(|s| !seen.insert(s.id())) {
        return Err(Error::format(path, format!("duplicate sequence id `{}`", dup.id())));
    }
    Ok(Dataset { dim: manifest.dim, samples, folds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lseq::write_lseq;

    fn sample(id: &str, label: i64) -> SequenceSample {
        SequenceSample::new(id, label, None, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap()
    }

    #[test]
    fn loads_relative_paths_and_overrides() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir(dir.path().join("seqs")).unwrap();
        write_lseq(dir.path().join("seqs/p.lseq"), &[sample("a", 1), sample("b", 1)]).unwrap();
        write_lseq(dir.path().join("seqs/n.lseq"), &[sample("c", -1)]).unwrap();
        let m = Manifest {
            version: 1,
            dim: 2,
            entries: vec![
                Entry { path: "seqs/p.lseq".into(), label: 1, group: Some("g".into()), fold: Some(1) },
                Entry { path: "seqs/n.lseq".into(), label: -1, group: None, fold: None },
            ],
        };
        let path = dir.path().join("m.json");
        write_manifest(&path, &m).unwrap();
        assert_eq!(read_manifest(&path).unwrap(), m);
        let d = load_dataset(&path).unwrap();
        assert_eq!(d.samples.len(), 3);
        assert_eq!(d.samples[1].group(), Some("g"));
        assert_eq!(d.samples[2].group(), None);
        assert_eq!(d.folds, vec![Some(1), Some(1), None]);
    }

    #[test]
    fn rejects_label_and_dim_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        write_lseq(dir.path().join("p.lseq"), &[sample("a", 1)]).unwrap();
        let write = |label: i64, dim: usize| {
            let m = Manifest {
                version: 1,
                dim,
                entries: vec![Entry { path: "p.lseq".into(), label, group: None, fold: None }],
            };
            let path = dir.path().join("m.json");
            write_manifest(&path, &m).unwrap();
            load_dataset(&path)
        };
        assert!(write(1, 2).is_ok());
        assert!(matches!(write(-1, 2), Err(Error::Format { .. })));
        assert!(matches!(write(1, 3), Err(Error::Format { .. })));
    }

    #[test]
    fn missing_file_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        std::fs::write(&path, r#"{"version":1,"dim":2,"entries":[{"path":"nope.lseq","label":1}]}"#).unwrap();
        assert!(matches!(load_dataset(&path), Err(Error::Io { .. })));
        assert!(matches!(load_dataset(dir.path().join("absent.json")), Err(Error::Io { .. })));
    }

    #[test]
    fn bad_json_and_version() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        std::fs::write(&path, "{\n\"version\": 1,\n\"dim\": }").unwrap();
        assert!(matches!(read_manifest(&path), Err(Error::Parse { line: 3, .. })));
        std::fs::write(&path, r#"{"version":2,"dim":2,"entries":[]}"#).unwrap();
        assert!(matches!(read_manifest(&path), Err(Error::Format { .. })));
    }
}
