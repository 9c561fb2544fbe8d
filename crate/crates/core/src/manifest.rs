//! Batch manifests: base circuits mapped to compiled-version QASM files.
//!
//! ```json
//! {"bases": [{"name": "qft_4", "versions": [{"compiler": "a", "file": "qft_4/a.qasm"}]}]}
//! ```
//!
//! Relative file paths are resolved against the manifest's directory.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compare::BaseCircuit;
use crate::qasm::{parse, ParseErrors};

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid manifest {path}: {message}")]
    Schema { path: PathBuf, message: String },
    #[error("{path}: {errors}")]
    Parse { path: PathBuf, errors: ParseErrors },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestVersion {
    pub compiler: String,
    pub file: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestBase {
    pub name: String,
    pub versions: Vec<ManifestVersion>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub bases: Vec<ManifestBase>,
    /// Directory that relative version paths are resolved against.
    #[serde(skip)]
    pub root: PathBuf,
}

impl Manifest {
    pub fn from_json_str(text: &str, root: impl Into<PathBuf>) -> Result<Self, ManifestError> {
        let root = root.into();
        let schema = |message: String| ManifestError::Schema {
            path: root.clone(),
            message,
        };
        let mut manifest: Manifest = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
        let mut names = BTreeSet::new();
        for base in &manifest.bases {
            if !names.insert(base.name.as_str()) {
                return Err(schema(format!("duplicate base circuit {:?}", base.name)));
            }
            let mut compilers = BTreeSet::new();
            for v in &base.versions {
                if !compilers.insert(v.compiler.as_str()) {
                    return Err(schema(format!(
                        "base {:?} lists compiler {:?} twice",
                        base.name, v.compiler
                    )));
                }
            }
        }
        manifest.root = root;
        Ok(manifest)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ManifestError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| ManifestError::Io {
            path: path.to_owned(),
            source,
        })?;
        let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_json_str(&text, root).map_err(|e| match e {
            ManifestError::Schema { message, .. } => ManifestError::Schema {
                path: path.to_owned(),
                message,
            },
            other => other,
        })
    }

    pub fn resolve(&self, file: &Path) -> PathBuf {
        if file.is_absolute() {
            file.to_owned()
        } else {
            self.root.join(file)
        }
    }

    /// Reads and parses every version file, in manifest order.
    pub fn load_circuits(&self) -> Result<Vec<BaseCircuit>, ManifestError> {
        self.bases
            .iter()
            .map(|base| {
                let versions = base
                    .versions
                    .iter()
                    .map(|v| {
                        let path = self.resolve(&v.file);
                        let text = fs::read_to_string(&path).map_err(|source| ManifestError::Io {
                            path: path.clone(),
                            source,
                        })?;
                        let circuit = parse(&text).map_err(|errors| ManifestError::Parse { path, errors })?;
                        Ok((v.compiler.clone(), circuit))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(BaseCircuit {
                    name: base.name.clone(),
                    versions,
                })
            })
            .collect()
    }
}
