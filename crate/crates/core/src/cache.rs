//! Content-addressed on-disk cache of built complexes.
//!
//! Entries are JSON dumps of the cells and boundary triplets, stored under
//! the SHA-256 of the request (graph JSON, particle count, sinks, model
//! kind, code version). Graphs are not canonicalized: relabeling vertices
//! gives a different key.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::complex::{build_abrams_oracle, build_model, BuildOptions, CellStore, CubeComplex, ModelKind};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::homology::SparseIntMatrix;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable that overrides the cache directory.
pub const CACHE_DIR_ENV: &str = "GRAPHCONF_CACHE_DIR";

#[derive(Serialize)]
struct KeyInput<'a> {
    graph: &'a Graph,
    n: usize,
    sinks: &'a BTreeSet<VertexId>,
    kind: ModelKind,
    version: &'a str,
}

/// Hex SHA-256 of the canonical serialization of the request.
pub fn cache_key(graph: &Graph, n: usize, sinks: &BTreeSet<VertexId>, kind: ModelKind, version: &str) -> String {
    let input = KeyInput {
        graph,
        n,
        sinks,
        kind,
        version,
    };
    let bytes = serde_json::to_vec(&input).expect("key serialization cannot fail");
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct MatrixDump {
    rows: usize,
    cols: usize,
    /// `(row, col, value)` with decimal values.
    entries: Vec<(usize, usize, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexDump {
    version: String,
    graph: Graph,
    n: usize,
    sinks: BTreeSet<VertexId>,
    kind: ModelKind,
    cells: CellStore,
    boundaries: Vec<MatrixDump>,
}

impl ComplexDump {
    pub fn of(c: &CubeComplex) -> ComplexDump {
        let boundaries = (0..=c.top_dim())
            .map(|q| {
                let m = c.boundary(q);
                MatrixDump {
                    rows: m.rows(),
                    cols: m.cols(),
                    entries: m.triplets().map(|(i, j, v)| (i, j, v.to_string())).collect(),
                }
            })
            .collect();
        ComplexDump {
            version: CODE_VERSION.to_string(),
            graph: c.graph().clone(),
            n: c.num_particles(),
            sinks: c.sinks().clone(),
            kind: c.kind(),
            cells: c.cells().clone(),
            boundaries,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("dump serialization cannot fail")
    }

    pub fn into_complex(self) -> Result<CubeComplex> {
        let counts = self.cells.counts();
        let mut boundaries = Vec::with_capacity(self.boundaries.len());
        for (q, m) in self.boundaries.into_iter().enumerate() {
            let rows = if q == 0 { 0 } else { counts.get(q - 1).copied().unwrap_or(0) };
            if m.rows != rows || m.cols != counts.get(q).copied().unwrap_or(0) {
                return Err(Error::InvalidState(format!("boundary {q} has the wrong shape")));
            }
            let entries = m
                .entries
                .into_iter()
                .map(|(i, j, v)| {
                    let v: BigInt = v
                        .parse()
                        .map_err(|_| Error::InvalidState(format!("bad matrix entry {v:?}")))?;
                    Ok((i, j, v))
                })
                .collect::<Result<Vec<_>>>()?;
            boundaries.push(SparseIntMatrix::from_triplets(m.rows, m.cols, entries)?);
        }
        Ok(CubeComplex::assemble(
            self.graph,
            self.n,
            self.sinks,
            self.kind,
            None,
            self.cells,
            boundaries,
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// The entry was unreadable; it was rebuilt and overwritten.
    Repaired,
}

#[derive(Clone, Debug)]
pub struct ComplexCache {
    dir: PathBuf,
}

impl ComplexCache {
    pub fn new(dir: impl Into<PathBuf>) -> ComplexCache {
        ComplexCache { dir: dir.into() }
    }

    /// The directory named by the environment, else `fallback`.
    pub fn from_env(fallback: Option<PathBuf>) -> Option<ComplexCache> {
        std::env::var_os(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .or(fallback)
            .map(ComplexCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// Loads the complex for the request, building and storing it on a miss
    /// or a corrupt entry.
    pub fn load_or_build(
        &self,
        graph: &Graph,
        n: usize,
        sinks: &BTreeSet<VertexId>,
        kind: ModelKind,
        opts: &BuildOptions,
    ) -> Result<(CubeComplex, CacheStatus)> {
        let key = cache_key(graph, n, sinks, kind, CODE_VERSION);
        let path = self.path_for(&key);
        let mut status = CacheStatus::Miss;
        if path.exists() {
            match read_entry(&path, n, sinks, kind) {
                Ok(c) => return Ok((c, CacheStatus::Hit)),
                Err(e) => {
                    log::warn!("cache entry {} is corrupt ({e}); recomputing", path.display());
                    status = CacheStatus::Repaired;
                }
            }
        }
        let c = match kind {
            ModelKind::Cubical => build_model(graph, n, sinks, opts)?,
            ModelKind::AbramsOracle => build_abrams_oracle(graph, n, opts)?,
        };
        fs::create_dir_all(&self.dir)?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, ComplexDump::of(&c).to_bytes())?;
        fs::rename(&tmp, &path)?;
        Ok((c, status))
    }
}

fn read_entry(path: &Path, n: usize, sinks: &BTreeSet<VertexId>, kind: ModelKind) -> Result<CubeComplex> {
    let bytes = fs::read(path)?;
    let dump: ComplexDump = serde_json::from_slice(&bytes)?;
    if dump.version != CODE_VERSION || dump.n != n || &dump.sinks != sinks || dump.kind != kind {
        return Err(Error::InvalidState("entry does not match its key".into()));
    }
    let c = dump.into_complex()?;
    if !c.boundary_squares_to_zero() {
        return Err(Error::InvalidState("cached boundaries do not square to zero".into()));
    }
    Ok(c)
}
