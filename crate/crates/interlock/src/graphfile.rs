//! `graph.bin`: little-endian CSR adjacency plus the clique cover, with a
//! JSON sidecar holding counts, node attributes and the binary's SHA-256.
//!
//! Binary layout after the 8-byte magic: `version: u32`, then the lengths of
//! the four arrays as `u64`, then the arrays themselves (`offsets: u64`,
//! `targets: u32`, `clique_offsets: u64`, `clique_members: u32`).

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use interlock_core::graph::{NodeAttrs, ProjectedGraph};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::files;

const MAGIC: &[u8; 8] = b"ILKGRAPH";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSidecar {
    pub format_version: u32,
    pub nodes: usize,
    pub edges: usize,
    pub cliques: usize,
    pub sha256: String,
    pub attributes: Vec<NodeAttrs>,
}

pub fn sidecar_path(bin: &Path) -> PathBuf {
    bin.with_extension("json")
}

fn write_u64s<W: Write>(w: &mut W, xs: impl Iterator<Item = u64>) -> std::io::Result<()> {
    for x in xs {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

fn write_u32s<W: Write>(w: &mut W, xs: &[u32]) -> std::io::Result<()> {
    for x in xs {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

pub fn write_graph(bin: &Path, pg: &ProjectedGraph) -> Result<GraphSidecar> {
    let (offsets, targets, clique_offsets, clique_members) = pg.raw_parts();
    let mut w = files::create(bin)?;
    (|| -> std::io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        for len in [offsets.len(), targets.len(), clique_offsets.len(), clique_members.len()] {
            w.write_all(&(len as u64).to_le_bytes())?;
        }
        write_u64s(&mut w, offsets.iter().map(|&x| x as u64))?;
        write_u32s(&mut w, targets)?;
        write_u64s(&mut w, clique_offsets.iter().map(|&x| x as u64))?;
        write_u32s(&mut w, clique_members)?;
        w.flush()
    })()
    .map_err(|e| Error::io(bin, e))?;
    drop(w);
    let sidecar = GraphSidecar {
        format_version: VERSION,
        nodes: pg.n(),
        edges: pg.edge_count(),
        cliques: pg.clique_count(),
        sha256: files::sha256_hex(bin)?,
        attributes: pg.attrs().to_vec(),
    };
    files::write_json(&sidecar_path(bin), &sidecar, false)?;
    Ok(sidecar)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    path: &'a Path,
}

impl Cursor<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        if self.bytes.len() < n {
            return Err(Error::parse(self.path, "truncated graph file"));
        }
        let (head, rest) = self.bytes.split_at(n);
        self.bytes = rest;
        Ok(head)
    }

    fn u64s(&mut self, n: usize) -> Result<Vec<u64>> {
        let raw = self.take(n.checked_mul(8).ok_or_else(|| Error::parse(self.path, "array too large"))?)?;
        Ok(raw.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().unwrap())).collect())
    }

    fn u32s(&mut self, n: usize) -> Result<Vec<u32>> {
        let raw = self.take(n.checked_mul(4).ok_or_else(|| Error::parse(self.path, "array too large"))?)?;
        Ok(raw.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect())
    }
}

/// Loads a graph and its sidecar, checking the hash and every structural
/// invariant.
pub fn read_graph(bin: &Path) -> Result<ProjectedGraph> {
    let sidecar: GraphSidecar = files::read_json(&sidecar_path(bin))?;
    let mut bytes = Vec::new();
    files::open(bin)?.read_to_end(&mut bytes).map_err(|e| Error::io(bin, e))?;
    if files::sha256_bytes(&bytes) != sidecar.sha256 {
        return Err(Error::parse(bin, "SHA-256 does not match the sidecar"));
    }
    let mut cur = Cursor { bytes: &bytes, path: bin };
    if cur.take(8)? != MAGIC {
        return Err(Error::parse(bin, "not an interlock graph file"));
    }
    let version = u32::from_le_bytes(cur.take(4)?.try_into().unwrap());
    if version != VERSION {
        return Err(Error::parse(bin, format!("unsupported graph format version {version}")));
    }
    let lens = cur.u64s(4)?;
    let to_usize = |xs: Vec<u64>| xs.into_iter().map(|x| x as usize).collect::<Vec<usize>>();
    let offsets = to_usize(cur.u64s(lens[0] as usize)?);
    let targets = cur.u32s(lens[1] as usize)?;
    let clique_offsets = to_usize(cur.u64s(lens[2] as usize)?);
    let clique_members = cur.u32s(lens[3] as usize)?;
    if !cur.bytes.is_empty() {
        return Err(Error::parse(bin, "trailing bytes after graph data"));
    }
    let pg = ProjectedGraph::from_raw(offsets, targets, clique_offsets, clique_members, sidecar.attributes)
        .map_err(|e| Error::parse(bin, e))?;
    if pg.edge_count() != sidecar.edges {
        return Err(Error::parse(bin, "edge count does not match the sidecar"));
    }
    Ok(pg)
}

/// Whitespace-separated `u v` director-id pairs, one edge per line, `u < v`.
pub fn export_edgelist(path: &Path, pg: &ProjectedGraph) -> Result<()> {
    let mut w = files::create(path)?;
    let id = |u: u32| pg.attrs()[u as usize].director_id;
    (|| -> std::io::Result<()> {
        for (u, v) in pg.edges() {
            writeln!(w, "{} {}", id(u), id(v))?;
        }
        w.flush()
    })()
    .map_err(|e| Error::io(path, e))
}
