//! On-disk JSON cache of enumerated family groups.
//!
//! One file per `(family, q)`. The payload holds element keys, generators,
//! the class partition and the subgroup index sets; a SHA-256 of the
//! serialized payload sits next to it. A file that fails to parse, carries the
//! wrong version or hash, or disagrees with recomputed subgroup data is
//! rebuilt and overwritten.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::enumerate::{build_group, family_label, EnumeratedGroup, GroupKind, GroupParts};
use super::family::GroupFamily;
use super::subgroups::Reductive;
use super::GroupError;
use crate::field::FieldTable;

pub const CACHE_ENV: &str = "GENREST_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".genrest-cache";
pub const CACHE_FORMAT: &str = "genrest-group-cache";
pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    format: String,
    version: u32,
    family: GroupFamily,
    q: u32,
    p: u32,
    k: u32,
    modulus: Vec<u32>,
    content_hash: String,
    payload: Payload,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct Payload {
    label: String,
    composition: Vec<usize>,
    simple_positions: Vec<(usize, usize)>,
    elements: Vec<u64>,
    generators: Vec<u32>,
    classes: Vec<Vec<u32>>,
    subgroups: SubgroupSets,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct SubgroupSets {
    borel: Vec<u32>,
    torus: Vec<u32>,
    unipotent: Vec<u32>,
    center: Vec<u32>,
    long_element: u32,
    parabolics: Vec<ParabolicSets>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct ParabolicSets {
    tag: String,
    composition: Vec<usize>,
    members: Vec<u32>,
    radical: Vec<u32>,
    levi: Vec<u32>,
}

fn subgroup_sets(r: &Reductive) -> SubgroupSets {
    let d = &r.data;
    SubgroupSets {
        borel: d.borel.clone(),
        torus: d.torus.clone(),
        unipotent: d.unipotent.clone(),
        center: d.center.clone(),
        long_element: d.long_element,
        parabolics: d
            .parabolics
            .iter()
            .map(|p| ParabolicSets {
                tag: p.tag.clone(),
                composition: p.composition.clone(),
                members: p.members.clone(),
                radical: p.radical.clone(),
                levi: p.levi_embedding.clone(),
            })
            .collect(),
    }
}

fn payload(r: &Reductive) -> Payload {
    let g = &r.group;
    Payload {
        label: g.label().to_string(),
        composition: g.composition().to_vec(),
        simple_positions: g.simple_root_positions().to_vec(),
        elements: g.keys().to_vec(),
        generators: g.generators().to_vec(),
        classes: g.classes().iter().map(|c| c.members.clone()).collect(),
        subgroups: subgroup_sets(r),
    }
}

fn hash_payload(p: &Payload) -> String {
    let bytes = serde_json::to_vec(p).expect("payload serializes");
    hex::encode(Sha256::digest(&bytes))
}

/// Serialized cache entry for a built group. Deterministic for a given group.
pub fn encode(family: GroupFamily, r: &Reductive) -> Vec<u8> {
    let f = r.group.field();
    let payload = payload(r);
    let file = CacheFile {
        format: CACHE_FORMAT.into(),
        version: CACHE_VERSION,
        family,
        q: f.q(),
        p: f.p(),
        k: f.k(),
        modulus: f.modulus().to_vec(),
        content_hash: hash_payload(&payload),
        payload,
    };
    let mut out = serde_json::to_vec(&file).expect("cache file serializes");
    out.push(b'\n');
    out
}

/// Decode and validate a cache entry.
pub fn decode(bytes: &[u8], family: GroupFamily, field: Arc<FieldTable>) -> Result<Reductive, GroupError> {
    let bad = |m: &str| GroupError::Cache(m.to_string());
    let file: CacheFile = serde_json::from_slice(bytes).map_err(|e| GroupError::Cache(e.to_string()))?;
    if file.format != CACHE_FORMAT || file.version != CACHE_VERSION {
        return Err(bad("format or version mismatch"));
    }
    if file.family != family || file.q != field.q() || file.modulus != field.modulus() {
        return Err(bad("entry is for a different group or field"));
    }
    if hash_payload(&file.payload) != file.content_hash {
        return Err(bad("content hash mismatch"));
    }
    let Payload { label, composition, simple_positions, elements, generators, classes, subgroups } = file.payload;
    if label != family_label(family, field.q()) {
        return Err(bad("label mismatch"));
    }
    let parts = GroupParts {
        label,
        kind: GroupKind::Family(family),
        composition,
        simple_positions,
        keys: elements,
        generators,
        classes,
    };
    let group = Arc::new(EnumeratedGroup::from_parts(parts, field, family.dim())?);
    let r = Reductive::new(group)?;
    if subgroup_sets(&r) != subgroups {
        return Err(bad("subgroup index sets disagree with the element list"));
    }
    Ok(r)
}

#[derive(Debug, Clone)]
pub struct GroupCache {
    dir: PathBuf,
}

impl GroupCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        GroupCache { dir: dir.into() }
    }

    /// Directory from `GENREST_CACHE`, defaulting to `./.genrest-cache`.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
        GroupCache::new(dir)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, family: GroupFamily, q: u32) -> PathBuf {
        self.dir.join(format!("{}-q{}.json", family.tag(), q))
    }

    /// Load a valid entry, or build the group and (re)write the entry.
    pub fn load_or_build(&self, family: GroupFamily, field: Arc<FieldTable>) -> Result<Reductive, GroupError> {
        let path = self.path(family, field.q());
        match fs::read(&path) {
            Ok(bytes) => match decode(&bytes, family, field.clone()) {
                Ok(r) => {
                    log::debug!("cache hit {}", path.display());
                    return Ok(r);
                }
                Err(e) => log::warn!("discarding cache entry {}: {e}", path.display()),
            },
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => log::warn!("cannot read cache entry {}: {e}", path.display()),
        }
        let r = Reductive::new(Arc::new(build_group(family, field)?))?;
        if let Err(e) = self.store(family, &r) {
            log::warn!("cannot write cache entry {}: {e}", path.display());
        }
        Ok(r)
    }

    pub fn store(&self, family: GroupFamily, r: &Reductive) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(family, r.group.field().q());
        let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&encode(family, r))?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)
    }
}
