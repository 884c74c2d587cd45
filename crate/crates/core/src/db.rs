//! The bundled group database: every group of order at most 63 plus a few
//! larger overgroups, each realized from its manifest construction.

use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::chartab::{CharacterTable, ChartabError};
use crate::dsl::{parse_manifest, realize_construction, GapId, ManifestEntry, ManifestError};
use crate::group::morphism::{fingerprint, is_isomorphic, Fingerprint};
use crate::group::GroupTable;
use crate::repdim::{representation_dimension, FaithfulWitness};

pub const BUNDLED_MANIFEST: &str = include_str!("../data/groups.manifest");

/// Environment variable naming a manifest file to use instead of the bundled one.
pub const MANIFEST_ENV: &str = "EDLAB_MANIFEST";

/// Largest order for which the database is complete.
pub const COVERED_ORDER: usize = 63;

#[derive(Debug)]
pub struct Analysis {
    pub table: CharacterTable,
    pub rd: usize,
    pub witness: FaithfulWitness,
}

#[derive(Debug)]
pub struct Record {
    pub entry: ManifestEntry,
    pub group: GroupTable,
    pub fingerprint: Fingerprint,
    analysis: OnceLock<Result<Analysis, ChartabError>>,
}

impl Record {
    pub fn id(&self) -> GapId {
        self.entry.id
    }

    /// Character table and `rd`, computed on first use.
    pub fn analysis(&self) -> Result<&Analysis, &ChartabError> {
        self.analysis
            .get_or_init(|| {
                let table = CharacterTable::compute(&self.group)?;
                let (rd, witness) = representation_dimension(&self.group, &table);
                Ok(Analysis { table, rd, witness })
            })
            .as_ref()
    }

    pub fn rd(&self) -> usize {
        self.analysis().expect("character table of a database group").rd
    }
}

#[derive(Debug)]
pub struct Database {
    records: Vec<Record>,
    by_id: HashMap<GapId, usize>,
    by_fingerprint: HashMap<Fingerprint, Vec<usize>>,
}

impl Database {
    /// Realizes and verifies every entry of a manifest.
    pub fn from_manifest(text: &str) -> Result<Database, ManifestError> {
        let entries = parse_manifest(text)?;
        let realized: Vec<Result<GroupTable, ManifestError>> = entries
            .par_iter()
            .map(|e| {
                realize_construction(&e.construction).map_err(|source| ManifestError::Construction {
                    line: e.line,
                    id: e.id,
                    source,
                })
            })
            .collect();
        let mut records = Vec::with_capacity(entries.len());
        for (entry, group) in entries.into_iter().zip(realized) {
            let group = group?;
            if group.order() != entry.id.order {
                return Err(ManifestError::Conflict {
                    ids: vec![entry.id],
                    reason: format!("construction has order {}", group.order()),
                });
            }
            records.push(Record {
                fingerprint: fingerprint(&group),
                entry,
                group,
                analysis: OnceLock::new(),
            });
        }
        records.sort_by_key(|r| r.id());
        let by_id = records.iter().enumerate().map(|(i, r)| (r.id(), i)).collect();
        let mut by_fingerprint: HashMap<Fingerprint, Vec<usize>> = HashMap::new();
        for (i, r) in records.iter().enumerate() {
            by_fingerprint.entry(r.fingerprint.clone()).or_default().push(i);
        }
        let db = Database {
            records,
            by_id,
            by_fingerprint,
        };
        db.check_distinct()?;
        Ok(db)
    }

    pub fn bundled() -> Database {
        Database::from_manifest(BUNDLED_MANIFEST).expect("bundled manifest verifies")
    }

    pub fn load(path: &Path) -> Result<Database, ManifestError> {
        let text = std::fs::read_to_string(path).map_err(|e| ManifestError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Database::from_manifest(&text)
    }

    /// The manifest named by `EDLAB_MANIFEST`, or the bundled one.
    pub fn load_default() -> Result<Database, ManifestError> {
        match std::env::var_os(MANIFEST_ENV) {
            Some(path) => Database::load(Path::new(&path)),
            None => Database::from_manifest(BUNDLED_MANIFEST),
        }
    }

    /// Same-order entries must be pairwise non-isomorphic, otherwise the
    /// labels are meaningless.
    fn check_distinct(&self) -> Result<(), ManifestError> {
        let clash = self.by_fingerprint.values().par_bridge().find_map_any(|bucket| {
            for (k, &i) in bucket.iter().enumerate() {
                for &j in &bucket[k + 1..] {
                    let (a, b) = (&self.records[i], &self.records[j]);
                    match is_isomorphic(&a.group, &b.group) {
                        Ok(None) => {}
                        Ok(Some(_)) => return Some((a.id(), b.id(), "isomorphic constructions".to_string())),
                        Err(e) => return Some((a.id(), b.id(), e.to_string())),
                    }
                }
            }
            None
        });
        match clash {
            Some((a, b, reason)) => Err(ManifestError::Conflict {
                ids: vec![a.min(b), a.max(b)],
                reason,
            }),
            None => Ok(()),
        }
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: GapId) -> Option<&Record> {
        self.by_id.get(&id).map(|&i| &self.records[i])
    }

    pub fn index_of(&self, id: GapId) -> Option<usize> {
        self.by_id.get(&id).copied()
    }

    /// Computes every character table and `rd` in parallel.
    pub fn analyze_all(&self) -> Result<(), (GapId, ChartabError)> {
        self.records
            .par_iter()
            .try_for_each(|r| r.analysis().map(|_| ()).map_err(|e| (r.id(), e.clone())))
    }

    /// Database label of a group isomorphic to `g`, if any.
    pub fn identify(&self, g: &GroupTable) -> Option<GapId> {
        self.identify_index(g).map(|i| self.records[i].id())
    }

    pub fn identify_index(&self, g: &GroupTable) -> Option<usize> {
        let bucket = self.by_fingerprint.get(&fingerprint(g))?;
        bucket
            .iter()
            .copied()
            .find(|&i| matches!(is_isomorphic(g, &self.records[i].group), Ok(Some(_))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::realize_str;

    #[test]
    fn rejects_isomorphic_entries() {
        let text = "6|1|S3|D(6)|2|1|1|ED1a|\n6|2|S3 again|S(3)|2|1|1|ED1a|\n";
        assert!(matches!(
            Database::from_manifest(text),
            Err(ManifestError::Conflict { .. })
        ));
    }

    #[test]
    fn rejects_order_mismatch() {
        let text = "8|3|D8|D(6)|2|1|1|ED1a|\n";
        assert!(matches!(
            Database::from_manifest(text),
            Err(ManifestError::Conflict { .. })
        ));
    }

    #[test]
    fn identifies_small_groups() {
        let db = Database::from_manifest(
            "4|1|C4|C(4)|1|1|1|AB|\n4|2|C2 x C2|C(2) x C(2)|2|2|2|AB|\n6|1|S3|D(6)|2|1|1|ED1a|\n6|2|C6|C(6)|1|1|1|AB|\n",
        )
        .unwrap();
        assert_eq!(db.identify(&realize_str("C(2) x C(3)").unwrap()), Some(GapId::new(6, 2)));
        assert_eq!(db.identify(&realize_str("S(3)").unwrap()), Some(GapId::new(6, 1)));
        assert_eq!(
            db.identify(&realize_str("C(2)^2 : C(3) [mat 01 11]").unwrap()),
            None
        );
        assert_eq!(db.get(GapId::new(6, 1)).unwrap().rd(), 2);
    }
}
