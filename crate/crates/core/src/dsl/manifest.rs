use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{parse_construction, Construction, DslError};

/// Small-groups library label `(order, index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GapId {
    pub order: usize,
    pub index: usize,
}

impl GapId {
    pub const fn new(order: usize, index: usize) -> Self {
        GapId { order, index }
    }
}

impl fmt::Display for GapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.order, self.index)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub id: GapId,
    pub structure: String,
    pub expr: String,
    pub construction: Construction,
    pub rd: usize,
    pub ed_lo: usize,
    pub ed_hi: usize,
    pub tag: String,
    pub auxiliary: bool,
    /// 1-based line in the manifest text.
    pub line: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ManifestError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line} {id}: {source}")]
    Construction {
        line: usize,
        id: GapId,
        source: DslError,
    },
    #[error("manifest conflict between {ids:?}: {reason}")]
    Conflict { ids: Vec<GapId>, reason: String },
    #[error("cannot read manifest {path}: {message}")]
    Io { path: String, message: String },
}

pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>, ManifestError> {
    let mut out = Vec::new();
    for (k, raw) in text.split('\n').enumerate() {
        let line = k + 1;
        let err = |message: String| ManifestError::Format { line, message };
        if raw.ends_with('\r') {
            return Err(err("CR line ending".into()));
        }
        if raw.ends_with(' ') || raw.ends_with('\t') {
            return Err(err("trailing whitespace".into()));
        }
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('|').collect();
        if fields.len() != 9 {
            return Err(err(format!("expected 9 fields, found {}", fields.len())));
        }
        let num = |i: usize, name: &str| -> Result<usize, ManifestError> {
            fields[i]
                .parse()
                .map_err(|_| err(format!("{name} is not a non-negative integer: {:?}", fields[i])))
        };
        let id = GapId::new(num(0, "order")?, num(1, "index")?);
        let (rd, ed_lo, ed_hi) = (num(4, "rd")?, num(5, "edLo")?, num(6, "edHi")?);
        if !(1 <= ed_lo && ed_lo <= ed_hi && ed_hi <= rd) {
            return Err(err(format!("{id}: need 1 ≤ edLo ≤ edHi ≤ rd")));
        }
        let auxiliary = match fields[8] {
            "aux" => true,
            "" => false,
            other => return Err(err(format!("aux flag must be empty or 'aux', found {other:?}"))),
        };
        if !auxiliary && id.order > 63 {
            return Err(err(format!("{id}: non-auxiliary entries must have order ≤ 63")));
        }
        let construction = parse_construction(fields[3]).map_err(|source| {
            ManifestError::Construction { line, id, source }
        })?;
        out.push(ManifestEntry {
            id,
            structure: fields[2].to_string(),
            expr: fields[3].to_string(),
            construction,
            rd,
            ed_lo,
            ed_hi,
            tag: fields[7].to_string(),
            auxiliary,
            line,
        });
    }
    let mut ids: Vec<GapId> = out.iter().map(|e| e.id).collect();
    ids.sort();
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(ManifestError::Conflict {
            ids: vec![w[0]],
            reason: "duplicate id".into(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries() {
        let text = "# comment\n6|1|S3|D(6)|2|1|1|ED1a|\n120|34|S5|S(5)|4|2|2|AUX|aux\n";
        let entries = parse_manifest(text).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].id, GapId::new(6, 1));
        assert_eq!((entries[0].rd, entries[0].ed_lo, entries[0].ed_hi), (2, 1, 1));
        assert!(entries[1].auxiliary);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(parse_manifest("6|1|S3|D(6)|2|1|1|ED1a| \n"), Err(ManifestError::Format { .. })));
        assert!(matches!(parse_manifest("6|1|S3|D(6)|2|1|1|ED1a|\r\n"), Err(ManifestError::Format { .. })));
        assert!(matches!(parse_manifest("6|1|S3|D(6)|2|2|1|ED1a|\n"), Err(ManifestError::Format { .. })));
        assert!(matches!(parse_manifest("6|1|S3|D(6|2|1|1|ED1a|\n"), Err(ManifestError::Construction { .. })));
        assert!(matches!(
            parse_manifest("6|1|S3|D(6)|2|1|1|ED1a|\n6|1|S3|D(6)|2|1|1|ED1a|\n"),
            Err(ManifestError::Conflict { .. })
        ));
    }
}
