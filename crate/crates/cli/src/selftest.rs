//! `edlab selftest`: recomputes everything from the manifest and compares.

use std::fmt;
use std::path::Path;

use clap::ValueEnum;

use edlab::chartab::{CharacterTable, Fp};
use edlab::db::{Database, BUNDLED_MANIFEST, MANIFEST_ENV};
use edlab::dsl::ManifestError;
use edlab::ed::{replay, Engine};
use edlab::group::GroupTable;
use edlab::repdim::abelian_rd_check;

use crate::CliError;

const SHOWN_DIFFS: usize = 10;
const FAST_ORDER: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    /// Orders up to 24.
    Fast,
    Full,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Suite {
    pub name: &'static str,
    pub checked: usize,
    pub diffs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub suites: Vec<Suite>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.diffs.is_empty())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            if s.diffs.is_empty() {
                writeln!(f, "PASS {} ({} checked)", s.name, s.checked)?;
            } else {
                writeln!(f, "FAIL {} ({} of {} differ)", s.name, s.diffs.len(), s.checked)?;
                for d in s.diffs.iter().take(SHOWN_DIFFS) {
                    writeln!(f, "  {d}")?;
                }
            }
        }
        writeln!(f, "{}", if self.passed() { "selftest passed" } else { "selftest FAILED" })
    }
}

fn manifest_text(path: Option<&Path>) -> Result<String, ManifestError> {
    let path = match path {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(MANIFEST_ENV).map(Into::into),
    };
    match path {
        Some(p) => std::fs::read_to_string(&p).map_err(|e| ManifestError::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        }),
        None => Ok(BUNDLED_MANIFEST.to_string()),
    }
}

/// Keeps comments and entries of order at most `max`.
fn restrict(text: &str, max: usize) -> String {
    text.lines()
        .filter(|l| {
            let l = l.trim();
            l.is_empty() || l.starts_with('#') || l.split('|').next().and_then(|o| o.trim().parse::<usize>().ok()).is_none_or(|o| o <= max)
        })
        .map(|l| format!("{l}\n"))
        .collect()
}

/// `Σd² = |G|`, one character per class and row orthogonality mod `p`.
fn check_table(g: &GroupTable, t: &CharacterTable) -> Result<(), String> {
    let cc = g.conjugacy_classes();
    if t.len() != cc.len() {
        return Err(format!("{} characters for {} classes", t.len(), cc.len()));
    }
    let squares: usize = t.degrees.iter().map(|d| d * d).sum();
    if squares != g.order() {
        return Err(format!("sum of squared degrees {squares}"));
    }
    let fp = Fp { p: t.prime.p };
    let inverse_class: Vec<usize> = (0..cc.len()).map(|k| cc.class_of(g.inv(cc.representative(k)))).collect();
    for i in 0..t.len() {
        for j in 0..t.len() {
            let s = (0..cc.len()).fold(0, |acc, k| {
                let term = fp.mul(cc.size(k) as u64 % fp.p, fp.mul(t.values[i][k], t.values[j][inverse_class[k]]));
                fp.add(acc, term)
            });
            let expect = if i == j { g.order() as u64 % fp.p } else { 0 };
            if s != expect {
                return Err(format!("characters {} and {} are not orthogonal", i + 1, j + 1));
            }
        }
    }
    Ok(())
}

pub fn run(manifest: Option<&Path>, level: Level, budget: u64) -> Result<Report, CliError> {
    let mut text = manifest_text(manifest)?;
    if level == Level::Fast {
        text = restrict(&text, FAST_ORDER);
    }
    let db = Database::from_manifest(&text)?;
    let mut engine = Engine::new(&db, budget)?;

    let mut chartab = Suite { name: "character tables", checked: 0, diffs: vec![] };
    let mut rd = Suite { name: "rd regression", checked: 0, diffs: vec![] };
    for r in db.records() {
        chartab.checked += 1;
        rd.checked += 1;
        let a = match r.analysis() {
            Ok(a) => a,
            Err(e) => {
                chartab.diffs.push(format!("{}: {e}", r.id()));
                continue;
            }
        };
        if let Err(e) = check_table(&r.group, &a.table) {
            chartab.diffs.push(format!("{}: {e}", r.id()));
        }
        if a.rd != r.entry.rd {
            rd.diffs.push(format!("{}: rd {} expected {}", r.id(), a.rd, r.entry.rd));
        }
        if r.group.is_abelian() {
            if let Err(e) = abelian_rd_check(&r.group, &a.table) {
                rd.diffs.push(format!("{}: {e}", r.id()));
            }
        }
    }

    let inf = engine.run()?;
    let mut ed = Suite { name: "ed regression", checked: 0, diffs: vec![] };
    for r in db.records() {
        ed.checked += 1;
        let e = &r.entry;
        match inf.get(r.id()) {
            Some(f) if (f.lo, f.hi) == (e.ed_lo, e.ed_hi) => {}
            Some(f) => ed.diffs.push(format!("{}: ed [{}, {}] expected [{}, {}]", r.id(), f.lo, f.hi, e.ed_lo, e.ed_hi)),
            None => ed.diffs.push(format!("{}: no fact", r.id())),
        }
    }

    let mut traces = Suite { name: "trace replay", checked: 0, diffs: vec![] };
    match replay(&db, &inf, engine.checker()) {
        Ok(n) => traces.checked = n,
        Err(e) => traces.diffs.push(e.to_string()),
    }

    let mut rerun = Suite { name: "idempotent rerun", checked: inf.facts.len(), diffs: vec![] };
    let again = engine.resume(inf.facts.clone())?;
    for (a, b) in inf.facts.iter().zip(&again.facts) {
        if a != b {
            rerun.diffs.push(format!("{}: [{}, {}] became [{}, {}]", a.id, a.lo, a.hi, b.lo, b.hi));
        }
    }

    Ok(Report { suites: vec![chartab, rd, ed, traces, rerun] })
}
