//! Stages of the command-line pipeline with content-addressed outputs.
//!
//! Every stage writes `stem-<hash>.ext` files, the hash being the first 16 hex
//! digits of the SHA-256 of the content, and records them in `manifest.json`
//! of the output directory so later stages can find their inputs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::ball::BallComplex;
use crate::catalog::Catalog;
use crate::encode::encode_constraints;
use crate::error::{Error, Result};
use crate::final_poly::{verify_certificate, FinalPolynomialCertificate};
use crate::meshscan::{classify_occurrences, find_hexahedra, load_mesh, occurrences_csv, patterns_csv, HexOccurrence, OccurrenceTable};
use crate::realize::{realize_class, verify_realization, volumes, Budget, RealizeOptions, Realization, Verdict};
use crate::sphere::{catalog_keys_from_spheres, ingest_sphere_data};

/// Expected number of classes.
pub const CLASS_COUNT: usize = 174;

pub fn content_hash(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().take(8).fold(String::new(), |mut s, b| {
        write!(s, "{b:02x}").expect("string write");
        s
    })
}

/// Stage outputs by role, stored as `manifest.json`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub files: BTreeMap<String, String>,
}

impl Manifest {
    pub fn load(dir: &Path) -> Result<Manifest> {
        let path = dir.join("manifest.json");
        if !path.exists() {
            return Ok(Manifest::default());
        }
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(self)? + "\n")?;
        Ok(())
    }

    pub fn path(&self, dir: &Path, role: &str) -> Option<PathBuf> {
        self.files.get(role).map(|f| dir.join(f))
    }
}

/// Writes `content` as `stem-<hash>.ext` under `dir` and records it under
/// `role` in the manifest.
pub fn write_addressed(dir: &Path, role: &str, stem: &str, ext: &str, content: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let name = format!("{stem}-{}.{ext}", content_hash(content.as_bytes()));
    let path = dir.join(&name);
    std::fs::write(&path, content)?;
    let mut m = Manifest::load(dir)?;
    m.files.insert(role.to_string(), name);
    m.save(dir)?;
    Ok(path)
}

/// The catalog recorded in `dir`, or a freshly enumerated one.
pub fn load_catalog(dir: &Path, explicit: Option<&Path>) -> Result<Catalog> {
    let path = match explicit {
        Some(p) => Some(p.to_path_buf()),
        None => Manifest::load(dir)?.path(dir, "catalog"),
    };
    match path {
        Some(p) => Catalog::from_json(&std::fs::read_to_string(p)?),
        None => {
            log::info!("no catalog in {}, enumerating", dir.display());
            Ok(Catalog::build(crate::enumerate::DEFAULT_MAX_TETS))
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnumerateReport {
    pub catalog: Catalog,
    pub catalog_path: PathBuf,
    pub table_path: PathBuf,
    /// Whether the sphere route produced the same classes, when run.
    pub sphere_agrees: Option<bool>,
}

/// Enumerates the catalog and writes it with its per-size table.
pub fn run_enumerate(out: &Path, max_tets: usize, sphere_data: Option<&Path>) -> Result<EnumerateReport> {
    let catalog = Catalog::build(max_tets);
    let catalog_path = write_addressed(out, "catalog", "catalog", "json", &(catalog.to_json()? + "\n"))?;
    let table_path = write_addressed(out, "table1", "table1", "csv", &catalog.counts_csv())?;
    let sphere_agrees = match sphere_data {
        None => None,
        Some(p) => {
            let spheres = ingest_sphere_data(p)?;
            let from_spheres = catalog_keys_from_spheres(&spheres);
            let ours: BTreeSet<_> = catalog
                .entries()
                .iter()
                .map(|e| e.triangulation().map(|t| t.canonical_form()))
                .collect::<Result<_>>()?;
            Some(from_spheres == ours)
        }
    };
    Ok(EnumerateReport {
        catalog,
        catalog_path,
        table_path,
        sphere_agrees,
    })
}

/// One line of the verdict file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerdictRecord {
    pub class_id: String,
    pub tet_count: usize,
    pub verdict: String,
    pub chirotopes_tried: usize,
    pub fills_hull: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassCertificates {
    pub class_id: String,
    pub certificates: Vec<FinalPolynomialCertificate>,
}

#[derive(Clone, Debug)]
pub struct RealizeReport {
    pub records: Vec<VerdictRecord>,
    pub realizations: Vec<Realization>,
    pub certificates: Vec<ClassCertificates>,
    pub paths: Vec<PathBuf>,
}

impl RealizeReport {
    pub fn counts(&self) -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for r in &self.records {
            *m.entry(r.verdict.clone()).or_insert(0) += 1;
        }
        m
    }
}

#[derive(Clone, Debug, Default)]
pub struct RealizeConfig {
    pub convex: bool,
    pub budget: Budget,
    /// Restrict to these class ids.
    pub classes: Option<Vec<String>>,
    pub dimacs_dump: Option<PathBuf>,
    pub medit: bool,
}

/// Runs the realization pipeline over the catalog and writes realizations,
/// verdicts and certificates.
pub fn run_realize(out: &Path, catalog: &Catalog, cfg: &RealizeConfig) -> Result<RealizeReport> {
    let entries: Vec<_> = catalog
        .entries()
        .iter()
        .filter(|e| cfg.classes.as_ref().is_none_or(|c| c.contains(&e.id)))
        .collect();
    if let Some(dir) = &cfg.dimacs_dump {
        std::fs::create_dir_all(dir)?;
        for e in &entries {
            let s = encode_constraints(&e.triangulation()?, cfg.convex)?;
            let stem = if cfg.convex { format!("{}-convex", e.id) } else { e.id.clone() };
            std::fs::write(dir.join(format!("{stem}.cnf")), s.cnf.to_dimacs())?;
            std::fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(&s.sidecar())? + "\n")?;
        }
    }
    let opts = RealizeOptions {
        convex: cfg.convex,
        prefer_shell: true,
        budget: cfg.budget,
        ..RealizeOptions::default()
    };
    let verdicts: Vec<Result<Verdict>> = entries.par_iter().map(|e| realize_class(e, &opts)).collect();
    let mut records = Vec::new();
    let mut realizations = Vec::new();
    let mut certificates = Vec::new();
    for (e, v) in entries.iter().zip(verdicts) {
        let v = v?;
        log::info!("{}: {}", e.id, v.name());
        let mut record = VerdictRecord {
            class_id: e.id.clone(),
            tet_count: e.tet_count,
            verdict: v.name().to_string(),
            chirotopes_tried: 0,
            fills_hull: None,
        };
        match v {
            Verdict::Realized {
                realization,
                chirotopes_tried,
            } => {
                record.chirotopes_tried = chirotopes_tried;
                record.fills_hull = Some(volumes(&realization)?.fills_hull());
                realizations.push(realization);
            }
            Verdict::Certificate { certificates: c } => certificates.push(ClassCertificates {
                class_id: e.id.clone(),
                certificates: c,
            }),
            Verdict::Undecided { chirotopes_tried, .. } => record.chirotopes_tried = chirotopes_tried,
            Verdict::SatInfeasible => {}
        }
        records.push(record);
    }
    let suffix = if cfg.convex { "-convex" } else { "" };
    let mut paths = vec![
        write_addressed(out, &format!("realizations{suffix}"), &format!("realizations{suffix}"), "json", &(serde_json::to_string_pretty(&realizations)? + "\n"))?,
        write_addressed(out, &format!("verdicts{suffix}"), &format!("verdicts{suffix}"), "json", &(serde_json::to_string_pretty(&records)? + "\n"))?,
        write_addressed(out, &format!("certificates{suffix}"), &format!("certificates{suffix}"), "json", &(serde_json::to_string_pretty(&certificates)? + "\n"))?,
    ];
    if cfg.medit {
        let dir = out.join(format!("meshes{suffix}"));
        std::fs::create_dir_all(&dir)?;
        for r in &realizations {
            let path = dir.join(format!("{}.mesh", r.class_id));
            std::fs::write(&path, r.to_medit())?;
            paths.push(path);
        }
    }
    Ok(RealizeReport {
        records,
        realizations,
        certificates,
        paths,
    })
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub rows: Vec<(String, usize, OccurrenceTable)>,
    pub failures: Vec<(PathBuf, String)>,
    pub paths: Vec<PathBuf>,
}

/// Scans each mesh; unreadable meshes are reported and skipped. Only
/// occurrences passing the validity proxy are tabulated unless `all`.
pub fn run_scan(out: &Path, catalog: &Catalog, meshes: &[PathBuf], all: bool) -> Result<ScanReport> {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut dump: BTreeMap<String, Vec<HexOccurrence>> = BTreeMap::new();
    for path in meshes {
        let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        let found = load_mesh(path).and_then(|m| Ok((m.num_vertices(), find_hexahedra(&m, catalog)?)));
        match found {
            Ok((n, occ)) => {
                let kept: Vec<HexOccurrence> = occ.into_iter().filter(|o| all || o.valid).collect();
                rows.push((name.clone(), n, classify_occurrences(&kept)));
                dump.insert(name, kept);
            }
            Err(e) => {
                log::error!("{}: {e}", path.display());
                failures.push((path.clone(), e.to_string()));
            }
        }
    }
    let paths = vec![
        write_addressed(out, "patterns", "patterns", "csv", &patterns_csv(&rows))?,
        write_addressed(out, "occurrence-counts", "occurrence-counts", "csv", &occurrences_csv(&rows))?,
        write_addressed(out, "occurrences", "occurrences", "json", &(serde_json::to_string_pretty(&dump)? + "\n"))?,
    ];
    Ok(ScanReport { rows, failures, paths })
}

/// Result of re-checking one item of an artifact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub item: String,
    pub ok: bool,
    pub detail: String,
}

fn check(item: String, r: std::result::Result<(), String>) -> Check {
    match r {
        Ok(()) => Check {
            item,
            ok: true,
            detail: String::new(),
        },
        Err(detail) => Check { item, ok: false, detail },
    }
}

fn check_realization(r: &Realization) -> Check {
    check(r.class_id.clone(), verify_realization(r).map_err(|f| format!("{f:?}")))
}

fn check_certificates(class_id: &str, certs: &[FinalPolynomialCertificate]) -> Vec<Check> {
    certs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let r = if c.chirotope.is_valid() {
                verify_certificate(c).map_err(|d| format!("{d:?}"))
            } else {
                Err("chirotope violates the axioms".into())
            };
            check(format!("{class_id}#{i}"), r)
        })
        .collect()
}

/// Exact re-verification of a catalog, realization or certificate file.
pub fn verify_artifact(path: &Path) -> Result<Vec<Check>> {
    let text = std::fs::read_to_string(path)?;
    let value: Value = serde_json::from_str(&text)?;
    let schema = |m: &str| Error::Schema(format!("{}: {m}", path.display()));
    let items: Vec<Value> = match &value {
        Value::Array(a) => a.clone(),
        Value::Object(o) if o.contains_key("classes") => {
            let catalog = Catalog::from_json(&text)?;
            return Ok(catalog
                .entries()
                .iter()
                .map(|e| {
                    let r = e.triangulation().map_err(|x| x.to_string()).and_then(|t| {
                        BallComplex::new(t.tets().to_vec()).validate_hexahedron().map(|_| ()).map_err(|d| d.to_string())
                    });
                    check(e.id.clone(), r)
                })
                .collect());
        }
        Value::Object(_) => vec![value.clone()],
        _ => return Err(schema("expected a JSON object or array")),
    };
    let mut out = Vec::new();
    for item in items {
        let Value::Object(o) = &item else {
            return Err(schema("array items must be objects"));
        };
        if o.contains_key("points") {
            out.push(check_realization(&serde_json::from_value(item)?));
        } else if o.contains_key("certificates") {
            let c: ClassCertificates = serde_json::from_value(item)?;
            out.extend(check_certificates(&c.class_id, &c.certificates));
        } else if o.contains_key("terms") {
            let c: FinalPolynomialCertificate = serde_json::from_value(item)?;
            out.extend(check_certificates("certificate", &[c]));
        } else {
            return Err(schema("unrecognised item, expected a realization or certificate"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable() {
        assert_eq!(content_hash(b""), "e3b0c44298fc1c14");
    }

    #[test]
    fn addressed_names_follow_content() {
        let dir = tempfile::tempdir().unwrap();
        let a = write_addressed(dir.path(), "x", "x", "txt", "one").unwrap();
        let b = write_addressed(dir.path(), "x", "x", "txt", "two").unwrap();
        assert_ne!(a, b);
        assert_eq!(Manifest::load(dir.path()).unwrap().path(dir.path(), "x"), Some(b));
    }
}
