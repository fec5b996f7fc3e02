//! On-disk a_p cache, one directory per curve fingerprint.
//!
//! Layout: `<cache_dir>/<fingerprint>/ap.csv` with rows `p,reduction,a_p`
//! sorted by `p`, and `manifest.json` holding the covered range and the
//! SHA-256 of the CSV. Every file is written to a temporary name and renamed.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::curve::{ApTable, CurveInput, EllipticCurve, LocalData, Reduction};
use crate::error::{Error, Result};

pub const AP_FILE: &str = "ap.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
const AP_HEADER: &str = "p,reduction,a_p\n";
/// One cached row in this many is recomputed on every load.
const AUDIT_STRIDE: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheManifest {
    pub fingerprint: String,
    pub curve: CurveInput,
    /// Inclusive prime range `[2, limit]` covered by `ap.csv`.
    pub prime_range: [u64; 2],
    /// File name to hex SHA-256.
    pub checksums: BTreeMap<String, String>,
}

#[derive(Debug)]
pub struct CacheOutcome {
    pub manifest: CacheManifest,
    pub table: ApTable,
    /// Primes whose local data was computed in this call.
    pub computed: usize,
    /// Set when the existing cache failed verification and was rebuilt.
    pub corruption: Option<Error>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `contents` next to `path` and renames it into place.
pub fn atomic_write(path: &Path, contents: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn curve_dir(cache_dir: &Path, curve: &EllipticCurve) -> PathBuf {
    cache_dir.join(curve.fingerprint())
}

pub fn ap_rows(entries: &[LocalData]) -> String {
    let mut out = String::new();
    for d in entries {
        out.push_str(&format!("{},{},{}\n", d.p, d.reduction.as_str(), d.a_p));
    }
    out
}

fn parse_ap_csv(text: &str) -> Result<Vec<LocalData>> {
    let bad = |line: usize| Error::CacheCorruption(format!("malformed row {line} in {AP_FILE}"));
    let mut lines = text.lines();
    if lines.next() != Some(AP_HEADER.trim_end()) {
        return Err(Error::CacheCorruption(format!("{AP_FILE} header missing")));
    }
    let mut out: Vec<LocalData> = Vec::new();
    for (i, line) in lines.enumerate() {
        let mut parts = line.split(',');
        let (Some(p), Some(r), Some(a), None) = (parts.next(), parts.next(), parts.next(), parts.next()) else {
            return Err(bad(i + 2));
        };
        let p: u64 = p.parse().map_err(|_| bad(i + 2))?;
        let reduction = Reduction::parse(r).ok_or_else(|| bad(i + 2))?;
        let a_p: i64 = a.parse().map_err(|_| bad(i + 2))?;
        if out.last().is_some_and(|d| d.p >= p) {
            return Err(bad(i + 2));
        }
        out.push(LocalData { p, reduction, a_p });
    }
    Ok(out)
}

fn load(dir: &Path, curve: &EllipticCurve) -> Result<Option<(CacheManifest, ApTable)>> {
    let manifest_path = dir.join(MANIFEST_FILE);
    if !manifest_path.exists() {
        return Ok(None);
    }
    let manifest: CacheManifest = serde_json::from_slice(&fs::read(&manifest_path)?)
        .map_err(|e| Error::CacheCorruption(format!("manifest unreadable: {e}")))?;
    if manifest.fingerprint != curve.fingerprint() {
        return Err(Error::CacheCorruption("fingerprint mismatch".into()));
    }
    let bytes = fs::read(dir.join(AP_FILE)).map_err(|e| Error::CacheCorruption(format!("{AP_FILE}: {e}")))?;
    let expected = manifest.checksums.get(AP_FILE).cloned().unwrap_or_default();
    if sha256_hex(&bytes) != expected {
        return Err(Error::CacheCorruption(format!("checksum mismatch for {AP_FILE}")));
    }
    let text = String::from_utf8(bytes).map_err(|_| Error::CacheCorruption("not utf-8".into()))?;
    let entries = parse_ap_csv(&text)?;
    let limit = manifest.prime_range[1];
    let expected_primes = crate::arith::primes_up_to(limit);
    if entries.len() != expected_primes.len() || entries.iter().zip(&expected_primes).any(|(d, &p)| d.p != p) {
        return Err(Error::CacheCorruption("prime list does not match the covered range".into()));
    }
    audit(curve, &entries)?;
    Ok(Some((manifest, ApTable { limit, entries })))
}

/// Recomputes a deterministic 1% sample of rows.
pub fn audit(curve: &EllipticCurve, entries: &[LocalData]) -> Result<()> {
    let offset = u64::from_str_radix(&curve.fingerprint()[..8], 16).unwrap_or(0) as usize % AUDIT_STRIDE;
    for d in entries.iter().skip(offset).step_by(AUDIT_STRIDE) {
        if curve.reduction_type(d.p) != *d {
            return Err(Error::CacheCorruption(format!("audit failed at p = {}", d.p)));
        }
    }
    Ok(())
}

fn store(dir: &Path, curve: &EllipticCurve, table: &ApTable) -> Result<CacheManifest> {
    fs::create_dir_all(dir)?;
    let csv = format!("{AP_HEADER}{}", ap_rows(&table.entries));
    atomic_write(&dir.join(AP_FILE), csv.as_bytes())?;
    let manifest = CacheManifest {
        fingerprint: curve.fingerprint(),
        curve: curve.to_input(),
        prime_range: [2, table.limit],
        checksums: BTreeMap::from([(AP_FILE.to_string(), sha256_hex(csv.as_bytes()))]),
    };
    let json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    atomic_write(&dir.join(MANIFEST_FILE), &json)?;
    Ok(manifest)
}

/// Brings the cache for `curve` up to `new_cap`, computing only primes not
/// yet covered. A cache that fails verification is rebuilt from scratch and
/// the failure is reported in the outcome.
pub fn cache_extend(cache_dir: &Path, curve: &EllipticCurve, new_cap: u64) -> Result<CacheOutcome> {
    let dir = curve_dir(cache_dir, curve);
    let (existing, corruption) = match load(&dir, curve) {
        Ok(found) => (found, None),
        Err(e @ Error::CacheCorruption(_)) => (None, Some(e)),
        Err(e) => return Err(e),
    };
    let (mut table, old_manifest) = match existing {
        Some((m, t)) => (t, Some(m)),
        None => (ApTable::default(), None),
    };
    let before = table.entries.len();
    if table.limit < new_cap {
        table.extend(curve, new_cap);
    }
    let computed = table.entries.len() - before;
    let manifest = match old_manifest {
        Some(m) if computed == 0 && m.prime_range[1] >= new_cap => m,
        _ => store(&dir, curve, &table)?,
    };
    Ok(CacheOutcome {
        manifest,
        table,
        computed,
        corruption,
    })
}
