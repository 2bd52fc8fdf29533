//! Moments `m_k(t) = I_{-k-ν}(t)`, moment tables and the on-disk cache.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::RwLock;

use rayon::prelude::*;
use rug::Complex;
use serde::{Deserialize, Serialize};

use super::bessel::bessel_i;
use crate::error::{GwwError, Result};
use crate::precision::{to_decimal_string, APComplex, APReal, DecimalComplex, PrecisionContext};

/// `m_k(t) = I_{-k-ν}(t)`.
pub fn moment(k: i64, nu: &APComplex, t: &APReal, ctx: &PrecisionContext) -> Result<APComplex> {
    let order = Complex::with_val(ctx.working_bits(), -nu) - k;
    Ok(bessel_i(&order, t, ctx)?.value)
}

/// Cache key: exact decimal forms of `ν` and `t` plus the precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MomentKey {
    pub k: i64,
    pub nu_re: String,
    pub nu_im: String,
    pub t: String,
    pub bits: u32,
}

impl MomentKey {
    pub fn new(k: i64, nu: &APComplex, t: &APReal, bits: u32) -> Self {
        MomentKey {
            k,
            nu_re: to_decimal_string(nu.real()),
            nu_im: to_decimal_string(nu.imag()),
            t: to_decimal_string(t),
            bits,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    #[serde(flatten)]
    key: MomentKey,
    value: DecimalComplex,
}

/// Concurrent moment cache. Insertion is idempotent: values are
/// deterministic, so a racing second writer stores the same number.
#[derive(Debug, Default)]
pub struct MomentCache {
    map: RwLock<HashMap<MomentKey, DecimalComplex>>,
}

impl MomentCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("moment cache").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, key: &MomentKey) -> Option<APComplex> {
        let map = self.map.read().expect("moment cache");
        map.get(key).and_then(|v| v.decode_at(key.bits).ok())
    }

    pub fn insert(&self, key: MomentKey, value: &APComplex) {
        let enc = DecimalComplex::encode(value);
        self.map.write().expect("moment cache").insert(key, enc);
    }

    /// Reads a JSON-lines cache file; a missing file yields an empty cache.
    pub fn load(path: &Path) -> Result<Self> {
        let cache = MomentCache::new();
        if !path.exists() {
            return Ok(cache);
        }
        let reader = BufReader::new(File::open(path)?);
        {
            let mut map = cache.map.write().expect("moment cache");
            for line in reader.lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: CacheRecord = serde_json::from_str(&line)?;
                map.insert(rec.key, rec.value);
            }
        }
        Ok(cache)
    }

    /// Writes the cache sorted by key so that repeated runs produce
    /// byte-identical files.
    pub fn save(&self, path: &Path) -> Result<()> {
        let map = self.map.read().expect("moment cache");
        let mut entries: Vec<_> = map.iter().collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));
        let mut w = BufWriter::new(File::create(path)?);
        for (key, value) in entries {
            let rec = CacheRecord {
                key: key.clone(),
                value: value.clone(),
            };
            serde_json::to_writer(&mut w, &rec)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Moments `m_k` for `k_min ≤ k ≤ k_max` at fixed `(ν, t)`.
#[derive(Clone, Debug)]
pub struct MomentTable {
    pub nu: APComplex,
    pub t: APReal,
    pub bits: u32,
    pub k_min: i64,
    pub values: Vec<APComplex>,
}

impl MomentTable {
    /// Builds the table in parallel over `k`, consulting `cache` first.
    pub fn build(
        nu: &APComplex,
        t: &APReal,
        k_min: i64,
        k_max: i64,
        ctx: &PrecisionContext,
        cache: Option<&MomentCache>,
    ) -> Result<Self> {
        if k_max < k_min {
            return Err(GwwError::OutOfRange(format!("empty moment range {k_min}..={k_max}")));
        }
        let values = (k_min..=k_max)
            .into_par_iter()
            .map(|k| {
                let key = cache.map(|_| MomentKey::new(k, nu, t, ctx.bits));
                if let (Some(c), Some(key)) = (cache, key.as_ref()) {
                    if let Some(v) = c.get(key) {
                        return Ok(v);
                    }
                }
                let v = moment(k, nu, t, ctx)?;
                if let (Some(c), Some(key)) = (cache, key) {
                    c.insert(key, &v);
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MomentTable {
            nu: Complex::with_val(ctx.bits, nu),
            t: APReal::with_val(ctx.bits, t),
            bits: ctx.bits,
            k_min,
            values,
        })
    }

    /// Symmetric table `|k| ≤ k_abs`.
    pub fn symmetric(
        nu: &APComplex,
        t: &APReal,
        k_abs: usize,
        ctx: &PrecisionContext,
        cache: Option<&MomentCache>,
    ) -> Result<Self> {
        let k = k_abs as i64;
        Self::build(nu, t, -k, k, ctx, cache)
    }

    pub fn k_max(&self) -> i64 {
        self.k_min + self.values.len() as i64 - 1
    }

    pub fn try_get(&self, k: i64) -> Option<&APComplex> {
        if k < self.k_min {
            return None;
        }
        self.values.get((k - self.k_min) as usize)
    }

    /// Moment `m_k`; panics when `k` lies outside the table, which is a
    /// sizing bug in the caller.
    pub fn get(&self, k: i64) -> &APComplex {
        self.try_get(k)
            .unwrap_or_else(|| panic!("moment m_{k} outside table range {}..={}", self.k_min, self.k_max()))
    }

    /// Whether the table covers `|k| ≤ k_abs`.
    pub fn covers(&self, k_abs: usize) -> bool {
        let k = k_abs as i64;
        self.k_min <= -k && self.k_max() >= k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::agreeing_digits;
    use rug::Float;

    #[test]
    fn integer_nu_gives_integer_order_bessel() {
        let ctx = PrecisionContext::new(256).unwrap();
        let nu = Complex::with_val(256, 0u32);
        let t = Float::with_val(256, 2.5f64);
        for k in 1..6 {
            let a = moment(k, &nu, &t, &ctx).unwrap();
            let b = moment(-k, &nu, &t, &ctx).unwrap();
            assert_eq!(a, b);
        }
        let zero = Float::with_val(256, 0u32);
        let m0 = moment(0, &nu, &zero, &ctx).unwrap();
        assert_eq!(*m0.real(), 1u32);
    }

    #[test]
    fn half_integer_moment() {
        let ctx = PrecisionContext::new(256).unwrap();
        let nu = Complex::with_val(256, 0.5f64);
        let one = Float::with_val(256, 1u32);
        let m1 = moment(1, &nu, &one, &ctx).unwrap();
        let pref = (Float::with_val(256, 2u32) / ctx.pi()).sqrt();
        let expect = pref * (Float::with_val(256, one.sinh_ref()) - Float::with_val(256, one.cosh_ref()));
        assert!(agreeing_digits(&m1, &Complex::with_val(256, expect)) >= 74);
        assert!((m1.real().to_f64() + 0.293_525_3).abs() < 1e-6);
    }

    #[test]
    fn table_and_cache_round_trip() {
        let ctx = PrecisionContext::new(128).unwrap();
        let nu = Complex::with_val(128, (0.3f64, 0.2f64));
        let t = Float::with_val(128, 1.5f64);
        let cache = MomentCache::new();
        let tab = MomentTable::symmetric(&nu, &t, 3, &ctx, Some(&cache)).unwrap();
        assert_eq!(cache.len(), 7);
        assert!(tab.covers(3) && !tab.covers(4));
        let dir = std::env::temp_dir().join(format!("gww-cache-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m.jsonl");
        cache.save(&path).unwrap();
        let back = MomentCache::load(&path).unwrap();
        let again = MomentTable::symmetric(&nu, &t, 3, &ctx, Some(&back)).unwrap();
        for k in -3..=3 {
            assert_eq!(tab.get(k), again.get(k));
        }
        let first = std::fs::read(&path).unwrap();
        back.save(&path).unwrap();
        assert_eq!(first, std::fs::read(&path).unwrap());
        std::fs::remove_dir_all(&dir).ok();
    }
}
