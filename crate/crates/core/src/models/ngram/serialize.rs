//! Versioned binary model format.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic   b"TXNG"
//! version u32 = 1
//! order   u32
//! vocab   u64 count, then per type: u32 byte-length + UTF-8 surface,
//!         then count u64 frequencies
//! smoothing tag u8:
//!   0 = MLE
//!   1 = interpolation: u32 n, then n f64 weights
//!   2 = Katz: u32 threshold, then per order: u32 len, len f64 discounts
//!   3 = Kneser-Ney: u32 n, then n f64 discounts
//! tables  per order k = 1..=n: u64 n_grams, n_grams*k u32 keys,
//!         n_grams u32 counts
//! ```
//!
//! Derived state (prefix sums, continuation counts, Katz backoff weights)
//! is rebuilt on load by the same deterministic code that built it at
//! training time, so save → load → save reproduces the file byte for byte.

use std::io::{self, Read, Write};
use std::sync::Arc;

use crate::textio::Vocabulary;

use super::super::ModelError;
use super::table::{fill_continuations, GramTable};
use super::{NGramModel, Smoothing};

const MAGIC: &[u8; 4] = b"TXNG";
const VERSION: u32 = 1;

pub fn save_model<W: Write>(model: &NGramModel, mut w: W) -> Result<(), ModelError> {
    w.write_all(MAGIC)?;
    put_u32(&mut w, VERSION)?;
    put_u32(&mut w, model.order as u32)?;

    let vocab = model.vocab();
    put_u64(&mut w, vocab.len() as u64)?;
    for s in vocab.surfaces() {
        put_u32(&mut w, s.len() as u32)?;
        w.write_all(s.as_bytes())?;
    }
    for id in 0..vocab.len() as u32 {
        put_u64(&mut w, vocab.frequency(id))?;
    }

    match &model.smoothing {
        Smoothing::Mle => w.write_all(&[0])?,
        Smoothing::Interpolation { weights } => {
            w.write_all(&[1])?;
            put_u32(&mut w, weights.len() as u32)?;
            for &x in weights {
                put_f64(&mut w, x)?;
            }
        }
        Smoothing::KatzBackoff {
            threshold,
            discounts,
        } => {
            w.write_all(&[2])?;
            put_u32(&mut w, *threshold)?;
            put_u32(&mut w, discounts.len() as u32)?;
            for d in discounts {
                put_u32(&mut w, d.len() as u32)?;
                for &x in d {
                    put_f64(&mut w, x)?;
                }
            }
        }
        Smoothing::KneserNey { discounts } => {
            w.write_all(&[3])?;
            put_u32(&mut w, discounts.len() as u32)?;
            for &x in discounts {
                put_f64(&mut w, x)?;
            }
        }
    }

    for table in &model.tables {
        put_u64(&mut w, table.len() as u64)?;
        for &key in &table.keys {
            put_u32(&mut w, key)?;
        }
        for &c in &table.counts {
            put_u32(&mut w, c)?;
        }
    }
    Ok(())
}

pub fn load_model<R: Read>(mut r: R) -> Result<NGramModel, ModelError> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(ModelError::Format("bad magic; not a model file".into()));
    }
    let version = get_u32(&mut r)?;
    if version != VERSION {
        return Err(ModelError::Format(format!(
            "unsupported model version {version}, expected {VERSION}"
        )));
    }
    let order = get_u32(&mut r)? as usize;
    if order < 1 {
        return Err(ModelError::Format("order must be >= 1".into()));
    }

    let v = get_u64(&mut r)? as usize;
    let mut surfaces = Vec::with_capacity(v);
    for _ in 0..v {
        let len = get_u32(&mut r)? as usize;
        let mut buf = vec![0u8; len];
        r.read_exact(&mut buf)?;
        surfaces.push(
            String::from_utf8(buf).map_err(|_| ModelError::Format("bad surface UTF-8".into()))?,
        );
    }
    let mut frequency = Vec::with_capacity(v);
    for _ in 0..v {
        frequency.push(get_u64(&mut r)?);
    }
    let vocab = Vocabulary::from_raw_parts(surfaces, frequency);

    let mut tag = [0u8; 1];
    r.read_exact(&mut tag)?;
    enum PendingSmoothing {
        Mle,
        Interp(Vec<f64>),
        Katz(u32, Vec<Vec<f64>>),
        KneserNey(Vec<f64>),
    }
    let pending = match tag[0] {
        0 => PendingSmoothing::Mle,
        1 => {
            let n = get_u32(&mut r)? as usize;
            PendingSmoothing::Interp(get_f64_vec(&mut r, n)?)
        }
        2 => {
            let threshold = get_u32(&mut r)?;
            let orders = get_u32(&mut r)? as usize;
            let mut discounts = Vec::with_capacity(orders);
            for _ in 0..orders {
                let len = get_u32(&mut r)? as usize;
                discounts.push(get_f64_vec(&mut r, len)?);
            }
            PendingSmoothing::Katz(threshold, discounts)
        }
        3 => {
            let n = get_u32(&mut r)? as usize;
            PendingSmoothing::KneserNey(get_f64_vec(&mut r, n)?)
        }
        t => return Err(ModelError::Format(format!("unknown smoothing tag {t}"))),
    };

    let mut tables = Vec::with_capacity(order);
    for k in 1..=order {
        let n_grams = get_u64(&mut r)? as usize;
        let mut keys = Vec::with_capacity(n_grams * k);
        for _ in 0..n_grams * k {
            keys.push(get_u32(&mut r)?);
        }
        let mut counts = Vec::with_capacity(n_grams);
        for _ in 0..n_grams {
            counts.push(get_u32(&mut r)?);
        }
        tables.push(GramTable::from_parts(k, keys, counts));
    }
    for k in (0..order.saturating_sub(1)).rev() {
        let (lower, higher) = tables.split_at_mut(k + 1);
        fill_continuations(&mut lower[k], &higher[0]);
    }

    let mut model = NGramModel {
        order,
        vocab: Arc::new(vocab),
        tables,
        smoothing: Smoothing::Mle,
        katz_alphas: Vec::new(),
        katz_disc_prefix: Vec::new(),
    };
    match pending {
        PendingSmoothing::Mle => {}
        PendingSmoothing::Interp(weights) => {
            model.smoothing = Smoothing::Interpolation { weights };
        }
        PendingSmoothing::KneserNey(discounts) => {
            model.smoothing = Smoothing::KneserNey { discounts };
        }
        PendingSmoothing::Katz(threshold, discounts) => {
            model.smoothing = Smoothing::KatzBackoff {
                threshold,
                discounts,
            };
            super::rebuild_katz_derived(&mut model);
        }
    }
    Ok(model)
}

fn put_u32<W: Write>(w: &mut W, x: u32) -> io::Result<()> {
    w.write_all(&x.to_le_bytes())
}

fn put_u64<W: Write>(w: &mut W, x: u64) -> io::Result<()> {
    w.write_all(&x.to_le_bytes())
}

fn put_f64<W: Write>(w: &mut W, x: f64) -> io::Result<()> {
    w.write_all(&x.to_le_bytes())
}

fn get_u32<R: Read>(r: &mut R) -> io::Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn get_u64<R: Read>(r: &mut R) -> io::Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn get_f64_vec<R: Read>(r: &mut R, n: usize) -> io::Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut buf = [0u8; 8];
        r.read_exact(&mut buf)?;
        out.push(f64::from_le_bytes(buf));
    }
    Ok(out)
}
