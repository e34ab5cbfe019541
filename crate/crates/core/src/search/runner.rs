//! Parallel, resumable execution of a quadruple search with JSONL output.
//!
//! Work units are processed in batches on a rayon pool; a single merger writes
//! the hits of each unit in unit order, then records a checkpoint. The
//! checkpoint stores the output length at that point, so a resume truncates
//! any partially written tail and continues byte-for-byte where an
//! uninterrupted run would be.

use std::collections::HashSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{process_unit, HitClass, SearchBounds, SearchHit};
use crate::error::{Error, Result};
use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config_hash: String,
    /// Index of the first unit not yet written.
    pub next_unit: usize,
    pub total_units: usize,
    /// Byte length of the output file after `next_unit` units.
    pub out_len: u64,
    pub full: u64,
    pub near_miss: u64,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub out: PathBuf,
    pub checkpoint: Option<PathBuf>,
    pub jobs: usize,
    /// Stop after this many units in this invocation.
    pub max_units: Option<usize>,
    /// Stop at the first batch boundary after this much wall-clock time.
    pub budget: Option<Duration>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunSummary {
    pub units_done: usize,
    pub total_units: usize,
    pub full: u64,
    pub near_miss: u64,
    pub complete: bool,
    pub resumed_from: Option<usize>,
}

/// Stable digest of the bounds; a checkpoint only resumes a run with identical bounds.
pub fn config_hash(bounds: &SearchBounds) -> String {
    let json = serde_json::to_vec(bounds).expect("bounds serialize");
    hex::encode(&Sha256::digest(&json)[..16])
}

pub fn read_checkpoint(path: &Path) -> Result<Option<Checkpoint>> {
    match fs::read(path) {
        Ok(bytes) => Ok(Some(serde_json::from_slice(&bytes)?)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn write_checkpoint(path: &Path, ck: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_vec_pretty(ck)?)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Keys of hits already in the output, used to keep deduplication consistent across resumes.
fn load_seen(out: &Path) -> Result<HashSet<Vec<Rat>>> {
    let mut seen = HashSet::new();
    let file = File::open(out)?;
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let hit: SearchHit = serde_json::from_str(&line)?;
        seen.insert(hit.key());
    }
    Ok(seen)
}

pub fn run(bounds: &SearchBounds, opts: &RunOptions) -> Result<RunSummary> {
    let units = bounds.units();
    let hash = config_hash(bounds);
    let started = Instant::now();

    let previous = match &opts.checkpoint {
        Some(path) => read_checkpoint(path)?,
        None => None,
    };
    let mut ck = match previous {
        Some(ck) => {
            if ck.config_hash != hash {
                return Err(Error::ConfigMismatch {
                    path: opts.checkpoint.clone().expect("checkpoint path"),
                    found: ck.config_hash,
                    expected: hash,
                });
            }
            ck
        }
        None => Checkpoint {
            config_hash: hash,
            next_unit: 0,
            total_units: units.len(),
            out_len: 0,
            full: 0,
            near_miss: 0,
        },
    };
    let resumed_from = (ck.next_unit > 0).then_some(ck.next_unit);

    let file = if resumed_from.is_some() {
        let f = OpenOptions::new().read(true).write(true).open(&opts.out)?;
        f.set_len(ck.out_len)?;
        f
    } else {
        File::create(&opts.out)?
    };
    let mut seen = if resumed_from.is_some() {
        load_seen(&opts.out)?
    } else {
        HashSet::new()
    };
    let mut writer = BufWriter::new(file);
    use std::io::Seek;
    writer.seek(std::io::SeekFrom::End(0))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let stop_at = opts
        .max_units
        .map_or(units.len(), |m| (ck.next_unit + m).min(units.len()));
    let batch = opts.jobs.max(1) * 4;

    while ck.next_unit < stop_at {
        if opts.budget.is_some_and(|b| started.elapsed() >= b) {
            break;
        }
        let end = (ck.next_unit + batch).min(stop_at);
        let results: Vec<Result<Vec<SearchHit>>> = pool.install(|| {
            units[ck.next_unit..end]
                .par_iter()
                .map(|u| process_unit(u, bounds))
                .collect()
        });
        for hits in results {
            for hit in hits? {
                if !seen.insert(hit.key()) {
                    continue;
                }
                match hit.class {
                    HitClass::Full => ck.full += 1,
                    HitClass::NearMiss5 => ck.near_miss += 1,
                }
                serde_json::to_writer(&mut writer, &hit)?;
                writer.write_all(b"\n")?;
            }
        }
        writer.flush()?;
        ck.out_len = writer.get_ref().metadata()?.len();
        ck.next_unit = end;
        if let Some(path) = &opts.checkpoint {
            write_checkpoint(path, &ck)?;
        }
    }

    Ok(RunSummary {
        units_done: ck.next_unit,
        total_units: units.len(),
        full: ck.full,
        near_miss: ck.near_miss,
        complete: ck.next_unit == units.len(),
        resumed_from,
    })
}
