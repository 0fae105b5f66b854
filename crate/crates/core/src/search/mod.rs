//! Orchestration: sweep the s-range of one degree r across worker threads,
//! with an append-only checkpoint for resume, certificate output for every
//! reducible candidate, and deterministic final artifacts.
//!
//! Work is scheduled over ascending s. Swan-ruled-out candidates are
//! decided inline by the scheduler (they cost a couple of integer
//! congruences); everything else is classified on a worker. A single
//! writer owns the checkpoint and certificate files; results arrive over
//! a channel in completion order, which is why the checkpoint is
//! order-tolerant and why the primitive list and certificate file are
//! sorted at the end: the final outputs are byte-identical whatever the
//! thread count or interruption history.

mod checkpoint;

pub use checkpoint::{
    read_checkpoint, CheckpointWriter, SStatus, SearchCheckpoint, StatusCounts, CHECKPOINT_MAGIC,
    CHECKPOINT_VERSION,
};

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use crate::cert::Certificate;
use crate::engine::{Classifier, ClassifyConfig, Verdict, DEFAULT_TRIAL_DEPTH};
use crate::error::{Error, Result};
use crate::ring::Trinomial;
use crate::swan;

/// Number of candidate s for degree r: the reciprocal half s <= r/2.
pub fn search_space(r: u64) -> u64 {
    debug_assert!(r >= 3);
    r / 2
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub r: u64,
    /// Inclusive s-range; defaults to the whole half-space.
    pub s_from: Option<u64>,
    pub s_to: Option<u64>,
    pub threads: usize,
    pub dmax: Option<u64>,
    pub batch: usize,
    pub ckpt_path: Option<PathBuf>,
    pub certs_path: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl SearchConfig {
    pub fn new(r: u64) -> SearchConfig {
        SearchConfig {
            r,
            s_from: None,
            s_to: None,
            threads: 1,
            dmax: None,
            batch: 64,
            ckpt_path: None,
            certs_path: None,
            seed: None,
        }
    }
}

#[derive(Debug)]
pub struct SearchOutcome {
    pub checkpoint: SearchCheckpoint,
    /// Every s with status P across the whole checkpoint, ascending.
    /// P records an irreducible survivor, which certifies primitivity
    /// exactly when r is a Mersenne exponent; for other prime r the list
    /// is "irreducible, primitivity untested".
    pub primitives: Vec<u64>,
    pub counts: StatusCounts,
    /// Candidates decided by this run (rather than loaded from the file).
    pub newly_decided: u64,
}

/// Run (or resume) a search. The final result set is deterministic:
/// independent of thread count and of where earlier runs stopped.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    let r = cfg.r;
    let half = search_space_checked(r)?;
    if cfg.threads == 0 {
        return Err(Error::Config("thread count must be >= 1".into()));
    }
    let s_from = cfg.s_from.unwrap_or(1);
    let s_to = cfg.s_to.unwrap_or(half);
    if s_from == 0 || s_from > s_to || s_to > half {
        return Err(Error::Config(format!(
            "s-range [{s_from}, {s_to}] not within [1, {half}]"
        )));
    }
    let classifier = Classifier::new(
        r,
        ClassifyConfig {
            dmax: cfg.dmax,
            batch: cfg.batch,
            trial_depth: DEFAULT_TRIAL_DEPTH,
            seed: cfg.seed,
        },
    )?;

    let (mut ckpt_writer, mut state) = match &cfg.ckpt_path {
        Some(path) => {
            let (w, s) = CheckpointWriter::open(path, r)?;
            (Some(w), s)
        }
        None => (None, SearchCheckpoint::new(r)),
    };
    let mut certs = match &cfg.certs_path {
        Some(path) => CertStore::open(path)?,
        None => CertStore::disabled(),
    };

    // Scheduler pass: settle Swan-ruled-out candidates inline, queue the rest.
    let mut queue: Vec<u64> = Vec::new();
    let mut newly_decided = 0u64;
    for s in s_from..=s_to {
        if state.get(s).is_some() {
            continue;
        }
        if swan::rules_out(&Trinomial::new(r, s)?) {
            record(&mut state, &mut ckpt_writer, s, SStatus::RuledOut)?;
            newly_decided += 1;
        } else {
            queue.push(s);
        }
    }

    // Worker pass: one classify task per candidate, results to the writer.
    if !queue.is_empty() {
        let workers = cfg.threads.min(queue.len());
        let next = AtomicUsize::new(0);
        let (tx, rx) = mpsc::channel::<(u64, Result<Verdict>)>();
        let queue_ref = &queue;
        let classifier_ref = &classifier;
        let next_ref = &next;
        std::thread::scope(|scope| -> Result<()> {
            for _ in 0..workers {
                let tx = tx.clone();
                scope.spawn(move || loop {
                    let i = next_ref.fetch_add(1, Ordering::Relaxed);
                    let Some(&s) = queue_ref.get(i) else { break };
                    if tx.send((s, classifier_ref.classify(s))).is_err() {
                        break;
                    }
                });
            }
            drop(tx);
            let mut first_err: Option<(u64, Error)> = None;
            for (s, outcome) in rx {
                match outcome {
                    Err(e) => {
                        if first_err.as_ref().is_none_or(|(fs, _)| s < *fs) {
                            first_err = Some((s, e));
                        }
                    }
                    Ok(verdict) => {
                        let status = match &verdict {
                            Verdict::Primitive | Verdict::IrreducibleUncertified => {
                                SStatus::Primitive
                            }
                            Verdict::Reducible { d, .. } => SStatus::Reducible { d: *d },
                            Verdict::RuledOutBySwan => SStatus::RuledOut,
                        };
                        if let Verdict::Reducible { d, factor } = verdict {
                            let cert = Certificate::new(&Trinomial::new(r, s)?, d, factor)?;
                            certs.append(cert)?;
                        }
                        record(&mut state, &mut ckpt_writer, s, status)?;
                        newly_decided += 1;
                    }
                }
            }
            match first_err {
                Some((_, e)) => Err(e),
                None => Ok(()),
            }
        })?;
    }

    // Finalize: every reducible status gets a certificate, then the file is
    // rewritten sorted so the bytes are schedule-independent.
    if certs.enabled() {
        for (s, status) in state.iter() {
            if matches!(status, SStatus::Reducible { .. }) && !certs.contains(s) {
                match classifier.classify(s)? {
                    Verdict::Reducible { d, factor } => {
                        certs.append(Certificate::new(&Trinomial::new(r, s)?, d, factor)?)?;
                    }
                    other => {
                        return Err(Error::Internal(format!(
                            "checkpoint says s={s} is reducible but classify returned {other:?}"
                        )))
                    }
                }
            }
        }
        certs.rewrite_sorted()?;
    }

    let primitives = state.primitives();
    let counts = state.counts();
    Ok(SearchOutcome {
        checkpoint: state,
        primitives,
        counts,
        newly_decided,
    })
}

fn search_space_checked(r: u64) -> Result<u64> {
    if r < 3 {
        return Err(Error::Config(format!("r = {r} is below the smallest degree 3")));
    }
    Ok(search_space(r))
}

fn record(
    state: &mut SearchCheckpoint,
    writer: &mut Option<CheckpointWriter>,
    s: u64,
    status: SStatus,
) -> Result<()> {
    state.record(s, status)?;
    if let Some(w) = writer {
        w.append(s, status)?;
    }
    Ok(())
}

/// Certificate sink: appends during the run (crash-safe, arrival order),
/// rewrites sorted-by-s at the end. Reloading tolerates unparseable lines
/// with a warning; the finalize pass recomputes anything missing.
struct CertStore {
    path: Option<PathBuf>,
    file: Option<File>,
    by_s: BTreeMap<u64, Certificate>,
}

impl CertStore {
    fn disabled() -> CertStore {
        CertStore {
            path: None,
            file: None,
            by_s: BTreeMap::new(),
        }
    }

    fn open(path: &Path) -> Result<CertStore> {
        let mut by_s = BTreeMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(path)?);
            for line in reader.lines() {
                let line = line?;
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                match Certificate::parse_line(&line) {
                    Some(cert) => {
                        by_s.insert(cert.s, cert);
                    }
                    None => log::warn!(
                        "certificate file {}: skipping unparseable line {:?}",
                        path.display(),
                        line
                    ),
                }
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(CertStore {
            path: Some(path.to_path_buf()),
            file: Some(file),
            by_s,
        })
    }

    fn enabled(&self) -> bool {
        self.path.is_some()
    }

    fn contains(&self, s: u64) -> bool {
        self.by_s.contains_key(&s)
    }

    fn append(&mut self, cert: Certificate) -> Result<()> {
        if let Some(file) = &mut self.file {
            writeln!(file, "{}", cert.to_line())?;
            file.flush()?;
        }
        self.by_s.insert(cert.s, cert);
        Ok(())
    }

    fn rewrite_sorted(&mut self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let tmp = path.with_extension("tmp");
        {
            let mut out = File::create(&tmp)?;
            for cert in self.by_s.values() {
                writeln!(out, "{}", cert.to_line())?;
            }
            out.sync_data()?;
        }
        std::fs::rename(&tmp, path)?;
        self.file = Some(OpenOptions::new().append(true).open(path)?);
        Ok(())
    }
}
