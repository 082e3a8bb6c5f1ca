//! Parallel scan of a prime range for left-factorial congruence violations.
//!
//! The numeric range splits into fixed blocks; worker threads claim blocks
//! through an atomic cursor and the merger consumes results strictly in
//! block order. Block boundaries depend only on the range, never on the
//! worker count, so the record stream is byte-identical however the work
//! was distributed.
//!
//! Per prime p the scanner makes one O(p) pass for the residues
//! r[k] = sum_{i<p} i! i^k mod p and then checks:
//!
//! * r[0] != 0 (the hypothesis itself);
//! * r[k] != v_k for each k >= 1 with p not dividing u_k (an equivalent
//!   form; pairs with p | u_k are skipped and counted);
//! * r[k] == v_k - u_k r[0], the consistency relation every prime must
//!   satisfy regardless of the hypothesis;
//! * the coupling: an r[k] == v_k hit and r[0] == 0 can only occur
//!   together;
//! * for p under a cap, the four wraparound identities in GF(p).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{mod_u64, Integer};
use crate::kurepa::{residues_for_prime, wraparound_holds, DEFAULT_WRAPAROUND_CAP};
use crate::primes::primes_in;
use crate::seq::uv_table;

/// Numeric width of one work block.
const BLOCK_SPAN: u64 = 4096;

/// Outcome of one check inside a prime record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckOutcome {
    Pass,
    Violation,
    /// The check did not apply (p divides u_k).
    Skipped,
    /// The check was not run (p above the wraparound cap).
    NotChecked,
}

/// Everything the scanner established about one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeRecord {
    pub p: u64,
    /// k -> sum_{i<p} i! i^k mod p; the k = 0 entry is !p mod p.
    pub residues: BTreeMap<u32, u64>,
    /// r[0] != 0.
    pub kh: CheckOutcome,
    /// Per k >= 1: r[k] != v_k, skipped when p | u_k.
    pub residue_checks: BTreeMap<u32, CheckOutcome>,
    /// r[k] == v_k - u_k r[0] held for every applicable k.
    pub consistent: bool,
    /// The four GF(p) identities, for p under the cap.
    pub wraparound: CheckOutcome,
}

/// A failed check, kept both in the report and in checkpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub p: u64,
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub detail: String,
}

/// Totals over everything scanned so far, cumulative across resumes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummaryRecord {
    pub lo: u64,
    pub hi: u64,
    pub ks: Vec<u32>,
    pub primes: u64,
    pub violations: u64,
    pub skipped_pairs: u64,
    pub wraparound_checked: u64,
    pub pass: bool,
}

/// One line of the scan's structured output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScanRecord {
    Prime(PrimeRecord),
    Violation(Violation),
    Summary(SummaryRecord),
}

impl ScanRecord {
    /// The single-line serialized form.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("scan records always serialize")
    }
}

/// Receives records in their deterministic order while a scan runs.
/// `flush` is called right before every checkpoint write, so a sink that
/// honors it keeps the report file consistent with the checkpoint.
pub trait RecordSink {
    fn record(&mut self, record: &ScanRecord) -> std::io::Result<()>;
    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}

/// No-op sink.
pub struct NullSink;

impl RecordSink for NullSink {
    fn record(&mut self, _record: &ScanRecord) -> std::io::Result<()> {
        Ok(())
    }
}

/// Sink writing one serialized record per line.
pub struct LineSink<W: Write>(pub W);

impl<W: Write> RecordSink for LineSink<W> {
    fn record(&mut self, record: &ScanRecord) -> std::io::Result<()> {
        writeln!(self.0, "{}", record.to_line())
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.0.flush()
    }
}

/// Scan configuration. `ks` must contain 0; `lo` must be at least 3.
#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub lo: u64,
    pub hi: u64,
    pub ks: Vec<u32>,
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
    /// Blocks merged between checkpoint writes.
    pub checkpoint_interval: usize,
    /// Bound on p for the O(p^2) wraparound identities.
    pub wraparound_cap: u64,
    /// Keep per-prime records in the returned report. Turn off for long
    /// streamed scans where the sink is the real destination.
    pub keep_records: bool,
}

impl ScanOptions {
    pub fn new(lo: u64, hi: u64, ks: Vec<u32>) -> ScanOptions {
        ScanOptions {
            lo,
            hi,
            ks,
            workers: 1,
            checkpoint: None,
            checkpoint_interval: 16,
            wraparound_cap: DEFAULT_WRAPAROUND_CAP,
            keep_records: true,
        }
    }
}

/// Resume state persisted between runs. Counters are cumulative since the
/// original `lo`; `verified_through` is the last number (inclusive) whose
/// primality window is fully checked, so a resume starts right after it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub lo: u64,
    pub hi: u64,
    pub ks: Vec<u32>,
    pub verified_through: u64,
    pub last_prime: Option<u64>,
    pub primes_scanned: u64,
    pub skipped_pairs: u64,
    pub wraparound_checked: u64,
    pub violations: Vec<Violation>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Checkpoint> {
        let raw = std::fs::read_to_string(path)?;
        serde_json::from_str(&raw).map_err(|e| Error::CheckpointFormat {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })
    }

    /// Writes atomically: serialize to a sibling temp file, then rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        let body = serde_json::to_string_pretty(self).expect("checkpoint serializes");
        std::fs::write(&tmp, body)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Full result of a scan run. Counters and the violation list are
/// cumulative across resumes; `records` covers only this run's slice.
#[derive(Clone, Debug)]
pub struct ScanReport {
    pub lo: u64,
    pub hi: u64,
    pub ks: Vec<u32>,
    pub resumed_from: Option<u64>,
    pub records: Vec<PrimeRecord>,
    pub violations: Vec<Violation>,
    pub primes_scanned: u64,
    pub skipped_pairs: u64,
    pub wraparound_checked: u64,
    pub verified_through: u64,
    pub elapsed: Duration,
}

impl ScanReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> SummaryRecord {
        SummaryRecord {
            lo: self.lo,
            hi: self.hi,
            ks: self.ks.clone(),
            primes: self.primes_scanned,
            violations: self.violations.len() as u64,
            skipped_pairs: self.skipped_pairs,
            wraparound_checked: self.wraparound_checked,
            pass: self.pass(),
        }
    }

    /// Serializes this run's records, interleaved violations, and the
    /// summary, one JSON object per line. Timing is deliberately absent:
    /// the stream must be identical for any worker count.
    pub fn write_records(&self, w: &mut impl Write) -> std::io::Result<()> {
        let mut sink = LineSink(w);
        let mut by_p: BTreeMap<u64, Vec<&Violation>> = BTreeMap::new();
        for v in &self.violations {
            by_p.entry(v.p).or_default().push(v);
        }
        for rec in &self.records {
            sink.record(&ScanRecord::Prime(rec.clone()))?;
            for v in by_p.get(&rec.p).into_iter().flatten() {
                sink.record(&ScanRecord::Violation((*v).clone()))?;
            }
        }
        sink.record(&ScanRecord::Summary(self.summary()))
    }
}

struct ScanContext {
    ks: Vec<u32>,
    /// Exact (u_k, v_k) for k = 1..=max(ks), reduced per prime on use.
    uv: Vec<(Integer, Integer)>,
    wraparound_cap: u64,
}

struct BlockResult {
    records: Vec<PrimeRecord>,
    violations: Vec<Violation>,
    skipped_pairs: u64,
    wraparound_checked: u64,
}

fn scan_prime(p: u64, ctx: &ScanContext) -> (PrimeRecord, Vec<Violation>, u64, u64) {
    let profile = residues_for_prime(p, &ctx.ks, None).expect("p prime, ks has 0");
    let residues = profile.residues;
    let r0 = residues[&0];
    let mut violations = Vec::new();
    let mut skipped = 0u64;

    let kh = if r0 != 0 {
        CheckOutcome::Pass
    } else {
        violations.push(Violation {
            p,
            check: "kh".into(),
            k: None,
            detail: format!("!{p} == 0 mod {p}"),
        });
        CheckOutcome::Violation
    };

    let mut residue_checks = BTreeMap::new();
    let mut consistent = true;
    for (&k, &rk) in residues.iter().filter(|(k, _)| **k >= 1) {
        let (ue, ve) = &ctx.uv[k as usize - 1];
        let up = mod_u64(ue, p);
        let vp = mod_u64(ve, p);
        let prod = ((up as u128 * r0 as u128) % p as u128) as u64;
        let expected = if vp >= prod { vp - prod } else { vp + p - prod };
        if rk != expected {
            consistent = false;
            violations.push(Violation {
                p,
                check: "consistency".into(),
                k: Some(k),
                detail: format!("r[{k}] = {rk}, expected v_k - u_k r[0] = {expected} mod {p}"),
            });
        }
        let outcome = if up == 0 {
            skipped += 1;
            CheckOutcome::Skipped
        } else if rk == vp {
            violations.push(Violation {
                p,
                check: "residue".into(),
                k: Some(k),
                detail: format!("sum i! i^{k} == v_{k} mod {p}"),
            });
            CheckOutcome::Violation
        } else {
            CheckOutcome::Pass
        };
        // A residue hit with p not dividing u_k forces r[0] == 0 and
        // conversely; seeing one side alone is its own violation.
        if up != 0 && ((outcome == CheckOutcome::Violation) != (r0 == 0)) {
            violations.push(Violation {
                p,
                check: "coupling".into(),
                k: Some(k),
                detail: format!(
                    "residue check k={k} and left-factorial residue disagree (r[0] = {r0})"
                ),
            });
        }
        residue_checks.insert(k, outcome);
    }

    let mut wraparound_checked = 0u64;
    let wraparound = if p <= ctx.wraparound_cap {
        wraparound_checked = 1;
        if wraparound_holds(p, r0) {
            CheckOutcome::Pass
        } else {
            violations.push(Violation {
                p,
                check: "wraparound".into(),
                k: None,
                detail: "GF(p) identities around k = p failed".into(),
            });
            CheckOutcome::Violation
        }
    } else {
        CheckOutcome::NotChecked
    };

    let record = PrimeRecord {
        p,
        residues,
        kh,
        residue_checks,
        consistent,
        wraparound,
    };
    (record, violations, skipped, wraparound_checked)
}

fn scan_block(lo: u64, hi: u64, ctx: &ScanContext) -> BlockResult {
    let mut out = BlockResult {
        records: Vec::new(),
        violations: Vec::new(),
        skipped_pairs: 0,
        wraparound_checked: 0,
    };
    for p in primes_in(lo, hi) {
        let (record, violations, skipped, wrapped) = scan_prime(p, ctx);
        out.records.push(record);
        out.violations.extend(violations);
        out.skipped_pairs += skipped;
        out.wraparound_checked += wrapped;
    }
    out
}

/// Runs a scan, accumulating all records in the report.
pub fn scan(opts: &ScanOptions) -> Result<ScanReport> {
    scan_with_sink(opts, &mut NullSink)
}

/// Runs a scan, streaming every record to `sink` in deterministic order.
/// Records flushed to the sink always cover at least the range recorded in
/// the last checkpoint write, never less.
pub fn scan_with_sink(opts: &ScanOptions, sink: &mut dyn RecordSink) -> Result<ScanReport> {
    if opts.lo < 3 {
        return Err(Error::RangeBelowThree { lo: opts.lo });
    }
    if !opts.ks.contains(&0) {
        return Err(Error::MissingZeroK);
    }
    let started = Instant::now();
    let mut ks = opts.ks.clone();
    ks.sort_unstable();
    ks.dedup();

    let mut report = ScanReport {
        lo: opts.lo,
        hi: opts.hi,
        ks: ks.clone(),
        resumed_from: None,
        records: Vec::new(),
        violations: Vec::new(),
        primes_scanned: 0,
        skipped_pairs: 0,
        wraparound_checked: 0,
        verified_through: opts.lo.saturating_sub(1),
        elapsed: Duration::ZERO,
    };
    let mut last_prime: Option<u64> = None;

    // Resume when a matching checkpoint exists.
    if let Some(path) = &opts.checkpoint {
        if path.exists() {
            let cp = Checkpoint::load(path)?;
            if (cp.lo, cp.hi, &cp.ks) != (opts.lo, opts.hi, &ks) {
                return Err(Error::CheckpointMismatch {
                    path: path.clone(),
                    lo: cp.lo,
                    hi: cp.hi,
                    ks: cp.ks,
                });
            }
            report.resumed_from = Some(cp.verified_through);
            report.violations = cp.violations;
            report.primes_scanned = cp.primes_scanned;
            report.skipped_pairs = cp.skipped_pairs;
            report.wraparound_checked = cp.wraparound_checked;
            report.verified_through = cp.verified_through;
            last_prime = cp.last_prime;
        }
    }

    let start = report
        .resumed_from
        .map(|v| v + 1)
        .unwrap_or(opts.lo)
        .max(opts.lo);

    let max_k = *ks.last().unwrap();
    let table = uv_table(max_k);
    let ctx = ScanContext {
        ks: ks.clone(),
        uv: table
            .entries()
            .iter()
            .map(|e| (e.u.clone(), e.v.clone()))
            .collect(),
        wraparound_cap: opts.wraparound_cap,
    };

    // Block boundaries depend only on the original range, so a resumed run
    // re-emits exactly the records an uninterrupted run would from here on.
    let mut blocks = Vec::new();
    let mut b = opts.lo;
    while b < opts.hi {
        let e = (b + BLOCK_SPAN).min(opts.hi);
        if e > start {
            blocks.push((b.max(start), e));
        }
        b = e;
    }

    let workers = opts.workers.max(1).min(blocks.len().max(1));
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, BlockResult)>();

    let merge = |report: &mut ScanReport,
                 last_prime: &mut Option<u64>,
                 sink: &mut dyn RecordSink,
                 result: BlockResult|
     -> Result<()> {
        report.primes_scanned += result.records.len() as u64;
        report.skipped_pairs += result.skipped_pairs;
        report.wraparound_checked += result.wraparound_checked;
        let mut by_p: BTreeMap<u64, Vec<Violation>> = BTreeMap::new();
        for v in result.violations {
            by_p.entry(v.p).or_default().push(v);
        }
        for rec in result.records {
            *last_prime = Some(rec.p);
            let vs = by_p.remove(&rec.p).unwrap_or_default();
            sink.record(&ScanRecord::Prime(rec.clone()))?;
            for v in vs {
                sink.record(&ScanRecord::Violation(v.clone()))?;
                report.violations.push(v);
            }
            if opts.keep_records {
                report.records.push(rec);
            }
        }
        Ok(())
    };

    let write_checkpoint = |report: &ScanReport,
                            last_prime: Option<u64>,
                            sink: &mut dyn RecordSink|
     -> Result<()> {
        if let Some(path) = &opts.checkpoint {
            sink.flush()?;
            Checkpoint {
                lo: opts.lo,
                hi: opts.hi,
                ks: ks.clone(),
                verified_through: report.verified_through,
                last_prime,
                primes_scanned: report.primes_scanned,
                skipped_pairs: report.skipped_pairs,
                wraparound_checked: report.wraparound_checked,
                violations: report.violations.clone(),
            }
            .save(path)?;
        }
        Ok(())
    };

    let merge_error: Result<()> = std::thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let next = &next;
            let blocks = &blocks;
            let ctx = &ctx;
            scope.spawn(move || loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(lo, hi)) = blocks.get(idx) else {
                    break;
                };
                if tx.send((idx, scan_block(lo, hi, ctx))).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut pending: BTreeMap<usize, BlockResult> = BTreeMap::new();
        let mut expected = 0usize;
        let mut since_checkpoint = 0usize;
        for (idx, result) in rx {
            pending.insert(idx, result);
            while let Some(result) = pending.remove(&expected) {
                merge(&mut report, &mut last_prime, sink, result)?;
                report.verified_through = blocks[expected].1 - 1;
                expected += 1;
                since_checkpoint += 1;
                if since_checkpoint >= opts.checkpoint_interval.max(1) && expected < blocks.len() {
                    write_checkpoint(&report, last_prime, sink)?;
                    since_checkpoint = 0;
                }
            }
        }
        assert_eq!(expected, blocks.len(), "all blocks merged");
        Ok(())
    });
    merge_error?;

    if opts.hi > opts.lo {
        report.verified_through = opts.hi - 1;
    }
    sink.record(&ScanRecord::Summary(report.summary()))?;
    write_checkpoint(&report, last_prime, sink)?;
    report.elapsed = started.elapsed();
    Ok(report)
}
