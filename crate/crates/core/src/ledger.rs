//! Bit-cost accounting.
//!
//! Every metered operation charges the uniform bit model counters
//! (`bit_adds`, `bit_mults`, `bit_shifts`). When the ledger runs under
//! [`CostModel::WordRam`], the same operation additionally charges
//! `word_ops` in units of `w`-bit words. Values never depend on the model.
//!
//! Multiplication is charged as `Mult(t) = t * ceil(log2(t + 1))` no matter
//! which routine actually produced the product; the charge models an
//! FFT-class multiplier while the value is always exact.
//!
//! Shifts are charged by the bit-length of the shifted operand (one word
//! for single-word operands). Packed values in the recursion span several
//! words, so a flat per-shift charge would undercount.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bigint::Int;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("inexact shift: {value} is not divisible by 2^{bits}")]
    InexactShift { value: Int, bits: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CostModel {
    UniformBit,
    WordRam { w: u32 },
}

impl CostModel {
    /// Word-RAM with `w = max(64, ceil(log2 n) + 2*ceil(log2(bmax+1)) + 4)`,
    /// which keeps `w = Omega(log n + log bmax)` by construction.
    pub fn word_ram_for(n: u64, bmax: u64) -> Self {
        let w = ceil_log2(n.max(1)) + 2 * ceil_log2(bmax.saturating_add(1)) + 4;
        CostModel::WordRam { w: w.max(64) as u32 }
    }

    pub fn word_size(&self) -> Option<u32> {
        match self {
            CostModel::UniformBit => None,
            CostModel::WordRam { w } => Some(*w),
        }
    }
}

/// `ceil(log2(x))` for `x >= 1`.
pub fn ceil_log2(x: u64) -> u64 {
    assert!(x >= 1, "ceil_log2 of zero");
    64 - (x - 1).leading_zeros() as u64
}

/// `Mult(t) = t * ceil(log2(t + 1))`.
pub fn mult_cost(t: u64) -> u64 {
    t * ceil_log2(t + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LedgerSnapshot {
    pub model: String,
    pub w: Option<u32>,
    pub bit_adds: u64,
    pub bit_mults: u64,
    pub bit_shifts: u64,
    pub word_ops: u64,
    pub peak_bit_length: u64,
    pub per_depth_peak: BTreeMap<u32, u64>,
}

impl LedgerSnapshot {
    pub fn bit_total(&self) -> u64 {
        self.bit_adds + self.bit_mults + self.bit_shifts
    }
}

/// Single-writer cost meter. Parallel subcomputations each own a ledger and
/// are combined afterwards with [`CostLedger::merge`].
#[derive(Debug, Clone)]
pub struct CostLedger {
    model: CostModel,
    bit_adds: u64,
    bit_mults: u64,
    bit_shifts: u64,
    word_ops: u64,
    peak_bit_length: u64,
    per_depth_peak: BTreeMap<u32, u64>,
    depth_stack: Vec<u32>,
    tallies: BTreeMap<String, u64>,
    gauges: BTreeMap<String, u64>,
}

impl Default for CostLedger {
    fn default() -> Self {
        Self::new(CostModel::UniformBit)
    }
}

impl CostLedger {
    pub fn new(model: CostModel) -> Self {
        CostLedger {
            model,
            bit_adds: 0,
            bit_mults: 0,
            bit_shifts: 0,
            word_ops: 0,
            peak_bit_length: 0,
            per_depth_peak: BTreeMap::new(),
            depth_stack: Vec::new(),
            tallies: BTreeMap::new(),
            gauges: BTreeMap::new(),
        }
    }

    pub fn uniform_bit() -> Self {
        Self::new(CostModel::UniformBit)
    }

    pub fn word_ram(w: u32) -> Self {
        Self::new(CostModel::WordRam { w })
    }

    pub fn model(&self) -> CostModel {
        self.model
    }

    fn words(&self, t: u64) -> Option<u64> {
        self.model.word_size().map(|w| t.div_ceil(w as u64))
    }

    fn observe(&mut self, v: &Int) {
        self.peak_bit_length = self.peak_bit_length.max(v.bit_length());
    }

    pub fn add(&mut self, x: &Int, y: &Int) -> Int {
        let t = x.bit_length().max(y.bit_length());
        self.charge_add(t);
        let r = x + y;
        self.observe(&r);
        r
    }

    pub fn sub(&mut self, x: &Int, y: &Int) -> Int {
        let t = x.bit_length().max(y.bit_length());
        self.charge_add(t);
        let r = x - y;
        self.observe(&r);
        r
    }

    fn charge_add(&mut self, t: u64) {
        self.bit_adds += t;
        if let Some(k) = self.words(t) {
            self.word_ops += k;
        }
    }

    pub fn mul(&mut self, x: &Int, y: &Int) -> Int {
        let t = x.bit_length().max(y.bit_length());
        self.bit_mults += mult_cost(t);
        if let Some(k) = self.words(t) {
            self.word_ops += mult_cost(k);
        }
        let r = x * y;
        self.observe(&r);
        r
    }

    fn charge_shift(&mut self, x: &Int) {
        let t = x.bit_length();
        self.bit_shifts += t;
        if let Some(k) = self.words(t) {
            self.word_ops += k;
        }
    }

    /// Exact `x * 2^k`. A negative `k` must not discard nonzero bits.
    pub fn shift(&mut self, x: &Int, k: i64) -> Result<Int, CostError> {
        self.charge_shift(x);
        let r = if k >= 0 {
            x.shl(k as u64)
        } else {
            let bits = k.unsigned_abs();
            match x.trailing_zeros() {
                Some(tz) if tz < bits => {
                    return Err(CostError::InexactShift {
                        value: x.clone(),
                        bits,
                    })
                }
                _ => x.shr_floor(bits),
            }
        };
        self.observe(&r);
        Ok(r)
    }

    /// `floor(x / 2^k)`.
    pub fn shr_floor(&mut self, x: &Int, k: u64) -> Int {
        self.charge_shift(x);
        let r = x.shr_floor(k);
        self.observe(&r);
        r
    }

    /// `x mod 2^k` in `[0, 2^k)`; charged like a shift (bit masking).
    pub fn mod_pow2(&mut self, x: &Int, k: u64) -> Int {
        self.charge_shift(x);
        let r = x.mod_pow2(k);
        self.observe(&r);
        r
    }

    /// Records a materialized packed operand at the current depth.
    pub fn record_temporary(&mut self, v: &Int) {
        let bits = v.bit_length();
        self.peak_bit_length = self.peak_bit_length.max(bits);
        if let Some(&d) = self.depth_stack.last() {
            let slot = self.per_depth_peak.entry(d).or_insert(0);
            *slot = (*slot).max(bits);
        }
    }

    pub fn enter_depth(&mut self, depth: u32) {
        self.depth_stack.push(depth);
    }

    pub fn exit_depth(&mut self) {
        self.depth_stack.pop();
    }

    pub fn current_depth(&self) -> Option<u32> {
        self.depth_stack.last().copied()
    }

    /// Adds `by` to a named event counter.
    pub fn tally(&mut self, name: &str, by: u64) {
        *self.tallies.entry(name.to_string()).or_insert(0) += by;
    }

    pub fn tally_of(&self, name: &str) -> u64 {
        self.tallies.get(name).copied().unwrap_or(0)
    }

    /// Raises a named high-water mark.
    pub fn gauge(&mut self, name: &str, value: u64) {
        let slot = self.gauges.entry(name.to_string()).or_insert(0);
        *slot = (*slot).max(value);
    }

    pub fn gauge_of(&self, name: &str) -> Option<u64> {
        self.gauges.get(name).copied()
    }

    pub fn bit_adds(&self) -> u64 {
        self.bit_adds
    }

    pub fn bit_mults(&self) -> u64 {
        self.bit_mults
    }

    pub fn bit_shifts(&self) -> u64 {
        self.bit_shifts
    }

    pub fn word_ops(&self) -> u64 {
        self.word_ops
    }

    pub fn peak_bit_length(&self) -> u64 {
        self.peak_bit_length
    }

    pub fn per_depth_peak(&self) -> &BTreeMap<u32, u64> {
        &self.per_depth_peak
    }

    /// Sums counters and takes maxima of peaks. Models must agree.
    pub fn merge(&mut self, other: &CostLedger) {
        assert_eq!(self.model, other.model, "merging ledgers of different models");
        self.bit_adds += other.bit_adds;
        self.bit_mults += other.bit_mults;
        self.bit_shifts += other.bit_shifts;
        self.word_ops += other.word_ops;
        self.peak_bit_length = self.peak_bit_length.max(other.peak_bit_length);
        for (&d, &b) in &other.per_depth_peak {
            let slot = self.per_depth_peak.entry(d).or_insert(0);
            *slot = (*slot).max(b);
        }
        for (k, &v) in &other.tallies {
            *self.tallies.entry(k.clone()).or_insert(0) += v;
        }
        for (k, &v) in &other.gauges {
            let slot = self.gauges.entry(k.clone()).or_insert(0);
            *slot = (*slot).max(v);
        }
    }

    /// A fresh ledger with the same model and no charges.
    pub fn fork(&self) -> CostLedger {
        CostLedger::new(self.model)
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot {
            model: match self.model {
                CostModel::UniformBit => "uniformBit".into(),
                CostModel::WordRam { .. } => "wordRam".into(),
            },
            w: self.model.word_size(),
            bit_adds: self.bit_adds,
            bit_mults: self.bit_mults,
            bit_shifts: self.bit_shifts,
            word_ops: self.word_ops,
            peak_bit_length: self.peak_bit_length,
            per_depth_peak: self.per_depth_peak.clone(),
        }
    }
}
