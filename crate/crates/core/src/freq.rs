//! Mergeable trial counts keyed by class text.

use alloc::collections::BTreeMap;
use alloc::string::String;

/// Counts of trial outcomes by key, plus the number of discarded draws.
///
/// Counts sum to `total`. Merging adds every field, so any partition of the
/// trials across workers produces the same table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    total: u64,
    discarded: u64,
    counts: BTreeMap<String, u64>,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, key: impl Into<String>) {
        self.record_n(key, 1);
    }

    pub fn record_n(&mut self, key: impl Into<String>, n: u64) {
        *self.counts.entry(key.into()).or_default() += n;
        self.total += n;
    }

    /// Draws rejected before a trial produced its outcome.
    pub fn add_discarded(&mut self, n: u64) {
        self.discarded += n;
    }

    pub fn merge(&mut self, other: &FrequencyTable) {
        self.total += other.total;
        self.discarded += other.discarded;
        for (k, v) in &other.counts {
            *self.counts.entry(k.clone()).or_default() += v;
        }
    }

    pub fn merged(mut self, other: &FrequencyTable) -> FrequencyTable {
        self.merge(other);
        self
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn discarded(&self) -> u64 {
        self.discarded
    }

    pub fn count(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn proportion(&self, key: &str) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(key) as f64 / self.total as f64
        }
    }

    /// Keys in sorted order with their counts.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }
}
