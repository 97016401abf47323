//! Haar-random symmetric matrices over `Z_p`, truncated mod `p^N`, and the
//! cokernel `p`-group with its pairing.
//!
//! The cokernel is read off by symmetric elimination (congruence
//! `A ↦ E A Eᵀ` with `E` unimodular over `Z_p`), which keeps the pairing
//! `⟨x, y⟩ = yᵀ A⁻¹ x` and splits off one orthogonal summand per pivot.
//! A pivot `u·p^a` gives `(Z/p^a, u⁻¹/p^a)`; at `p = 2` a pivot block
//! `2^a [[x, y], [y, z]]` with `y` odd gives `(Z/2^a)^2` with Gram
//! `2^{-a} [[x, y], [y, z]]⁻¹`. Units are only known mod `p^{N-a}`; the
//! Gram uses their least nonnegative lift, which is the exact pairing of a
//! `p`-adic matrix agreeing with the sample mod `p^N`. Its isomorphism class
//! depends only on units mod 8, so it is determined whenever
//! `a ≤ N - guard` with `guard ≥ 3`.

use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use crate::arith::{add_mod, checked_pow, inv_mod, is_prime, mul_mod, sub_mod, valuation_capped};
use crate::classify::{classify_odd_p, other_key, Catalog};
use crate::error::{Error, Result};
use crate::freq::FrequencyTable;
use crate::graph::Graph;
use crate::group::FiniteAbelianGroup;
use crate::pairing::{from_independent_generators, PairingGram, SurjectionCounter, SylowPairing};
use crate::rng::{trial_rng, uniform_below};

pub const DEFAULT_PRECISION: u32 = 20;
pub const DEFAULT_GUARD: u32 = 4;

/// Frequency-table key for samples whose cokernel needs more digits.
pub const PRECISION_EXCEEDED_KEY: &str = "precision_exceeded";

/// A symmetric `n×n` matrix of residues mod `p^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedPadicSymMatrix {
    p: u64,
    precision: u32,
    n: usize,
    entries: Vec<u64>,
}

fn modulus_for(p: u64, precision: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if precision == 0 {
        return Err(Error::InvalidArgument("precision must be at least 1"));
    }
    match checked_pow(p, precision) {
        Some(m) if m <= u64::MAX / 2 => Ok(m),
        _ => Err(Error::InvalidArgument("p^N must fit in 63 bits")),
    }
}

impl TruncatedPadicSymMatrix {
    /// Reduces entries mod `p^N`; fails if the matrix is not symmetric.
    pub fn new(p: u64, precision: u32, n: usize, entries: &[i64]) -> Result<Self> {
        let m = modulus_for(p, precision)?;
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch("entries must be n x n"));
        }
        let entries: Vec<u64> = entries.iter().map(|&x| x.rem_euclid(m as i64) as u64).collect();
        for i in 0..n {
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(Error::InvalidArgument("matrix must be symmetric"));
                }
            }
        }
        Ok(TruncatedPadicSymMatrix { p, precision, n, entries })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.precision)
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Every row sums to zero mod `p^N`.
    pub fn is_zero_sum(&self) -> bool {
        let m = self.modulus();
        self.n >= 1 && (0..self.n).all(|i| self.entries[i * self.n..(i + 1) * self.n].iter().fold(0, |s, &x| add_mod(s, x, m)) == 0)
    }

    fn principal_block(&self, k: usize) -> Vec<u64> {
        (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| self.get(i, j)).collect()
    }
}

/// Entries `a_{ij}`, `i ≤ j`, drawn in row-major order, each uniform mod `p^N`.
pub fn sample_sym(p: u64, precision: u32, n: usize, seed: u64, trial: u64) -> Result<TruncatedPadicSymMatrix> {
    let m = modulus_for(p, precision)?;
    let mut rng = trial_rng(seed, trial);
    let mut entries = alloc::vec![0u64; n * n];
    for i in 0..n {
        for j in i..n {
            let x = uniform_below(&mut rng, m);
            entries[i * n + j] = x;
            entries[j * n + i] = x;
        }
    }
    Ok(TruncatedPadicSymMatrix { p, precision, n, entries })
}

/// Haar sample of the zero-sum matrices: the leading `(n-1)`-block is drawn
/// as in [`sample_sym`] and the last row and column are forced.
pub fn sample_sym_zerosum(p: u64, precision: u32, n: usize, seed: u64, trial: u64) -> Result<TruncatedPadicSymMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument("zero-sum matrices need n >= 2"));
    }
    let block = sample_sym(p, precision, n - 1, seed, trial)?;
    let m = block.modulus();
    let mut entries = alloc::vec![0u64; n * n];
    let mut total = 0u64;
    for i in 0..n - 1 {
        let mut row = 0u64;
        for j in 0..n - 1 {
            let x = block.get(i, j);
            entries[i * n + j] = x;
            row = add_mod(row, x, m);
        }
        entries[i * n + n - 1] = sub_mod(0, row, m);
        entries[(n - 1) * n + i] = sub_mod(0, row, m);
        total = add_mod(total, row, m);
    }
    entries[n * n - 1] = total;
    Ok(TruncatedPadicSymMatrix { p, precision, n, entries })
}

/// One orthogonal summand split off by the elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Summand {
    /// `(Z/p^a, δ(1,1) = unit⁻¹ / p^a)`, the unit known mod `p^{N-a}`.
    Cyclic { a: u32, unit: u64 },
    /// `((Z/2^a)^2, 2^{-a} [[x, y], [y, z]]⁻¹)`, `y` odd, `x` and `z` even.
    Block { a: u32, x: u64, y: u64, z: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HaarSampleOutcome {
    Classified(SylowPairing),
    PrecisionExceeded,
}

/// Symmetric elimination mod `p^N`. Returns the nontrivial summands, or
/// `None` when some pivot valuation exceeds `N - guard`.
pub fn eliminate(a: &TruncatedPadicSymMatrix, guard: u32) -> Option<Vec<Summand>> {
    let (p, big_n) = (a.p, a.precision);
    let mut k = a.n;
    let mut s = if a.is_zero_sum() && a.n >= 2 {
        k = a.n - 1;
        a.principal_block(k)
    } else {
        a.entries.clone()
    };
    eliminate_block(p, big_n, k, &mut s, guard)
}

fn eliminate_block(p: u64, big_n: u32, n: usize, s: &mut [u64], guard: u32) -> Option<Vec<Summand>> {
    let m = p.pow(big_n);
    let limit = big_n.saturating_sub(guard);
    let val = |x: u64| valuation_capped(x, p, big_n);
    let mut active: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    while !active.is_empty() {
        // first minimal-valuation entry in row-major order
        let mut best = (big_n, 0usize, 0usize);
        'scan: for (ii, &i) in active.iter().enumerate() {
            for &j in &active[ii..] {
                let v = val(s[i * n + j]);
                if v < best.0 {
                    best = (v, i, j);
                    if v == 0 && i == j {
                        break 'scan;
                    }
                }
            }
        }
        let (a, i0, j0) = best;
        if a > limit || a >= big_n {
            return None;
        }
        let diag = if i0 == j0 { Some(i0) } else { active.iter().copied().find(|&d| val(s[d * n + d]) == a) };
        let pa = p.pow(a);
        match (diag, p) {
            (Some(d), _) => pivot1(s, n, &mut active, d, pa, m, a, &mut out),
            (None, 2) => pivot2(s, n, &mut active, i0, j0, pa, m, a, &mut out),
            (None, _) => {
                // row/col i0 += row/col j0 puts valuation a on the diagonal
                for &k in &active {
                    s[i0 * n + k] = add_mod(s[i0 * n + k], s[j0 * n + k], m);
                }
                for &k in &active {
                    s[k * n + i0] = if k == i0 {
                        add_mod(s[i0 * n + i0], s[i0 * n + j0], m)
                    } else {
                        s[i0 * n + k]
                    };
                }
                pivot1(s, n, &mut active, i0, pa, m, a, &mut out)
            }
        }
    }
    Some(out)
}

#[allow(clippy::too_many_arguments)]
fn pivot1(s: &mut [u64], n: usize, active: &mut Vec<usize>, d: usize, pa: u64, m: u64, a: u32, out: &mut Vec<Summand>) {
    let rest = m / pa;
    let u = (s[d * n + d] / pa) % rest;
    let uinv = inv_mod(u, rest).expect("pivot is a unit times p^a");
    active.retain(|&x| x != d);
    // t_k = s_kd / p^a, known mod p^{N-a}
    let t: Vec<u64> = active.iter().map(|&k| (s[k * n + d] / pa) % rest).collect();
    for (ki, &k) in active.iter().enumerate() {
        let tk = mul_mod(t[ki], uinv, rest);
        for (li, &l) in active.iter().enumerate().skip(ki) {
            let corr = mul_mod(mul_mod(tk, t[li], rest), pa, m);
            let v = sub_mod(s[k * n + l], corr, m);
            s[k * n + l] = v;
            s[l * n + k] = v;
        }
    }
    if a > 0 {
        out.push(Summand::Cyclic { a, unit: u });
    }
}

#[allow(clippy::too_many_arguments)]
fn pivot2(s: &mut [u64], n: usize, active: &mut Vec<usize>, i: usize, j: usize, pa: u64, m: u64, a: u32, out: &mut Vec<Summand>) {
    let rest = m / pa;
    let x = (s[i * n + i] / pa) % rest;
    let y = (s[i * n + j] / pa) % rest;
    let z = (s[j * n + j] / pa) % rest;
    let det = sub_mod(mul_mod(x, z, rest), mul_mod(y, y, rest), rest);
    let dinv = inv_mod(det, rest).expect("block determinant is a unit");
    active.retain(|&k| k != i && k != j);
    let b: Vec<(u64, u64)> = active.iter().map(|&k| ((s[k * n + i] / pa) % rest, (s[k * n + j] / pa) % rest)).collect();
    for (ki, &k) in active.iter().enumerate() {
        let (bi, bj) = b[ki];
        for (li, &l) in active.iter().enumerate().skip(ki) {
            let (ci, cj) = b[li];
            // b_k · adj(B') · c_l with adj = [[z, -y], [-y, x]]
            let mut q = mul_mod(mul_mod(bi, ci, rest), z, rest);
            q = add_mod(q, mul_mod(mul_mod(bj, cj, rest), x, rest), rest);
            let cross = add_mod(mul_mod(bi, cj, rest), mul_mod(bj, ci, rest), rest);
            q = sub_mod(q, mul_mod(cross, y, rest), rest);
            let corr = mul_mod(mul_mod(q, dinv, rest), pa, m);
            let v = sub_mod(s[k * n + l], corr, m);
            s[k * n + l] = v;
            s[l * n + k] = v;
        }
    }
    out.push(Summand::Block { a, x, y, z });
}

/// The `p`-group with pairing described by a list of summands.
pub fn summands_to_pairing(p: u64, summands: &[Summand]) -> SylowPairing {
    let mut orders = Vec::new();
    let mut blocks: Vec<(usize, Vec<BigRational>)> = Vec::new();
    for s in summands {
        match *s {
            Summand::Cyclic { a, unit } => {
                let pa = p.pow(a);
                let v = inv_mod(unit % pa, pa).expect("unit");
                orders.push(BigUint::from(pa));
                blocks.push((1, alloc::vec![frac(v, pa)]));
            }
            Summand::Block { a, x, y, z } => {
                let pa = p.pow(a);
                let det = (x as i128 * z as i128 - y as i128 * y as i128).rem_euclid(pa as i128) as u64;
                let di = inv_mod(det, pa).expect("odd determinant");
                let e = |t: i128| frac(mul_mod(t.rem_euclid(pa as i128) as u64, di, pa), pa);
                orders.push(BigUint::from(pa));
                orders.push(BigUint::from(pa));
                blocks.push((2, alloc::vec![e(z as i128), e(-(y as i128)), e(-(y as i128)), e(x as i128)]));
            }
        }
    }
    let k = orders.len();
    let mut values = alloc::vec![BigRational::from_integer(0.into()); k * k];
    let mut off = 0;
    for (b, g) in blocks {
        for r in 0..b {
            for c in 0..b {
                values[(off + r) * k + off + c] = g[r * b + c].clone();
            }
        }
        off += b;
    }
    let pairing = if k == 0 {
        PairingGram::trivial()
    } else {
        from_independent_generators(&orders, &values).expect("summands are well defined")
    };
    SylowPairing { prime: p, pairing }
}

fn frac(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The cokernel `p`-group with pairing, or `PrecisionExceeded`.
///
/// Zero-sum inputs are reduced to their leading `(n-1)`-block, whose
/// cokernel is the torsion part of the full one.
pub fn cokernel_pairing_mod_pn(a: &TruncatedPadicSymMatrix, guard: u32) -> Result<HaarSampleOutcome> {
    if guard == 0 {
        return Err(Error::InvalidArgument("guard must be at least 1"));
    }
    Ok(match eliminate(a, guard) {
        Some(s) => HaarSampleOutcome::Classified(summands_to_pairing(a.p, &s)),
        None => HaarSampleOutcome::PrecisionExceeded,
    })
}

/// The cokernel group only, from pivot valuations.
pub fn cokernel_group_mod_pn(a: &TruncatedPadicSymMatrix, guard: u32) -> Option<FiniteAbelianGroup> {
    let s = eliminate(a, guard)?;
    let orders: Vec<u64> = s
        .iter()
        .flat_map(|s| match *s {
            Summand::Cyclic { a: e, .. } => alloc::vec![a.p.pow(e)],
            Summand::Block { a: e, .. } => alloc::vec![a.p.pow(e); 2],
        })
        .collect();
    Some(FiniteAbelianGroup::from_cyclic_orders(&orders).expect("prime powers"))
}

/// Sylow `p`-part of a connected graph's Jacobian with its pairing, up to
/// isometry.
///
/// Eliminates the reduced Laplacian modulo the largest `p^N < 2^62`; if a
/// pivot is too deep for that precision the exact integer path is used.
pub fn jacobian_sylow_pairing(g: &Graph, p: u64) -> Result<SylowPairing> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if g.vertex_count() == 0 || !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let n = g.vertex_count() - 1;
    let mut precision = 1;
    while checked_pow(p, precision + 1).is_some_and(|m| m < 1 << 62) {
        precision += 1;
    }
    if n > 0 && precision > DEFAULT_GUARD {
        let mut entries = alloc::vec![0i64; n * n];
        for &(u, v) in g.edges() {
            if u < n {
                entries[u * n + u] += 1;
            }
            if v < n {
                entries[v * n + v] += 1;
            }
            if v < n {
                entries[u * n + v] = -1;
                entries[v * n + u] = -1;
            }
        }
        let a = TruncatedPadicSymMatrix::new(p, precision, n, &entries)?;
        if let Some(s) = eliminate_block(p, precision, n, &mut a.entries.clone(), DEFAULT_GUARD) {
            return Ok(summands_to_pairing(p, &s));
        }
    }
    Ok(crate::pairing::jacobian_with_pairing(g)?.sylow_part(p))
}

/// Parameters shared by the Haar experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HaarOptions {
    pub precision: u32,
    pub guard: u32,
    pub zero_sum: bool,
}

impl Default for HaarOptions {
    fn default() -> Self {
        HaarOptions { precision: DEFAULT_PRECISION, guard: DEFAULT_GUARD, zero_sum: false }
    }
}

fn draw(p: u64, n: usize, seed: u64, trial: u64, opts: &HaarOptions) -> Result<TruncatedPadicSymMatrix> {
    if opts.zero_sum {
        sample_sym_zerosum(p, opts.precision, n, seed, trial)
    } else {
        sample_sym(p, opts.precision, n, seed, trial)
    }
}

/// Class frequencies of cokernels over the given trial indices.
///
/// Keys are class texts, `other(order=…)` for 2-groups beyond the catalog,
/// and [`PRECISION_EXCEEDED_KEY`].
pub fn estimate_mu_n_range(p: u64, n: usize, trials: Range<u64>, seed: u64, opts: &HaarOptions, catalog2: &Catalog) -> Result<FrequencyTable> {
    let mut table = FrequencyTable::new();
    for t in trials {
        let a = draw(p, n, seed, t, opts)?;
        match cokernel_pairing_mod_pn(&a, opts.guard)? {
            HaarSampleOutcome::PrecisionExceeded => table.record(PRECISION_EXCEEDED_KEY),
            HaarSampleOutcome::Classified(s) => {
                let key = if s.group().is_trivial() {
                    alloc::string::String::from("1")
                } else if p == 2 {
                    match catalog2.classify(&s) {
                        Ok(e) => alloc::format!("{}", e.class),
                        Err(Error::OrderExceedsBound { .. }) => other_key(&s.group().order()),
                        Err(e) => return Err(e),
                    }
                } else {
                    alloc::format!("{}", classify_odd_p(&s)?)
                };
                table.record(key);
            }
        }
    }
    Ok(table)
}

pub fn estimate_mu_n(p: u64, n: usize, trials: u64, seed: u64, opts: &HaarOptions, catalog2: &Catalog) -> Result<FrequencyTable> {
    estimate_mu_n_range(p, n, 0..trials, seed, opts, catalog2)
}

/// Running sums of a per-trial statistic.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MomentSums {
    pub trials: u64,
    pub sum: f64,
    pub sum_sq: f64,
    pub precision_exceeded: u64,
}

impl MomentSums {
    pub fn merge(&mut self, o: &MomentSums) {
        self.trials += o.trials;
        self.sum += o.sum;
        self.sum_sq += o.sum_sq;
        self.precision_exceeded += o.precision_exceeded;
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.used() as f64
    }

    fn used(&self) -> u64 {
        self.trials - self.precision_exceeded
    }

    /// Unbiased sample variance of the statistic.
    pub fn variance(&self) -> f64 {
        let k = self.used() as f64;
        let mean = self.mean();
        ((self.sum_sq / k - mean * mean) * k / (k - 1.0)).max(0.0)
    }
}

/// Sums of `|Sur(coker A, target)|` over the given trials.
pub fn estimate_surjection_moment_range(p: u64, n: usize, target: &FiniteAbelianGroup, trials: Range<u64>, seed: u64, opts: &HaarOptions) -> Result<MomentSums> {
    if !target.is_p_group(p) {
        return Err(Error::InvalidGroup("target must be a p-group"));
    }
    if target.rank() > n {
        return Err(Error::RankExceedsN { rank: target.rank(), n });
    }
    let counter = SurjectionCounter::new(target)?;
    let mut sums = MomentSums::default();
    for t in trials {
        let a = draw(p, n, seed, t, opts)?;
        sums.trials += 1;
        match cokernel_group_mod_pn(&a, opts.guard) {
            None => sums.precision_exceeded += 1,
            Some(g) => {
                let c = counter.count(&g) as f64;
                sums.sum += c;
                sums.sum_sq += c * c;
            }
        }
    }
    Ok(sums)
}

pub fn estimate_surjection_moment(p: u64, n: usize, target: &FiniteAbelianGroup, trials: u64, seed: u64, opts: &HaarOptions) -> Result<MomentSums> {
    estimate_surjection_moment_range(p, n, target, 0..trials, seed, opts)
}
