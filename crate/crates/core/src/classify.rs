//! Wall/Miranda generator symbols and canonical classes of pairings.
//!
//! For odd `p` the canonical form comes from orthogonal diagonalization.
//! For `p = 2` a [`Catalog`] enumerates orthogonal sums of generators up to
//! an order bound and picks representatives by exhaustive isomorphism
//! testing.
//!
//! Text form: `A`..`F` followed by the order of the summand, joined by `+`
//! (`"A2+A4"`, `"A3+E4"`); the trivial class is `"1"`. The two-generator
//! forms `E` and `F` on `(Z/2^r)^2` are therefore written with subscript
//! `4^r`, so `E4` is `E` at `r = 1`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{checked_pow, inv_mod, is_prime, is_quadratic_residue, least_nonresidue, mul_mod};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::pairing::{count_aut_pairing, from_independent_generators, sylow_split, PairingGram, SmallForm, SylowPairing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl SymbolKind {
    pub const ALL: [SymbolKind; 6] =
        [SymbolKind::A, SymbolKind::B, SymbolKind::C, SymbolKind::D, SymbolKind::E, SymbolKind::F];

    fn letter(self) -> char {
        match self {
            SymbolKind::A => 'A',
            SymbolKind::B => 'B',
            SymbolKind::C => 'C',
            SymbolKind::D => 'D',
            SymbolKind::E => 'E',
            SymbolKind::F => 'F',
        }
    }

    /// Smallest allowed `r` at `p = 2`.
    fn min_r2(self) -> u32 {
        match self {
            SymbolKind::A | SymbolKind::E => 1,
            SymbolKind::B | SymbolKind::F => 2,
            SymbolKind::C | SymbolKind::D => 3,
        }
    }

    fn is_binary(self) -> bool {
        matches!(self, SymbolKind::E | SymbolKind::F)
    }
}

/// One generator of the semigroup of `p`-groups with pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub kind: SymbolKind,
    pub prime: u64,
    pub r: u32,
}

impl Symbol {
    pub fn new(kind: SymbolKind, prime: u64, r: u32) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        let ok = if prime == 2 {
            r >= kind.min_r2()
        } else {
            matches!(kind, SymbolKind::A | SymbolKind::B) && r >= 1
        };
        if !ok {
            return Err(Error::InvalidArgument("generator symbol outside its allowed range"));
        }
        if checked_pow(prime, r).is_none() {
            return Err(Error::InvalidArgument("generator order exceeds 64 bits"));
        }
        Ok(Symbol { kind, prime, r })
    }

    /// `p^r`, the order of each cyclic factor.
    pub fn cyclic_order(&self) -> u64 {
        self.prime.pow(self.r)
    }

    /// Order of the summand; this is the subscript in the text form.
    pub fn order(&self) -> u64 {
        let c = self.cyclic_order();
        if self.kind.is_binary() {
            c * c
        } else {
            c
        }
    }

    /// Orders of the cyclic factors of the summand.
    pub fn factors(&self) -> Vec<u64> {
        let c = self.cyclic_order();
        if self.kind.is_binary() {
            alloc::vec![c, c]
        } else {
            alloc::vec![c]
        }
    }

    /// Gram matrix on the summand's own generators.
    pub fn gram(&self) -> Vec<BigRational> {
        let q = BigInt::from(self.cyclic_order());
        let frac = |n: i64| BigRational::new(BigInt::from(n), q.clone());
        match self.kind {
            SymbolKind::A => alloc::vec![frac(1)],
            SymbolKind::B if self.prime == 2 => alloc::vec![frac(-1)],
            SymbolKind::B => alloc::vec![frac(least_nonresidue(self.prime) as i64)],
            SymbolKind::C => alloc::vec![frac(5)],
            SymbolKind::D => alloc::vec![frac(-5)],
            SymbolKind::E => alloc::vec![frac(0), frac(1), frac(1), frac(0)],
            SymbolKind::F => alloc::vec![frac(2), frac(1), frac(1), frac(2)],
        }
    }

    fn key(&self) -> (SymbolKind, u64, u64) {
        (self.kind, self.order(), self.prime)
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    /// Letter first, then subscript.
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.letter(), self.order())
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseClass(s.to_string());
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('A') => SymbolKind::A,
            Some('B') => SymbolKind::B,
            Some('C') => SymbolKind::C,
            Some('D') => SymbolKind::D,
            Some('E') => SymbolKind::E,
            Some('F') => SymbolKind::F,
            _ => return Err(bad()),
        };
        let sub: u64 = chars.as_str().parse().map_err(|_| bad())?;
        let (prime, r) = if kind.is_binary() { prime_power(sub, true) } else { prime_power(sub, false) }.ok_or_else(bad)?;
        Symbol::new(kind, prime, r).map_err(|_| bad())
    }
}

/// Writes `n = p^k` (or `n = 4^k` with `p = 2` when `square` is set).
fn prime_power(n: u64, square: bool) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    if square {
        let mut r = 0;
        let mut m = n;
        while m.is_multiple_of(4) {
            m /= 4;
            r += 1;
        }
        return (m == 1).then_some((2, r));
    }
    let p = (2..).find(|d| n.is_multiple_of(*d) || d * d > n).filter(|d| n.is_multiple_of(*d)).unwrap_or(n);
    let mut r = 0;
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
        r += 1;
    }
    (m == 1).then_some((p, r))
}

/// A canonical isomorphism class of a finite abelian group with pairing,
/// given as a sorted multiset of generator symbols (all primes together).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PairingClass {
    symbols: Vec<Symbol>,
}

impl PairingClass {
    pub fn trivial() -> Self {
        PairingClass::default()
    }

    /// Sorts but does not normalize; use the classifiers for canonical forms.
    pub fn from_symbols(mut symbols: Vec<Symbol>) -> Self {
        symbols.sort();
        PairingClass { symbols }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn is_trivial(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.symbols.iter().map(|s| s.prime).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// The symbols at one prime.
    pub fn part(&self, p: u64) -> PairingClass {
        PairingClass { symbols: self.symbols.iter().filter(|s| s.prime == p).copied().collect() }
    }

    /// Orthogonal sum, with odd-prime parts renormalized.
    pub fn join(&self, other: &PairingClass) -> PairingClass {
        let mut all = self.symbols.clone();
        all.extend_from_slice(&other.symbols);
        let mut out = PairingClass::from_symbols(all);
        out.normalize_odd();
        out
    }

    pub fn order(&self) -> BigUint {
        self.symbols.iter().map(|s| BigUint::from(s.order())).product()
    }

    pub fn group(&self) -> FiniteAbelianGroup {
        let orders: Vec<u64> = self.symbols.iter().flat_map(Symbol::factors).collect();
        FiniteAbelianGroup::from_cyclic_orders(&orders).expect("prime-power orders")
    }

    /// A Gram matrix realizing the class, on invariant-factor generators.
    pub fn pairing(&self) -> PairingGram {
        let orders: Vec<BigUint> =
            self.symbols.iter().flat_map(Symbol::factors).map(BigUint::from).collect();
        let k = orders.len();
        let mut values = alloc::vec![BigRational::zero(); k * k];
        let mut off = 0;
        for s in &self.symbols {
            let g = s.gram();
            let b = s.factors().len();
            for i in 0..b {
                for j in 0..b {
                    values[(off + i) * k + off + j] = g[i * b + j].clone();
                }
            }
            off += b;
        }
        from_independent_generators(&orders, &values).expect("generator forms are well defined")
    }

    /// `|Aut(Γ, δ)|`, the product of the per-prime counts.
    pub fn aut_count(&self, bound: u64) -> Result<u64> {
        let mut total = 1u64;
        for p in self.primes() {
            let n = count_aut_pairing(&self.part(p).pairing(), bound)?;
            total = total.checked_mul(n).ok_or(Error::SearchTooLarge("automorphism count overflow"))?;
        }
        Ok(total)
    }

    /// `|Γ| · |Aut(Γ, δ)|`.
    pub fn expected_ratio(&self, bound: u64) -> Result<BigUint> {
        Ok(self.order() * BigUint::from(self.aut_count(bound)?))
    }

    /// Replaces `B ⊕ B` by `A ⊕ A` at odd primes.
    fn normalize_odd(&mut self) {
        let mut out: Vec<Symbol> = Vec::with_capacity(self.symbols.len());
        let mut counts: BTreeMap<(u64, u32), usize> = BTreeMap::new();
        for s in &self.symbols {
            if s.prime != 2 && s.kind == SymbolKind::B {
                *counts.entry((s.prime, s.r)).or_default() += 1;
            } else {
                out.push(*s);
            }
        }
        for ((p, r), n) in counts {
            for _ in 0..n / 2 * 2 {
                out.push(Symbol { kind: SymbolKind::A, prime: p, r });
            }
            if n % 2 == 1 {
                out.push(Symbol { kind: SymbolKind::B, prime: p, r });
            }
        }
        out.sort();
        self.symbols = out;
    }
}

impl fmt::Display for PairingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for PairingClass {
    type Err = Error;

    /// Parses the text form; odd-prime parts are normalized, 2-parts are
    /// taken verbatim.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(PairingClass::trivial());
        }
        let symbols = s
            .split(['+', ','])
            .map(|t| t.trim().parse::<Symbol>())
            .collect::<Result<Vec<_>>>()?;
        let mut c = PairingClass::from_symbols(symbols);
        c.normalize_odd();
        Ok(c)
    }
}

/// Canonical class of a pairing on a `p`-group, `p` odd, by orthogonal
/// diagonalization with unit pivots.
pub fn classify_odd_p(s: &SylowPairing) -> Result<PairingClass> {
    let p = s.prime;
    if p == 2 {
        return Err(Error::WrongPrime { expected: "odd", got: p });
    }
    let pairing = &s.pairing;
    let k = pairing.rank();
    if k == 0 {
        return Ok(PairingClass::trivial());
    }
    let dims = pairing.group().factors_u64().ok_or(Error::InvalidArgument("Sylow exponent exceeds 64 bits"))?;
    let modulus = pairing.modulus().to_u64().ok_or(Error::InvalidArgument("Sylow exponent exceeds 64 bits"))?;
    if modulus > u64::MAX / 2 {
        return Err(Error::InvalidArgument("Sylow exponent exceeds 63 bits"));
    }
    let m = crate::arith::valuation(modulus, p);
    let gram: Vec<u64> =
        (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| pairing.numerator(i, j).to_u64().expect("reduced")).collect();
    let pair = |x: &[u64], y: &[u64]| -> u64 {
        let mut acc = 0u64;
        for i in 0..k {
            if x[i] == 0 {
                continue;
            }
            for j in 0..k {
                let t = mul_mod(mul_mod(x[i], y[j], modulus), gram[i * k + j], modulus);
                acc = crate::arith::add_mod(acc, t, modulus);
            }
        }
        acc
    };
    // denominator exponent of n / p^m
    let den = |n: u64| -> u32 {
        if n == 0 {
            0
        } else {
            m - crate::arith::valuation(n, p)
        }
    };
    let mut gens: Vec<Vec<u64>> = (0..k).map(|i| (0..k).map(|j| u64::from(i == j)).collect()).collect();
    let mut symbols = Vec::new();
    let mut found_order = BigUint::one();
    while !gens.is_empty() {
        // diagonal pivots first; g + h only when δ(g, h) beats every δ(g, g),
        // since then 2δ(g, h) dominates q(g + h)
        let mut best: Option<(u32, Vec<u64>)> = None;
        for g in &gens {
            let a = den(pair(g, g));
            if best.as_ref().map_or(a > 0, |(b, _)| a > *b) {
                best = Some((a, g.clone()));
            }
        }
        for (i, g) in gens.iter().enumerate() {
            for h in &gens[i + 1..] {
                let a = den(pair(g, h));
                if best.as_ref().map_or(a > 0, |(b, _)| a > *b) {
                    best = Some((a, (0..k).map(|t| (g[t] + h[t]) % dims[t]).collect()));
                }
            }
        }
        let (a, x) = best.ok_or(Error::DegeneratePairing)?;
        let q = pair(&x, &x);
        if den(q) != a {
            return Err(Error::DegeneratePairing);
        }
        let pa = p.pow(a);
        let unit = (q / p.pow(m - a)) % pa;
        symbols.push(Symbol {
            kind: if is_quadratic_residue(unit % p, p) { SymbolKind::A } else { SymbolKind::B },
            prime: p,
            r: a,
        });
        found_order *= BigUint::from(pa);
        let uinv = inv_mod(unit, pa).ok_or(Error::DegeneratePairing)?;
        let mut next = Vec::with_capacity(gens.len());
        for y in &gens {
            let t = pair(y, &x) / p.pow(m - a);
            let c = mul_mod(t % pa, uinv, pa);
            let z: Vec<u64> = (0..k).map(|i| (y[i] + dims[i] - mul_mod(c, x[i], dims[i])) % dims[i]).collect();
            if z.iter().any(|&v| v != 0) {
                next.push(z);
            }
        }
        gens = next;
    }
    if found_order != pairing.group().order() {
        return Err(Error::DegeneratePairing);
    }
    let mut c = PairingClass::from_symbols(symbols);
    c.normalize_odd();
    Ok(c)
}

/// One isomorphism class in a [`Catalog`].
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub class: PairingClass,
    pub order: u64,
    pub aut: u64,
    form: SmallForm,
}

impl CatalogEntry {
    /// `|Γ| · |Aut(Γ, δ)|`.
    pub fn expected_ratio(&self) -> u64 {
        self.order * self.aut
    }

    /// `1 / (|Γ| · |Aut(Γ, δ)|)`.
    pub fn weight(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(self.expected_ratio()))
    }
}

/// Every isomorphism class of `p`-group with pairing of order at most
/// `bound`, with automorphism counts.
///
/// Classes are listed by order, then by representative. At `p = 2` the
/// representative of a class is its lexicographically smallest symbol list.
#[derive(Clone, Debug)]
pub struct Catalog {
    prime: u64,
    bound: u64,
    entries: Vec<CatalogEntry>,
    by_group: BTreeMap<Vec<u64>, Vec<usize>>,
}

/// Default order bound of the `p = 2` catalog.
pub const DEFAULT_CATALOG_BOUND: u64 = 64;

impl Catalog {
    pub fn new(prime: u64, bound: u64) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        if bound > crate::pairing::DEFAULT_BOUND {
            return Err(Error::OrderExceedsBound { order: bound, bound: crate::pairing::DEFAULT_BOUND });
        }
        let mut gens = Vec::new();
        for kind in SymbolKind::ALL {
            for r in 1.. {
                let Ok(s) = Symbol::new(kind, prime, r) else {
                    if prime == 2 && r < kind.min_r2() {
                        continue;
                    }
                    break;
                };
                if s.order() > bound {
                    break;
                }
                gens.push(s);
            }
        }
        let mut multisets: Vec<Vec<Symbol>> = Vec::new();
        fn extend(gens: &[Symbol], start: usize, cur: &mut Vec<Symbol>, order: u64, bound: u64, out: &mut Vec<Vec<Symbol>>) {
            out.push(cur.clone());
            for i in start..gens.len() {
                let o = order * gens[i].order();
                if o <= bound {
                    cur.push(gens[i]);
                    extend(gens, i, cur, o, bound, out);
                    cur.pop();
                }
            }
        }
        extend(&gens, 0, &mut Vec::new(), 1, bound, &mut multisets);
        for m in &mut multisets {
            m.sort();
        }
        if prime != 2 {
            // at most one B per exponent is already canonical
            multisets.retain(|m| {
                let bs: Vec<u32> = m.iter().filter(|s| s.kind == SymbolKind::B).map(|s| s.r).collect();
                bs.windows(2).all(|w| w[0] != w[1])
            });
        }
        multisets.sort_by(|a, b| {
            let oa: u64 = a.iter().map(Symbol::order).product();
            let ob: u64 = b.iter().map(Symbol::order).product();
            oa.cmp(&ob).then_with(|| a.cmp(b))
        });
        let mut cat = Catalog { prime, bound, entries: Vec::new(), by_group: BTreeMap::new() };
        for m in multisets {
            let class = PairingClass { symbols: m };
            let pairing = class.pairing();
            let form = pairing.small(bound)?;
            let dims = pairing.group().factors_u64().expect("small");
            let bucket = cat.by_group.entry(dims).or_default();
            if prime == 2 && bucket.iter().any(|&e| form.find_isometry(&cat.entries[e].form).is_some()) {
                continue;
            }
            let aut = form.count_isometries();
            let order = pairing.group().order_u64().expect("small");
            bucket.push(cat.entries.len());
            cat.entries.push(CatalogEntry { class, order, aut, form });
        }
        Ok(cat)
    }

    /// The `p = 2` catalog at the default bound.
    pub fn binary() -> Self {
        Catalog::new(2, DEFAULT_CATALOG_BOUND).expect("default catalog")
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn entries_up_to(&self, order: u64) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(move |e| e.order <= order)
    }

    pub fn get(&self, class: &PairingClass) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| &e.class == class)
    }

    /// Catalog class of a `p`-group pairing, by exhaustive isomorphism
    /// testing against the classes on the same group.
    pub fn classify(&self, s: &SylowPairing) -> Result<&CatalogEntry> {
        if s.prime != self.prime {
            return Err(Error::WrongPrime { expected: "catalog", got: s.prime });
        }
        let order = s.group().order();
        match order.to_u64() {
            Some(o) if o <= self.bound => {}
            _ => return Err(Error::OrderExceedsBound { order: order.to_u64().unwrap_or(u64::MAX), bound: self.bound }),
        }
        let form = s.pairing.small(self.bound)?;
        if !form.is_nondegenerate() {
            return Err(Error::DegeneratePairing);
        }
        let dims = s.group().factors_u64().expect("small");
        let bucket = self.by_group.get(&dims).ok_or(Error::NoCatalogMatch)?;
        bucket
            .iter()
            .map(|&e| &self.entries[e])
            .find(|e| form.find_isometry(&e.form).is_some())
            .ok_or(Error::NoCatalogMatch)
    }
}

/// Canonical class of a pairing on a 2-group, via the catalog.
pub fn classify_p2(s: &SylowPairing, catalog: &Catalog) -> Result<PairingClass> {
    if s.prime != 2 {
        return Err(Error::WrongPrime { expected: "2", got: s.prime });
    }
    if s.group().is_trivial() {
        return Ok(PairingClass::trivial());
    }
    Ok(catalog.classify(s)?.class.clone())
}

/// Canonical class of a `p`-group pairing at any prime.
pub fn classify_sylow(s: &SylowPairing, catalog2: &Catalog) -> Result<PairingClass> {
    if s.prime == 2 {
        classify_p2(s, catalog2)
    } else {
        classify_odd_p(s)
    }
}

/// Joint class over all primes dividing `|Γ|`.
pub fn classify(p: &PairingGram, catalog2: &Catalog) -> Result<PairingClass> {
    let mut symbols = Vec::new();
    for part in sylow_split(p)? {
        symbols.extend_from_slice(classify_sylow(&part, catalog2)?.symbols());
    }
    Ok(PairingClass::from_symbols(symbols))
}

/// Text key used in frequency tables for classes beyond a bound.
pub fn other_key(order: &BigUint) -> String {
    alloc::format!("other(order={order})")
}

#[cfg(test)]
mod tests;
