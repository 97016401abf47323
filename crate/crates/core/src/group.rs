use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `Z/d_1 ⊕ ⋯ ⊕ Z/d_k` with `d_1 | d_2 | ⋯ | d_k` and every `d_i ≥ 2`.
///
/// The empty list is the trivial group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FiniteAbelianGroup {
    invariant_factors: Vec<BigUint>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Validates a divisibility chain of factors `≥ 2`.
    pub fn from_chain(invariant_factors: Vec<BigUint>) -> Result<Self> {
        let two = BigUint::from(2u8);
        if invariant_factors.iter().any(|d| d < &two) {
            return Err(Error::InvalidGroup("invariant factors must be at least 2"));
        }
        if invariant_factors.windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(Error::InvalidGroup("invariant factors must form a divisibility chain"));
        }
        Ok(FiniteAbelianGroup { invariant_factors })
    }

    pub fn from_u64s(factors: &[u64]) -> Result<Self> {
        Self::from_chain(factors.iter().map(|&d| BigUint::from(d)).collect())
    }

    /// The group `⊕ Z/m_i` for arbitrary positive orders `m_i`, brought to
    /// invariant-factor form.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidGroup("cyclic orders must be positive"));
        }
        // prime-power parts, merged per prime into descending exponent lists
        let mut parts: Vec<(u64, Vec<u32>)> = Vec::new();
        for &m in orders {
            let mut m = m;
            let mut p = 2;
            while m > 1 {
                if p * p > m {
                    p = m;
                }
                if m % p == 0 {
                    let mut e = 0;
                    while m % p == 0 {
                        m /= p;
                        e += 1;
                    }
                    match parts.iter_mut().find(|(q, _)| *q == p) {
                        Some((_, es)) => es.push(e),
                        None => parts.push((p, alloc::vec![e])),
                    }
                }
                p += 1;
            }
        }
        let len = parts.iter().map(|(_, es)| es.len()).max().unwrap_or(0);
        let mut factors = alloc::vec![BigUint::one(); len];
        for (p, es) in &mut parts {
            es.sort_unstable_by(|a, b| b.cmp(a));
            for (slot, &e) in es.iter().enumerate() {
                factors[len - 1 - slot] *= BigUint::from(*p).pow(e);
            }
        }
        Self::from_chain(factors)
    }

    pub fn invariant_factors(&self) -> &[BigUint] {
        &self.invariant_factors
    }

    /// Invariant factors as machine words, if they all fit.
    pub fn factors_u64(&self) -> Option<Vec<u64>> {
        self.invariant_factors.iter().map(|d| d.to_u64()).collect()
    }

    /// Number of invariant factors (the minimal number of generators).
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> BigUint {
        self.invariant_factors.iter().product()
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    /// Largest invariant factor, `1` for the trivial group.
    pub fn exponent(&self) -> BigUint {
        self.invariant_factors.last().cloned().unwrap_or_else(BigUint::one)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors.len() <= 1
    }

    /// `dim_{F_p} Γ/pΓ`.
    pub fn p_rank(&self, p: u64) -> usize {
        let p = BigUint::from(p);
        self.invariant_factors.iter().filter(|d| (*d % &p).is_zero()).count()
    }

    /// Sylow `p`-subgroup, as its own invariant-factor list.
    pub fn sylow(&self, p: u64) -> FiniteAbelianGroup {
        let factors = self
            .invariant_factors
            .iter()
            .map(|d| p_part(d, p))
            .filter(|q| !q.is_one())
            .collect();
        FiniteAbelianGroup { invariant_factors: factors }
    }

    /// `true` when all invariant factors are powers of `p`.
    pub fn is_p_group(&self, p: u64) -> bool {
        self.invariant_factors.iter().all(|d| p_part(d, p) == *d)
    }

    /// Exponents `e_i` with `d_i = p^{e_i}`, for a `p`-group.
    pub fn p_exponents(&self, p: u64) -> Option<Vec<u32>> {
        self.invariant_factors
            .iter()
            .map(|d| {
                let (q, e) = split_p_part(d, p);
                (q.is_one()).then_some(e)
            })
            .collect()
    }
}

/// Largest power of `p` dividing `d`.
pub fn p_part(d: &BigUint, p: u64) -> BigUint {
    let (rest, _) = split_p_part(d, p);
    d / rest
}

/// Writes `d = p^e · m` with `p ∤ m`; returns `(m, e)`.
pub fn split_p_part(d: &BigUint, p: u64) -> (BigUint, u32) {
    let p = BigUint::from(p);
    let mut m = d.clone();
    let mut e = 0;
    if m.is_zero() {
        return (m, 0);
    }
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        m = q;
        e += 1;
    }
    (m, e)
}

/// Prime divisors of `n` by trial division up to `trial_bound`.
///
/// Returns the primes found and the unfactored cofactor (`1` when fully
/// factored).
pub fn small_prime_divisors(n: &BigUint, trial_bound: u64) -> (Vec<u64>, BigUint) {
    let mut m = n.clone();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p <= trial_bound && !m.is_one() && !m.is_zero() {
        let bp = BigUint::from(p);
        if (&m % &bp).is_zero() {
            out.push(p);
            while (&m % &bp).is_zero() {
                m /= &bp;
            }
        }
        if &bp * &bp > m {
            if !m.is_one() {
                if let Some(q) = m.to_u64() {
                    out.push(q);
                    m = BigUint::one();
                }
            }
            break;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (out, m)
}

/// Distinct prime factors of `n`, ascending.
///
/// Trial division up to `2^16`, then Miller–Rabin and Pollard's rho on the
/// cofactor.
pub fn prime_factors(n: &BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let (small, rest) = small_prime_divisors(n, 1 << 16);
    out.extend(small.into_iter().map(BigUint::from));
    let mut stack = alloc::vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            out.push(m);
            continue;
        }
        let f = pollard_rho(&m);
        let mut cof = m.clone();
        let mut g = f.clone();
        while !g.is_one() {
            cof /= &g;
            g = cof.gcd(&g);
        }
        stack.push(f);
        stack.push(cof);
    }
    out.sort();
    out.dedup();
    out
}

fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u8);
    if n < &two {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let bp = BigUint::from(p);
        if n == &bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u8;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    // these bases are deterministic below 3.3e24 and a strong test beyond
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nontrivial factor of the odd composite `n` (Brent's variant).
fn pollard_rho(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let (mut x, mut y) = (BigUint::from(2u8), BigUint::from(2u8));
        let mut d = BigUint::one();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1u8;
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return f.write_str("1");
        }
        f.write_str("(")?;
        for (i, d) in self.invariant_factors.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_validation() {
        assert!(FiniteAbelianGroup::from_u64s(&[2, 4, 8]).is_ok());
        assert!(FiniteAbelianGroup::from_u64s(&[4, 2]).is_err());
        assert!(FiniteAbelianGroup::from_u64s(&[1, 2]).is_err());
        assert!(FiniteAbelianGroup::from_u64s(&[]).unwrap().is_trivial());
    }

    #[test]
    fn cyclic_orders_normalize() {
        let g = FiniteAbelianGroup::from_cyclic_orders(&[2, 3]).unwrap();
        assert_eq!(g, FiniteAbelianGroup::from_u64s(&[6]).unwrap());
        let g = FiniteAbelianGroup::from_cyclic_orders(&[2, 2, 3, 1]).unwrap();
        assert_eq!(g, FiniteAbelianGroup::from_u64s(&[2, 6]).unwrap());
        let g = FiniteAbelianGroup::from_cyclic_orders(&[4, 6, 9]).unwrap();
        assert_eq!(g, FiniteAbelianGroup::from_u64s(&[6, 36]).unwrap());
    }

    #[test]
    fn accessors() {
        let g = FiniteAbelianGroup::from_u64s(&[2, 12]).unwrap();
        assert_eq!(g.order_u64(), Some(24));
        assert_eq!(g.p_rank(2), 2);
        assert_eq!(g.p_rank(3), 1);
        assert_eq!(g.p_rank(5), 0);
        assert_eq!(g.sylow(2), FiniteAbelianGroup::from_u64s(&[2, 4]).unwrap());
        assert_eq!(g.sylow(3), FiniteAbelianGroup::from_u64s(&[3]).unwrap());
        assert!(!g.is_cyclic());
        assert_eq!(g.sylow(2).p_exponents(2), Some(alloc::vec![1, 2]));
        assert_eq!(g.to_string(), "(2, 12)");
        let (ps, rest) = small_prime_divisors(&BigUint::from(2u32 * 9 * 49 * 101), 50);
        assert_eq!(ps, [2, 3, 7, 101]);
        assert!(rest.is_one());
    }

    #[test]
    fn factorization() {
        let n = BigUint::from(1_000_000_007u64) * BigUint::from(998_244_353u64) * 12u32;
        let fs: Vec<BigUint> = prime_factors(&n);
        let want: Vec<BigUint> = [2u64, 3, 998_244_353, 1_000_000_007].iter().map(|&x| BigUint::from(x)).collect();
        assert_eq!(fs, want);
        assert!(prime_factors(&BigUint::one()).is_empty());
    }
}
