//! Small machine-word number theory used by the brute-force and `Z/p^N`
//! routines. Everything here works on `u64` with `u128` intermediates.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes up to and including `bound`, by sieve.
pub fn primes_up_to(bound: u64) -> alloc::vec::Vec<u64> {
    let bound = bound as usize;
    if bound < 2 {
        return alloc::vec::Vec::new();
    }
    let mut composite = alloc::vec![false; bound + 1];
    let mut out = alloc::vec::Vec::new();
    for i in 2..=bound {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= bound {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// `p`-adic valuation of a nonzero `n`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0 && p >= 2);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Valuation of `n` modulo `p^cap`: returns `cap` for zero.
pub fn valuation_capped(n: u64, p: u64, cap: u32) -> u32 {
    if n == 0 {
        cap
    } else {
        valuation(n, p).min(cap)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    let (a, b) = (a % m, b % m);
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Whether the unit `u` is a square modulo the odd prime `p`.
pub fn is_quadratic_residue(u: u64, p: u64) -> bool {
    debug_assert!(p > 2 && !u.is_multiple_of(p));
    pow_mod(u % p, (p - 1) / 2, p) == 1
}

/// The least quadratic non-residue modulo the odd prime `p`.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| !is_quadratic_residue(a, p)).expect("odd prime has a non-residue")
}
