//! Closed-form predictions: normalizing constants, the limiting measure,
//! finite-`n` cokernel probabilities, cyclic probabilities and moments.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{is_prime, primes_up_to};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;

/// Default number of factors per prime in truncated products.
pub const DEFAULT_TERMS: u32 = 20;

/// Default prime bound for products over all primes. Primes beyond `B`
/// contribute at most `1 / (2B(B+1))`, which is below `1e-9` here.
pub const DEFAULT_PRIME_BOUND: u64 = 30_000;

/// A truncated evaluation together with a rigorous bound on
/// `|value - exact|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub value: BigRational,
    pub truncation_bound: BigRational,
    pub terms_used: u64,
}

impl Prediction {
    pub fn exact(value: BigRational, terms_used: u64) -> Self {
        Prediction { value, truncation_bound: BigRational::zero(), terms_used }
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }

    pub fn bound_f64(&self) -> f64 {
        rational_to_f64(&self.truncation_bound)
    }

    /// Decimal rendering at 12 significant digits.
    pub fn render(&self) -> String {
        render_significant(&self.value, 12)
    }

    /// `value / d` with the bound scaled alike.
    fn divide(self, d: &BigUint) -> Self {
        let d = BigRational::from_integer(BigInt::from(d.clone()));
        Prediction {
            value: self.value / &d,
            truncation_bound: self.truncation_bound / d,
            terms_used: self.terms_used,
        }
    }
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Renders a rational with `digits` significant digits, rounding half up.
pub fn render_significant(x: &BigRational, digits: u32) -> String {
    if x.is_zero() {
        return String::from("0");
    }
    let neg = x.is_negative();
    let x = x.abs();
    let ten = BigInt::from(10);
    // e with 10^e <= x < 10^(e+1)
    let mut e: i64 = (x.numer().bits() as i64 - x.denom().bits() as i64) * 30103 / 100000;
    let pow = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while pow(e) > x {
        e -= 1;
    }
    while pow(e + 1) <= x {
        e += 1;
    }
    let scale = digits as i64 - 1 - e;
    let scaled = &x * pow(scale);
    let mut m = (scaled + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
    let mut scale = scale;
    if m.to_string().len() > digits as usize {
        m /= &ten;
        scale -= 1;
    }
    let s = m.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if scale <= 0 {
        out.push_str(&s);
        for _ in 0..(-scale) {
            out.push('0');
        }
    } else if (scale as usize) >= s.len() {
        out.push_str("0.");
        for _ in 0..(scale as usize - s.len()) {
            out.push('0');
        }
        out.push_str(&s);
    } else {
        let cut = s.len() - scale as usize;
        out.push_str(&s[..cut]);
        out.push('.');
        out.push_str(&s[cut..]);
    }
    if out.contains('.') {
        let trimmed = out.trim_end_matches('0').trim_end_matches('.').len();
        out.truncate(trimmed);
    }
    out
}

fn inv_pow(p: u64, k: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(BigUint::from(p).pow(k)))
}

fn one_minus_inv_pow(p: u64, k: u32) -> BigRational {
    BigRational::one() - inv_pow(p, k)
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `C_p = ∏_{i≥1} (1 - p^{1-2i})`, truncated after `terms` factors.
///
/// The bound is the tail sum `∑_{i>terms} p^{1-2i} = p^{-1-2·terms} / (1 - p^{-2})`.
pub fn c_p(p: u64, terms: u32) -> Result<Prediction> {
    check_prime(p)?;
    if terms == 0 {
        return Err(Error::InvalidArgument("at least one term is required"));
    }
    let value = (1..=terms).map(|i| one_minus_inv_pow(p, 2 * i - 1)).product();
    Ok(Prediction { value, truncation_bound: geometric_tail(p, 2 * terms + 1), terms_used: terms as u64 })
}

/// `∑_{i≥0} p^{-(start + 2i)} = p^{-start} / (1 - p^{-2})`.
fn geometric_tail(p: u64, start: u32) -> BigRational {
    inv_pow(p, start) / one_minus_inv_pow(p, 2)
}

/// Limit probability of trivial Sylow `p`-part, `C_p`.
pub fn trivial_p_probability(p: u64) -> Result<Prediction> {
    c_p(p, DEFAULT_TERMS)
}

/// Limit probability of cyclic Sylow `p`-part,
/// `C_p / (1 - p^{-1}) = ∏_{i≥1} (1 - p^{-1-2i})`.
pub fn cyclic_p_probability(p: u64, terms: u32) -> Result<Prediction> {
    check_prime(p)?;
    if terms == 0 {
        return Err(Error::InvalidArgument("at least one term is required"));
    }
    let value = (1..=terms).map(|i| one_minus_inv_pow(p, 2 * i + 1)).product();
    Ok(Prediction { value, truncation_bound: geometric_tail(p, 2 * terms + 3), terms_used: terms as u64 })
}

/// Fractional bits of the fixed-point running product.
const FIXED_BITS: usize = 256;

/// `∏_{p ≤ prime_bound} ∏_{i=1}^{terms} (1 - p^{-1-2i})`, the limiting
/// probability that the whole group is cyclic.
///
/// The bound adds the per-prime tails, the primes above the bound
/// (`∑_{m>B} 1/(m^3 - m) = 1/(2B(B+1))`) and any rounding.
pub fn cyclic_probability_global(prime_bound: u64, terms: u32) -> Result<Prediction> {
    cyclic_product(prime_bound, terms, false)
}

/// The same product over odd primes only.
pub fn cyclic_probability_odd(prime_bound: u64, terms: u32) -> Result<Prediction> {
    cyclic_product(prime_bound, terms, true)
}

fn cyclic_product(prime_bound: u64, terms: u32, skip_two: bool) -> Result<Prediction> {
    if terms == 0 || prime_bound < 2 {
        return Err(Error::InvalidArgument("need at least one prime and one term"));
    }
    // fixed point with FIXED_BITS fractional bits; each floor loses < 1 ulp
    let mut value = BigInt::one() << FIXED_BITS;
    let mut tail_ulps = BigInt::zero();
    let mut used = 0u64;
    for p in primes_up_to(prime_bound) {
        if skip_two && p == 2 {
            continue;
        }
        let pb = BigInt::from(p);
        for i in 1..=terms {
            let q = num_traits::pow(pb.clone(), 2 * i as usize + 1);
            value = value * (&q - 1u32) / &q;
            used += 1;
        }
        // ceil(2^FIXED_BITS · p^2 / (p^(2T+3) (p^2 - 1)))
        let p2 = &pb * &pb;
        let den = num_traits::pow(pb.clone(), 2 * terms as usize + 3) * (&p2 - 1u32);
        let num = (BigInt::one() << FIXED_BITS) * &p2;
        tail_ulps += (num + &den - 1u32) / den;
    }
    let ulp = BigRational::new(BigInt::one(), BigInt::one() << FIXED_BITS);
    let b = BigInt::from(prime_bound);
    let bound = BigRational::from_integer(tail_ulps + BigInt::from(used)) * &ulp
        + BigRational::new(BigInt::one(), BigInt::from(2) * &b * (&b + 1));
    Ok(Prediction { value: BigRational::from_integer(value) * ulp, truncation_bound: bound, terms_used: used })
}

/// `μ(Γ, δ) = C_p / (|Γ| · |Aut(Γ, δ)|)`.
pub fn mu_measure(p: u64, order: &BigUint, aut: u64) -> Result<Prediction> {
    Ok(c_p(p, DEFAULT_TERMS)?.divide(&(order * BigUint::from(aut))))
}

/// Exact probability that a Haar-random `n×n` symmetric matrix over `Z_p`
/// has cokernel isomorphic to a given pairing of `p`-rank `r`:
/// `∏_{j=n-r+1}^{n} (1-p^{-j}) ∏_{i=1}^{⌈(n-r)/2⌉} (1-p^{1-2i}) / (|Γ| |Aut|)`.
pub fn mu_n_finite(p: u64, n: usize, rank: usize, order: &BigUint, aut: u64) -> Result<Prediction> {
    check_prime(p)?;
    if rank > n {
        return Err(Error::RankExceedsN { rank, n });
    }
    let mut value = BigRational::one();
    for j in n - rank + 1..=n {
        value *= one_minus_inv_pow(p, j as u32);
    }
    let half = (n - rank).div_ceil(2);
    for i in 1..=half {
        value *= one_minus_inv_pow(p, 2 * i as u32 - 1);
    }
    Ok(Prediction::exact(value, (rank + half) as u64).divide(&(order * BigUint::from(aut))))
}

/// The zero-sum variant on `Sym_n^0`, equal to [`mu_n_finite`] at `n - 1`.
pub fn mu_n_zerosum(p: u64, n: usize, rank: usize, order: &BigUint, aut: u64) -> Result<Prediction> {
    if n == 0 {
        return Err(Error::RankExceedsN { rank, n: 0 });
    }
    mu_n_finite(p, n - 1, rank, order, aut).map_err(|e| match e {
        Error::RankExceedsN { rank, .. } => Error::RankExceedsN { rank, n },
        e => e,
    })
}

/// Exponents `e_1 ≤ ⋯ ≤ e_r` of `∏ Z/p^{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionType {
    exponents: Vec<u32>,
}

impl PartitionType {
    pub fn new(mut exponents: Vec<u32>) -> Result<Self> {
        if exponents.contains(&0) {
            return Err(Error::InvalidArgument("partition parts must be positive"));
        }
        exponents.sort_unstable();
        Ok(PartitionType { exponents })
    }

    /// Exponents of the Sylow `p`-subgroup of `g`.
    pub fn of_group(g: &FiniteAbelianGroup, p: u64) -> Self {
        let mut exponents: Vec<u32> = g
            .invariant_factors()
            .iter()
            .map(|d| crate::group::split_p_part(d, p).1)
            .filter(|&e| e > 0)
            .collect();
        exponents.sort_unstable();
        PartitionType { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn size(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// `λ'_j = #{i : e_i ≥ j}` for `j = 1..=max e`, returned ascending in the
    /// same convention as the exponents.
    pub fn transpose(&self) -> PartitionType {
        let top = self.exponents.last().copied().unwrap_or(0);
        let mut t: Vec<u32> = (1..=top).map(|j| self.exponents.iter().filter(|&&e| e >= j).count() as u32).collect();
        t.sort_unstable();
        PartitionType { exponents: t }
    }

    pub fn group(&self, p: u64) -> Result<FiniteAbelianGroup> {
        let orders: Vec<u64> = self
            .exponents
            .iter()
            .map(|&e| crate::arith::checked_pow(p, e).ok_or(Error::InvalidArgument("group order exceeds 64 bits")))
            .collect::<Result<_>>()?;
        FiniteAbelianGroup::from_cyclic_orders(&orders)
    }
}

/// `∑_i (r - i) e_i` with `e` ascending.
pub fn surjection_exponent(target: &PartitionType) -> u64 {
    let r = target.rank() as u64;
    target.exponents.iter().enumerate().map(|(i, &e)| (r - 1 - i as u64) * e as u64).sum()
}

/// `∑_j λ'_j (λ'_j - 1) / 2`, the same exponent summed by columns.
pub fn surjection_exponent_transpose(target: &PartitionType) -> u64 {
    target.transpose().exponents.iter().map(|&l| l as u64 * (l as u64).saturating_sub(1) / 2).sum()
}

/// Limiting expected number of surjections onto `target`,
/// `p^{(r-1)e_1 + (r-2)e_2 + ⋯ + e_{r-1}}`.
pub fn expected_surjections(target: &PartitionType, p: u64) -> Result<BigUint> {
    check_prime(p)?;
    let a = surjection_exponent(target);
    debug_assert_eq!(a, surjection_exponent_transpose(target));
    Ok(BigUint::from(p).pow(a as u32))
}

/// Exact expectation at size `n`:
/// `p^{∑(r-i)e_i} ∏_{i=0}^{r-1} (1 - p^{i-n})`.
pub fn expected_surjections_finite(target: &PartitionType, p: u64, n: usize) -> Result<BigRational> {
    let r = target.rank();
    if r > n {
        return Err(Error::RankExceedsN { rank: r, n });
    }
    let mut v = BigRational::from_integer(BigInt::from(expected_surjections(target, p)?));
    for i in 0..r {
        v *= one_minus_inv_pow(p, (n - i) as u32);
    }
    Ok(v)
}

/// `∫ p^{k r_p(Γ)} dμ = ∏_{j=0}^{k-1} (p^j + 1)`.
pub fn rank_moment(k: u32, p: u64) -> BigUint {
    (0..k).map(|j| BigUint::from(p).pow(j) + 1u32).product()
}

/// Number of `j`-dimensional subspaces of `F_p^k`.
pub fn gaussian_binomial(k: u32, j: u32, p: u64) -> Result<BigUint> {
    if j > k {
        return Err(Error::InvalidArgument("need j <= k"));
    }
    let pp = BigUint::from(p);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..j {
        num *= pp.pow(k) - pp.pow(i);
        den *= pp.pow(j) - pp.pow(i);
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    Ok(q)
}
