//! Finite abelian groups with symmetric bilinear pairings into `Q/Z`.
//!
//! A [`PairingGram`] records `δ(g_i, g_j)` on the standard generators of the
//! invariant-factor decomposition. Values are stored as numerators over the
//! group exponent `e = d_k`, so `δ(g_i, g_j) = gram[i][j] / e (mod 1)`.

mod brute;

use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::{p_part, prime_factors, split_p_part, FiniteAbelianGroup};
use crate::linalg::{smith_normal_form, IntMatrix};

pub use brute::{count_surjections, SurjectionCounter, DEFAULT_BOUND};
pub(crate) use brute::SmallForm;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PairingGram {
    group: FiniteAbelianGroup,
    modulus: BigUint,
    gram: Vec<BigUint>,
}

impl PairingGram {
    pub fn trivial() -> Self {
        PairingGram { group: FiniteAbelianGroup::trivial(), modulus: BigUint::one(), gram: Vec::new() }
    }

    /// Builds a pairing from rational values `δ(g_i, g_j)` (row-major, `k×k`).
    ///
    /// Values are reduced mod 1. Fails unless the matrix is symmetric and
    /// every value is killed by both `d_i` and `d_j`.
    pub fn new(group: FiniteAbelianGroup, values: &[BigRational]) -> Result<Self> {
        let k = group.rank();
        if values.len() != k * k {
            return Err(Error::DimensionMismatch("gram must be k x k"));
        }
        let modulus = group.exponent();
        let e = BigInt::from(modulus.clone());
        let mut gram = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let v = &values[i * k + j];
                if !(v - &values[j * k + i]).is_integer() {
                    return Err(Error::DegeneratePairing);
                }
                let f = group.invariant_factors();
                let d = BigInt::from(f[i].clone().min(f[j].clone()));
                if !(v * BigRational::from_integer(d)).is_integer() {
                    return Err(Error::DegeneratePairing);
                }
                let num = (v * BigRational::from_integer(e.clone())).to_integer().mod_floor(&e);
                gram.push(num.to_biguint().expect("reduced mod e"));
            }
        }
        Ok(PairingGram { group, modulus, gram })
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_fractions(factors: &[u64], values: &[(i64, u64)]) -> Result<Self> {
        let group = FiniteAbelianGroup::from_u64s(factors)?;
        let values: Vec<BigRational> =
            values.iter().map(|&(n, d)| BigRational::new(n.into(), BigInt::from(d))).collect();
        Self::new(group, &values)
    }

    /// Raw constructor: numerators over the group exponent.
    pub(crate) fn from_numerators(group: FiniteAbelianGroup, gram: Vec<BigUint>) -> Self {
        let modulus = group.exponent();
        debug_assert_eq!(gram.len(), group.rank() * group.rank());
        let gram = gram.into_iter().map(|x| x % &modulus).collect();
        PairingGram { group, modulus, gram }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    /// `δ(g_i, g_j)` as a fraction in `[0, 1)`, in lowest terms.
    pub fn value(&self, i: usize, j: usize) -> BigRational {
        let k = self.rank();
        BigRational::new(
            BigInt::from(self.gram[i * k + j].clone()),
            BigInt::from(self.modulus.clone()),
        )
    }

    /// `(numerator, denominator)` of `δ(g_i, g_j)` in lowest terms.
    pub fn fraction(&self, i: usize, j: usize) -> (BigUint, BigUint) {
        let v = self.value(i, j);
        (v.numer().magnitude().clone(), v.denom().magnitude().clone())
    }

    /// Numerator of `δ(g_i, g_j)` over the group exponent.
    pub fn numerator(&self, i: usize, j: usize) -> &BigUint {
        &self.gram[i * self.rank() + j]
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// `δ(x, y)` for coordinate vectors `x`, `y`, as a numerator over the
    /// exponent.
    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigUint {
        let k = self.rank();
        let e = BigInt::from(self.modulus.clone());
        let mut acc = BigInt::zero();
        for i in 0..k {
            for j in 0..k {
                acc += &x[i] * &y[j] * BigInt::from(self.gram[i * k + j].clone());
            }
        }
        acc.mod_floor(&e).to_biguint().expect("reduced")
    }

    /// Machine-word form for brute-force work, if `|Γ| ≤ bound`.
    pub(crate) fn small(&self, bound: u64) -> Result<SmallForm> {
        let order = self.group.order();
        match order.to_u64() {
            Some(o) if o <= bound => {}
            _ => {
                return Err(Error::OrderExceedsBound {
                    order: order.to_u64().unwrap_or(u64::MAX),
                    bound,
                })
            }
        }
        let dims = self.group.factors_u64().expect("small order");
        let e = self.modulus.to_u64().expect("small order");
        let gram = self.gram.iter().map(|x| x.to_u64().expect("reduced mod e")).collect();
        Ok(SmallForm::new(dims, e, gram))
    }

    /// Brute-force check that `g ↦ δ(g, ·)` is injective.
    pub fn is_nondegenerate(&self, bound: u64) -> Result<bool> {
        Ok(self.small(bound)?.is_nondegenerate())
    }

    /// Orthogonal direct sum, brought back to invariant-factor form.
    pub fn orthogonal_sum(parts: &[PairingGram]) -> PairingGram {
        let mut orders = Vec::new();
        let mut blocks = Vec::new();
        for part in parts {
            orders.extend(part.group.invariant_factors().iter().cloned());
            blocks.push(part);
        }
        let total = orders.len();
        let mut values = alloc::vec![BigRational::zero(); total * total];
        let mut offset = 0;
        for part in blocks {
            let k = part.rank();
            for i in 0..k {
                for j in 0..k {
                    values[(offset + i) * total + offset + j] = part.value(i, j);
                }
            }
            offset += k;
        }
        from_independent_generators(&orders, &values).expect("orthogonal sum of valid pairings")
    }

    /// Restriction to the Sylow `p`-subgroup, on generators `m_i · g_i`
    /// with `m_i = d_i / p^{v_p(d_i)}`.
    pub fn sylow_part(&self, p: u64) -> SylowPairing {
        let k = self.rank();
        let factors = self.group.invariant_factors();
        let idx: Vec<usize> = (0..k).filter(|&i| split_p_part(&factors[i], p).1 > 0).collect();
        let group = self.group.sylow(p);
        let new_mod = group.exponent();
        let scale = &self.modulus / &new_mod;
        let mults: Vec<BigUint> = idx.iter().map(|&i| &factors[i] / p_part(&factors[i], p)).collect();
        let mut gram = Vec::with_capacity(idx.len() * idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                let x = (&self.gram[i * k + j] * &mults[a] * &mults[b]) % &self.modulus;
                debug_assert!((&x % &scale).is_zero(), "value has a p-power denominator");
                gram.push(x / &scale);
            }
        }
        SylowPairing { prime: p, pairing: PairingGram::from_numerators(group, gram) }
    }
}

impl fmt::Debug for PairingGram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PairingGram {{ group: {}, gram: [", self.group)?;
        let k = self.rank();
        for i in 0..k {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..k {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.value(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("] }")
    }
}

/// Pairing on `⊕ Z/orders[i]` given on independent generators of arbitrary
/// orders; returns the same pairing on invariant-factor generators.
pub fn from_independent_generators(orders: &[BigUint], values: &[BigRational]) -> Result<PairingGram> {
    let n = orders.len();
    if values.len() != n * n {
        return Err(Error::DimensionMismatch("gram must be k x k"));
    }
    // prime-power components: (prime, order, source generator, multiplier)
    let mut comps: Vec<(BigUint, BigUint, usize, BigUint)> = Vec::new();
    for (g, ord) in orders.iter().enumerate() {
        if ord.is_zero() {
            return Err(Error::InvalidGroup("generator orders must be positive"));
        }
        for p in prime_factors(ord) {
            let pp = prime_power_part(ord, &p);
            comps.push((p, pp.clone(), g, ord / &pp));
        }
    }
    let mut primes: Vec<BigUint> = comps.iter().map(|c| c.0.clone()).collect();
    primes.sort();
    primes.dedup();
    // per prime, components in descending order
    let mut per_prime: Vec<Vec<usize>> = primes
        .iter()
        .map(|p| {
            let mut v: Vec<usize> = (0..comps.len()).filter(|&c| &comps[c].0 == p).collect();
            v.sort_by(|&a, &b| comps[b].1.cmp(&comps[a].1));
            v
        })
        .collect();
    let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
    // slot s (from the top) combines the s-th largest component of every prime
    let mut slots: Vec<Vec<usize>> = alloc::vec![Vec::new(); len];
    for list in &mut per_prime {
        for (s, &c) in list.iter().enumerate() {
            slots[len - 1 - s].push(c);
        }
    }
    let factors: Vec<BigUint> =
        slots.iter().map(|cs| cs.iter().map(|&c| comps[c].1.clone()).product()).collect();
    let group = FiniteAbelianGroup::from_chain(factors)?;
    let mut out = alloc::vec![BigRational::zero(); len * len];
    for a in 0..len {
        for b in 0..len {
            let mut acc = BigRational::zero();
            for &ca in &slots[a] {
                for &cb in &slots[b] {
                    if comps[ca].0 != comps[cb].0 {
                        continue;
                    }
                    let (ga, gb) = (comps[ca].2, comps[cb].2);
                    let m = BigInt::from(&comps[ca].3 * &comps[cb].3);
                    acc += &values[ga * n + gb] * BigRational::from_integer(m);
                }
            }
            out[a * len + b] = acc;
        }
    }
    PairingGram::new(group, &out)
}

fn prime_power_part(n: &BigUint, p: &BigUint) -> BigUint {
    let mut q = BigUint::one();
    let mut m = n.clone();
    while (&m % p).is_zero() {
        m /= p;
        q *= p;
    }
    q
}

/// A pairing on a `p`-group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SylowPairing {
    pub prime: u64,
    pub pairing: PairingGram,
}

impl SylowPairing {
    pub fn new(prime: u64, pairing: PairingGram) -> Result<Self> {
        if !crate::arith::is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        if !pairing.group().is_p_group(prime) {
            return Err(Error::InvalidGroup("not a p-group"));
        }
        Ok(SylowPairing { prime, pairing })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.pairing.group()
    }
}

/// Pairing `⟨x, y⟩ = yᵀ A⁻¹ x` on the cokernel of a nonsingular symmetric
/// integer matrix.
///
/// With `U·A·V = D`, the `i`-th cokernel generator lifts to column `i` of
/// `U⁻¹ = A·V·D⁻¹`, and symmetry of `A` gives
/// `δ(g_i, g_j) = (Vᵀ A V)_{ij} / (d_i d_j)`.
pub fn cokernel_pairing(a: &IntMatrix) -> Result<PairingGram> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if !a.is_symmetric() {
        return Err(Error::InvalidArgument("matrix must be symmetric"));
    }
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    if diag.iter().any(Zero::is_zero) {
        return Err(Error::SingularMatrix);
    }
    let idx: Vec<usize> = (0..diag.len()).filter(|&i| !diag[i].is_one()).collect();
    let k = idx.len();
    let n = a.rows();
    // columns V e_i and A V e_i for the nontrivial generators only
    let vcols: Vec<Vec<BigInt>> = idx.iter().map(|&i| (0..n).map(|r| snf.v[(r, i)].clone()).collect()).collect();
    let avcols: Vec<Vec<BigInt>> = vcols.iter().map(|c| a.mul_vec(c)).collect();
    let factors: Vec<BigUint> = idx.iter().map(|&i| diag[i].magnitude().clone()).collect();
    let group = FiniteAbelianGroup::from_chain(factors)?;
    let e = BigInt::from(group.exponent());
    let mut gram = Vec::with_capacity(k * k);
    for a_i in 0..k {
        for b_j in 0..k {
            let num: BigInt = vcols[a_i].iter().zip(&avcols[b_j]).map(|(x, y)| x * y).sum();
            let den = &diag[idx[a_i]] * &diag[idx[b_j]];
            // num / den as a numerator over e
            let scaled = num * &e;
            let (q, r) = scaled.div_mod_floor(&den);
            if !r.is_zero() {
                return Err(Error::DegeneratePairing);
            }
            gram.push(q.mod_floor(&e).to_biguint().expect("reduced"));
        }
    }
    Ok(PairingGram::from_numerators(group, gram))
}

/// Jacobian of a connected graph with its duality pairing, read off the
/// reduced Laplacian at the last vertex.
pub fn jacobian_with_pairing(g: &Graph) -> Result<PairingGram> {
    jacobian_with_pairing_at(g, g.vertex_count().saturating_sub(1))
}

pub fn jacobian_with_pairing_at(g: &Graph, delete_vertex: usize) -> Result<PairingGram> {
    if g.vertex_count() == 0 || !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    if g.vertex_count() == 1 {
        return Ok(PairingGram::trivial());
    }
    cokernel_pairing(&g.reduced_laplacian(delete_vertex)?)
}

/// Orthogonal decomposition into Sylow parts, one per prime dividing `|Γ|`.
pub fn sylow_split(p: &PairingGram) -> Result<Vec<SylowPairing>> {
    let mut out = Vec::new();
    for q in prime_factors(&p.group().order()) {
        let q = q.to_u64().ok_or(Error::InvalidArgument("prime factor exceeds 64 bits"))?;
        out.push(p.sylow_part(q));
    }
    Ok(out)
}

/// `true` iff `|Γ|` and the pairing agree and some automorphism carries one
/// Gram matrix to the other. Exhaustive; requires `|Γ| ≤ bound`.
pub fn is_isomorphic(a: &PairingGram, b: &PairingGram, bound: u64) -> Result<bool> {
    if a.group() != b.group() {
        return Ok(false);
    }
    let (sa, sb) = (a.small(bound)?, b.small(bound)?);
    if !sa.is_nondegenerate() || !sb.is_nondegenerate() {
        return Err(Error::DegeneratePairing);
    }
    Ok(sa.find_isometry(&sb).is_some())
}

/// `|Aut(Γ, δ)|` by exhaustive search. Requires `|Γ| ≤ bound`.
pub fn count_aut_pairing(p: &PairingGram, bound: u64) -> Result<u64> {
    let s = p.small(bound)?;
    if !s.is_nondegenerate() {
        return Err(Error::DegeneratePairing);
    }
    Ok(s.count_isometries())
}
