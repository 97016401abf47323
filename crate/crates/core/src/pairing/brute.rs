//! Exhaustive search on small groups with pairing.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;

/// Default order bound for brute-force pairing work.
pub const DEFAULT_BOUND: u64 = 1 << 10;

/// A pairing on `⊕ Z/dims[i]` with values `gram[i][j] / e`, plus per-element
/// tables. Elements are indexed in mixed radix with the first coordinate
/// varying fastest.
#[derive(Clone, Debug)]
pub(crate) struct SmallForm {
    dims: Vec<u64>,
    e: u64,
    gram: Vec<u64>,
    size: usize,
    coords: Vec<u64>,
    // w[x*k + j] = δ(x, g_j) * e
    w: Vec<u64>,
    ord: Vec<u64>,
}

type Fingerprint = (u64, u64, u32);

impl SmallForm {
    pub(crate) fn new(dims: Vec<u64>, e: u64, gram: Vec<u64>) -> Self {
        let k = dims.len();
        let size: usize = dims.iter().product::<u64>() as usize;
        let mut coords = Vec::with_capacity(size * k);
        let mut w = Vec::with_capacity(size * k);
        let mut ord = Vec::with_capacity(size);
        let mut c = alloc::vec![0u64; k];
        for _ in 0..size {
            coords.extend_from_slice(&c);
            for j in 0..k {
                let mut acc = 0u128;
                for i in 0..k {
                    acc += c[i] as u128 * gram[i * k + j] as u128;
                }
                w.push((acc % e as u128) as u64);
            }
            let mut o = 1u64;
            for i in 0..k {
                let oi = dims[i] / gcd(c[i], dims[i]);
                o = o / gcd(o, oi) * oi;
            }
            ord.push(o);
            for i in 0..k {
                c[i] += 1;
                if c[i] < dims[i] {
                    break;
                }
                c[i] = 0;
            }
        }
        SmallForm { dims, e, gram, size, coords, w, ord }
    }

    fn k(&self) -> usize {
        self.dims.len()
    }

    fn pair(&self, x: usize, y: usize) -> u64 {
        let k = self.k();
        let mut acc = 0u128;
        for j in 0..k {
            acc += self.coords[y * k + j] as u128 * self.w[x * k + j] as u128;
        }
        (acc % self.e as u128) as u64
    }

    fn generator(&self, i: usize) -> usize {
        self.dims[..i].iter().product::<u64>() as usize
    }

    pub(crate) fn is_nondegenerate(&self) -> bool {
        let k = self.k();
        (1..self.size).all(|x| self.w[x * k..(x + 1) * k].iter().any(|&v| v != 0))
    }

    fn fingerprints(&self) -> Vec<Fingerprint> {
        let q: Vec<u64> = (0..self.size).map(|x| self.pair(x, x)).collect();
        let isotropic: Vec<usize> = (0..self.size).filter(|&y| q[y] == 0).collect();
        (0..self.size)
            .map(|x| {
                let n = isotropic.iter().filter(|&&y| self.pair(x, y) == 0).count() as u32;
                (self.ord[x], q[x], n)
            })
            .collect()
    }

    /// Candidate images for each generator, or `None` if the fingerprint
    /// histograms already differ.
    fn candidates(&self, target: &SmallForm) -> Option<Vec<Vec<usize>>> {
        let (fs, ft) = (self.fingerprints(), target.fingerprints());
        let mut hist: BTreeMap<Fingerprint, i64> = BTreeMap::new();
        for f in &fs {
            *hist.entry(*f).or_default() += 1;
        }
        for f in &ft {
            *hist.entry(*f).or_default() -= 1;
        }
        if hist.values().any(|&c| c != 0) {
            return None;
        }
        Some(
            (0..self.k())
                .map(|i| {
                    let f = fs[self.generator(i)];
                    (0..target.size).filter(|&y| ft[y] == f).collect()
                })
                .collect(),
        )
    }

    fn search(&self, target: &SmallForm, cands: &[Vec<usize>], images: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let i = images.len();
        if i == self.k() {
            return visit(images);
        }
        let k = self.k();
        for &y in &cands[i] {
            if (0..i).all(|j| target.pair(y, images[j]) == self.gram[i * k + j]) {
                images.push(y);
                let stop = self.search(target, cands, images, visit);
                images.pop();
                if stop {
                    return true;
                }
            }
        }
        false
    }

    /// Images of the generators under some isometry onto `target`.
    ///
    /// Assumes both forms live on the same group and `self` is nondegenerate,
    /// so any pairing-preserving homomorphism is injective.
    pub(crate) fn find_isometry(&self, target: &SmallForm) -> Option<Vec<usize>> {
        if self.dims != target.dims {
            return None;
        }
        let cands = self.candidates(target)?;
        let mut found = None;
        self.search(target, &cands, &mut Vec::new(), &mut |imgs| {
            found = Some(imgs.to_vec());
            true
        });
        found
    }

    /// `|Aut|` through the stabilizer chain of the generators:
    /// `|Stab(g_0..g_{i-1})| = |orbit of g_i| · |Stab(g_0..g_i)|`, where the
    /// orbit is found by testing each candidate image for an extension.
    pub(crate) fn count_isometries(&self) -> u64 {
        let cands = self.candidates(self).expect("identical histograms");
        let k = self.k();
        let mut total = 1u64;
        for i in 0..k {
            let mut prefix: Vec<usize> = (0..i).map(|j| self.generator(j)).collect();
            let mut orbit = 0u64;
            for &y in &cands[i] {
                if !(0..i).all(|j| self.pair(y, prefix[j]) == self.gram[i * k + j]) {
                    continue;
                }
                prefix.push(y);
                if self.search(self, &cands, &mut prefix, &mut |_| true) {
                    orbit += 1;
                }
                prefix.pop();
            }
            total *= orbit;
        }
        total
    }

    /// `|Aut|` by listing every automorphism.
    #[cfg(test)]
    pub(crate) fn count_isometries_by_enumeration(&self) -> u64 {
        let cands = self.candidates(self).expect("identical histograms");
        let mut n = 0u64;
        self.search(self, &cands, &mut Vec::new(), &mut |_| {
            n += 1;
            false
        });
        n
    }
}

/// Counts `|Sur(Γ, Γ')|` for a fixed `p`-group `Γ'` by Möbius inversion over
/// the subgroups `H ⊇ pΓ'`: the Möbius value is `(-1)^k p^{k(k-1)/2}` for
/// `Γ'/H ≅ (Z/p)^k`, and `|Hom(Γ, H)| = ∏_i |H[d_i]|`.
#[derive(Clone, Debug)]
pub struct SurjectionCounter {
    p: u64,
    top: u32,
    // (Möbius sign positive, weight, |H[p^v]| for v = 0..=top)
    terms: Vec<(bool, u128, Vec<u128>)>,
}

impl SurjectionCounter {
    /// `target` must be a `p`-group of order at most [`DEFAULT_BOUND`].
    pub fn new(target: &FiniteAbelianGroup) -> Result<Self> {
        let tdims = match target.factors_u64() {
            Some(d) if d.iter().product::<u64>() <= DEFAULT_BOUND => d,
            _ => {
                return Err(Error::OrderExceedsBound {
                    order: target.order_u64().unwrap_or(u64::MAX),
                    bound: DEFAULT_BOUND,
                })
            }
        };
        if target.is_trivial() {
            return Ok(SurjectionCounter { p: 2, top: 0, terms: alloc::vec![(true, 1, alloc::vec![1])] });
        }
        let primes = crate::group::prime_factors(&target.order());
        if primes.len() != 1 {
            return Err(Error::InvalidGroup("target must be a p-group"));
        }
        let p = primes[0].to_u64().expect("small");
        let texp = *tdims.last().expect("nontrivial");
        let top = crate::arith::valuation(texp, p);
        let k = tdims.len();
        let size: usize = tdims.iter().product::<u64>() as usize;
        let decode = |mut x: usize| -> Vec<u64> {
            let mut c = Vec::with_capacity(k);
            for &d in &tdims {
                c.push(x as u64 % d);
                x /= d as usize;
            }
            c
        };
        let encode = |c: &[u64]| -> usize {
            let mut x = 0usize;
            for i in (0..k).rev() {
                x = x * tdims[i] as usize + c[i] as usize;
            }
            x
        };
        let coords: Vec<Vec<u64>> = (0..size).map(decode).collect();
        let add = |a: usize, b: usize| -> usize {
            let c: Vec<u64> = (0..k).map(|i| (coords[a][i] + coords[b][i]) % tdims[i]).collect();
            encode(&c)
        };
        let scale = |a: usize, m: u64| -> usize {
            let c: Vec<u64> = coords[a].iter().zip(&tdims).map(|(&x, &d)| x * (m % d) % d).collect();
            encode(&c)
        };
        let close = |mut set: Vec<bool>| -> Vec<bool> {
            loop {
                let members: Vec<usize> = (0..size).filter(|&x| set[x]).collect();
                let mut grew = false;
                for &a in &members {
                    for &b in &members {
                        let s = add(a, b);
                        if !set[s] {
                            set[s] = true;
                            grew = true;
                        }
                    }
                }
                if !grew {
                    return set;
                }
            }
        };
        let mut frattini = alloc::vec![false; size];
        for x in 0..size {
            frattini[scale(x, p)] = true;
        }
        let mut subgroups: Vec<Vec<bool>> = alloc::vec![close(frattini)];
        let mut frontier = 0;
        while frontier < subgroups.len() {
            let h = subgroups[frontier].clone();
            frontier += 1;
            for x in 0..size {
                if !h[x] {
                    let mut next = h.clone();
                    next[x] = true;
                    let next = close(next);
                    if !subgroups.contains(&next) {
                        subgroups.push(next);
                    }
                }
            }
        }
        let mut terms = Vec::with_capacity(subgroups.len());
        for h in &subgroups {
            let order = h.iter().filter(|&&b| b).count();
            let codim = crate::arith::valuation((size / order) as u64, p);
            let killed: Vec<u128> = (0..=top)
                .map(|v| (0..size).filter(|&x| h[x] && scale(x, p.pow(v)) == 0).count() as u128)
                .collect();
            let weight = (p as u128).pow(codim * codim.saturating_sub(1) / 2);
            terms.push((codim.is_multiple_of(2), weight, killed));
        }
        Ok(SurjectionCounter { p, top, terms })
    }

    /// `|Sur(source, target)|`.
    pub fn count(&self, source: &FiniteAbelianGroup) -> u128 {
        let vals: Vec<u32> = source
            .invariant_factors()
            .iter()
            .map(|d| crate::group::split_p_part(d, self.p).1.min(self.top))
            .collect();
        let (mut pos, mut neg) = (0u128, 0u128);
        for (sign, weight, killed) in &self.terms {
            let hom: u128 = vals.iter().map(|&v| killed[v as usize]).product();
            if *sign {
                pos += weight * hom;
            } else {
                neg += weight * hom;
            }
        }
        pos - neg
    }
}

/// `|Sur(Γ, Γ')|` for a `p`-group `Γ'` of order at most [`DEFAULT_BOUND`].
pub fn count_surjections(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup) -> Result<BigUint> {
    Ok(BigUint::from(SurjectionCounter::new(target)?.count(source)))
}
