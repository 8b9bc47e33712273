//! Integer arithmetic: sieving, factorization, primitive roots and discrete logs.

use crate::error::{domain, Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
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

/// Primes and prime-power data up to a fixed limit.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: usize,
    primes: Vec<u64>,
    // smallest prime factor, 0 for n < 2
    spf: Vec<u32>,
    // p when n = p^e, otherwise 0
    prime_power_base: Vec<u32>,
}

/// Sieve of Eratosthenes up to `limit` (inclusive), with the von Mangoldt data.
pub fn sieve(limit: usize) -> Result<PrimeTable> {
    if limit < 2 {
        return domain(format!("sieve limit must be >= 2, got {limit}"));
    }
    if limit > u32::MAX as usize {
        return domain("sieve limit exceeds u32 range");
    }
    let mut spf = vec![0u32; limit + 1];
    let mut primes = Vec::new();
    for n in 2..=limit {
        if spf[n] == 0 {
            spf[n] = n as u32;
            primes.push(n as u64);
            let mut m = n.saturating_mul(n);
            while m <= limit {
                if spf[m] == 0 {
                    spf[m] = n as u32;
                }
                m += n;
            }
        }
    }
    let mut prime_power_base = vec![0u32; limit + 1];
    for &p in &primes {
        let p = p as usize;
        let mut pk = p;
        loop {
            prime_power_base[pk] = p as u32;
            match pk.checked_mul(p) {
                Some(next) if next <= limit => pk = next,
                _ => break,
            }
        }
    }
    Ok(PrimeTable {
        limit,
        primes,
        spf,
        prime_power_base,
    })
}

impl PrimeTable {
    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `<= bound`.
    pub fn primes_up_to(&self, bound: u64) -> &[u64] {
        let end = self.primes.partition_point(|&p| p <= bound);
        &self.primes[..end]
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && n <= self.limit && self.spf[n] as usize == n
    }

    pub fn smallest_prime_factor(&self, n: usize) -> Option<u64> {
        (n >= 2 && n <= self.limit).then(|| self.spf[n] as u64)
    }

    /// `(p, e)` when `n = p^e` with `e >= 1`.
    pub fn prime_power(&self, n: usize) -> Option<(u64, u32)> {
        if n > self.limit {
            return None;
        }
        let p = self.prime_power_base[n] as u64;
        if p == 0 {
            return None;
        }
        let mut e = 0;
        let mut m = n as u64;
        while m > 1 {
            m /= p;
            e += 1;
        }
        Some((p, e))
    }

    /// Von Mangoldt function: `log p` if `n = p^e`, else 0.
    pub fn mangoldt(&self, n: usize) -> f64 {
        match self.prime_power(n) {
            Some((p, _)) => (p as f64).ln(),
            None => 0.0,
        }
    }

    /// Factorization using the smallest-prime-factor table; `n` must be within the limit.
    pub fn factorize(&self, n: usize) -> Option<Factorization> {
        if n == 0 || n > self.limit {
            return None;
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m] as usize;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p as u64, e));
        }
        Some(Factorization { n: n as u64, factors })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn product(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// All positive divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Trial-division factorization.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return domain("cannot factorize 0");
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(Factorization { n, factors })
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).map(|f| f.is_prime()).unwrap_or(false)
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?.euler_phi())
}

/// Smallest primitive root modulo an odd prime power.
pub fn primitive_root(pk: u64) -> Result<u64> {
    let f = factorize(pk)?;
    if !f.is_prime_power() || f.factors[0].0 == 2 {
        return domain(format!("{pk} is not an odd prime power"));
    }
    let phi = f.euler_phi();
    let phi_primes: Vec<u64> = factorize(phi)?.primes().collect();
    let p = f.factors[0].0;
    (2..pk)
        .find(|&g| g % p != 0 && phi_primes.iter().all(|&r| pow_mod(g, phi / r, pk) != 1))
        .ok_or_else(|| Error::Domain(format!("no primitive root modulo {pk}")))
}

/// Discrete-log table modulo a prime, base the smallest primitive root.
#[derive(Debug, Clone)]
pub struct IndexTable {
    pub q: u64,
    pub generator: u64,
    // ind[n] for 1 <= n < q; ind[0] unused
    ind: Vec<u32>,
}

impl IndexTable {
    pub fn ind(&self, n: u64) -> Option<u32> {
        let r = (n % self.q) as usize;
        (r != 0).then(|| self.ind[r])
    }

    pub fn order(&self) -> u64 {
        self.q - 1
    }
}

pub fn index_table(q: u64) -> Result<IndexTable> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q == 2 {
        return Ok(IndexTable {
            q,
            generator: 1,
            ind: vec![u32::MAX, 0],
        });
    }
    let g = primitive_root(q)?;
    let mut ind = vec![u32::MAX; q as usize];
    let mut x = 1u64;
    for e in 0..q - 1 {
        ind[x as usize] = e as u32;
        x = mul_mod(x, g, q);
    }
    Ok(IndexTable { q, generator: g, ind })
}

/// One cyclic factor of `(Z/qZ)*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicComponent {
    /// Generator lifted to a unit modulo `q`.
    pub generator: u64,
    pub order: u64,
    /// Prime of the local factor this component belongs to.
    pub prime: u64,
    /// Exponent of that prime in `q`.
    pub exponent: u32,
}

/// Decomposition of `(Z/qZ)*` into cyclic components, with full discrete-log tables.
///
/// Units are indexed by a flat mixed-radix index over their exponent tuples
/// (first component most significant).
#[derive(Debug, Clone)]
pub struct GroupStructure {
    q: u64,
    factorization: Factorization,
    components: Vec<CyclicComponent>,
    strides: Vec<usize>,
    // flat index per residue, u32::MAX for non-units
    index: Vec<u32>,
    // residue per flat index
    units: Vec<u32>,
}

impl GroupStructure {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return domain("modulus must be >= 1");
        }
        if q > u32::MAX as u64 {
            return domain("modulus exceeds supported range");
        }
        let factorization = factorize(q)?;
        let mut components = Vec::new();
        // per component: discrete log of a residue modulo the local prime power
        let mut local_logs: Vec<Box<dyn Fn(u64) -> u64>> = Vec::new();

        for &(p, e) in &factorization.factors {
            let pe = p.pow(e);
            let rest = q / pe;
            let lift = |g: u64| -> u64 {
                if rest == 1 {
                    return g % q;
                }
                // x = g mod pe, x = 1 mod rest
                let inv = inv_mod(rest % pe, pe).expect("coprime");
                let t = mul_mod((g + pe - 1) % pe, inv, pe);
                (1 + rest * t) % q
            };
            if p == 2 {
                match e {
                    1 => {}
                    2 => {
                        components.push(CyclicComponent {
                            generator: lift(3),
                            order: 2,
                            prime: 2,
                            exponent: e,
                        });
                        local_logs.push(Box::new(move |n| u64::from(n % 4 == 3)));
                    }
                    _ => {
                        let order5 = pe / 4;
                        let mut table = vec![u32::MAX; pe as usize];
                        let mut x = 1u64;
                        for k in 0..order5 {
                            table[x as usize] = k as u32;
                            x = x * 5 % pe;
                        }
                        components.push(CyclicComponent {
                            generator: lift(pe - 1),
                            order: 2,
                            prime: 2,
                            exponent: e,
                        });
                        components.push(CyclicComponent {
                            generator: lift(5),
                            order: order5,
                            prime: 2,
                            exponent: e,
                        });
                        local_logs.push(Box::new(move |n| u64::from(n % 4 == 3)));
                        local_logs.push(Box::new(move |n| {
                            let r = n % pe;
                            let m = if r % 4 == 3 { pe - r } else { r };
                            table[m as usize] as u64
                        }));
                    }
                }
            } else {
                let g = primitive_root(pe)?;
                let order = pe / p * (p - 1);
                let mut table = vec![u32::MAX; pe as usize];
                let mut x = 1u64;
                for k in 0..order {
                    table[x as usize] = k as u32;
                    x = mul_mod(x, g, pe);
                }
                components.push(CyclicComponent {
                    generator: lift(g),
                    order,
                    prime: p,
                    exponent: e,
                });
                local_logs.push(Box::new(move |n| table[(n % pe) as usize] as u64));
            }
        }

        let mut strides = vec![1usize; components.len()];
        for j in (0..components.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * components[j + 1].order as usize;
        }
        let phi = factorization.euler_phi() as usize;
        let mut index = vec![u32::MAX; q as usize];
        let mut units = vec![0u32; phi];
        for n in 0..q {
            if gcd(n, q) != 1 {
                continue;
            }
            let flat: usize = local_logs
                .iter()
                .zip(&strides)
                .map(|(log, &s)| log(n) as usize * s)
                .sum();
            index[n as usize] = flat as u32;
            units[flat] = n as u32;
        }
        Ok(Self {
            q,
            factorization,
            components,
            strides,
            index,
            units,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    pub fn components(&self) -> &[CyclicComponent] {
        &self.components
    }

    pub fn orders(&self) -> Vec<usize> {
        self.components.iter().map(|c| c.order as usize).collect()
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    /// Number of units, `phi(q)`.
    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    /// Flat index of `n` if it is a unit.
    #[inline]
    pub fn flat_index(&self, n: u64) -> Option<usize> {
        let i = self.index[(n % self.q) as usize];
        (i != u32::MAX).then_some(i as usize)
    }

    /// Unit with the given flat index.
    #[inline]
    pub fn unit(&self, flat: usize) -> u64 {
        self.units[flat] as u64
    }

    pub fn split_index(&self, flat: usize) -> Vec<u64> {
        self.components
            .iter()
            .zip(&self.strides)
            .map(|(c, &s)| ((flat / s) as u64) % c.order)
            .collect()
    }

    pub fn join_index(&self, exps: &[u64]) -> usize {
        exps.iter()
            .zip(&self.components)
            .zip(&self.strides)
            .map(|((&e, c), &s)| (e % c.order) as usize * s)
            .sum()
    }

    /// Exponent tuple of a unit against the component generators.
    pub fn exponents(&self, n: u64) -> Option<Vec<u64>> {
        self.flat_index(n).map(|f| self.split_index(f))
    }
}
