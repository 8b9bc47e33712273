//! The Dirichlet character group modulo `q`.
//!
//! A character is an exponent tuple against the cyclic generators of
//! `(Z/qZ)*`: the character with exponents `(c_1, .., c_r)` sends the
//! generator `g_j` to `e(c_j / n_j)`. Values stay exact roots of unity
//! (integer numerators over the lcm of the component orders) until they are
//! converted to floating point.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::approx::ComplexApprox;
use crate::error::{domain, Result};
use crate::numtheory::{gcd, GroupStructure};
use crate::scalar::Real;
use crate::sum::ComplexSum;

/// Exact root of unity `e(num / den)`, `0 <= num < den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    pub num: u64,
    pub den: u64,
}

impl RootOfUnity {
    pub fn one() -> Self {
        Self { num: 0, den: 1 }
    }

    /// Converts to floating point, hitting `±1`, `±i` exactly.
    pub fn to_complex<T: Real>(self) -> Complex<T> {
        root_to_complex(self.num, self.den)
    }
}

pub(crate) fn root_to_complex<T: Real>(num: u64, den: u64) -> Complex<T> {
    let num = num % den;
    if num == 0 {
        return Complex::new(T::one(), T::zero());
    }
    if 2 * num == den {
        return Complex::new(-T::one(), T::zero());
    }
    if 4 * num == den {
        return Complex::new(T::zero(), T::one());
    }
    if 4 * num == 3 * den {
        return Complex::new(T::zero(), -T::one());
    }
    // signed numerator keeps the angle in [-pi, pi]
    let signed = if 2 * num > den {
        -((den - num) as f64)
    } else {
        num as f64
    };
    let angle = T::TAU() * T::lit(signed) / T::lit(den as f64);
    Complex::new(angle.cos(), angle.sin())
}

/// Value of a character at an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    Root(RootOfUnity),
}

impl CharValue {
    pub fn to_complex<T: Real>(self) -> Complex<T> {
        match self {
            CharValue::Zero => Complex::new(T::zero(), T::zero()),
            CharValue::Root(r) => r.to_complex(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// `a` in `chi(-1) = (-1)^a`; also the theta weight exponent.
    pub fn bit(self) -> u32 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl std::str::FromStr for Parity {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(format!("unknown parity `{other}` (expected even|odd)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    /// Position in the group; 0 is the principal character.
    pub index: usize,
    pub exponents: Vec<u64>,
    pub parity: Parity,
    pub conductor: u64,
}

impl Character {
    pub fn is_primitive(&self, q: u64) -> bool {
        self.conductor == q
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }
}

#[derive(Debug, Clone)]
pub struct CharacterGroup {
    structure: GroupStructure,
    // lcm of component orders
    exponent: u64,
    // exponent / order_j
    weights: Vec<u64>,
    parity: Vec<Parity>,
    conductor: Vec<u64>,
    conj: Vec<usize>,
}

pub fn build_group(q: u64) -> Result<CharacterGroup> {
    CharacterGroup::new(q)
}

impl CharacterGroup {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return domain("modulus must be >= 1");
        }
        let structure = GroupStructure::new(q)?;
        let orders: Vec<u64> = structure.components().iter().map(|c| c.order).collect();
        let exponent = orders.iter().fold(1u64, |l, &n| l / gcd(l, n) * n);
        let weights: Vec<u64> = orders.iter().map(|&n| exponent / n).collect();
        let count = structure.unit_count();

        let minus_one = structure
            .exponents(q - 1)
            .expect("-1 is a unit");
        let mut parity = Vec::with_capacity(count);
        let mut conductor = Vec::with_capacity(count);
        let mut conj = Vec::with_capacity(count);
        for idx in 0..count {
            let exps = structure.split_index(idx);
            let phase: u64 = exps
                .iter()
                .zip(&minus_one)
                .zip(&weights)
                .map(|((&c, &a), &w)| (c * a % exponent) * w % exponent)
                .fold(0, |acc, x| (acc + x) % exponent);
            parity.push(if phase == 0 { Parity::Even } else { Parity::Odd });
            conductor.push(conductor_of(&structure, &exps));
            let neg: Vec<u64> = exps
                .iter()
                .zip(&orders)
                .map(|(&c, &n)| (n - c) % n)
                .collect();
            conj.push(structure.join_index(&neg));
        }
        Ok(Self {
            structure,
            exponent,
            weights,
            parity,
            conductor,
            conj,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.structure.modulus()
    }

    pub fn structure(&self) -> &GroupStructure {
        &self.structure
    }

    /// Number of characters, `phi(q)`.
    pub fn len(&self) -> usize {
        self.parity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parity.is_empty()
    }

    /// Exponent of the group: lcm of the component orders.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn character(&self, index: usize) -> Character {
        Character {
            index,
            exponents: self.structure.split_index(index),
            parity: self.parity[index],
            conductor: self.conductor[index],
        }
    }

    pub fn characters(&self) -> impl Iterator<Item = Character> + '_ {
        (0..self.len()).map(|i| self.character(i))
    }

    pub fn parity(&self, index: usize) -> Parity {
        self.parity[index]
    }

    pub fn conductor(&self, index: usize) -> u64 {
        self.conductor[index]
    }

    pub fn is_primitive(&self, index: usize) -> bool {
        self.conductor[index] == self.modulus()
    }

    /// Index of the complex-conjugate character.
    pub fn conjugate(&self, index: usize) -> usize {
        self.conj[index]
    }

    /// `chi^2` is principal.
    pub fn is_real(&self, index: usize) -> bool {
        self.conj[index] == index
    }

    /// Exact value of character `index` at the unit with flat index `unit`.
    #[inline]
    pub fn phase_at_unit(&self, index: usize, unit: usize) -> u64 {
        let s = &self.structure;
        let mut acc = 0u64;
        for (j, (c, &w)) in s.components().iter().zip(&self.weights).enumerate() {
            let stride = s.strides()[j];
            let cj = (index / stride) as u64 % c.order;
            let aj = (unit / stride) as u64 % c.order;
            acc = (acc + (cj * aj % c.order) * w) % self.exponent;
        }
        acc
    }

    pub fn eval(&self, index: usize, n: i64) -> CharValue {
        let q = self.modulus() as i64;
        let r = n.rem_euclid(q) as u64;
        match self.structure.flat_index(r) {
            None => CharValue::Zero,
            Some(u) => CharValue::Root(RootOfUnity {
                num: self.phase_at_unit(index, u),
                den: self.exponent,
            }),
        }
    }

    pub fn eval_complex<T: Real>(&self, index: usize, n: i64) -> Complex<T> {
        self.eval(index, n).to_complex()
    }

    /// Floating-point table of `e(k / exponent)` for fast repeated evaluation.
    pub fn root_table<T: Real>(&self) -> Vec<Complex<T>> {
        (0..self.exponent)
            .map(|k| root_to_complex(k, self.exponent))
            .collect()
    }

    /// Values `chi(n)` for `n = 0..q`.
    pub fn value_table<T: Real>(&self, index: usize, roots: &[Complex<T>]) -> Vec<Complex<T>> {
        let q = self.modulus();
        (0..q)
            .map(|n| match self.structure.flat_index(n) {
                None => Complex::new(T::zero(), T::zero()),
                Some(u) => roots[self.phase_at_unit(index, u) as usize],
            })
            .collect()
    }

    /// Gauss sum `tau(chi) = sum_{a mod q} chi(a) e(a/q)`.
    ///
    /// Each summand is a single root of unity of order dividing
    /// `lcm(exponent, q)`, so only one rounding happens per term.
    pub fn gauss_sum<T: Real>(&self, index: usize) -> ComplexApprox<T> {
        let q = self.modulus();
        let m = self.exponent / gcd(self.exponent, q) * q;
        let (wl, wq) = (m / self.exponent, m / q);
        let mut acc = ComplexSum::new();
        for a in 0..q {
            if let Some(u) = self.structure.flat_index(a) {
                let phase = (self.phase_at_unit(index, u) * wl + a * wq) % m;
                acc.add(root_to_complex::<T>(phase, m));
            }
        }
        let err = T::lit(4.0) * T::epsilon() * T::from_usize_lossy(q as usize);
        ComplexApprox::new(acc.value(), err)
    }
}

/// Conductor from the local components of the exponent tuple.
///
/// For an odd prime power `p^e` with component exponent `c` the local
/// conductor is `p^f` for the least `f` with `c * phi(p^f) = 0 mod phi(p^e)`;
/// modulo `2^e` the kernel of reduction to `2^f` (`f >= 2`) is generated by
/// `5^(2^(f-2))`.
fn conductor_of(structure: &GroupStructure, exps: &[u64]) -> u64 {
    let comps = structure.components();
    let mut conductor = 1u64;
    let mut j = 0;
    while j < comps.len() {
        let c = comps[j];
        if c.prime == 2 {
            let e = c.exponent;
            if e == 2 {
                if exps[j] != 0 {
                    conductor *= 4;
                }
                j += 1;
            } else {
                let (sign, five) = (exps[j], exps[j + 1]);
                let order5 = comps[j + 1].order;
                if five == 0 {
                    if sign != 0 {
                        conductor *= 4;
                    }
                } else {
                    let mut f = 3;
                    while five * (1u64 << (f - 2)) % order5 != 0 {
                        f += 1;
                    }
                    conductor *= 1u64 << f;
                }
                j += 2;
            }
        } else {
            let p = c.prime;
            let mut f = 0u32;
            let mut phi_pf = 1u64;
            while exps[j] * phi_pf % c.order != 0 {
                f += 1;
                phi_pf = (p - 1) * p.pow(f - 1);
            }
            conductor *= p.pow(f);
            j += 1;
        }
    }
    conductor
}
