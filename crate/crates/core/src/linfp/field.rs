//! Prime fields and their finite extensions.

use std::fmt;
use std::hash::Hash;

use serde::Serialize;

use super::poly;
use crate::error::{Error, Result};

/// Arithmetic in a finite field whose elements are small `Copy` values.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Copy + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    fn neg(&self, a: Self::Elem) -> Self::Elem;
    fn mul(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self, a: Self::Elem) -> Self::Elem;
    /// Image of an integer under `Z -> F`.
    fn from_i64(&self, x: i64) -> Self::Elem;
    fn characteristic(&self) -> u32;
    fn order(&self) -> u64;

    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Self::Elem {
        self.add(a, self.neg(b))
    }

    fn is_zero(&self, a: Self::Elem) -> bool {
        a == self.zero()
    }

    fn pow(&self, a: Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field `F_p`, elements stored as residues in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p as u64) || p >= (1 << 31) {
            return Err(Error::InvalidInput(format!("{p} is not a prime below 2^31")));
        }
        Ok(Fp { p })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn lift(&self, a: u32) -> i64 {
        let a = a as i64;
        let p = self.p as i64;
        if a > p / 2 {
            a - p
        } else {
            a
        }
    }
}

impl Field for Fp {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (if s >= self.p as u64 { s - self.p as u64 } else { s }) as u32
    }
    #[inline]
    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        t0.rem_euclid(self.p as i64) as u32
    }
    #[inline]
    fn from_i64(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }
    fn characteristic(&self) -> u32 {
        self.p
    }
    fn order(&self) -> u64 {
        self.p as u64
    }
}

/// `F_{p^m}` realised as `F_p[T]/(f)` for a monic irreducible `f` of degree `m`.
///
/// Elements are encoded as integers `c_0 + c_1 p + ... + c_{m-1} p^{m-1}` where
/// `c_i` is the coefficient of `T^i`. Fields with at most `2^16` elements get
/// log/antilog tables; larger ones multiply polynomials directly.
#[derive(Clone)]
pub struct Fq {
    p: u32,
    m: u32,
    q: u64,
    modulus: Vec<u32>,
    tables: Option<(Vec<u32>, Vec<u32>)>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.m, self.modulus)
    }
}

const TABLE_LIMIT: u64 = 1 << 16;

impl Fq {
    /// `F_{p^m}` with the least monic irreducible modulus of degree `m`, least in
    /// the base-`p` encoding of its non-leading coefficients.
    pub fn new(p: u32, m: u32) -> Result<Self> {
        let modulus = least_irreducible(p, m)?;
        Self::with_modulus(p, modulus)
    }

    /// Field with an explicit monic modulus (coefficients low degree first).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        let m = modulus.len().saturating_sub(1) as u32;
        if m == 0 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidInput("modulus must be monic of positive degree".into()));
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q < (1u64 << 32))
            .ok_or_else(|| Error::InvalidInput(format!("field F_{p}^{m} too large")))?;
        if !poly::is_irreducible(p, &modulus) {
            return Err(Error::InvalidInput(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        let mut field = Fq { p, m, q, modulus, tables: None };
        if q <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut a = a;
        (0..self.m)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    pub fn encode(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0u64, |acc, &d| acc * self.p as u64 + (d % self.p) as u64) as u32
    }

    /// The class of `T`.
    pub fn generator(&self) -> u32 {
        if self.m == 1 {
            // F_p[T]/(T - c): T is the constant c.
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p
        }
    }

    /// `a^(p^k)`.
    pub fn frobenius(&self, a: u32, k: u32) -> u32 {
        let e = (self.p as u64).pow(k % self.m.max(1));
        self.pow(a, e)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q as u32
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let prod = poly::mul(self.p, &self.digits(a), &self.digits(b));
        let r = poly::rem(self.p, &prod, &self.modulus);
        let mut d = r;
        d.resize(self.m as usize, 0);
        self.encode(&d)
    }

    fn slow_pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&self) -> (Vec<u32>, Vec<u32>) {
        let order = self.q - 1;
        let factors = prime_factors(order);
        let primitive = (1..self.q as u32)
            .find(|&g| factors.iter().all(|&r| self.slow_pow(g, order / r) != 1))
            .expect("finite field has a primitive element");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; self.q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp.push(x);
            log[x as usize] = i as u32;
            x = self.slow_mul(x, primitive);
        }
        (exp, log)
    }
}

impl Field for Fq {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.m {
            let d = (a % self.p + b % self.p) % self.p;
            out += d as u64 * place;
            place *= self.p as u64;
            a /= self.p;
            b /= self.p;
        }
        out as u32
    }
    fn neg(&self, a: u32) -> u32 {
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.m {
            let d = (self.p - a % self.p) % self.p;
            out += d as u64 * place;
            place *= self.p as u64;
            a /= self.p;
        }
        out as u32
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some((exp, log)) => {
                let s = (log[a as usize] as u64 + log[b as usize] as u64) % (self.q - 1);
                exp[s as usize]
            }
            None => self.slow_mul(a, b),
        }
    }
    fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in {self:?}");
        match &self.tables {
            Some((exp, log)) => {
                let l = log[a as usize] as u64;
                exp[((self.q - 1 - l) % (self.q - 1)) as usize]
            }
            None => self.slow_pow(a, self.q - 2),
        }
    }
    fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        match &self.tables {
            Some((exp, log)) => {
                let s = (log[a as usize] as u128 * e as u128) % (self.q as u128 - 1);
                exp[s as usize]
            }
            None => self.slow_pow(a, e),
        }
    }
    fn from_i64(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }
    fn characteristic(&self) -> u32 {
        self.p
    }
    fn order(&self) -> u64 {
        self.q
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn least_irreducible(p: u32, m: u32) -> Result<Vec<u32>> {
    if !is_prime(p as u64) || m == 0 {
        return Err(Error::InvalidInput(format!("no field F_{p}^{m}")));
    }
    let count = (p as u64)
        .checked_pow(m)
        .filter(|&c| c < (1u64 << 32))
        .ok_or_else(|| Error::InvalidInput(format!("field F_{p}^{m} too large")))?;
    for code in 0..count {
        let mut coeffs = Vec::with_capacity(m as usize + 1);
        let mut c = code;
        for _ in 0..m {
            coeffs.push((c % p as u64) as u32);
            c /= p as u64;
        }
        coeffs.push(1);
        if poly::is_irreducible(p, &coeffs) {
            return Ok(coeffs);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = Fp::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert!(Fp::new(9).is_err());
    }

    #[test]
    fn f25_modulus_is_least() {
        let f = Fq::new(5, 2).unwrap();
        // x^2 + 2 is the first monic quadratic in base-5 order without roots.
        assert_eq!(f.modulus(), &[2, 0, 1]);
        assert_eq!(f.order(), 25);
    }

    #[test]
    fn frobenius_fixes_exactly_prime_field() {
        let f = Fq::new(5, 2).unwrap();
        let fixed: Vec<u32> = f.elements().filter(|&x| f.frobenius(x, 1) == x).collect();
        assert_eq!(fixed, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn every_element_satisfies_x_pow_q() {
        for (p, m) in [(2, 3), (3, 2), (5, 2), (2, 4)] {
            let f = Fq::new(p, m).unwrap();
            for x in f.elements() {
                assert_eq!(f.pow(x, f.order()), x);
            }
        }
    }

    #[test]
    fn table_and_slow_paths_agree() {
        let f = Fq::new(3, 3).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.slow_mul(a, b));
            }
        }
    }

    #[test]
    fn rejects_reducible_modulus() {
        // x^2 - 1 = (x-1)(x+1)
        assert!(Fq::with_modulus(5, vec![4, 0, 1]).is_err());
    }
}
