//! `SL_n(Z_p)` to finite precision: the pro-p Iwahori subgroup `I_1`, its
//! Iwahori factorization, the Moy-Prasad valuation `omega` at the barycenter,
//! principal symbols in `g~_1`, and seeded checks of the p-valuation axioms.
//!
//! `omega` is measured in units of `1/n` (the Coxeter number of `SL_n`), so
//! `u_alpha(c p^i)` with `c` a unit has `omega = height(alpha) + n i` units.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chevalley::{build_chevalley, Chevalley};
use crate::error::{Error, Result};
use crate::gradedlie::{build_tilde_g, GradedLie};
use crate::par;
use crate::rootsys::{CartanType, Family, RootSystem};

/// Square matrix over `Z/p^N`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PadicMatrix {
    pub n: usize,
    pub p: u64,
    pub prec: u32,
    pub entries: Vec<u64>,
}

fn modulus(p: u64, prec: u32) -> Result<u64> {
    match p.checked_pow(prec) {
        Some(m) if m < 1 << 62 && prec > 0 => Ok(m),
        _ => Err(Error::Precision(format!("p^N = {p}^{prec} must lie below 2^62"))),
    }
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m as i128) as u64)
}

impl PadicMatrix {
    pub fn identity(n: usize, p: u64, prec: u32) -> Result<Self> {
        modulus(p, prec)?;
        let mut entries = vec![0; n * n];
        for a in 0..n {
            entries[a * n + a] = 1;
        }
        Ok(PadicMatrix { n, p, prec, entries })
    }

    /// Entries are reduced mod `p^N`; negative values are allowed.
    pub fn from_rows(p: u64, prec: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let m = modulus(p, prec)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix rows must have equal length".into()));
        }
        let entries = rows.iter().flatten().map(|&x| x.rem_euclid(m as i64) as u64).collect();
        Ok(PadicMatrix { n, p, prec, entries })
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.prec)
    }

    pub fn get(&self, a: usize, b: usize) -> u64 {
        self.entries[a * self.n + b]
    }

    /// Signed representative in `(-p^N / 2, p^N / 2]`.
    pub fn signed(&self, a: usize, b: usize) -> i64 {
        let m = self.modulus();
        let x = self.get(a, b);
        if x > m / 2 {
            x as i64 - m as i64
        } else {
            x as i64
        }
    }

    fn compatible(&self, other: &PadicMatrix) -> Result<()> {
        if (self.n, self.p, self.prec) != (other.n, other.p, other.prec) {
            return Err(Error::DimensionMismatch("matrices over different rings or sizes".into()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &PadicMatrix) -> Result<PadicMatrix> {
        self.compatible(other)?;
        let (n, m) = (self.n, self.modulus() as u128);
        let mut entries = vec![0u64; n * n];
        for a in 0..n {
            for c in 0..n {
                let mut acc = 0u128;
                for b in 0..n {
                    acc = (acc + self.get(a, b) as u128 * other.get(b, c) as u128) % m;
                }
                entries[a * n + c] = acc as u64;
            }
        }
        Ok(PadicMatrix { entries, ..self.clone() })
    }

    /// Gauss-Jordan inverse; fails when the reduction mod `p` is singular.
    pub fn inverse(&self) -> Result<PadicMatrix> {
        let (n, m) = (self.n, self.modulus());
        let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % m as u128) as u64;
        let mut a = self.entries.clone();
        let mut inv = PadicMatrix::identity(n, self.p, self.prec)?.entries;
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r * n + col].is_multiple_of(self.p))
                .ok_or_else(|| Error::InvalidInput("matrix is not invertible over Z_p".into()))?;
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
                inv.swap(piv * n + k, col * n + k);
            }
            let s = inv_mod(a[col * n + col], m).unwrap();
            for k in 0..n {
                a[col * n + k] = mulm(a[col * n + k], s);
                inv[col * n + k] = mulm(inv[col * n + k], s);
            }
            for r in (0..n).filter(|&r| r != col) {
                let f = a[r * n + col];
                if f == 0 {
                    continue;
                }
                for k in 0..n {
                    a[r * n + k] = (a[r * n + k] + m - mulm(f, a[col * n + k])) % m;
                    inv[r * n + k] = (inv[r * n + k] + m - mulm(f, inv[col * n + k])) % m;
                }
            }
        }
        Ok(PadicMatrix { entries: inv, ..self.clone() })
    }

    /// Group commutator `x y x^-1 y^-1`.
    pub fn commutator(&self, other: &PadicMatrix) -> Result<PadicMatrix> {
        self.mul(other)?.mul(&self.inverse()?)?.mul(&other.inverse()?)
    }

    pub fn pow(&self, mut k: u64) -> Result<PadicMatrix> {
        let mut base = self.clone();
        let mut acc = PadicMatrix::identity(self.n, self.p, self.prec)?;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn det(&self) -> u64 {
        let (n, m) = (self.n, self.modulus() as u128);
        // Leibniz expansion; n is small
        fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
            if n == 0 {
                return vec![(Vec::new(), true)];
            }
            let mut out = Vec::new();
            for (p, even) in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push((q, even ^ ((n - 1 - pos) % 2 == 1)));
                }
            }
            out
        }
        let mut acc = 0u128;
        for (perm, even) in perms(n) {
            let mut t = 1u128;
            for (a, &b) in perm.iter().enumerate() {
                t = t * self.get(a, b) as u128 % m;
            }
            acc = if even { (acc + t) % m } else { (acc + m - t) % m };
        }
        acc as u64
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.get(a, b) == u64::from(a == b)))
    }

    /// Valuation of an entry; `prec` stands for "zero at this precision".
    pub fn valuation(&self, x: u64) -> u32 {
        valuation(self.p, self.prec, x)
    }
}

fn valuation(p: u64, prec: u32, mut x: u64) -> u32 {
    if x == 0 {
        return prec;
    }
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// `omega` in units of `1/h`; `Infinite` only for matrices equal to the
/// identity at the working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OmegaValue {
    Finite(i64),
    Infinite,
}

impl OmegaValue {
    pub fn units(self) -> Option<i64> {
        match self {
            OmegaValue::Finite(k) => Some(k),
            OmegaValue::Infinite => None,
        }
    }

    /// `k/h` in lowest terms.
    pub fn render(self, h: i64) -> String {
        match self {
            OmegaValue::Infinite => "inf".into(),
            OmegaValue::Finite(k) => {
                let g = crate::rootsys::gcd(k.abs(), h).max(1);
                if h / g == 1 {
                    format!("{}", k / g)
                } else {
                    format!("{}/{}", k / g, h / g)
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootFactor {
    pub root: usize,
    /// `u_alpha(coeff)` with `coeff` in `Z/p^N`.
    pub coeff: u64,
}

/// `g = (lower factors) (torus) (upper factors)`; lower factors column by
/// column, upper factors row by row from the last row up, torus as
/// `prod_k alpha_k^vee(t_k)` with `t_k = d_1 ... d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IwahoriFactors {
    pub lower: Vec<RootFactor>,
    pub torus: Vec<u64>,
    pub upper: Vec<RootFactor>,
}

/// Principal symbol: coordinates in the basis `piece` of `gr^{degree/h}` of `g~_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolVector {
    pub degree: i64,
    pub piece: Vec<usize>,
    pub coords: Vec<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub inputs: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub op: String,
    pub params: serde_json::Value,
    pub trials: u64,
    pub failures: Vec<Failure>,
    pub seed: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A described element of `I_1`, used as test input.
#[derive(Clone, Debug)]
pub struct Sample {
    pub label: String,
    pub matrix: PadicMatrix,
}

/// `SL_n` over `Z/p^N` with its Chevalley data and `g~_1` up to degree `N`.
#[derive(Clone, Debug)]
pub struct SlGroup {
    pub n: usize,
    pub p: u64,
    pub prec: u32,
    pub ch: Chevalley,
    pub tg: GradedLie,
    /// Matrix position and sign of `X_alpha` for each root.
    realization: Vec<(usize, usize, i64)>,
}

impl SlGroup {
    pub fn new(n: usize, p: u64, prec: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("SL_n needs n >= 2".into()));
        }
        if !crate::linfp::is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        modulus(p, prec)?;
        let rs = RootSystem::new(CartanType { family: Family::A, rank: n - 1 })?;
        let ch = build_chevalley(&rs, false)?;
        let realization = ch.sl_matrix_realization()?;
        let tg = build_tilde_g(&ch, 1, p, prec, 1)?;
        Ok(SlGroup { n, p, prec, ch, tg, realization })
    }

    pub fn h(&self) -> i64 {
        self.n as i64
    }

    fn rs(&self) -> &RootSystem {
        &self.ch.rs
    }

    fn m(&self) -> u64 {
        self.p.pow(self.prec)
    }

    fn signed_mod(&self, x: i64) -> u64 {
        x.rem_euclid(self.m() as i64) as u64
    }

    fn check_unit(&self, c: u64) -> Result<()> {
        if c.is_multiple_of(self.p) {
            return Err(Error::InvalidInput(format!("{c} is not a unit mod {}", self.p)));
        }
        Ok(())
    }

    fn p_power(&self, i: u32) -> Result<u64> {
        if i >= self.prec {
            return Err(Error::Precision(format!("p^{i} vanishes at precision {}", self.prec)));
        }
        Ok(self.p.pow(i))
    }

    /// `u_alpha(c p^i)`, with `d u_alpha(1) = X_alpha`.
    pub fn root_element(&self, root: usize, i: u32, c: u64) -> Result<PadicMatrix> {
        self.check_unit(c)?;
        let r = &self.rs().roots[root];
        if !r.is_positive() && i == 0 {
            return Err(Error::NotInIwahori("u_alpha(c) with alpha negative needs i >= 1".to_string()));
        }
        self.root_factor(root, (c % self.m()) as u128 * self.p_power(i)? as u128)
    }

    fn root_factor(&self, root: usize, t: u128) -> Result<PadicMatrix> {
        let (a, b, s) = self.realization[root];
        let mut g = PadicMatrix::identity(self.n, self.p, self.prec)?;
        let t = (t % self.m() as u128) as i64;
        g.entries[a * self.n + b] = self.signed_mod(s * t);
        Ok(g)
    }

    /// `alpha_k^vee(t)` for a unit `t`.
    pub fn coroot_element(&self, k: usize, t: u64) -> Result<PadicMatrix> {
        self.check_unit(t)?;
        let m = self.m();
        let mut g = PadicMatrix::identity(self.n, self.p, self.prec)?;
        g.entries[k * self.n + k] = t % m;
        g.entries[(k + 1) * self.n + k + 1] = inv_mod(t, m).unwrap();
        Ok(g)
    }

    /// `alpha_k^vee(1 + c p^j)`.
    pub fn torus_element(&self, k: usize, j: u32, c: u64) -> Result<PadicMatrix> {
        self.check_unit(c)?;
        if j == 0 {
            return Err(Error::NotInIwahori("torus elements of I_1 are 1 mod p".into()));
        }
        let t = (1 + (c % self.m()) as u128 * self.p_power(j)? as u128) % self.m() as u128;
        self.coroot_element(k, t as u64)
    }

    fn check_iwahori(&self, g: &PadicMatrix) -> Result<()> {
        if (g.n, g.p, g.prec) != (self.n, self.p, self.prec) {
            return Err(Error::DimensionMismatch("matrix does not belong to this group".into()));
        }
        if g.det() != 1 {
            return Err(Error::InvalidInput("determinant is not 1 at this precision".into()));
        }
        for a in 0..self.n {
            if g.get(a, a) % self.p != 1 % self.p {
                return Err(Error::NotInIwahori(format!("diagonal entry {a} is not 1 mod p")));
            }
            for b in 0..a {
                if !g.get(a, b).is_multiple_of(self.p) {
                    return Err(Error::NotInIwahori(format!("entry ({a}, {b}) is not divisible by p")));
                }
            }
        }
        Ok(())
    }

    fn root_at(&self, a: usize, b: usize) -> usize {
        self.realization.iter().position(|&(x, y, _)| (x, y) == (a, b)).unwrap()
    }

    /// LDU factorization read as root and torus factors.
    pub fn iwahori_factor(&self, g: &PadicMatrix) -> Result<IwahoriFactors> {
        self.check_iwahori(g)?;
        let (n, m) = (self.n, self.m());
        let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % m as u128) as u64;
        let mut a = g.entries.clone();
        let mut l = vec![0u64; n * n];
        for k in 0..n {
            let inv = inv_mod(a[k * n + k], m).unwrap();
            for i in k + 1..n {
                let f = mulm(a[i * n + k], inv);
                l[i * n + k] = f;
                for j in k..n {
                    a[i * n + j] = (a[i * n + j] + m - mulm(f, a[k * n + j])) % m;
                }
            }
        }
        let d: Vec<u64> = (0..n).map(|k| a[k * n + k]).collect();
        let coeff = |root: usize, entry: u64| -> u64 {
            let s = self.realization[root].2;
            if s > 0 {
                entry
            } else {
                (m - entry) % m
            }
        };
        let mut lower = Vec::new();
        for j in 0..n {
            for i in j + 1..n {
                let root = self.root_at(i, j);
                lower.push(RootFactor { root, coeff: coeff(root, l[i * n + j]) });
            }
        }
        let mut upper = Vec::new();
        for i in (0..n).rev() {
            let inv = inv_mod(d[i], m).unwrap();
            for j in i + 1..n {
                let root = self.root_at(i, j);
                upper.push(RootFactor { root, coeff: coeff(root, mulm(a[i * n + j], inv)) });
            }
        }
        let mut torus = Vec::new();
        let mut acc = 1u64;
        for &dk in &d[..n - 1] {
            acc = mulm(acc, dk);
            torus.push(acc);
        }
        Ok(IwahoriFactors { lower, torus, upper })
    }

    /// Multiplies the factors back together.
    pub fn product(&self, f: &IwahoriFactors) -> Result<PadicMatrix> {
        let mut g = PadicMatrix::identity(self.n, self.p, self.prec)?;
        for rf in &f.lower {
            g = g.mul(&self.root_factor(rf.root, rf.coeff as u128)?)?;
        }
        for (k, &t) in f.torus.iter().enumerate() {
            g = g.mul(&self.coroot_element(k, t)?)?;
        }
        for rf in &f.upper {
            g = g.mul(&self.root_factor(rf.root, rf.coeff as u128)?)?;
        }
        Ok(g)
    }

    /// Finite omega values of the nontrivial factors, with their symbol basis
    /// element and leading unit.
    fn factor_terms(&self, f: &IwahoriFactors) -> Vec<(i64, usize, u64)> {
        let h = self.h();
        let mut out = Vec::new();
        for rf in f.lower.iter().chain(&f.upper) {
            if rf.coeff != 0 {
                let v = valuation(self.p, self.prec, rf.coeff);
                let ht = self.rs().roots[rf.root].height;
                let src = self.ch.root_basis(rf.root);
                out.push((ht + h * v as i64, self.tg_index(src, v), (rf.coeff / self.p.pow(v)) % self.p));
            }
        }
        let m = self.m();
        for (k, &t) in f.torus.iter().enumerate() {
            let x = (t + m - 1) % m;
            if x != 0 {
                let v = valuation(self.p, self.prec, x);
                let src = self.ch.coroot_basis(k);
                out.push((h * v as i64, self.tg_index(src, v), (x / self.p.pow(v)) % self.p));
            }
        }
        out
    }

    fn tg_index(&self, source: usize, power: u32) -> usize {
        self.tg.index_of(source, power).expect("g~_1 is stored up to the working precision")
    }

    /// Factors vanishing mod `p^N` could hide values down to this many units.
    fn hidden_floor(&self) -> i64 {
        self.h() * self.prec as i64 - (self.h() - 1)
    }

    fn resolve(&self, min: Option<i64>, g: &PadicMatrix) -> Result<OmegaValue> {
        match min {
            None if g.is_identity() => Ok(OmegaValue::Infinite),
            Some(k) if k < self.hidden_floor() => Ok(OmegaValue::Finite(k)),
            _ => Err(Error::Precision(format!(
                "omega cannot be separated from terms invisible at precision {}",
                self.prec
            ))),
        }
    }

    /// `omega(g) = min` over Iwahori factors.
    pub fn omega(&self, g: &PadicMatrix) -> Result<OmegaValue> {
        let f = self.iwahori_factor(g)?;
        self.resolve(self.factor_terms(&f).iter().map(|t| t.0).min(), g)
    }

    /// `omega(g) = min_{a,b} (v(g_ab - delta_ab) + (b - a)/n)`, the entry-threshold
    /// description of the Moy-Prasad filtration.
    pub fn omega_by_entries(&self, g: &PadicMatrix) -> Result<OmegaValue> {
        self.check_iwahori(g)?;
        let (n, m, h) = (self.n, self.m(), self.h());
        let mut min: Option<i64> = None;
        for a in 0..n {
            for b in 0..n {
                let x = (g.get(a, b) + m - u64::from(a == b)) % m;
                if x != 0 {
                    let k = h * valuation(self.p, self.prec, x) as i64 + b as i64 - a as i64;
                    min = Some(min.map_or(k, |c| c.min(k)));
                }
            }
        }
        self.resolve(min, g)
    }

    /// Leading units of the minimal-omega factors.
    pub fn symbol(&self, g: &PadicMatrix) -> Result<SymbolVector> {
        let f = self.iwahori_factor(g)?;
        let terms = self.factor_terms(&f);
        let degree = match self.resolve(terms.iter().map(|t| t.0).min(), g)? {
            OmegaValue::Finite(k) => k,
            OmegaValue::Infinite => return Err(Error::InvalidInput("the identity has no symbol".into())),
        };
        let piece = self.tg.graded_piece(degree);
        let mut coords = vec![0u64; piece.len()];
        for &(k, idx, lead) in &terms {
            if k == degree {
                let slot = piece.iter().position(|&i| i == idx).unwrap();
                coords[slot] = (coords[slot] + lead) % self.p;
            }
        }
        Ok(SymbolVector { degree, piece, coords })
    }

    fn full_vector(&self, s: &SymbolVector) -> Vec<u64> {
        let mut v = vec![0u64; self.tg.basis.len()];
        for (&i, &c) in s.piece.iter().zip(&s.coords) {
            v[i] = c;
        }
        v
    }

    fn symbol_from_full(&self, degree: i64, v: &[u64]) -> SymbolVector {
        let piece = self.tg.graded_piece(degree);
        let coords = piece.iter().map(|&i| v[i]).collect();
        SymbolVector { degree, piece, coords }
    }

    pub fn render_symbol(&self, s: &SymbolVector) -> String {
        let terms: Vec<String> = s
            .piece
            .iter()
            .zip(&s.coords)
            .filter(|(_, &c)| c != 0)
            .map(|(&i, &c)| format!("{c}*{}", self.tg.lie.names[i]))
            .collect();
        format!("{} @ {}", if terms.is_empty() { "0".into() } else { terms.join(" + ") }, OmegaValue::Finite(s.degree).render(self.h()))
    }

    fn require_hypothesis(&self) -> Result<()> {
        if self.p <= self.n as u64 + 1 {
            return Err(Error::Hypothesis(format!("p > h + 1 = {} is required", self.n + 1)));
        }
        Ok(())
    }

    /// Generators `u_alpha(c p^i)` and `alpha_k^vee(1 + c p^j)` of small omega.
    pub fn generators(&self, max_power: u32, units: &[u64]) -> Result<Vec<Sample>> {
        let mut out = Vec::new();
        for root in 0..self.rs().num_roots() {
            let min = u32::from(!self.rs().roots[root].is_positive());
            for i in min..=max_power.max(min) {
                for &c in units {
                    out.push(Sample {
                        label: format!("u[{}]({c} p^{i})", self.ch.lie.names[root]),
                        matrix: self.root_element(root, i, c)?,
                    });
                }
            }
        }
        for k in 0..self.n - 1 {
            for j in 1..=max_power.max(1) {
                for &c in units {
                    out.push(Sample {
                        label: format!("H{}(1 + {c} p^{j})", k + 1),
                        matrix: self.torus_element(k, j, c)?,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Product of 1 to 4 random generators with powers of `p` at most 2.
    pub fn random_element(&self, rng: &mut impl Rng) -> Result<Sample> {
        let mut g = PadicMatrix::identity(self.n, self.p, self.prec)?;
        let mut labels = Vec::new();
        for _ in 0..rng.random_range(1..=4) {
            let c = rng.random_range(1..self.p);
            if rng.random_bool(0.8) {
                let root = rng.random_range(0..self.rs().num_roots());
                let min = u32::from(!self.rs().roots[root].is_positive());
                let i = rng.random_range(min..=min + 1);
                g = g.mul(&self.root_element(root, i, c)?)?;
                labels.push(format!("u[{}]({c} p^{i})", self.ch.lie.names[root]));
            } else {
                let k = rng.random_range(0..self.n - 1);
                let j = rng.random_range(1..=2);
                g = g.mul(&self.torus_element(k, j, c)?)?;
                labels.push(format!("H{}(1 + {c} p^{j})", k + 1));
            }
        }
        Ok(Sample { label: labels.join(" * "), matrix: g })
    }

    fn random_samples(&self, seed: u64, count: u64) -> Result<Vec<Sample>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.random_element(&mut rng)).collect()
    }

    fn params(&self, trials: u64) -> serde_json::Value {
        serde_json::json!({ "n": self.n, "p": self.p, "N": self.prec, "random_trials": trials })
    }

    /// `omega(u_alpha(c p^i)) = height/h + i`, `omega(alpha^vee(1 + c p^j)) = j`,
    /// matching symbols, and agreement with the entry-threshold description.
    pub fn verify_omega_values(&self) -> Result<VerifyReport> {
        let h = self.h();
        let units: Vec<u64> = (1..self.p).collect();
        let mut failures = Vec::new();
        let mut trials = 0;
        let mut check = |label: String, g: &PadicMatrix, expected: i64, basis: usize, c: u64| -> Result<()> {
            trials += 1;
            let got = self.omega(g)?;
            let entries = self.omega_by_entries(g)?;
            let sym = self.symbol(g)?;
            let mut want = self.symbol_from_full(expected, &vec![0; self.tg.basis.len()]);
            let slot = want.piece.iter().position(|&i| i == basis).unwrap();
            want.coords[slot] = c;
            if got != OmegaValue::Finite(expected) || entries != got || sym != want {
                failures.push(Failure {
                    inputs: label,
                    expected: format!("omega {} symbol {}", OmegaValue::Finite(expected).render(h), self.render_symbol(&want)),
                    got: format!("omega {} (entries {}) symbol {}", got.render(h), entries.render(h), self.render_symbol(&sym)),
                });
            }
            Ok(())
        };
        for root in 0..self.rs().num_roots() {
            let ht = self.rs().roots[root].height;
            let min = u32::from(ht < 0);
            for i in min..=min + 2 {
                for &c in &units {
                    let g = self.root_element(root, i, c)?;
                    let label = format!("u[{}]({c} p^{i})", self.ch.lie.names[root]);
                    check(label, &g, ht + h * i as i64, self.tg_index(self.ch.root_basis(root), i), c)?;
                }
            }
        }
        for k in 0..self.n - 1 {
            for j in 1..=3 {
                for &c in &units {
                    let g = self.torus_element(k, j, c)?;
                    let label = format!("H{}(1 + {c} p^{j})", k + 1);
                    check(label, &g, h * j as i64, self.tg_index(self.ch.coroot_basis(k), j), c)?;
                }
            }
        }
        Ok(VerifyReport { op: "omega_values".into(), params: self.params(0), trials, failures, seed: 0 })
    }

    fn bracket_case(&self, x: &Sample, y: &Sample) -> Option<Failure> {
        let run = || -> Result<Option<(String, String)>> {
            let (sx, sy) = (self.symbol(&x.matrix)?, self.symbol(&y.matrix)?);
            let degree = sx.degree + sy.degree;
            let c = x.matrix.commutator(&y.matrix)?;
            let bracket = self.tg.lie.bracket_mod(self.p, &self.full_vector(&sx), &self.full_vector(&sy))?;
            if bracket.iter().all(|&b| b == 0) {
                let w = self.omega(&c)?;
                return Ok((w <= OmegaValue::Finite(degree)).then(|| {
                    (format!("omega > {}", OmegaValue::Finite(degree).render(self.h())), format!("omega {}", w.render(self.h())))
                }));
            }
            let want = self.symbol_from_full(degree, &bracket);
            let got = self.symbol(&c)?;
            Ok((got != want).then(|| (self.render_symbol(&want), self.render_symbol(&got))))
        };
        match run() {
            Ok(None) => None,
            Ok(Some((expected, got))) => Some(Failure { inputs: format!("({}, {})", x.label, y.label), expected, got }),
            Err(e) => Some(Failure {
                inputs: format!("({}, {})", x.label, y.label),
                expected: "a decided comparison".into(),
                got: e.to_string(),
            }),
        }
    }

    /// The explicit `SL_2` commutator `(u_alpha(p^i), u_-alpha(p^j))`.
    fn sl2_commutator_case(&self, i: u32, j: u32) -> Result<Option<Failure>> {
        let a = self.p_power(i)? as i64;
        let b = self.p_power(j)? as i64;
        let x = self.root_element(self.rs().simple_root(0), i, 1)?;
        let y = self.root_element(self.rs().negative_of(self.rs().simple_root(0)), j, 1)?;
        let c = x.commutator(&y)?;
        let want = PadicMatrix::from_rows(
            self.p,
            self.prec,
            &[vec![1 + a * b + a * a * b * b, -a * a * b], vec![a * b * b, 1 - a * b]],
        )?;
        let sym = self.symbol(&c)?;
        let mut want_sym = self.symbol_from_full(self.h() * (i + j) as i64, &vec![0; self.tg.basis.len()]);
        let slot = want_sym.piece.iter().position(|&k| k == self.tg_index(self.ch.coroot_basis(0), i + j)).unwrap();
        want_sym.coords[slot] = 1;
        Ok((c != want || sym != want_sym).then(|| Failure {
            inputs: format!("(u(p^{i}), u-(p^{j}))"),
            expected: format!("{:?} with symbol {}", want.entries, self.render_symbol(&want_sym)),
            got: format!("{:?} with symbol {}", c.entries, self.render_symbol(&sym)),
        }))
    }

    /// `symbol((x, y)) = [symbol x, symbol y]` when the bracket is nonzero, and
    /// `omega((x, y)) > omega(x) + omega(y)` otherwise. Generator pairs are
    /// exhaustive; random pairs are seeded.
    pub fn verify_symbol_bracket(&self, trials: u64, seed: u64) -> Result<VerifyReport> {
        self.require_hypothesis()?;
        if (self.prec as i64) < 2 * self.h() + 4 {
            return Err(Error::Precision(format!("N >= 2h + 4 = {} is required", 2 * self.h() + 4)));
        }
        let gens = self.generators(1, &[1, 2])?;
        let mut pairs: Vec<(Sample, Sample)> = Vec::new();
        for x in &gens {
            for y in &gens {
                pairs.push((x.clone(), y.clone()));
            }
        }
        let randoms = self.random_samples(seed, 2 * trials)?;
        for pair in randoms.chunks(2) {
            pairs.push((pair[0].clone(), pair[1].clone()));
        }
        let mut failures: Vec<Failure> =
            par::map(par::Mode::available(), &pairs, |(x, y)| self.bracket_case(x, y)).into_iter().flatten().collect();
        if self.n == 2 {
            failures.extend(self.sl2_commutator_case(0, 1)?);
            failures.extend(self.sl2_commutator_case(1, 1)?);
        }
        Ok(VerifyReport {
            op: "symbol_bracket".into(),
            params: self.params(trials),
            trials: pairs.len() as u64,
            failures,
            seed,
        })
    }

    /// `symbol(g^p) = v symbol(g)` at degree `omega(g) + 1`.
    pub fn verify_epsilon(&self, trials: u64, seed: u64) -> Result<VerifyReport> {
        self.require_hypothesis()?;
        let mut samples = self.generators(1, &[1, 2])?;
        samples.extend(self.random_samples(seed, trials)?);
        let h = self.h();
        let case = |s: &Sample| -> Option<Failure> {
            let run = || -> Result<Option<(String, String)>> {
                let sym = self.symbol(&s.matrix)?;
                let mut shifted = vec![0u64; self.tg.basis.len()];
                for (&i, &c) in sym.piece.iter().zip(&sym.coords) {
                    let j = self.tg.epsilon[i].ok_or_else(|| Error::Truncation("epsilon leaves g~_1".into()))?;
                    shifted[j] = c * self.tg.lambda % self.p;
                }
                let want = self.symbol_from_full(sym.degree + h, &shifted);
                let got = self.symbol(&s.matrix.pow(self.p)?)?;
                Ok((got != want).then(|| (self.render_symbol(&want), self.render_symbol(&got))))
            };
            match run() {
                Ok(None) => None,
                Ok(Some((expected, got))) => Some(Failure { inputs: s.label.clone(), expected, got }),
                Err(e) => Some(Failure { inputs: s.label.clone(), expected: "a decided comparison".into(), got: e.to_string() }),
            }
        };
        let failures = par::map(par::Mode::available(), &samples, case).into_iter().flatten().collect();
        Ok(VerifyReport { op: "epsilon".into(), params: self.params(trials), trials: samples.len() as u64, failures, seed })
    }

    /// Seeded checks of `omega(x y^-1) >= min`, `omega((x, y)) >= omega(x) + omega(y)`,
    /// `omega(x^p) = omega(x) + 1` and `omega(x) > 1/(p - 1)`.
    pub fn verify_pvaluation_axioms(&self, trials: u64, seed: u64) -> Result<VerifyReport> {
        self.require_hypothesis()?;
        let samples = self.random_samples(seed, 2 * trials)?;
        let pairs: Vec<&[Sample]> = samples.chunks(2).collect();
        let h = self.h();
        let p = self.p as i64;
        let case = |pair: &&[Sample]| -> Vec<Failure> {
            let (x, y) = (&pair[0], &pair[1]);
            let inputs = format!("({}, {})", x.label, y.label);
            let fail = |expected: String, got: String| Failure { inputs: inputs.clone(), expected, got };
            let run = || -> Result<Vec<Failure>> {
                let mut out = Vec::new();
                let (wx, wy) = (self.omega(&x.matrix)?, self.omega(&y.matrix)?);
                let quotient = self.omega(&x.matrix.mul(&y.matrix.inverse()?)?)?;
                if quotient < wx.min(wy) {
                    out.push(fail(format!("omega(x y^-1) >= {}", wx.min(wy).render(h)), quotient.render(h)));
                }
                let c = self.omega(&x.matrix.commutator(&y.matrix)?)?;
                if let (Some(a), Some(b)) = (wx.units(), wy.units()) {
                    if c < OmegaValue::Finite(a + b) {
                        out.push(fail(format!("omega((x, y)) >= {}", OmegaValue::Finite(a + b).render(h)), c.render(h)));
                    }
                }
                for (s, w) in [(x, wx), (y, wy)] {
                    if let Some(a) = w.units() {
                        let wp = self.omega(&s.matrix.pow(self.p)?)?;
                        if wp != OmegaValue::Finite(a + h) {
                            out.push(fail(format!("omega(x^p) = {}", OmegaValue::Finite(a + h).render(h)), wp.render(h)));
                        }
                        if a * (p - 1) <= h {
                            out.push(fail(format!("omega > 1/{}", p - 1), w.render(h)));
                        }
                    }
                }
                Ok(out)
            };
            run().unwrap_or_else(|e| vec![fail("a decided comparison".into(), e.to_string())])
        };
        let failures = par::map(par::Mode::available(), &pairs, case).into_iter().flatten().collect();
        Ok(VerifyReport { op: "pvaluation_axioms".into(), params: self.params(trials), trials, failures, seed })
    }
}

impl fmt::Display for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|a| {
                let r: Vec<String> = (0..self.n).map(|b| self.signed(a, b).to_string()).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}] mod {}^{}", rows.join(", "), self.p, self.prec)
    }
}

/// Every check of the group-level suite for `SL_n`.
pub fn verify_mp_suite(n: usize, p: u64, prec: u32, trials: u64, seed: u64) -> Result<Vec<VerifyReport>> {
    let g = SlGroup::new(n, p, prec)?;
    Ok(vec![
        g.verify_omega_values()?,
        g.verify_pvaluation_axioms(trials, seed)?,
        g.verify_symbol_bracket(trials, seed)?,
        g.verify_epsilon(trials, seed)?,
    ])
}
