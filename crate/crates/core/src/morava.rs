//! The graded Lie algebra of the congruence filtration on `U^1_D` for the
//! division algebra of invariant `1/n` over a field with residue field
//! `k = F_q`, `q = p^f`. Every piece `gr^{i/n}` is `k_D = F_{q^n}` and
//! `[x, y] = x y^{q^i} - y x^{q^j}` for `x` in degree `i/n`, `y` in degree `j/n`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chevalley::build_gl;
use crate::cohomology::{cohomology_dims, ce_complex, kunneth_twist, CEModule, CohomologyTable, Lattice, WeightFilter};
use crate::error::{Error, Result};
use crate::gradedlie::{build_gbar, shift_presentation};
use crate::linfp::{Echelon, Field, Fq};
use crate::par;
use crate::rootsys::{Weight, WeightLemmaReport, WEIGHT_LEMMA_BUDGET};

/// Largest `|k_D|` for exhaustive pair and triple checks.
pub const EXHAUSTIVE_FIELD_LIMIT: u64 = 25;

#[derive(Clone, Debug)]
pub struct DivisionGradedLie {
    pub n: usize,
    pub p: u32,
    pub f: u32,
    pub q: u64,
    /// `k_D = F_{q^n}`.
    pub field: Fq,
    /// Pieces `gr^{i/n}` for `1 <= i <= truncation`.
    pub truncation: usize,
    /// Nonzero only for negative controls: uses `q^{i + offset}` in the bracket.
    frobenius_offset: u32,
}

fn require_morava_hypothesis(n: usize, p: u32) -> Result<()> {
    if n < 1 || p as usize <= n + 1 {
        return Err(Error::Hypothesis(format!("p > n + 1 = {} is required", n + 1)));
    }
    Ok(())
}

pub fn build_division_graded(n: usize, p: u32, f: u32, truncation: usize) -> Result<DivisionGradedLie> {
    require_morava_hypothesis(n, p)?;
    if f == 0 || truncation == 0 {
        return Err(Error::InvalidInput("f and the truncation must be positive".into()));
    }
    let field = Fq::new(p, n as u32 * f)?;
    Ok(DivisionGradedLie { n, p, f, q: (p as u64).pow(f), field, truncation, frobenius_offset: 0 })
}

impl DivisionGradedLie {
    /// A copy whose bracket uses the wrong Frobenius power.
    pub fn with_corrupted_frobenius(&self) -> Self {
        DivisionGradedLie { frobenius_offset: 1, ..self.clone() }
    }

    pub fn field_size(&self) -> u64 {
        self.q.pow(self.n as u32)
    }

    pub fn exhaustive(&self) -> bool {
        self.field_size() <= EXHAUSTIVE_FIELD_LIMIT
    }

    /// `x^{q^k}`.
    pub fn frob(&self, x: u32, k: usize) -> u32 {
        self.field.frobenius(x, self.f * k as u32)
    }

    pub fn bracket(&self, i: usize, x: u32, j: usize, y: u32) -> Result<u32> {
        if i == 0 || j == 0 || i + j > self.truncation {
            return Err(Error::Truncation(format!("degrees {i}/{} + {j}/{} leave the stored range", self.n, self.n)));
        }
        let fd = &self.field;
        let o = self.frobenius_offset as usize;
        Ok(fd.sub(fd.mul(x, self.frob(y, i + o)), fd.mul(y, self.frob(x, j + o))))
    }

    /// `epsilon: gr^{i/n} -> gr^{i/n + 1}` is the identity of `k_D`.
    pub fn epsilon(&self, i: usize, x: u32) -> (usize, u32) {
        (i + self.n, x)
    }

    /// `1 - q^i` modulo `q^n - 1`: `k_D^x` acts on `gr^{i/n}` by `x^{1 - q^i}`.
    pub fn character_exponent(&self, i: usize) -> u64 {
        let order = self.field_size() - 1;
        let qi = (0..i).fold(1u64, |acc, _| acc * self.q % order);
        (1 + order - qi) % order
    }

    /// `k` inside `k_D` as the fixed points of `x -> x^q`.
    pub fn residue_subfield(&self) -> Vec<u32> {
        self.field.elements().filter(|&x| self.frob(x, 1) == x).collect()
    }

    fn elements_or_sample(&self, rng: &mut ChaCha8Rng, samples: usize) -> Vec<u32> {
        if self.exhaustive() {
            self.field.elements().collect()
        } else {
            (0..samples).map(|_| rng.random_range(0..self.field_size() as u32)).collect()
        }
    }

    /// First `(i, x, j, y, k, z)` violating the Jacobi identity.
    pub fn jacobi_violation(&self, seed: u64) -> Result<Option<(usize, u32, usize, u32, usize, u32)>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let elems = self.elements_or_sample(&mut rng, 12);
        let fd = &self.field;
        let mut degrees = Vec::new();
        for i in 1..=self.truncation {
            for j in 1..=self.truncation {
                for k in 1..=self.truncation {
                    if i + j + k <= self.truncation {
                        degrees.push((i, j, k));
                    }
                }
            }
        }
        let found = par::map(par::Mode::available(), &degrees, |&(i, j, k)| -> Result<Option<_>> {
            for &x in &elems {
                for &y in &elems {
                    for &z in &elems {
                        let a = self.bracket(i, x, j + k, self.bracket(j, y, k, z)?)?;
                        let b = self.bracket(j, y, k + i, self.bracket(k, z, i, x)?)?;
                        let c = self.bracket(k, z, i + j, self.bracket(i, x, j, y)?)?;
                        if fd.add(fd.add(a, b), c) != 0 {
                            return Ok(Some((i, x, j, y, k, z)));
                        }
                    }
                }
            }
            Ok(None)
        });
        for r in found {
            if let Some(v) = r? {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    /// `lambda_i(x (x) c)_m = x^{q^m} c`.
    pub fn lambda(&self, x: u32, c: u32) -> Vec<u32> {
        (0..self.n).map(|m| self.field.mul(self.frob(x, m), c)).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseChangeReport {
    pub ok: bool,
    pub exhaustive: bool,
    pub pairs_checked: u64,
    /// Rank over `k_D` of the images of a `k`-basis of `k_D`; `n` when `lambda` is bijective.
    pub moore_rank: usize,
    pub residue_field_size: usize,
    pub witness: Option<String>,
}

/// Compares `lambda_{i+j}([x, y] (x) cd)` with the shift bracket of
/// `lambda_i(x (x) c)` and `lambda_j(y (x) d)`.
pub fn verify_base_change(n: usize, p: u32, f: u32) -> Result<BaseChangeReport> {
    let dg = build_division_graded(n, p, f, 2 * n + 2)?;
    shift_presentation(n, p, 1)?.verify_against_gl(&build_gl(n)?, 2)?;
    verify_base_change_for(&dg, 0)
}

pub fn verify_base_change_for(dg: &DivisionGradedLie, seed: u64) -> Result<BaseChangeReport> {
    let shift = shift_presentation(dg.n, dg.p, dg.n as u32 * dg.f)?;
    let fd = &dg.field;
    // k-basis 1, T, ..., T^{n-1} of k_D; its images must be k_D-independent
    let mut moore = Echelon::new(fd.clone(), dg.n);
    let mut power = fd.one();
    for _ in 0..dg.n {
        moore.insert(dg.lambda(power, fd.one()));
        power = fd.mul(power, fd.generator());
    }
    let subfield = dg.residue_subfield();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elems = dg.elements_or_sample(&mut rng, 48);
    let scalars = [fd.one(), fd.generator()];
    let mut bidegrees = Vec::new();
    for i in 1..dg.truncation {
        for j in 1..=dg.truncation - i {
            bidegrees.push((i, j));
        }
    }
    let results = par::map(par::Mode::available(), &bidegrees, |&(i, j)| -> Result<(u64, Option<String>)> {
        let mut count = 0;
        for &x in &elems {
            for &y in &elems {
                let z = dg.bracket(i, x, j, y)?;
                for &c in &scalars {
                    for &d in &scalars {
                        count += 1;
                        let lhs = dg.lambda(z, fd.mul(c, d));
                        let rhs = shift.bracket(i, &dg.lambda(x, c), j, &dg.lambda(y, d));
                        if lhs != rhs {
                            let w = format!("x = {x} in degree {i}/{n}, y = {y} in degree {j}/{n}, c = {c}, d = {d}", n = dg.n);
                            return Ok((count, Some(w)));
                        }
                    }
                }
            }
        }
        Ok((count, None))
    });
    let mut pairs_checked = 0;
    let mut witness = None;
    for r in results {
        let (c, w) = r?;
        pairs_checked += c;
        if witness.is_none() {
            witness = w;
        }
    }
    let ok = witness.is_none() && moore.rank() == dg.n && subfield.len() as u64 == dg.q;
    Ok(BaseChangeReport {
        ok,
        exhaustive: dg.exhaustive(),
        pairs_checked,
        moore_rank: moore.rank(),
        residue_field_size: subfield.len(),
        witness,
    })
}

/// `(q w - 1) X^*(T)` with `w e_j = e_{j-1}` cyclically.
#[derive(Clone, Debug)]
pub struct TwistLattice {
    pub n: usize,
    pub q: u64,
    pub lattice: Lattice,
}

impl TwistLattice {
    pub fn new(n: usize, q: u64) -> Result<Self> {
        let q = i64::try_from(q).map_err(|_| Error::InvalidInput("q too large".into()))?;
        let mut m = vec![vec![0i64; n]; n];
        for j in 0..n {
            m[(j + n - 1) % n][j] += q;
            m[j][j] -= 1;
        }
        Ok(TwistLattice { n, q: q as u64, lattice: Lattice::new(m)? })
    }

    pub fn index(&self) -> u128 {
        self.lattice.index()
    }

    /// `chi_D(lambda) = a -> a^{sum_j lambda_j q^j}` is trivial.
    pub fn character_trivial(&self, lambda: &Weight) -> bool {
        let order = (self.q as i128).pow(self.n as u32) - 1;
        let s: i128 = lambda.0.iter().enumerate().map(|(j, &l)| l as i128 * (self.q as i128).pow(j as u32)).sum();
        s.rem_euclid(order) == 0
    }
}

/// `H^*` of `gbar(gl_n)` with the `f`-fold twisted Künneth product, keeping
/// total weights in `(q w - 1) X^*(T)`.
pub fn morava_cohomology(n: usize, p: u32, f: u32) -> Result<CohomologyTable> {
    require_morava_hypothesis(n, p)?;
    let ch = build_gl(n)?;
    let gb = build_gbar(&ch, p as u64)?;
    let module = CEModule::trivial(&gb.lie, p as u64)?;
    let c = ce_complex(&gb.lie, &module, &WeightFilter::All)?;
    let single = cohomology_dims(&c, &WeightFilter::All, &format!("gl{n}"), p as u64);
    let twist = TwistLattice::new(n, (p as u64).pow(f))?;
    let mut table = kunneth_twist(&single, f, &twist.lattice)?;
    table.label = format!("D(1/{n})");
    Ok(table)
}

/// `((1 + t) prod_{i=1}^{n-1} (1 + t^{2i+1}))^f`.
pub fn predicted_morava_poincare(n: usize, f: u32) -> Vec<u64> {
    let exponents: Vec<i64> = (0..n as i64).collect();
    crate::cohomology::predicted_poincare(&exponents, f)
}

/// Distinct weights of `wedge gl_n` in `epsilon` coordinates.
pub fn gl_exterior_weights(n: usize) -> Result<Vec<Weight>> {
    let roots: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    if roots.len() > 24 {
        return Err(Error::EnumerationLimit(format!("2^{} root subsets", roots.len())));
    }
    let mut out = BTreeSet::new();
    for s in 0u32..1 << roots.len() {
        let mut w = vec![0i64; n];
        for (k, &(a, b)) in roots.iter().enumerate() {
            if s & (1 << k) != 0 {
                w[a] += 1;
                w[b] -= 1;
            }
        }
        out.insert(Weight(w));
    }
    Ok(out.into_iter().collect())
}

/// Checks that every `f`-tuple of weights of `wedge gl_n` with
/// `sum_i lambda_i p^i` killed by `chi_D` combines to zero. Agreement of the
/// character test with lattice membership in `(q w - 1) X^*(T)` is asserted
/// on every tuple.
pub fn check_nonsplit_weight_lemma(n: usize, p: u32, f: u32) -> Result<WeightLemmaReport> {
    if n < 1 || f == 0 {
        return Err(Error::InvalidInput("n and f must be positive".into()));
    }
    let hypothesis_ok = (n as u64) + 1 < p as u64;
    let weights = gl_exterior_weights(n)?;
    let total = (weights.len() as u64)
        .checked_pow(f)
        .filter(|&t| t <= WEIGHT_LEMMA_BUDGET)
        .ok_or_else(|| Error::EnumerationLimit(format!("{}^{f} weight tuples exceed the budget", weights.len())))?;
    let twist = TwistLattice::new(n, (p as u64).pow(f))?;
    let mut idx = vec![0usize; f as usize];
    let mut witness = None;
    for _ in 0..total {
        let mut lambda = vec![0i64; n];
        for (i, &k) in idx.iter().enumerate() {
            let pi = (p as i64).pow(i as u32);
            for (l, x) in lambda.iter_mut().zip(&weights[k].0) {
                *l += pi * x;
            }
        }
        let lambda = Weight(lambda);
        let trivial = twist.character_trivial(&lambda);
        if trivial != twist.lattice.contains(&lambda) {
            return Err(Error::InvalidInput(format!("character test and lattice membership disagree on {:?}", lambda.0)));
        }
        if trivial && !lambda.is_zero() && witness.is_none() {
            witness = Some(idx.iter().map(|&k| weights[k].clone()).collect());
        }
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < weights.len() {
                break;
            }
            *slot = 0;
        }
    }
    Ok(WeightLemmaReport { holds: witness.is_none(), hypothesis_ok, witness, tuples_checked: total })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f25_bracket_examples() {
        let dg = build_division_graded(2, 5, 1, 6).unwrap();
        let fd = &dg.field;
        let (x, y) = (fd.generator(), fd.add(fd.generator(), 1));
        let expected = fd.sub(fd.mul(x, fd.pow(y, 5)), fd.mul(y, fd.pow(x, 5)));
        assert_eq!(dg.bracket(1, x, 1, y).unwrap(), expected);
        assert_ne!(expected, 0);
        for z in fd.elements() {
            assert_eq!(dg.bracket(1, z, 1, z).unwrap(), 0);
            assert_eq!(dg.bracket(1, z, 2, y).unwrap(), fd.neg(dg.bracket(2, y, 1, z).unwrap()));
        }
        assert_eq!(dg.epsilon(1, 1), (3, 1));
        assert!(matches!(dg.bracket(3, x, 4, y), Err(Error::Truncation(_))));
    }

    #[test]
    fn bracket_is_not_kd_bilinear() {
        let dg = build_division_graded(2, 5, 1, 6).unwrap();
        let fd = &dg.field;
        let g = fd.generator();
        let scaled = dg.bracket(1, fd.mul(g, 1), 1, fd.mul(g, 1)).unwrap();
        let (a, b) = (dg.bracket(1, fd.mul(g, 2), 1, 1).unwrap(), fd.mul(g, dg.bracket(1, 2, 1, 1).unwrap()));
        assert_eq!(scaled, 0);
        assert_ne!(a, b);
    }

    #[test]
    fn jacobi_exhaustive_and_sampled() {
        let dg = build_division_graded(2, 5, 1, 6).unwrap();
        assert!(dg.exhaustive());
        assert_eq!(dg.jacobi_violation(0).unwrap(), None);
        let big = build_division_graded(3, 5, 1, 4).unwrap();
        assert!(!big.exhaustive());
        assert_eq!(big.jacobi_violation(1).unwrap(), None);
    }

    #[test]
    fn epsilon_commutes_with_brackets() {
        let dg = build_division_graded(2, 5, 1, 6).unwrap();
        for x in dg.field.elements() {
            for y in dg.field.elements().step_by(3) {
                let (i2, x2) = dg.epsilon(1, x);
                assert_eq!(dg.bracket(i2, x2, 1, y).unwrap(), dg.bracket(1, x, 1, y).unwrap());
            }
        }
    }

    #[test]
    fn residue_field_and_characters() {
        let dg = build_division_graded(2, 7, 1, 6).unwrap();
        assert_eq!(dg.residue_subfield().len(), 7);
        let fd = &dg.field;
        let a = fd.generator();
        // a^{q^j (1 - q^i)} = a^{q^j} / a^{q^{j+i}}: the weight eps_j - eps_{j+i}
        for i in 1..=4 {
            let chi = fd.pow(a, dg.character_exponent(i));
            for j in 0..2 {
                let lhs = dg.frob(chi, j);
                let rhs = fd.mul(dg.frob(a, j), fd.inv(dg.frob(a, j + i)));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn base_change_and_negative_control() {
        let r = verify_base_change(2, 5, 1).unwrap();
        assert!(r.ok && r.exhaustive && r.moore_rank == 2, "{r:?}");
        assert_eq!(r.pairs_checked, 625 * 4 * 15);
        let dg = build_division_graded(2, 5, 1, 6).unwrap().with_corrupted_frobenius();
        let bad = verify_base_change_for(&dg, 0).unwrap();
        assert!(!bad.ok && bad.witness.is_some());
        let sampled = verify_base_change(3, 5, 1).unwrap();
        assert!(sampled.ok && !sampled.exhaustive);
    }

    #[test]
    fn twist_lattice_index() {
        for (n, q) in [(2, 5u64), (3, 7), (2, 25), (4, 5)] {
            let t = TwistLattice::new(n, q).unwrap();
            assert_eq!(t.index(), q.pow(n as u32) as u128 - 1);
        }
    }

    #[test]
    fn morava_tables() {
        let t = morava_cohomology(2, 5, 1).unwrap();
        assert_eq!(t.poincare, vec![1, 1, 0, 1, 1]);
        assert_eq!(t.poincare, predicted_morava_poincare(2, 1));
        assert_eq!(morava_cohomology(2, 5, 2).unwrap().poincare, predicted_morava_poincare(2, 2));
        assert_eq!(predicted_morava_poincare(2, 2).iter().sum::<u64>(), 16);
    }

    #[test]
    fn nonsplit_weight_lemma() {
        let r = check_nonsplit_weight_lemma(2, 5, 1).unwrap();
        assert!(r.holds && r.hypothesis_ok);
        assert!(check_nonsplit_weight_lemma(3, 5, 1).unwrap().holds);
        let guarded = check_nonsplit_weight_lemma(2, 3, 1).unwrap();
        assert!(!guarded.hypothesis_ok);
        assert_eq!(gl_exterior_weights(2).unwrap().len(), 3);
    }
}
