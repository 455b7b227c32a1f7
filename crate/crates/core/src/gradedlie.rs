//! Positively graded Lie algebras built from a Chevalley basis: the truncated
//! loop subalgebra `g~_e`, its quotient `gbar = g~_1 / v g~_1`, and the cyclic
//! shift model of `g~_1` for `gl_n`.
//!
//! Degrees are stored as integer numerators over the common denominator
//! `h e`: `X_a (x) v^i` has numerator `height(a) + i h`, and `H (x) v^i`,
//! `Z (x) v^i` have numerator `i h`.

use std::collections::HashMap;

use serde::Serialize;

use crate::chevalley::{Chevalley, Label, StructLie};
use crate::error::{Error, Result};
use crate::linfp::{Echelon, Field, Fp, Fq};
use crate::rootsys::Weight;

/// One basis vector `b (x) v^power` with `b` from the Chevalley basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GradedBasis {
    pub source: usize,
    pub power: u32,
    /// Degree times `h e`.
    pub degree: i64,
}

/// `g~_e` truncated above a fixed degree, over `F_p`.
#[derive(Clone, Debug)]
pub struct GradedLie {
    pub p: u64,
    pub e: u32,
    pub lambda: u64,
    pub coxeter_number: i64,
    /// Largest stored degree numerator.
    pub max_degree: i64,
    pub basis: Vec<GradedBasis>,
    /// Brackets landing above `max_degree` are dropped, so this is the
    /// quotient by the ideal of degrees above the truncation.
    pub lie: StructLie,
    /// `epsilon[i]` is the index of `v^e b_i` when it is stored.
    pub epsilon: Vec<Option<usize>>,
    index: HashMap<(usize, u32), usize>,
}

fn source_degree(ch: &Chevalley, source: usize) -> (i64, u32) {
    // (height contribution, minimal power of v)
    match ch.labels[source] {
        Label::Root(r) => {
            let ht = ch.rs.roots[r].height;
            (ht, u32::from(ht < 0))
        }
        Label::Coroot(_) | Label::Center => (0, 1),
    }
}

/// `g~_e` with degrees up to `truncation` (inclusive), `epsilon = lambda v^e`.
pub fn build_tilde_g(ch: &Chevalley, e: u32, p: u64, truncation: u32, lambda: u64) -> Result<GradedLie> {
    if e == 0 || truncation == 0 {
        return Err(Error::InvalidInput("e and the truncation degree must be positive".into()));
    }
    if lambda.is_multiple_of(p) {
        return Err(Error::InvalidInput("lambda must be a unit".into()));
    }
    let h = ch.rs.coxeter_number;
    let max_degree = truncation as i64 * h * e as i64;
    let mut basis = Vec::new();
    for source in 0..ch.dim() {
        let (ht, min_power) = source_degree(ch, source);
        let mut power = min_power;
        while ht + power as i64 * h <= max_degree {
            basis.push(GradedBasis { source, power, degree: ht + power as i64 * h });
            power += 1;
        }
    }
    // by degree, then Chevalley basis order (roots, coroots, center)
    basis.sort_by_key(|b| (b.degree, b.source));
    let index: HashMap<(usize, u32), usize> = basis.iter().enumerate().map(|(i, b)| ((b.source, b.power), i)).collect();

    let names = basis
        .iter()
        .map(|b| match b.power {
            0 => ch.lie.names[b.source].clone(),
            1 => format!("{}v", ch.lie.names[b.source]),
            k => format!("{}v{k}", ch.lie.names[b.source]),
        })
        .collect();
    let weights = basis.iter().map(|b| ch.lie.weights[b.source].clone()).collect();
    let mut upper = Vec::new();
    for (i, bi) in basis.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate().skip(i + 1) {
            if bi.degree + bj.degree > max_degree {
                continue;
            }
            let power = bi.power + bj.power;
            let v: Vec<(usize, i64)> = ch
                .lie
                .basis_bracket(bi.source, bj.source)
                .iter()
                .map(|&(k, c)| (index[&(k, power)], c))
                .collect();
            if !v.is_empty() {
                upper.push(((i, j), v));
            }
        }
    }
    let lie = StructLie::from_upper_brackets(names, weights, upper)?;
    let epsilon = basis.iter().map(|b| index.get(&(b.source, b.power + e)).copied()).collect();
    Ok(GradedLie { p, e, lambda: lambda % p, coxeter_number: h, max_degree, basis, lie, epsilon, index })
}

impl GradedLie {
    pub fn denominator(&self) -> i64 {
        self.coxeter_number * self.e as i64
    }

    pub fn index_of(&self, source: usize, power: u32) -> Option<usize> {
        self.index.get(&(source, power)).copied()
    }

    /// Basis of `gr^{k/(h e)}`.
    pub fn graded_piece(&self, k: i64) -> Vec<usize> {
        (0..self.basis.len()).filter(|&i| self.basis[i].degree == k).collect()
    }

    /// First basis pair `(a, b)` with `[epsilon a, b] != epsilon [a, b]`, among pairs
    /// where both sides are stored.
    pub fn epsilon_violation(&self) -> Option<(usize, usize)> {
        let p = self.p as i64;
        let shift = self.denominator();
        for a in 0..self.basis.len() {
            let Some(ea) = self.epsilon[a] else { continue };
            for b in 0..self.basis.len() {
                if self.basis[a].degree + self.basis[b].degree + shift > self.max_degree {
                    continue;
                }
                // lambda [v^e a, b] against lambda v^e [a, b]
                let lhs: Vec<(usize, i64)> = self.lie.basis_bracket(ea, b).to_vec();
                let rhs: Vec<(usize, i64)> = self
                    .lie
                    .basis_bracket(a, b)
                    .iter()
                    .map(|&(k, c)| (self.epsilon[k].expect("within truncation"), c))
                    .collect();
                let reduce = |v: Vec<(usize, i64)>| -> Vec<(usize, i64)> {
                    v.into_iter().map(|(k, c)| (k, c.rem_euclid(p))).filter(|&(_, c)| c != 0).collect()
                };
                if reduce(lhs) != reduce(rhs) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// First basis pair whose bracket leaves the sum of their degrees.
    pub fn grading_violation(&self) -> Option<(usize, usize)> {
        for a in 0..self.basis.len() {
            for b in 0..self.basis.len() {
                let d = self.basis[a].degree + self.basis[b].degree;
                if self.lie.basis_bracket(a, b).iter().any(|&(k, _)| self.basis[k].degree != d) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// The isomorphism `gr^{i/h} -> g[i]` as pairs `(graded index, Chevalley index)`.
    pub fn coxeter_grading_iso(&self, i: i64) -> Result<Vec<(usize, usize)>> {
        if self.e != 1 {
            return Err(Error::InvalidInput(format!("Coxeter grading needs e = 1, got e = {}", self.e)));
        }
        if i < 1 || i > self.max_degree {
            return Err(Error::Truncation(format!("degree {i}/h is not stored")));
        }
        Ok(self.graded_piece(i).into_iter().map(|k| (k, self.basis[k].source)).collect())
    }

    /// Checks that the Coxeter isomorphisms intertwine brackets (with `g[i]`
    /// indexed mod `h`) and send `epsilon` to the identity.
    pub fn verify_coxeter_iso(&self, ch: &Chevalley) -> Result<()> {
        let h = self.coxeter_number;
        let coxeter_class = |source: usize| match ch.labels[source] {
            Label::Root(r) => ch.rs.roots[r].height.rem_euclid(h),
            _ => 0,
        };
        for i in 1..=self.max_degree {
            for (k, src) in self.coxeter_grading_iso(i)? {
                if coxeter_class(src) != i.rem_euclid(h) {
                    return Err(Error::InvalidInput(format!("{} is not in g[{}]", self.lie.names[k], i % h)));
                }
                if let Some(ek) = self.epsilon[k] {
                    if self.basis[ek].source != src {
                        return Err(Error::InvalidInput(format!("epsilon moves {}", self.lie.names[k])));
                    }
                }
            }
        }
        for a in 0..self.basis.len() {
            for b in 0..self.basis.len() {
                if self.basis[a].degree + self.basis[b].degree > self.max_degree {
                    continue;
                }
                let graded: Vec<(usize, i64)> =
                    self.lie.basis_bracket(a, b).iter().map(|&(k, c)| (self.basis[k].source, c)).collect();
                let direct = ch.lie.basis_bracket(self.basis[a].source, self.basis[b].source).to_vec();
                if graded != direct {
                    return Err(Error::InvalidInput(format!(
                        "bracket of {} and {} differs from g",
                        self.lie.names[a], self.lie.names[b]
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A finite-dimensional positively graded Lie algebra over `F_p`.
#[derive(Clone, Debug)]
pub struct FiniteGradedLie {
    pub p: u64,
    pub lie: StructLie,
    /// Degree numerators over `denominator`.
    pub degrees: Vec<i64>,
    pub denominator: i64,
    /// Chevalley basis element each basis vector comes from.
    pub sources: Vec<usize>,
}

impl FiniteGradedLie {
    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    /// Length of the lower central series: least `c` with `g^{(c+1)} = 0`.
    pub fn nilpotency_class(&self) -> Result<usize> {
        let f = Fp::new(self.p as u32)?;
        let n = self.dim();
        let mut current: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut v = vec![0u32; n];
                v[i] = 1;
                v
            })
            .collect();
        for class in 0..=2 * n {
            if current.is_empty() {
                return Ok(class);
            }
            let mut ech = Echelon::new(f, n);
            for v in &current {
                for g in 0..n {
                    let mut out = vec![0u32; n];
                    for (k, &c) in v.iter().enumerate().filter(|(_, &c)| c != 0) {
                        for &(t, s) in self.lie.basis_bracket(g, k) {
                            out[t] = f.add(out[t], f.mul(c, f.from_i64(s)));
                        }
                    }
                    ech.insert(out);
                }
            }
            current = ech.rows().to_vec();
        }
        Err(Error::InvalidInput("lower central series does not terminate".into()))
    }
}

/// `gbar = n ⋉ (g/n)`: positive root vectors, then classes of `b^-` and the center.
pub fn build_gbar(ch: &Chevalley, p: u64) -> Result<FiniteGradedLie> {
    let rs = &ch.rs;
    let h = rs.coxeter_number;
    let positive: Vec<usize> = rs.positive_roots().collect();
    let [_, _, _, _, bminus] = ch.triangular();
    let mut sources = positive.clone();
    sources.extend(&bminus.members);
    let n_pos = positive.len();
    let mut pos_of = vec![usize::MAX; ch.dim()];
    for (i, &s) in sources.iter().enumerate() {
        pos_of[s] = i;
    }
    let degrees: Vec<i64> = sources
        .iter()
        .enumerate()
        .map(|(i, &s)| match ch.labels[s] {
            Label::Root(r) if i < n_pos => rs.roots[r].height,
            Label::Root(r) => h + rs.roots[r].height,
            _ => h,
        })
        .collect();
    let names = sources
        .iter()
        .enumerate()
        .map(|(i, &s)| if i < n_pos { ch.lie.names[s].clone() } else { format!("{}~", ch.lie.names[s]) })
        .collect();
    let weights: Vec<Weight> = sources.iter().map(|&s| ch.lie.weights[s].clone()).collect();
    let mut upper = Vec::new();
    for i in 0..n_pos {
        for j in i + 1..sources.len() {
            let v: Vec<(usize, i64)> = ch
                .lie
                .basis_bracket(sources[i], sources[j])
                .iter()
                // [X, X'] lies in n; [X, B] is projected to b^-
                .filter(|&&(k, _)| (j < n_pos) == (pos_of[k] < n_pos))
                .map(|&(k, c)| (pos_of[k], c))
                .collect();
            if !v.is_empty() {
                upper.push(((i, j), v));
            }
        }
    }
    let lie = StructLie::from_upper_brackets(names, weights, upper)?;
    Ok(FiniteGradedLie { p, lie, degrees, denominator: h, sources })
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoReport {
    pub ok: bool,
    /// `(a, b, c)` with the structure constant `[a, b]_c` differing.
    pub mismatch: Option<(String, String, String)>,
}

/// Compares `gbar` with `g~_1 / epsilon g~_1` computed from `tg`.
pub fn verify_mod_epsilon_iso(tg: &GradedLie, gb: &FiniteGradedLie) -> Result<IsoReport> {
    if tg.e != 1 {
        return Err(Error::InvalidInput("the quotient presentation needs e = 1".into()));
    }
    let h = tg.coxeter_number;
    if tg.max_degree < h {
        return Err(Error::Truncation("truncation must cover degree 1".into()));
    }
    let p = gb.p as i64;
    // v g~_1 is the span of basis vectors of degree above 1
    let image: Vec<usize> = gb
        .sources
        .iter()
        .map(|&s| {
            // lowest power of v attached to s in g~_1
            let power = tg.basis.iter().filter(|b| b.source == s).map(|b| b.power).min();
            power.and_then(|k| tg.index_of(s, k)).expect("quotient basis vector is stored")
        })
        .collect();
    let mut back = HashMap::new();
    for (i, &t) in image.iter().enumerate() {
        if tg.basis[t].degree != gb.degrees[i] {
            return Err(Error::InvalidInput(format!("degree mismatch on {}", gb.lie.names[i])));
        }
        back.insert(t, i);
    }
    for a in 0..gb.dim() {
        for b in 0..gb.dim() {
            let mut expected: Vec<(usize, i64)> = tg
                .lie
                .basis_bracket(image[a], image[b])
                .iter()
                .filter(|&&(k, _)| tg.basis[k].degree <= h)
                .map(|&(k, c)| (back[&k], c.rem_euclid(p)))
                .filter(|&(_, c)| c != 0)
                .collect();
            expected.sort_unstable();
            let got: Vec<(usize, i64)> = gb
                .lie
                .basis_bracket(a, b)
                .iter()
                .map(|&(k, c)| (k, c.rem_euclid(p)))
                .filter(|&(_, c)| c != 0)
                .collect();
            if expected != got {
                let c = expected
                    .iter()
                    .chain(&got)
                    .find(|x| !expected.contains(x) || !got.contains(x))
                    .map(|&(k, _)| k)
                    .unwrap();
                return Ok(IsoReport {
                    ok: false,
                    mismatch: Some((gb.lie.names[a].clone(), gb.lie.names[b].clone(), gb.lie.names[c].clone())),
                });
            }
        }
    }
    Ok(IsoReport { ok: true, mismatch: None })
}

/// The cyclic shift model of `g~_1` for `gl_n` over `k = F_{p^f}`: every
/// `gr^{i/n}` is `k^n`, `epsilon` is the identity, and
/// `[x, y] = x * Shift^i(y) - y * Shift^j(x)` for `x` in degree `i/n`, `y` in degree `j/n`.
#[derive(Clone, Debug)]
pub struct ShiftModel {
    pub n: usize,
    pub field: Fq,
}

pub fn shift_presentation(n: usize, p: u32, f: u32) -> Result<ShiftModel> {
    if n < 2 {
        return Err(Error::InvalidInput("the shift model needs n >= 2".into()));
    }
    Ok(ShiftModel { n, field: Fq::new(p, f)? })
}

impl ShiftModel {
    /// `(Shift^i y)_j = y_{j + i mod n}`.
    pub fn shift(&self, y: &[u32], i: usize) -> Vec<u32> {
        (0..self.n).map(|j| y[(j + i) % self.n]).collect()
    }

    pub fn bracket(&self, i: usize, x: &[u32], j: usize, y: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let sy = self.shift(y, i);
        let sx = self.shift(x, j);
        (0..self.n).map(|m| f.sub(f.mul(x[m], sy[m]), f.mul(y[m], sx[m]))).collect()
    }

    /// Weight of the `j`-th coordinate of `gr^{i/n}` in `epsilon` coordinates (0-based `j`).
    pub fn weight(&self, i: usize, j: usize) -> Weight {
        let mut w = vec![0i64; self.n];
        w[j] += 1;
        w[(j + i) % self.n] -= 1;
        Weight(w)
    }

    /// Coordinates in `g~_1(gl_n)` of the basis vector `e_j` of `gr^{i/n}`.
    fn image(&self, tg: &GradedLie, ch: &Chevalley, i: usize, j: usize) -> Vec<u64> {
        let n = self.n;
        let p = tg.p;
        let mut out = vec![0u64; tg.lie.dim()];
        let b = (j + i) % n;
        if b != j {
            // E_{j, b} (x) v^s with s fixed by the degree
            let root = ch
                .labels
                .iter()
                .position(|l| matches!(l, Label::Root(r) if root_ends(ch, *r) == (j, b)))
                .unwrap();
            let ht = b as i64 - j as i64;
            let s = ((i as i64 - ht) / n as i64) as u32;
            out[tg.index_of(root, s).unwrap()] = 1;
        } else {
            // E_jj = Z/n + sum_k c_k H_k with c_k = [k >= j] - (k+1)/n
            let s = (i / n) as u32;
            let fp = Fp::new(p as u32).unwrap();
            let inv_n = fp.inv(fp.from_i64(n as i64));
            out[tg.index_of(ch.center_basis().unwrap(), s).unwrap()] = inv_n as u64;
            for k in 0..n - 1 {
                let c = fp.sub(fp.from_i64(i64::from(k >= j)), fp.mul(fp.from_i64(k as i64 + 1), inv_n));
                out[tg.index_of(ch.coroot_basis(k), s).unwrap()] = c as u64;
            }
        }
        out
    }

    /// Checks the isomorphism `E_{j, j+i} (x) v^s -> e_j` against the bracket of
    /// `g~_1(gl_n)` on all basis pairs in degrees up to `periods`.
    pub fn verify_against_gl(&self, ch: &Chevalley, periods: u32) -> Result<()> {
        if self.field.degree() != 1 {
            // structure constants are 0, 1, -1: checking over the prime field suffices
            return shift_presentation(self.n, self.field.p(), 1)?.verify_against_gl(ch, periods);
        }
        let n = self.n;
        let p = self.field.p() as u64;
        let tg = build_tilde_g(ch, 1, p, periods, 1)?;
        let max = periods as usize * n;
        for i in 1..=max {
            for j in 1..=max - i {
                for a in 0..n {
                    for b in 0..n {
                        let x = unit_vec(n, a);
                        let y = unit_vec(n, b);
                        let z = self.bracket(i, &x, j, &y);
                        let mut expected = vec![0u64; tg.lie.dim()];
                        for (m, &c) in z.iter().enumerate().filter(|(_, &c)| c != 0) {
                            for (t, v) in self.image(&tg, ch, i + j, m).into_iter().enumerate() {
                                expected[t] = (expected[t] + c as u64 * v) % p;
                            }
                        }
                        let got = tg.lie.bracket_mod(p, &self.image(&tg, ch, i, a), &self.image(&tg, ch, j, b))?;
                        if got != expected {
                            return Err(Error::InvalidInput(format!(
                                "shift bracket differs on e_{a} in degree {i}/{n} and e_{b} in degree {j}/{n}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn unit_vec(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0u32; n];
    v[i] = 1;
    v
}

/// `(a, b)` with root `r` equal to `epsilon_a - epsilon_b` (0-based).
fn root_ends(ch: &Chevalley, r: usize) -> (usize, usize) {
    let w = &ch.lie.weights[ch.root_basis(r)].0;
    (w.iter().position(|&x| x == 1).unwrap(), w.iter().position(|&x| x == -1).unwrap())
}

pub fn tilde_g_json(tg: &GradedLie) -> serde_json::Value {
    let pieces: Vec<_> = (1..=tg.max_degree)
        .map(|k| {
            serde_json::json!({
                "degree": [k, tg.denominator()],
                "basis": tg.graded_piece(k).iter().map(|&i| tg.lie.names[i].clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::json!({
        "p": tg.p,
        "e": tg.e,
        "pieces": pieces,
        "algebra": tg.lie.to_json(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{build_chevalley, build_gl};
    use crate::rootsys::RootSystem;

    fn ch(name: &str) -> Chevalley {
        build_chevalley(&RootSystem::from_name(name).unwrap(), false).unwrap()
    }

    fn piece_names(tg: &GradedLie, k: i64) -> Vec<String> {
        tg.graded_piece(k).iter().map(|&i| tg.lie.names[i].clone()).collect()
    }

    #[test]
    fn sl3_graded_pieces() {
        let c = ch("A2");
        let tg = build_tilde_g(&c, 1, 5, 3, 1).unwrap();
        // E12, E23 are X+10, X+01; E31 = X-11
        assert_eq!(piece_names(&tg, 1), vec!["X-11v", "X+10", "X+01"]);
        assert_eq!(piece_names(&tg, 2), vec!["X-01v", "X-10v", "X+11"]);
        assert_eq!(piece_names(&tg, 3), vec!["H1v", "H2v"]);
    }

    #[test]
    fn sl2_pieces_e1_and_e2() {
        let c = ch("A1");
        let tg = build_tilde_g(&c, 1, 5, 3, 1).unwrap();
        assert_eq!(piece_names(&tg, 1), vec!["X-1v", "X+1"]);
        assert_eq!(piece_names(&tg, 2), vec!["H1v"]);
        // deg(X (x) v^i) = height/(h e) + i/e, so X_{-a} v sits in degree 1/4 when e = 2
        let tg2 = build_tilde_g(&c, 2, 5, 2, 1).unwrap();
        assert_eq!(tg2.denominator(), 4);
        assert_eq!(piece_names(&tg2, 1), vec!["X-1v", "X+1"]);
        assert_eq!(piece_names(&tg2, 2), vec!["H1v"]);
        assert_eq!(piece_names(&tg2, 3), vec!["X-1v2", "X+1v"]);
        let x = tg2.index_of(1, 0).unwrap();
        assert_eq!(tg2.epsilon[x], tg2.index_of(1, 2));
    }

    #[test]
    fn tilde_g_invariants() {
        for (name, e) in [("A1", 1), ("A2", 1), ("B2", 1), ("G2", 1), ("A2", 2)] {
            let tg = build_tilde_g(&ch(name), e, 7, 3, 1).unwrap();
            assert_eq!(tg.grading_violation(), None, "{name}");
            assert_eq!(tg.epsilon_violation(), None, "{name}");
            assert_eq!(tg.lie.weight_violation(), None, "{name}");
            assert_eq!(tg.lie.jacobi_violation(), None, "{name}");
            assert!(tg.basis.iter().all(|b| b.degree > 0));
        }
    }

    #[test]
    fn coxeter_iso() {
        for name in ["A1", "A2", "B2", "G2"] {
            let c = ch(name);
            let tg = build_tilde_g(&c, 1, 7, 3, 1).unwrap();
            tg.verify_coxeter_iso(&c).unwrap();
        }
        let c = ch("A2");
        let tg = build_tilde_g(&c, 1, 5, 2, 1).unwrap();
        let iso = tg.coxeter_grading_iso(1).unwrap();
        // E31 (x) v maps to E31, which has height -2 = 1 mod 3
        let e31 = c.rs.root_index(&[-1, -1]).unwrap();
        assert!(iso.iter().any(|&(k, s)| s == e31 && tg.basis[k].power == 1));
        let iso3 = tg.coxeter_grading_iso(3).unwrap();
        assert!(iso3.iter().all(|&(_, s)| matches!(c.labels[s], Label::Coroot(_))));
        let tg2 = build_tilde_g(&c, 2, 5, 2, 1).unwrap();
        assert!(tg2.coxeter_grading_iso(1).is_err());
    }

    #[test]
    fn sl2_bracket_across_period() {
        // [X_a, X_{-a} v] = H_a v in gr^1, the image of [X_a, X_{-a}] = H_a
        let c = ch("A1");
        let tg = build_tilde_g(&c, 1, 5, 2, 1).unwrap();
        let (x, y, hv) = (tg.index_of(1, 0).unwrap(), tg.index_of(0, 1).unwrap(), tg.index_of(2, 1).unwrap());
        assert_eq!(tg.lie.basis_bracket(x, y), &[(hv, 1)]);
        assert_eq!(c.lie.basis_bracket(1, 0), &[(2, 1)]);
    }

    #[test]
    fn gbar_a1_is_heisenberg() {
        let gb = build_gbar(&ch("A1"), 5).unwrap();
        assert_eq!(gb.lie.names, vec!["X+1", "X-1~", "H1~"]);
        assert_eq!(gb.degrees, vec![1, 1, 2]);
        assert_eq!(gb.lie.basis_bracket(0, 1), &[(2, 1)]);
        assert!(gb.lie.basis_bracket(0, 2).is_empty());
        assert!(gb.lie.basis_bracket(1, 2).is_empty());
        assert_eq!(gb.nilpotency_class().unwrap(), 2);
    }

    #[test]
    fn gbar_lower_classes_commute_and_nilpotent() {
        for name in ["A2", "B2", "G2", "A3"] {
            let c = ch(name);
            let gb = build_gbar(&c, 13).unwrap();
            let n_pos = c.rs.num_positive();
            for a in n_pos..gb.dim() {
                for b in n_pos..gb.dim() {
                    assert!(gb.lie.basis_bracket(a, b).is_empty());
                }
            }
            assert_eq!(gb.lie.jacobi_violation(), None, "{name}");
            assert!(gb.nilpotency_class().unwrap() <= 2 * c.rs.coxeter_number as usize, "{name}");
        }
    }

    #[test]
    fn mod_epsilon_iso() {
        for name in ["A1", "A2", "B2", "G2"] {
            let c = ch(name);
            let tg = build_tilde_g(&c, 1, 5, 1, 1).unwrap();
            let gb = build_gbar(&c, 5).unwrap();
            assert!(verify_mod_epsilon_iso(&tg, &gb).unwrap().ok, "{name}");
        }
        let c = build_gl(3).unwrap();
        let tg = build_tilde_g(&c, 1, 5, 1, 1).unwrap();
        assert!(verify_mod_epsilon_iso(&tg, &build_gbar(&c, 5).unwrap()).unwrap().ok);
    }

    #[test]
    fn corrupted_gbar_is_caught() {
        let c = ch("A2");
        let tg = build_tilde_g(&c, 1, 5, 1, 1).unwrap();
        let mut gb = build_gbar(&c, 5).unwrap();
        let (x1, x2) = (0, 1);
        let (k, coeff) = gb.lie.basis_bracket(x1, x2)[0];
        gb.lie = gb.lie.with_constant(x1, x2, k, -coeff);
        let report = verify_mod_epsilon_iso(&tg, &gb).unwrap();
        assert!(!report.ok);
        assert_eq!(report.mismatch.unwrap().0, "X+10");
    }

    #[test]
    fn shift_model_matches_gl() {
        for n in [2, 3, 4] {
            let c = build_gl(n).unwrap();
            shift_presentation(n, 7, 1).unwrap().verify_against_gl(&c, 2).unwrap();
        }
        shift_presentation(2, 5, 2).unwrap().verify_against_gl(&build_gl(2).unwrap(), 3).unwrap();
    }

    #[test]
    fn shift_model_examples() {
        let m = shift_presentation(3, 5, 1).unwrap();
        assert_eq!(m.weight(1, 1), Weight(vec![0, 1, -1]));
        let m2 = shift_presentation(2, 5, 1).unwrap();
        // (1,0) * Shift(0,1) - (0,1) * Shift(1,0) = (1,0)(1,0) - (0,1)(0,1) = (1,-1)
        assert_eq!(m2.bracket(1, &[1, 0], 1, &[0, 1]), vec![1, 4]);
    }
}
