//! Weyl invariants in `Sym t^vee`, the coinvariant algebra, Koszul complexes,
//! and the differential graded algebra `A(2) (x) wedge(xi_1..xi_r)` with
//! `d xi_i = x_i`, whose homology is compared with the Lie algebra side.
//!
//! Variables `x_i` are the fundamental weights, dual to the simple coroots,
//! so the Weyl group acts through the same matrices as on weights.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::chevalley::build_chevalley;
use crate::cohomology::{gbar_table, predicted_poincare, CohomologyTable, WeightFilter};
use crate::error::{Error, Result};
use crate::linfp::{rank, Echelon, Field, Fp, SparseMat};
use crate::rootsys::{RootSystem, Weight};

pub type Monomial = Vec<u32>;

/// A polynomial over `F_p` in `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Monomial, u32>,
}

impl GradedPoly {
    pub fn zero(nvars: usize) -> Self {
        GradedPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn monomial(exps: Monomial) -> Self {
        let nvars = exps.len();
        GradedPoly { nvars, terms: BTreeMap::from([(exps, 1)]) }
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        GradedPoly::monomial(e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree of a homogeneous polynomial, `None` for zero or inhomogeneous input.
    pub fn degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.iter().sum::<u32>());
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn add(&self, f: &Fp, other: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            let e = out.terms.entry(m.clone()).or_insert(0);
            *e = f.add(*e, c);
        }
        out.terms.retain(|_, c| *c != 0);
        out
    }

    pub fn scale(&self, f: &Fp, c: u32) -> GradedPoly {
        let mut out = GradedPoly::zero(self.nvars);
        if c != 0 {
            out.terms = self.terms.iter().map(|(m, &v)| (m.clone(), f.mul(v, c))).collect();
        }
        out
    }

    pub fn mul(&self, f: &Fp, other: &GradedPoly) -> GradedPoly {
        let mut out: BTreeMap<Monomial, u32> = BTreeMap::new();
        for (a, &x) in &self.terms {
            for (b, &y) in &other.terms {
                let m: Monomial = a.iter().zip(b).map(|(i, j)| i + j).collect();
                let e = out.entry(m).or_insert(0);
                *e = f.add(*e, f.mul(x, y));
            }
        }
        out.retain(|_, c| *c != 0);
        GradedPoly { nvars: self.nvars, terms: out }
    }

    /// `P(x_1', ..., x_r')` with `x_j' = sum_k matrix[k][j] x_k`.
    pub fn substitute(&self, f: &Fp, matrix: &[Vec<i64>]) -> GradedPoly {
        let n = self.nvars;
        let images: Vec<GradedPoly> = (0..n)
            .map(|j| {
                let mut p = GradedPoly::zero(n);
                for k in 0..n {
                    let c = f.from_i64(matrix[k][j]);
                    if c != 0 {
                        p = p.add(f, &GradedPoly::variable(n, k).scale(f, c));
                    }
                }
                p
            })
            .collect();
        let mut out = GradedPoly::zero(n);
        for (m, &c) in &self.terms {
            let mut term = GradedPoly::monomial(vec![0; n]).scale(f, c);
            for (j, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(f, &images[j]);
                }
            }
            out = out.add(f, &term);
        }
        out
    }
}

/// Monomials of degree `d` in `n` variables, in decreasing lexicographic order.
pub fn monomials(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, prefix: &mut Monomial, out: &mut Vec<Monomial>) {
        if prefix.len() == n - 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::new(), &mut out);
    } else if d == 0 {
        out.push(Vec::new());
    }
    out
}

struct DegreeSpace {
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl DegreeSpace {
    fn new(n: usize, d: u32) -> Self {
        let basis = monomials(n, d);
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        DegreeSpace { basis, index }
    }

    fn vector(&self, p: &GradedPoly) -> Vec<u32> {
        let mut v = vec![0u32; self.basis.len()];
        for (m, &c) in &p.terms {
            v[self.index[m]] = c;
        }
        v
    }

    fn poly(&self, n: usize, v: &[u32]) -> GradedPoly {
        let terms = v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (self.basis[i].clone(), c)).collect();
        GradedPoly { nvars: n, terms }
    }
}

fn require_p_above_h(rs: &RootSystem, p: u64) -> Result<Fp> {
    if (p as i64) <= rs.coxeter_number {
        return Err(Error::Hypothesis(format!("invariant theory mod p needs p > h = {}", rs.coxeter_number)));
    }
    Fp::new(p as u32)
}

/// Homogeneous generators of `(Sym t^vee)^W` of degrees `m_i + 1`, chosen
/// degree by degree as the reduced-echelon invariants independent of products
/// of earlier generators.
pub fn fundamental_invariants(rs: &RootSystem, p: u64) -> Result<Vec<GradedPoly>> {
    let f = require_p_above_h(rs, p)?;
    let r = rs.rank();
    let reflections: Vec<Vec<Vec<i64>>> = (0..r).map(|i| rs.simple_reflection(i)).collect();
    let expected: Vec<u32> = rs.exponents.iter().map(|&m| m as u32 + 1).collect();
    let mut gens: Vec<GradedPoly> = Vec::new();
    for d in 1..=*expected.last().unwrap() {
        let space = DegreeSpace::new(r, d);
        // invariants: kernel of the stacked maps s_i - 1
        let mut triplets = Vec::new();
        for (col, m) in space.basis.iter().enumerate() {
            let mono = GradedPoly::monomial(m.clone());
            for (i, s) in reflections.iter().enumerate() {
                let diff = mono.substitute(&f, s).add(&f, &mono.scale(&f, f.neg(1)));
                for (row, c) in space.vector(&diff).into_iter().enumerate() {
                    if c != 0 {
                        triplets.push((i * space.basis.len() + row, col, c));
                    }
                }
            }
        }
        let map = SparseMat::from_triplets(&f, r * space.basis.len(), space.basis.len(), triplets);
        let mut invariants = Echelon::new(f, space.basis.len());
        for v in crate::linfp::kernel_basis(&f, &map) {
            invariants.insert(v);
        }
        let mut span = Echelon::new(f, space.basis.len());
        for prod in products_of_degree(&f, &gens, d, r) {
            span.insert(space.vector(&prod));
        }
        let mut found = 0;
        for row in invariants.rows() {
            if span.insert(row.clone()) {
                gens.push(space.poly(r, row));
                found += 1;
            }
        }
        let want = expected.iter().filter(|&&e| e == d).count();
        if found != want {
            return Err(Error::InvariantSearch(format!(
                "found {found} new invariants in degree {d}, expected {want}"
            )));
        }
    }
    Ok(gens)
}

/// Products of the given generators (with repetition) of total degree `d`.
fn products_of_degree(f: &Fp, gens: &[GradedPoly], d: u32, nvars: usize) -> Vec<GradedPoly> {
    fn rec(f: &Fp, gens: &[GradedPoly], start: usize, d: u32, acc: GradedPoly, out: &mut Vec<GradedPoly>) {
        if d == 0 {
            out.push(acc);
            return;
        }
        for i in start..gens.len() {
            let g = gens[i].degree().unwrap();
            if g <= d {
                rec(f, gens, i, d - g, acc.mul(f, &gens[i]), out);
            }
        }
    }
    let mut out = Vec::new();
    if d > 0 {
        rec(f, gens, 0, d, GradedPoly::monomial(vec![0; nvars]), &mut out);
    }
    out
}

/// `F_p[x_1..x_r] / (F_1..F_r)` with monomial bases per degree.
#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    pub field: Fp,
    pub nvars: usize,
    pub generators: Vec<GradedPoly>,
    /// Per degree: reduced echelon form of the ideal, and the quotient basis.
    ideal: Vec<Echelon<Fp>>,
    spaces: Vec<DegreeSpace>,
    pub bases: Vec<Vec<Monomial>>,
}

impl std::fmt::Debug for DegreeSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DegreeSpace({} monomials)", self.basis.len())
    }
}

impl Clone for DegreeSpace {
    fn clone(&self) -> Self {
        DegreeSpace { basis: self.basis.clone(), index: self.index.clone() }
    }
}

impl QuotientAlgebra {
    /// Computes the quotient degree by degree up to `max_degree`.
    pub fn new(field: Fp, nvars: usize, generators: Vec<GradedPoly>, max_degree: u32) -> Result<Self> {
        if generators.iter().any(|g| g.degree().is_none() || g.nvars != nvars) {
            return Err(Error::InvalidInput("ideal generators must be nonzero homogeneous polynomials".into()));
        }
        let mut ideal = Vec::new();
        let mut spaces = Vec::new();
        let mut bases = Vec::new();
        for d in 0..=max_degree {
            let space = DegreeSpace::new(nvars, d);
            let mut ech = Echelon::new(field, space.basis.len());
            for g in &generators {
                let gd = g.degree().unwrap();
                if gd <= d {
                    for m in monomials(nvars, d - gd) {
                        ech.insert(space.vector(&g.mul(&field, &GradedPoly::monomial(m))));
                    }
                }
            }
            let basis = (0..space.basis.len()).filter(|&c| !ech.is_pivot(c)).map(|c| space.basis[c].clone()).collect();
            bases.push(basis);
            ideal.push(ech);
            spaces.push(space);
        }
        Ok(QuotientAlgebra { field, nvars, generators, ideal, spaces, bases })
    }

    pub fn dims(&self) -> Vec<u64> {
        let mut d: Vec<u64> = self.bases.iter().map(|b| b.len() as u64).collect();
        while d.len() > 1 && d.last() == Some(&0) {
            d.pop();
        }
        d
    }

    pub fn total_dim(&self) -> u64 {
        self.dims().iter().sum()
    }

    /// Quotient coordinates of a homogeneous polynomial of degree `d`.
    pub fn normal_form(&self, p: &GradedPoly, d: u32) -> Vec<u32> {
        let d = d as usize;
        if d >= self.spaces.len() {
            return Vec::new();
        }
        let mut v = self.spaces[d].vector(p);
        self.ideal[d].reduce(&mut v);
        (0..v.len()).filter(|&c| !self.ideal[d].is_pivot(c)).map(|c| v[c]).collect()
    }
}

/// `Sym t^vee / (fundamental invariants)`, checked to have dimension `|W|`,
/// the Weyl length polynomial as Poincaré polynomial, and a regular sequence
/// of defining invariants.
pub fn coinvariant_algebra(rs: &RootSystem, p: u64) -> Result<QuotientAlgebra> {
    let f = require_p_above_h(rs, p)?;
    let gens = fundamental_invariants(rs, p)?;
    let top = rs.num_positive() as u32 + 1;
    let q = QuotientAlgebra::new(f, rs.rank(), gens.clone(), top)?;
    let expected = rs.length_polynomial();
    if q.dims() != expected {
        return Err(Error::NotRegular(format!("quotient dims {:?}, expected {:?}", q.dims(), expected)));
    }
    let k = KoszulComplex::new(f, rs.rank(), gens, top + rs.exponents.iter().sum::<i64>() as u32)?;
    let homology = koszul_homology(&k);
    if let Some((&(internal, ext), &dim)) = homology.iter().find(|(&(_, e), &d)| e > 0 && d > 0) {
        return Err(Error::NotRegular(format!(
            "Koszul homology of dimension {dim} in internal degree {internal}, exterior degree {ext}"
        )));
    }
    Ok(q)
}

/// `A (x) wedge(e_1..e_r)` with `d e_i = F_i`, for `A` a polynomial ring.
#[derive(Clone, Debug)]
pub struct KoszulComplex {
    pub field: Fp,
    pub nvars: usize,
    pub sequence: Vec<GradedPoly>,
    /// Internal degrees `0..=max_internal` are computed.
    pub max_internal: u32,
}

impl KoszulComplex {
    pub fn new(field: Fp, nvars: usize, sequence: Vec<GradedPoly>, max_internal: u32) -> Result<Self> {
        if sequence.len() > 16 || sequence.iter().any(|g| g.degree().is_none()) {
            return Err(Error::InvalidInput("Koszul sequence must be at most 16 homogeneous polynomials".into()));
        }
        Ok(KoszulComplex { field, nvars, sequence, max_internal })
    }

    fn basis(&self, internal: u32, ext: usize) -> Vec<(u32, Monomial)> {
        let mut out = Vec::new();
        for s in 0u32..1 << self.sequence.len() {
            if s.count_ones() as usize != ext {
                continue;
            }
            let shift: u32 = bits(s).map(|i| self.sequence[i].degree().unwrap()).sum();
            if shift <= internal {
                for m in monomials(self.nvars, internal - shift) {
                    out.push((s, m));
                }
            }
        }
        out
    }

    /// `d: K_{internal, ext} -> K_{internal, ext - 1}`.
    fn differential(&self, internal: u32, ext: usize) -> SparseMat<u32> {
        let f = &self.field;
        let src = self.basis(internal, ext);
        let tgt = self.basis(internal, ext - 1);
        let index: HashMap<&(u32, Monomial), usize> = tgt.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut triplets = Vec::new();
        for (col, (s, m)) in src.iter().enumerate() {
            for (pos, i) in bits(*s).enumerate() {
                let rest = s & !(1 << i);
                let prod = self.sequence[i].mul(f, &GradedPoly::monomial(m.clone()));
                for (mono, &c) in &prod.terms {
                    let c = if pos % 2 == 1 { f.neg(c) } else { c };
                    triplets.push((index[&(rest, mono.clone())], col, c));
                }
            }
        }
        SparseMat::from_triplets(f, tgt.len(), src.len(), triplets)
    }
}

fn bits(s: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&k| s & (1 << k) != 0)
}

/// Homology dimensions by `(internal degree, exterior degree)`, nonzero entries only.
pub fn koszul_homology(k: &KoszulComplex) -> BTreeMap<(u32, usize), u64> {
    let f = &k.field;
    let r = k.sequence.len();
    let mut out = BTreeMap::new();
    for internal in 0..=k.max_internal {
        let ranks: Vec<usize> = (0..=r + 1)
            .map(|e| if e == 0 || e > r { 0 } else { rank(f, &k.differential(internal, e)) })
            .collect();
        for e in 0..=r {
            let dim = k.basis(internal, e).len() - ranks[e] - ranks[e + 1];
            if dim > 0 {
                out.insert((internal, e), dim as u64);
            }
        }
    }
    out
}

/// Homology of `A(2) (x) wedge(xi_1..xi_r)`, `A` the coinvariant algebra with
/// degrees doubled, `xi_i` of degree 1 and `d xi_i = x_i`.
pub fn e1_dga_homology(rs: &RootSystem, p: u64) -> Result<CohomologyTable> {
    let q = coinvariant_algebra(rs, p)?;
    let f = q.field;
    let r = rs.rank();
    let top_poly = q.dims().len() - 1;
    // basis (poly degree d, quotient index, xi subset), graded by 2d + |S|
    let total_top = 2 * top_poly + r;
    let cells = |t: usize| -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for s in 0u32..1 << r {
            let k = s.count_ones() as usize;
            if k <= t && (t - k).is_multiple_of(2) && (t - k) / 2 <= top_poly {
                let d = (t - k) / 2;
                for i in 0..q.bases[d].len() {
                    out.push((d, i, s));
                }
            }
        }
        out
    };
    let differential = |t: usize| -> SparseMat<u32> {
        let src = cells(t);
        let tgt = cells(t + 1);
        let index: HashMap<(usize, usize, u32), usize> = tgt.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut triplets = Vec::new();
        for (col, &(d, i, s)) in src.iter().enumerate() {
            let b = GradedPoly::monomial(q.bases[d][i].clone());
            for (pos, v) in bits(s).enumerate() {
                let rest = s & !(1 << v);
                let prod = b.mul(&f, &GradedPoly::variable(r, v));
                for (j, c) in q.normal_form(&prod, d as u32 + 1).into_iter().enumerate() {
                    if c != 0 {
                        let c = if pos % 2 == 1 { f.neg(c) } else { c };
                        triplets.push((index[&(d + 1, j, rest)], col, c));
                    }
                }
            }
        }
        SparseMat::from_triplets(&f, tgt.len(), src.len(), triplets)
    };
    let ranks: Vec<usize> = (0..=total_top).map(|t| rank(&f, &differential(t))).collect();
    let entries = (0..=total_top).map(|t| {
        let dim = cells(t).len() - ranks[t] - if t > 0 { ranks[t - 1] } else { 0 };
        (t, Weight::zero(r), dim as u64)
    });
    Ok(CohomologyTable::from_entries(rs.cartan_type.to_string(), p, 1, "zero".into(), entries))
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossReport {
    /// Whether `p > h + 1`; without it no pass/fail claim is made.
    pub hypothesis_ok: bool,
    pub ce: Vec<u64>,
    pub koszul: Option<Vec<u64>>,
    pub predicted: Vec<u64>,
    pub agree: Option<bool>,
    pub note: Option<String>,
}

/// Compares weight-zero `H^*(gbar)` with the homology of the `E_1` model.
pub fn cross_validate(rs: &RootSystem, p: u64) -> Result<CrossReport> {
    let hypothesis_ok = (p as i64) > rs.coxeter_number + 1;
    let ch = build_chevalley(rs, false)?;
    let ce = gbar_table(&ch, p, &WeightFilter::Zero)?.poincare;
    let (koszul, note) = match e1_dga_homology(rs, p) {
        Ok(t) => (Some(t.poincare), None),
        Err(e @ (Error::Hypothesis(_) | Error::InvariantSearch(_) | Error::NotRegular(_))) if !hypothesis_ok => {
            (None, Some(e.to_string()))
        }
        Err(e) => return Err(e),
    };
    let agree = koszul.as_ref().map(|k| k == &ce);
    Ok(CrossReport { hypothesis_ok, ce, koszul, predicted: predicted_poincare(&rs.exponents, 1), agree, note })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::weyl_group;

    fn rs(name: &str) -> RootSystem {
        RootSystem::from_name(name).unwrap()
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 3), vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
        assert_eq!(monomials(3, 2).len(), 6);
    }

    #[test]
    fn invariant_degrees() {
        let a1 = fundamental_invariants(&rs("A1"), 5).unwrap();
        assert_eq!(a1, vec![GradedPoly::monomial(vec![2])]);
        let degs = |name: &str, p| -> Vec<u32> {
            fundamental_invariants(&rs(name), p).unwrap().iter().map(|g| g.degree().unwrap()).collect()
        };
        assert_eq!(degs("A2", 5), vec![2, 3]);
        assert_eq!(degs("B2", 7), vec![2, 4]);
        assert_eq!(degs("G2", 11), vec![2, 6]);
        assert_eq!(degs("A3", 7), vec![2, 3, 4]);
    }

    #[test]
    fn invariants_are_fixed_by_every_weyl_element() {
        for (name, p) in [("A2", 5), ("B2", 7), ("G2", 11)] {
            let r = rs(name);
            let f = Fp::new(p).unwrap();
            let gens = fundamental_invariants(&r, p as u64).unwrap();
            for w in weyl_group(&r).unwrap() {
                for g in &gens {
                    assert_eq!(&g.substitute(&f, &w.matrix), g, "{name}");
                }
            }
        }
    }

    #[test]
    fn small_prime_rejected() {
        assert!(matches!(fundamental_invariants(&rs("A2"), 3), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn coinvariant_dims() {
        assert_eq!(coinvariant_algebra(&rs("A1"), 5).unwrap().dims(), vec![1, 1]);
        let a2 = coinvariant_algebra(&rs("A2"), 5).unwrap();
        assert_eq!((a2.total_dim(), a2.dims()), (6, vec![1, 2, 2, 1]));
        let g2 = coinvariant_algebra(&rs("G2"), 11).unwrap();
        assert_eq!((g2.total_dim(), g2.dims()), (12, vec![1, 2, 2, 2, 2, 2, 1]));
        assert_eq!(coinvariant_algebra(&rs("B2"), 7).unwrap().total_dim(), 8);
    }

    #[test]
    fn koszul_examples() {
        let f = Fp::new(5).unwrap();
        let x = GradedPoly::variable(1, 0);
        let k = KoszulComplex::new(f, 1, vec![x.clone()], 4).unwrap();
        assert_eq!(koszul_homology(&k), BTreeMap::from([((0, 0), 1)]));

        let x2 = GradedPoly::monomial(vec![2, 0]);
        let y3 = GradedPoly::monomial(vec![0, 3]);
        let k = KoszulComplex::new(f, 2, vec![x2, y3], 8).unwrap();
        let h = koszul_homology(&k);
        assert!(h.keys().all(|&(_, e)| e == 0));
        assert_eq!(h.values().sum::<u64>(), 6);

        let k = KoszulComplex::new(f, 1, vec![x.clone(), x], 4).unwrap();
        assert!(koszul_homology(&k).keys().any(|&(_, e)| e == 1));
    }

    #[test]
    fn e1_model_homology() {
        assert_eq!(e1_dga_homology(&rs("A1"), 5).unwrap().poincare, vec![1, 0, 0, 1]);
        assert_eq!(e1_dga_homology(&rs("A2"), 5).unwrap().poincare, predicted_poincare(&[1, 2], 1));
        assert_eq!(e1_dga_homology(&rs("B2"), 7).unwrap().poincare, predicted_poincare(&[1, 3], 1));
    }

    #[test]
    fn cross_validation_and_guard() {
        let ok = cross_validate(&rs("A1"), 5).unwrap();
        assert_eq!(ok.agree, Some(true));
        assert!(cross_validate(&rs("A2"), 5).unwrap().agree.unwrap());
        let guarded = cross_validate(&rs("A2"), 3).unwrap();
        assert!(!guarded.hypothesis_ok);
        assert!(guarded.note.is_some());
    }
}
