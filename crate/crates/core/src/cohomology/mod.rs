//! Chevalley–Eilenberg cohomology over `F_p`, split into torus-weight blocks.
//!
//! A cochain `e^S (x) v` is the functional sending `x_S` (the wedge of the
//! basis vectors indexed by the bitmask `S`, in increasing order) to `v`. Its
//! weight is `wt(v) - sum_{s in S} wt(x_s)`. The differential is
//!
//! ```text
//! (d phi)(x_0..x_q) = sum_{i<j} (-1)^{i+j} phi([x_i, x_j], x_0..^i..^j..x_q)
//!                   + sum_i (-1)^i x_i . phi(x_0..^i..x_q)
//! ```
//!
//! and has weight zero, so the complex splits into blocks indexed by weight
//! (and by an optional module grade preserved by the action).

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::chevalley::StructLie;
use crate::error::{Error, Result};
use crate::linfp::{kernel_basis, rank, Echelon, Field, Fp, SparseMat};
use crate::par::{self, Mode};
use crate::rootsys::Weight;

mod checks;

pub use checks::{
    gbar_table, hodge_dims_check, kostant_check, predicted_poincare, semidirect_degeneration_check, HodgeReport,
    KostantReport, SemidirectReport,
};

/// Largest Lie algebra dimension accepted by [`ce_complex`].
pub const MAX_LIE_DIM: usize = 16;

/// A finite-dimensional representation over `F_p`.
#[derive(Clone, Debug)]
pub struct CEModule {
    pub field: Fp,
    pub weights: Vec<Weight>,
    /// Grading preserved by the action (exterior degree for exterior powers).
    pub grades: Vec<i64>,
    pub names: Vec<String>,
    /// `action[a][v]` is `x_a . v_v` as sparse `(index, coefficient)` pairs.
    action: Vec<Vec<Vec<(usize, u32)>>>,
}

impl CEModule {
    /// Validates the representation and weight axioms exhaustively.
    pub fn new(
        lie: &StructLie,
        field: Fp,
        names: Vec<String>,
        weights: Vec<Weight>,
        grades: Vec<i64>,
        action: Vec<Vec<Vec<(usize, u32)>>>,
    ) -> Result<Self> {
        let m = CEModule::new_unchecked(field, names, weights, grades, action);
        if m.action.len() != lie.dim() || m.action.iter().any(|a| a.len() != m.dim()) {
            return Err(Error::DimensionMismatch("action table has the wrong shape".into()));
        }
        m.check_representation(lie)?;
        Ok(m)
    }

    fn new_unchecked(
        field: Fp,
        names: Vec<String>,
        weights: Vec<Weight>,
        grades: Vec<i64>,
        action: Vec<Vec<Vec<(usize, u32)>>>,
    ) -> Self {
        let action = action
            .into_iter()
            .map(|rows| rows.into_iter().map(|v| normalize(&field, v)).collect())
            .collect();
        CEModule { field, weights, grades, names, action }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn act(&self, a: usize, v: usize) -> &[(usize, u32)] {
        &self.action[a][v]
    }

    /// The one-dimensional module of weight `lambda` with trivial action.
    pub fn character(lie: &StructLie, p: u64, lambda: Weight) -> Result<Self> {
        let field = Fp::new(p as u32)?;
        CEModule::new(lie, field, vec!["1".into()], vec![lambda], vec![0], vec![vec![Vec::new()]; lie.dim()])
    }

    pub fn trivial(lie: &StructLie, p: u64) -> Result<Self> {
        let r = lie.weights.first().map_or(0, |w| w.0.len());
        CEModule::character(lie, p, Weight::zero(r))
    }

    /// `(g/S)^vee` for a subalgebra `h` of `g` stabilising the span `S`:
    /// `(x . phi)(v) = -phi([x, v] mod S)`.
    ///
    /// `acting[a]` is the index in `g` of the `a`-th basis vector of `h`; the
    /// module basis is dual to the `g` basis vectors outside `sub`.
    pub fn coadjoint_quotient(g: &StructLie, h: &StructLie, acting: &[usize], sub: &[usize], p: u64) -> Result<Self> {
        let field = Fp::new(p as u32)?;
        let quotient: Vec<usize> = (0..g.dim()).filter(|i| !sub.contains(i)).collect();
        let mut pos = vec![None; g.dim()];
        for (k, &q) in quotient.iter().enumerate() {
            pos[q] = Some(k);
        }
        let action = acting
            .iter()
            .map(|&x| {
                let mut rows = vec![Vec::new(); quotient.len()];
                // x . phi_u has phi_v-coefficient -[x, v]_u
                for (vk, &v) in quotient.iter().enumerate() {
                    for &(u, c) in g.basis_bracket(x, v) {
                        if let Some(uk) = pos[u] {
                            rows[uk].push((vk, field.from_i64(-c)));
                        }
                    }
                }
                rows
            })
            .collect();
        let names = quotient.iter().map(|&q| format!("{}*", g.names[q])).collect();
        let weights = quotient.iter().map(|&q| -&g.weights[q]).collect();
        let grades = vec![0; quotient.len()];
        CEModule::new(h, field, names, weights, grades, action)
    }

    /// The same `h`-action with every `x_a` acting by zero.
    pub fn with_zero_action(&self) -> Self {
        let mut out = self.clone();
        for rows in out.action.iter_mut() {
            for v in rows.iter_mut() {
                v.clear();
            }
        }
        out
    }

    /// `wedge^j M` for each `j` in `degrees`, with grade `j`, acting by derivations.
    pub fn exterior_powers(&self, lie: &StructLie, degrees: impl IntoIterator<Item = usize>) -> Result<Self> {
        let m = self.dim();
        if m > 20 {
            return Err(Error::EnumerationLimit(format!("exterior algebra on {m} generators")));
        }
        let f = self.field;
        let mut masks: Vec<u32> = Vec::new();
        for j in degrees {
            let mut js: Vec<u32> = (0u32..1 << m).filter(|s| s.count_ones() as usize == j).collect();
            js.sort_unstable();
            masks.extend(js);
        }
        let index: HashMap<u32, usize> = masks.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let action = (0..self.action.len())
            .map(|a| {
                masks
                    .iter()
                    .map(|&s| {
                        let mut out = Vec::new();
                        for k in bits(s) {
                            let rest = s & !(1 << k);
                            let sign_out = pos_sign(s, k);
                            for &(w, c) in &self.action[a][k] {
                                if rest & (1 << w) != 0 {
                                    continue;
                                }
                                let t = rest | (1 << w);
                                let c = if sign_out * pos_sign(t, w) < 0 { f.neg(c) } else { c };
                                out.push((index[&t], c));
                            }
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        let r = self.weights.first().map_or(0, |w| w.0.len());
        let weights = masks
            .iter()
            .map(|&s| bits(s).fold(Weight::zero(r), |acc, k| &acc + &self.weights[k]))
            .collect();
        let grades = masks.iter().map(|s| s.count_ones() as i64).collect();
        let names = masks
            .iter()
            .map(|&s| {
                let parts: Vec<&str> = bits(s).map(|k| self.names[k].as_str()).collect();
                if parts.is_empty() {
                    "1".to_string()
                } else {
                    parts.join("^")
                }
            })
            .collect();
        CEModule::new(lie, f, names, weights, grades, action)
    }

    fn apply(&self, a: usize, v: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let mut out = vec![0u32; self.dim()];
        for (k, &c) in v.iter().enumerate().filter(|(_, &c)| c != 0) {
            for &(w, d) in &self.action[a][k] {
                out[w] = f.add(out[w], f.mul(c, d));
            }
        }
        out
    }

    fn check_representation(&self, lie: &StructLie) -> Result<()> {
        let f = &self.field;
        for a in 0..lie.dim() {
            for v in 0..self.dim() {
                for &(w, _) in &self.action[a][v] {
                    if self.weights[w] != &lie.weights[a] + &self.weights[v] || self.grades[w] != self.grades[v] {
                        return Err(Error::NotARepresentation(format!(
                            "{} . {} leaves its weight space",
                            lie.names[a], self.names[v]
                        )));
                    }
                }
            }
        }
        for v in 0..self.dim() {
            let mut e = vec![0u32; self.dim()];
            e[v] = 1;
            let images: Vec<Vec<u32>> = (0..lie.dim()).map(|b| self.apply(b, &e)).collect();
            for a in 0..lie.dim() {
                for b in a + 1..lie.dim() {
                    let ab = self.apply(a, &images[b]);
                    let ba = self.apply(b, &images[a]);
                    let mut lhs = vec![0u32; self.dim()];
                    for &(c, k) in lie.basis_bracket(a, b) {
                        let kc = f.from_i64(k);
                        for (x, y) in lhs.iter_mut().zip(&images[c]) {
                            *x = f.add(*x, f.mul(kc, *y));
                        }
                    }
                    if (0..self.dim()).any(|i| lhs[i] != f.sub(ab[i], ba[i])) {
                        return Err(Error::NotARepresentation(format!(
                            "[{}, {}] acts incorrectly on {}",
                            lie.names[a], lie.names[b], self.names[v]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn normalize(f: &Fp, mut v: Vec<(usize, u32)>) -> Vec<(usize, u32)> {
    v.sort_unstable_by_key(|&(k, _)| k);
    let mut out: Vec<(usize, u32)> = Vec::with_capacity(v.len());
    for (k, c) in v {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 = f.add(last.1, c),
            _ => out.push((k, c)),
        }
    }
    out.retain(|&(_, c)| c != 0);
    out
}

fn bits(s: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&k| s & (1 << k) != 0)
}

/// `(-1)^{position of bit k among the set bits of s}`.
fn pos_sign(s: u32, k: usize) -> i32 {
    if (s & ((1u32 << k) - 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign of the shuffle `e^S ^ e^T = sign e^{S u T}` for disjoint `S`, `T`.
pub fn shuffle_sign(s: u32, t: u32) -> i32 {
    let mut inversions = 0;
    for k in bits(t) {
        inversions += (s >> (k + 1)).count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BlockKey {
    pub weight: Weight,
    pub grade: i64,
}

/// One weight block: cochain bases per degree and the differentials between them.
#[derive(Clone, Debug)]
pub struct Block {
    pub key: BlockKey,
    /// `cochains[q]` lists `(S, v)` with `|S| = q`.
    pub cochains: Vec<Vec<(u32, usize)>>,
    /// `differentials[q]: C^q -> C^{q+1}`.
    pub differentials: Vec<SparseMat<u32>>,
}

impl Block {
    pub fn dims(&self) -> Vec<usize> {
        self.cochains.iter().map(Vec::len).collect()
    }

    /// First degree `q` with `d^{q+1} d^q != 0`.
    pub fn d_squared_violation(&self, f: &Fp) -> Option<usize> {
        (0..self.differentials.len().saturating_sub(1)).find(|&q| {
            let dd = self.differentials[q + 1].mul(f, &self.differentials[q]).expect("composable");
            !dd.is_zero()
        })
    }

    /// Cohomology dimensions by degree.
    pub fn cohomology(&self, f: &Fp) -> Vec<u64> {
        let ranks: Vec<usize> = self.differentials.iter().map(|d| rank(f, d)).collect();
        (0..self.cochains.len())
            .map(|q| {
                let out = ranks.get(q).copied().unwrap_or(0);
                let inc = if q > 0 { ranks[q - 1] } else { 0 };
                (self.cochains[q].len() - out - inc) as u64
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct WeightBlockComplex {
    pub field: Fp,
    pub lie_dim: usize,
    pub module_dim: usize,
    pub blocks: Vec<Block>,
}

/// Which weight blocks to build.
#[derive(Clone, Debug)]
pub enum WeightFilter {
    All,
    Zero,
    Explicit(Vec<Weight>),
}

impl WeightFilter {
    fn accepts(&self, w: &Weight) -> bool {
        match self {
            WeightFilter::All => true,
            WeightFilter::Zero => w.is_zero(),
            WeightFilter::Explicit(ws) => ws.contains(w),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            WeightFilter::All => "all",
            WeightFilter::Zero => "zero",
            WeightFilter::Explicit(_) => "explicit",
        }
    }
}

/// The Chevalley–Eilenberg complex of `lie` with coefficients in `module`,
/// restricted to the blocks accepted by `filter`.
pub fn ce_complex(lie: &StructLie, module: &CEModule, filter: &WeightFilter) -> Result<WeightBlockComplex> {
    ce_complex_with(lie, module, filter, Mode::available())
}

pub fn ce_complex_with(lie: &StructLie, module: &CEModule, filter: &WeightFilter, mode: Mode) -> Result<WeightBlockComplex> {
    let n = lie.dim();
    if n > MAX_LIE_DIM {
        return Err(Error::EnumerationLimit(format!("Lie algebra of dimension {n} exceeds {MAX_LIE_DIM}")));
    }
    if module.action.len() != n {
        return Err(Error::DimensionMismatch("module is not over this Lie algebra".into()));
    }
    let f = module.field;
    let r = module.weights.first().or(lie.weights.first()).map_or(0, |w| w.0.len());

    // weight of x_S for every mask
    let mut mask_weight = vec![Weight::zero(r); 1 << n];
    for s in 1usize..1 << n {
        let low = s.trailing_zeros() as usize;
        mask_weight[s] = &mask_weight[s & (s - 1)] + &lie.weights[low];
    }

    let mut grouped: BTreeMap<BlockKey, Vec<Vec<(u32, usize)>>> = BTreeMap::new();
    for s in 0usize..1 << n {
        for v in 0..module.dim() {
            let weight = &module.weights[v] - &mask_weight[s];
            if !filter.accepts(&weight) {
                continue;
            }
            let key = BlockKey { weight, grade: module.grades[v] };
            let entry = grouped.entry(key).or_insert_with(|| vec![Vec::new(); n + 1]);
            entry[s.count_ones() as usize].push((s as u32, v));
        }
    }

    // (a, b, coeff) with [x_a, x_b] having coeff x_c, a < b, per c
    let mut by_target: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); n];
    for (a, b, c, k) in lie.structure_constants() {
        by_target[c].push((a, b, k));
    }

    let keyed: Vec<(BlockKey, Vec<Vec<(u32, usize)>>)> = grouped.into_iter().collect();
    let blocks = par::map(mode, &keyed, |(key, cochains)| {
        let mut cochains = cochains.clone();
        for c in cochains.iter_mut() {
            c.sort_unstable();
        }
        let differentials = (0..n)
            .map(|q| differential(&f, lie, module, &by_target, &cochains[q], &cochains[q + 1]))
            .collect();
        Block { key: key.clone(), cochains, differentials }
    });
    Ok(WeightBlockComplex { field: f, lie_dim: n, module_dim: module.dim(), blocks })
}

fn differential(
    f: &Fp,
    lie: &StructLie,
    module: &CEModule,
    by_target: &[Vec<(usize, usize, i64)>],
    source: &[(u32, usize)],
    target: &[(u32, usize)],
) -> SparseMat<u32> {
    let index: HashMap<(u32, usize), usize> = target.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut triplets = Vec::new();
    let n = lie.dim();
    for (col, &(s, v)) in source.iter().enumerate() {
        // x_a . phi(...)
        for a in (0..n).filter(|&a| s & (1 << a) == 0) {
            let t = s | (1 << a);
            let sign = pos_sign(t, a);
            for &(w, c) in module.act(a, v) {
                let c = if sign < 0 { f.neg(c) } else { c };
                triplets.push((index[&(t, w)], col, c));
            }
        }
        // phi([x_a, x_b], ...)
        for c in bits(s) {
            let rest = s & !(1 << c);
            let sign_c = pos_sign(s, c);
            for &(a, b, k) in &by_target[c] {
                if rest & ((1 << a) | (1 << b)) != 0 {
                    continue;
                }
                let t = rest | (1 << a) | (1 << b);
                let sign = sign_c * pos_sign(t, a) * pos_sign(t, b);
                let row = index[&(t, v)];
                triplets.push((row, col, f.from_i64(sign as i64 * k)));
            }
        }
    }
    SparseMat::from_triplets(f, target.len(), source.len(), triplets)
}

impl WeightBlockComplex {
    pub fn block(&self, weight: &Weight, grade: i64) -> Option<&Block> {
        self.blocks.iter().find(|b| &b.key.weight == weight && b.key.grade == grade)
    }

    /// First block (and degree) with `d^2 != 0`.
    pub fn d_squared_violation(&self) -> Option<(BlockKey, usize)> {
        self.blocks
            .iter()
            .find_map(|b| b.d_squared_violation(&self.field).map(|q| (b.key.clone(), q)))
    }

    /// Total cochain dimension per degree across blocks.
    pub fn cochain_dims(&self) -> Vec<usize> {
        let mut out = vec![0usize; self.lie_dim + 1];
        for b in &self.blocks {
            for (q, c) in b.cochains.iter().enumerate() {
                out[q] += c.len();
            }
        }
        out
    }

    pub fn block_cohomology(&self, mode: Mode) -> Vec<(BlockKey, Vec<u64>)> {
        let f = self.field;
        par::map(mode, &self.blocks, |b| (b.key.clone(), b.cohomology(&f)))
    }
}

/// Cohomology dimensions by degree and weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    #[serde(rename = "type")]
    pub label: String,
    pub p: u64,
    pub f: u32,
    pub filter: String,
    /// `(degree, weight, dim)` with `dim > 0`, sorted.
    pub dims: Vec<(usize, Vec<i64>, u64)>,
    pub poincare: Vec<u64>,
}

impl CohomologyTable {
    pub fn from_entries(label: String, p: u64, f: u32, filter: String, entries: impl IntoIterator<Item = (usize, Weight, u64)>) -> Self {
        let mut acc: BTreeMap<(usize, Weight), u64> = BTreeMap::new();
        for (q, w, d) in entries {
            if d > 0 {
                *acc.entry((q, w)).or_default() += d;
            }
        }
        let top = acc.keys().map(|k| k.0).max().unwrap_or(0);
        let mut poincare = vec![0u64; top + 1];
        for ((q, _), d) in &acc {
            poincare[*q] += d;
        }
        let dims = acc.into_iter().map(|((q, w), d)| (q, w.0, d)).collect();
        CohomologyTable { label, p, f, filter, dims, poincare }
    }

    pub fn total(&self) -> u64 {
        self.poincare.iter().sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("table serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,weight_coords,dim\n");
        for (q, w, d) in &self.dims {
            let coords: Vec<String> = w.iter().map(i64::to_string).collect();
            out.push_str(&format!("{q},{},{d}\n", coords.join(" ")));
        }
        out
    }
}

/// Cohomology table of a complex, summing over module grades.
pub fn cohomology_dims(c: &WeightBlockComplex, filter: &WeightFilter, label: &str, p: u64) -> CohomologyTable {
    cohomology_dims_with(c, filter, label, p, Mode::available())
}

pub fn cohomology_dims_with(c: &WeightBlockComplex, filter: &WeightFilter, label: &str, p: u64, mode: Mode) -> CohomologyTable {
    let selected = WeightBlockComplex {
        field: c.field,
        lie_dim: c.lie_dim,
        module_dim: c.module_dim,
        blocks: c.blocks.iter().filter(|b| filter.accepts(&b.key.weight)).cloned().collect(),
    };
    let entries = selected
        .block_cohomology(mode)
        .into_iter()
        .flat_map(|(key, dims)| dims.into_iter().enumerate().map(move |(q, d)| (q, key.weight.clone(), d)));
    CohomologyTable::from_entries(label.to_string(), p, 1, filter.name().to_string(), entries)
}

/// Cochain representatives of ring generators of weight-zero cohomology.
#[derive(Clone, Debug, Serialize)]
pub struct RingCertificate {
    pub generator_degrees: Vec<usize>,
    /// Sparse representatives `(wedge mask, coefficient)`.
    pub generators: Vec<Vec<(u32, u32)>>,
    /// `dim H^q` spanned by products of distinct generators.
    pub degree_dims: Vec<u64>,
}

/// Certifies that the weight-zero cohomology with trivial coefficients is an
/// exterior algebra on odd-degree generators, by choosing generators degree by
/// degree and checking that products of distinct generators form a basis.
pub fn cup_structure(c: &WeightBlockComplex) -> Result<RingCertificate> {
    if c.module_dim != 1 {
        return Err(Error::InvalidInput("cup products need trivial coefficients".into()));
    }
    let block = c
        .blocks
        .iter()
        .find(|b| b.key.weight.is_zero())
        .ok_or_else(|| Error::InvalidInput("complex has no weight-zero block".into()))?;
    let f = c.field;
    let top = block.cochains.len() - 1;
    let index: Vec<HashMap<u32, usize>> = block
        .cochains
        .iter()
        .map(|cs| cs.iter().enumerate().map(|(i, &(s, _))| (s, i)).collect())
        .collect();
    let dims = block.cohomology(&f);

    let wedge = |x: &[u32], qx: usize, y: &[u32], qy: usize| -> Vec<u32> {
        let mut out = vec![0u32; block.cochains.get(qx + qy).map_or(0, Vec::len)];
        for (i, &a) in x.iter().enumerate().filter(|(_, &a)| a != 0) {
            let s = block.cochains[qx][i].0;
            for (j, &b) in y.iter().enumerate().filter(|(_, &b)| b != 0) {
                let t = block.cochains[qy][j].0;
                if s & t != 0 {
                    continue;
                }
                let k = index[qx + qy][&(s | t)];
                let v = f.mul(a, b);
                out[k] = if shuffle_sign(s, t) < 0 { f.sub(out[k], v) } else { f.add(out[k], v) };
            }
        }
        out
    };

    // products of distinct generators: (degree, vector)
    let mut monomials: Vec<(usize, Vec<u32>)> = vec![(0, vec![1])];
    let mut generators: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut degree_dims = vec![0u64; top + 1];
    degree_dims[0] = 1;
    for q in 1..=top {
        let mut span = Echelon::new(f, block.cochains[q].len());
        for col in block.differentials[q - 1].column_vectors() {
            let mut v = vec![0u32; block.cochains[q].len()];
            for (r, x) in col {
                v[r as usize] = x;
            }
            span.insert(v);
        }
        let boundaries = span.rank();
        for (deg, m) in monomials.iter().filter(|(d, _)| *d == q) {
            if !span.insert(m.clone()) {
                return Err(Error::NotExterior(format!("a product of generators of degree {deg} vanishes in cohomology")));
            }
        }
        let cocycles = kernel_basis(&f, &block.differentials.get(q).cloned().unwrap_or_else(|| SparseMat::zero(0, block.cochains[q].len())));
        let mut fresh = Vec::new();
        for z in cocycles {
            if span.insert(z.clone()) {
                if q % 2 == 0 {
                    return Err(Error::NotExterior(format!("indecomposable class in even degree {q}")));
                }
                fresh.push(z);
            }
        }
        degree_dims[q] = (span.rank() - boundaries) as u64;
        if degree_dims[q] != dims[q] {
            return Err(Error::NotExterior(format!("degree {q}: spanned {} of {}", degree_dims[q], dims[q])));
        }
        for z in fresh {
            let new: Vec<(usize, Vec<u32>)> = monomials
                .iter()
                .filter(|(d, _)| d + q <= top)
                .map(|(d, m)| (d + q, wedge(m, *d, &z, q)))
                .collect();
            // degree-q monomials were already placed; they still seed later products
            monomials.extend(new);
            generators.push((q, z));
        }
    }
    Ok(RingCertificate {
        generator_degrees: generators.iter().map(|(q, _)| *q).collect(),
        generators: generators
            .iter()
            .map(|(q, z)| {
                z.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (block.cochains[*q][i].0, c))
                    .collect()
            })
            .collect(),
        degree_dims,
    })
}

/// A full-rank sublattice `L Z^r` of the character lattice.
#[derive(Clone, Debug, Serialize)]
pub struct Lattice {
    /// Columns generate the lattice.
    pub matrix: Vec<Vec<i64>>,
    det: i128,
    adjugate: Vec<Vec<i128>>,
}

impl Lattice {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let r = matrix.len();
        if matrix.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch("lattice matrix is not square".into()));
        }
        let m: Vec<Vec<i128>> = matrix.iter().map(|row| row.iter().map(|&x| x as i128).collect()).collect();
        let det = determinant(&m);
        if det == 0 {
            return Err(Error::InvalidInput("lattice is not of full rank".into()));
        }
        // adj[i][j] = (-1)^{i+j} det(minor removing row j, column i)
        let adjugate = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let minor: Vec<Vec<i128>> = (0..r)
                            .filter(|&a| a != j)
                            .map(|a| (0..r).filter(|&b| b != i).map(|b| m[a][b]).collect())
                            .collect();
                        let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                        s * determinant(&minor)
                    })
                    .collect()
            })
            .collect();
        Ok(Lattice { matrix, det, adjugate })
    }

    /// `k X^*(T)`.
    pub fn scalar(r: usize, k: i64) -> Result<Self> {
        Lattice::new((0..r).map(|i| (0..r).map(|j| if i == j { k } else { 0 }).collect()).collect())
    }

    pub fn index(&self) -> u128 {
        self.det.unsigned_abs()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.adjugate
            .iter()
            .all(|row| row.iter().zip(&w.0).map(|(&a, &x)| a * x as i128).sum::<i128>() % self.det == 0)
    }
}

fn determinant(m: &[Vec<i128>]) -> i128 {
    // Bareiss fraction-free elimination
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// The `f`-fold tensor power of a single-factor table with weights of the
/// `i`-th factor multiplied by `p^i`, restricted to total weights in `lattice`.
pub fn kunneth_twist(table: &CohomologyTable, f: u32, lattice: &Lattice) -> Result<CohomologyTable> {
    if f == 0 {
        return Err(Error::InvalidInput("f must be positive".into()));
    }
    let r = lattice.matrix.len();
    if table.dims.iter().any(|(_, w, _)| w.len() != r) {
        return Err(Error::DimensionMismatch("table weights and lattice have different ranks".into()));
    }
    let mut partial: BTreeMap<(usize, Weight), u64> = BTreeMap::from([((0, Weight::zero(r)), 1)]);
    for i in 0..f {
        let scale = (table.p as i64).pow(i);
        let mut next: BTreeMap<(usize, Weight), u64> = BTreeMap::new();
        for ((q, w), d) in &partial {
            for (q2, w2, d2) in &table.dims {
                let shifted = &Weight(w2.clone()).scaled(scale) + w;
                *next.entry((q + q2, shifted)).or_default() += d * d2;
            }
        }
        partial = next;
    }
    let entries = partial.into_iter().filter(|((_, w), _)| lattice.contains(w)).map(|((q, w), d)| (q, w, d));
    let mut out = CohomologyTable::from_entries(table.label.clone(), table.p, f, "lattice".into(), entries);
    out.f = f;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::build_chevalley;
    use crate::gradedlie::build_gbar;
    use crate::rootsys::RootSystem;

    fn gbar(name: &str, p: u64) -> StructLie {
        let ch = build_chevalley(&RootSystem::from_name(name).unwrap(), false).unwrap();
        build_gbar(&ch, p).unwrap().lie
    }

    fn abelian(n: usize) -> StructLie {
        StructLie::from_upper_brackets((0..n).map(|i| format!("x{i}")).collect(), vec![Weight::zero(1); n], Vec::new())
            .unwrap()
    }

    /// Oracle: the CE complex built densely from the defining formula, with
    /// cochains as alternating functions on ordered tuples.
    fn dense_oracle_dims(lie: &StructLie, p: u64) -> Vec<u64> {
        let f = Fp::new(p as u32).unwrap();
        let n = lie.dim();
        let subsets = |q: usize| -> Vec<u32> { (0u32..1 << n).filter(|s| s.count_ones() as usize == q).collect() };
        let mut ranks = vec![0usize; n + 1];
        for q in 0..n {
            let src = subsets(q);
            let tgt = subsets(q + 1);
            let mut rows = Vec::new();
            for &t in &tgt {
                let xs: Vec<usize> = bits(t).collect();
                let mut row = vec![0u32; src.len()];
                for i in 0..xs.len() {
                    for j in i + 1..xs.len() {
                        for &(c, k) in lie.basis_bracket(xs[i], xs[j]) {
                            // phi(x_c, rest): sort into place
                            let rest: Vec<usize> = xs.iter().enumerate().filter(|&(m, _)| m != i && m != j).map(|(_, &x)| x).collect();
                            if rest.contains(&c) {
                                continue;
                            }
                            let mut tuple = vec![c];
                            tuple.extend(&rest);
                            let mut perm_sign = 1i64;
                            for a in 0..tuple.len() {
                                for b in a + 1..tuple.len() {
                                    if tuple[a] > tuple[b] {
                                        perm_sign = -perm_sign;
                                    }
                                }
                            }
                            let mask = tuple.iter().fold(0u32, |m, &x| m | 1 << x);
                            let col = src.iter().position(|&s| s == mask).unwrap();
                            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                            row[col] = f.add(row[col], f.from_i64(sign * perm_sign * k));
                        }
                    }
                }
                rows.push(row);
            }
            ranks[q] = crate::linfp::dense_rank(&f, rows, src.len());
        }
        (0..=n)
            .map(|q| {
                let c = subsets(q).len();
                (c - ranks[q] - if q > 0 { ranks[q - 1] } else { 0 }) as u64
            })
            .collect()
    }

    #[test]
    fn abelian_trivial() {
        let lie = abelian(2);
        let m = CEModule::trivial(&lie, 5).unwrap();
        let c = ce_complex(&lie, &m, &WeightFilter::All).unwrap();
        assert!(c.blocks.iter().all(|b| b.differentials.iter().all(SparseMat::is_zero)));
        assert_eq!(cohomology_dims(&c, &WeightFilter::All, "ab", 5).poincare, vec![1, 2, 1]);
    }

    #[test]
    fn heisenberg_gbar_a1() {
        let lie = gbar("A1", 5);
        let m = CEModule::trivial(&lie, 5).unwrap();
        let c = ce_complex(&lie, &m, &WeightFilter::All).unwrap();
        assert_eq!(c.d_squared_violation(), None);
        assert_eq!(cohomology_dims(&c, &WeightFilter::Zero, "A1", 5).poincare, vec![1, 0, 0, 1]);
        assert_eq!(cohomology_dims(&c, &WeightFilter::All, "A1", 5).poincare, vec![1, 2, 2, 1]);
        // the weight-zero block in degree 3 via the two-step complex
        let b = c.block(&Weight::zero(1), 0).unwrap();
        let f = Fp::new(5).unwrap();
        let d_out = SparseMat::zero(0, b.cochains[3].len());
        assert_eq!(crate::linfp::cohomology_dim(&f, &b.differentials[2], &d_out).unwrap(), 1);
    }

    #[test]
    fn one_dimensional_n() {
        let ch = build_chevalley(&RootSystem::from_name("A1").unwrap(), false).unwrap();
        let n = ch.lie.restrict(&ch.triangular()[2].members).unwrap();
        let c = ce_complex(&n, &CEModule::trivial(&n, 5).unwrap(), &WeightFilter::All).unwrap();
        assert_eq!(cohomology_dims(&c, &WeightFilter::All, "n", 5).poincare, vec![1, 1]);
    }

    #[test]
    fn gbar_zero_weight_tables() {
        let zero = |name: &str, p: u64| {
            let lie = gbar(name, p);
            let c = ce_complex(&lie, &CEModule::trivial(&lie, p).unwrap(), &WeightFilter::Zero).unwrap();
            cohomology_dims(&c, &WeightFilter::Zero, name, p).poincare
        };
        let a2 = zero("A2", 5);
        assert_eq!(a2, vec![1, 0, 0, 1, 0, 1, 0, 0, 1]);
        let b2 = zero("B2", 7);
        assert_eq!(b2, vec![1, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn sparse_complex_matches_dense_oracle() {
        for (name, p) in [("A1", 5), ("A2", 5), ("B2", 7)] {
            let lie = gbar(name, p);
            let c = ce_complex(&lie, &CEModule::trivial(&lie, p).unwrap(), &WeightFilter::All).unwrap();
            let table = cohomology_dims(&c, &WeightFilter::All, name, p);
            let mut poincare = table.poincare.clone();
            poincare.resize(lie.dim() + 1, 0);
            assert_eq!(poincare, dense_oracle_dims(&lie, p), "{name}");
        }
    }

    #[test]
    fn euler_characteristic_per_block() {
        let lie = gbar("A2", 5);
        let c = ce_complex(&lie, &CEModule::trivial(&lie, 5).unwrap(), &WeightFilter::All).unwrap();
        assert_eq!(c.d_squared_violation(), None);
        let f = Fp::new(5).unwrap();
        for b in &c.blocks {
            let chi_c: i64 = b.dims().iter().enumerate().map(|(q, &d)| if q % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
            let chi_h: i64 = b.cohomology(&f).iter().enumerate().map(|(q, &d)| if q % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
            assert_eq!(chi_c, chi_h);
        }
        let total: usize = c.cochain_dims().iter().sum();
        assert_eq!(total, 1 << lie.dim());
    }

    #[test]
    fn cup_structure_small() {
        for (name, p, degrees) in [("A1", 5, vec![3]), ("A2", 5, vec![3, 5]), ("B2", 7, vec![3, 7])] {
            let lie = gbar(name, p);
            let c = ce_complex(&lie, &CEModule::trivial(&lie, p).unwrap(), &WeightFilter::Zero).unwrap();
            let cert = cup_structure(&c).unwrap();
            assert_eq!(cert.generator_degrees, degrees, "{name}");
        }
    }

    #[test]
    fn abelian_cup_has_degree_one_generators() {
        let lie = abelian(2);
        let c = ce_complex(&lie, &CEModule::trivial(&lie, 5).unwrap(), &WeightFilter::Zero).unwrap();
        assert_eq!(cup_structure(&c).unwrap().generator_degrees, vec![1, 1]);
    }

    #[test]
    fn shuffle_signs() {
        assert_eq!(shuffle_sign(0b01, 0b10), 1);
        assert_eq!(shuffle_sign(0b10, 0b01), -1);
        assert_eq!(shuffle_sign(0b101, 0b010), -1);
    }

    #[test]
    fn coadjoint_modules_are_representations() {
        let ch = build_chevalley(&RootSystem::from_name("B2").unwrap(), false).unwrap();
        let [_, _, n, b, _] = ch.triangular();
        let nlie = ch.lie.restrict(&n.members).unwrap();
        let m = CEModule::coadjoint_quotient(&ch.lie, &nlie, &n.members, &b.members, 7).unwrap();
        assert_eq!(m.dim(), 4);
        m.exterior_powers(&nlie, 0..=4).unwrap();
    }

    #[test]
    fn broken_action_rejected() {
        let ch = build_chevalley(&RootSystem::from_name("A2").unwrap(), false).unwrap();
        let [_, _, n, _, _] = ch.triangular();
        let nlie = ch.lie.restrict(&n.members).unwrap();
        let m = CEModule::coadjoint_quotient(&ch.lie, &nlie, &n.members, &n.members, 5).unwrap();
        // x_{a1} acting by zero while x_{a1+a2} = [x_{a1}, x_{a2}] does not
        let mut action = m.action.clone();
        action[0].iter_mut().for_each(Vec::clear);
        let err = CEModule::new(&nlie, m.field, m.names.clone(), m.weights.clone(), m.grades.clone(), action);
        assert!(matches!(err, Err(Error::NotARepresentation(_))));
    }

    #[test]
    fn lattice_membership() {
        let l = Lattice::scalar(2, 4).unwrap();
        assert!(l.contains(&Weight(vec![4, -8])));
        assert!(!l.contains(&Weight(vec![2, 0])));
        assert_eq!(l.index(), 16);
        assert!(Lattice::new(vec![vec![1, 2], vec![2, 4]]).is_err());
        let skew = Lattice::new(vec![vec![2, 1], vec![0, 3]]).unwrap();
        // columns (2,0) and (1,3)
        assert!(skew.contains(&Weight(vec![3, 3])));
        assert!(!skew.contains(&Weight(vec![1, 0])));
    }

    #[test]
    fn kunneth_examples() {
        let lie = gbar("A1", 5);
        let c = ce_complex(&lie, &CEModule::trivial(&lie, 5).unwrap(), &WeightFilter::All).unwrap();
        let table = cohomology_dims(&c, &WeightFilter::All, "A1", 5);
        let twisted = kunneth_twist(&table, 2, &Lattice::scalar(1, 24).unwrap()).unwrap();
        assert_eq!(twisted.poincare, vec![1, 0, 0, 2, 0, 0, 1]);
        let lie = gbar("A2", 5);
        let c = ce_complex(&lie, &CEModule::trivial(&lie, 5).unwrap(), &WeightFilter::All).unwrap();
        let table = cohomology_dims(&c, &WeightFilter::All, "A2", 5);
        let f1 = kunneth_twist(&table, 1, &Lattice::scalar(2, 4).unwrap()).unwrap();
        assert!(f1.dims.iter().all(|(_, w, _)| w.iter().all(|&x| x == 0)));
        assert_eq!(f1.poincare, cohomology_dims(&c, &WeightFilter::Zero, "A2", 5).poincare);
    }
}
