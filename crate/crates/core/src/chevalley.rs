//! Chevalley bases with integer structure constants.
//!
//! Signs are fixed by `N_{a,b} = +(r+1)` on extraspecial pairs and propagated
//! through the four-root identity, so that the whole table is determined by
//! the root order of [`RootSystem`].

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsys::{RootSystem, Weight};

/// A Lie algebra over `Z` given by a basis, an integer bracket table and a
/// torus weight per basis element.
#[derive(Clone, Debug, Serialize)]
pub struct StructLie {
    pub names: Vec<String>,
    pub weights: Vec<Weight>,
    /// `table[i][j]` is `[b_i, b_j]` as sparse `(index, coefficient)` pairs.
    table: Vec<Vec<Vec<(usize, i64)>>>,
}

impl StructLie {
    /// Builds a Lie algebra from the brackets `[b_i, b_j]` for `i < j`.
    pub fn from_upper_brackets(
        names: Vec<String>,
        weights: Vec<Weight>,
        upper: impl IntoIterator<Item = ((usize, usize), Vec<(usize, i64)>)>,
    ) -> Result<Self> {
        let n = names.len();
        if weights.len() != n {
            return Err(Error::DimensionMismatch(format!("{} names but {} weights", n, weights.len())));
        }
        let mut table = vec![vec![Vec::new(); n]; n];
        for ((i, j), v) in upper {
            if i >= j || j >= n {
                return Err(Error::InvalidInput(format!("bracket entry ({i}, {j}) is not above the diagonal")));
            }
            let v = normalize(v);
            table[j][i] = v.iter().map(|&(k, c)| (k, -c)).collect();
            table[i][j] = v;
        }
        Ok(StructLie { names, weights, table })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &[(usize, i64)] {
        &self.table[i][j]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Triples `(a, b, c, coeff)` with `a < b` and `[b_a, b_b]` having `coeff b_c`.
    pub fn structure_constants(&self) -> Vec<(usize, usize, usize, i64)> {
        let mut out = Vec::new();
        for a in 0..self.dim() {
            for b in a + 1..self.dim() {
                for &(c, k) in &self.table[a][b] {
                    out.push((a, b, c, k));
                }
            }
        }
        out
    }

    /// Bilinear extension of the table over `Z`.
    pub fn bracket(&self, x: &[i64], y: &[i64]) -> Result<Vec<i64>> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut out = vec![0i64; self.dim()];
        for (i, &xi) in x.iter().enumerate().filter(|(_, &v)| v != 0) {
            for (j, &yj) in y.iter().enumerate().filter(|(_, &v)| v != 0) {
                for &(k, c) in &self.table[i][j] {
                    out[k] += xi * yj * c;
                }
            }
        }
        Ok(out)
    }

    /// Bilinear extension of the table reduced modulo `p`.
    pub fn bracket_mod(&self, p: u64, x: &[u64], y: &[u64]) -> Result<Vec<u64>> {
        self.check_len(x)?;
        self.check_len(y)?;
        let p = p as i128;
        let mut out = vec![0i128; self.dim()];
        for (i, &xi) in x.iter().enumerate().filter(|(_, &v)| v != 0) {
            for (j, &yj) in y.iter().enumerate().filter(|(_, &v)| v != 0) {
                for &(k, c) in &self.table[i][j] {
                    out[k] = (out[k] + xi as i128 * yj as i128 % p * c as i128).rem_euclid(p);
                }
            }
        }
        Ok(out.into_iter().map(|v| v as u64).collect())
    }

    fn check_len<T>(&self, v: &[T]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!("vector of length {} in a {}-dimensional algebra", v.len(), self.dim())));
        }
        Ok(())
    }

    fn unit(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    /// First basis triple violating the Jacobi identity over `Z`, if any.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        for a in 0..n {
            for b in a + 1..n {
                let ab = self.bracket(&self.unit(a), &self.unit(b)).unwrap();
                for c in b + 1..n {
                    let uc = self.unit(c);
                    let bc = self.bracket(&self.unit(b), &uc).unwrap();
                    let ca = self.bracket(&uc, &self.unit(a)).unwrap();
                    let t1 = self.bracket(&self.unit(a), &bc).unwrap();
                    let t2 = self.bracket(&self.unit(b), &ca).unwrap();
                    let t3 = self.bracket(&uc, &ab).unwrap();
                    if (0..n).any(|k| t1[k] + t2[k] + t3[k] != 0) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// First basis pair whose bracket has a component of the wrong weight.
    pub fn weight_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let w = &self.weights[i] + &self.weights[j];
                if self.table[i][j].iter().any(|&(k, _)| self.weights[k] != w) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Whether the span of `members` is closed under the bracket.
    pub fn is_closed(&self, members: &[usize]) -> bool {
        let mut inside = vec![false; self.dim()];
        for &m in members {
            inside[m] = true;
        }
        members
            .iter()
            .all(|&i| members.iter().all(|&j| self.table[i][j].iter().all(|&(k, _)| inside[k])))
    }

    /// The subalgebra spanned by `members`, re-indexed in the given order.
    pub fn restrict(&self, members: &[usize]) -> Result<StructLie> {
        if !self.is_closed(members) {
            return Err(Error::InvalidInput("span is not closed under the bracket".into()));
        }
        let mut pos = vec![usize::MAX; self.dim()];
        for (new, &old) in members.iter().enumerate() {
            pos[old] = new;
        }
        let names = members.iter().map(|&i| self.names[i].clone()).collect();
        let weights = members.iter().map(|&i| self.weights[i].clone()).collect();
        let table = members
            .iter()
            .map(|&i| {
                members
                    .iter()
                    .map(|&j| {
                        let mut v: Vec<(usize, i64)> = self.table[i][j].iter().map(|&(k, c)| (pos[k], c)).collect();
                        v.sort_unstable();
                        v
                    })
                    .collect()
            })
            .collect();
        Ok(StructLie { names, weights, table })
    }

    /// The same algebra on the basis permuted by `perm` (new index `perm[old]`).
    pub fn permuted(&self, perm: &[usize]) -> StructLie {
        let n = self.dim();
        let mut names = vec![String::new(); n];
        let mut weights = vec![Weight::default(); n];
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            names[perm[i]] = self.names[i].clone();
            weights[perm[i]] = self.weights[i].clone();
            for j in 0..n {
                let mut v: Vec<(usize, i64)> = self.table[i][j].iter().map(|&(k, c)| (perm[k], c)).collect();
                v.sort_unstable();
                table[perm[i]][perm[j]] = v;
            }
        }
        StructLie { names, weights, table }
    }

    /// Overwrites one structure constant `[b_i, b_j]_k` (and its antisymmetric partner).
    pub fn with_constant(&self, i: usize, j: usize, k: usize, c: i64) -> StructLie {
        let mut out = self.clone();
        for (a, b, s) in [(i, j, c), (j, i, -c)] {
            let v = &mut out.table[a][b];
            v.retain(|&(idx, _)| idx != k);
            v.push((k, s));
            *v = normalize(std::mem::take(v));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let brackets: Vec<_> = self
            .structure_constants()
            .into_iter()
            .map(|(a, b, c, k)| serde_json::json!([a, b, c, k]))
            .collect();
        serde_json::json!({
            "basis": self.names,
            "weights": self.weights.iter().map(|w| w.0.clone()).collect::<Vec<_>>(),
            "brackets": brackets,
        })
    }
}

fn normalize(mut v: Vec<(usize, i64)>) -> Vec<(usize, i64)> {
    v.sort_unstable();
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(v.len());
    for (k, c) in v {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 += c,
            _ => out.push((k, c)),
        }
    }
    out.retain(|&(_, c)| c != 0);
    out
}

/// What each basis element of a Chevalley basis stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Label {
    /// `X_alpha` for the root with this index in the root system.
    Root(usize),
    /// `H_{alpha_i}` for the simple root `alpha_i`.
    Coroot(usize),
    Center,
}

/// A split Lie algebra with its Chevalley basis: `X_alpha` for all roots in
/// root order, then `H_i` for the simple coroots, then optionally `Z`.
#[derive(Clone, Debug)]
pub struct Chevalley {
    pub rs: RootSystem,
    pub lie: StructLie,
    pub labels: Vec<Label>,
    /// `n[(a, b)] = N_{a,b}` for root indices with `a + b` a root.
    constants: HashMap<(usize, usize), i64>,
}

#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub name: &'static str,
    pub members: Vec<usize>,
}

impl Chevalley {
    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    pub fn has_center(&self) -> bool {
        self.labels.last() == Some(&Label::Center)
    }

    pub fn root_basis(&self, root: usize) -> usize {
        root
    }

    pub fn coroot_basis(&self, i: usize) -> usize {
        self.rs.num_roots() + i
    }

    pub fn center_basis(&self) -> Option<usize> {
        self.has_center().then(|| self.dim() - 1)
    }

    /// `N_{a,b}` for root indices, zero when `a + b` is not a root.
    pub fn n(&self, a: usize, b: usize) -> i64 {
        self.constants.get(&(a, b)).copied().unwrap_or(0)
    }

    /// `(n^-, t, n, b, b^-)`; `t` and both Borels include the center when present.
    pub fn triangular(&self) -> [Subalgebra; 5] {
        let rs = &self.rs;
        let nminus: Vec<usize> = rs.negative_roots().collect();
        let nplus: Vec<usize> = rs.positive_roots().collect();
        let t: Vec<usize> = (rs.num_roots()..self.dim()).collect();
        let b: Vec<usize> = nplus.iter().chain(&t).copied().collect();
        let bminus: Vec<usize> = nminus.iter().chain(&t).copied().collect();
        [
            Subalgebra { name: "n-", members: nminus },
            Subalgebra { name: "t", members: t },
            Subalgebra { name: "n", members: nplus },
            Subalgebra { name: "b", members: b },
            Subalgebra { name: "b-", members: bminus },
        ]
    }

    /// For type `A_{n-1}`: root index to `(a, b, sign)` with `X_alpha = sign E_ab`
    /// (0-based), verified against every bracket.
    pub fn sl_matrix_realization(&self) -> Result<Vec<(usize, usize, i64)>> {
        let rs = &self.rs;
        if rs.cartan_type.family != crate::rootsys::Family::A {
            return Err(Error::InvalidInput(format!("{} has no sl_n realization here", rs.cartan_type)));
        }
        let n = rs.rank() + 1;
        let mut real = vec![(0usize, 0usize, 0i64); rs.num_roots()];
        for (i, root) in rs.roots.iter().enumerate() {
            let nz: Vec<usize> = (0..rs.rank()).filter(|&k| root.coords[k] != 0).collect();
            let (lo, hi) = (nz[0], nz[nz.len() - 1] + 1);
            real[i] = if root.is_positive() { (lo, hi, 0) } else { (hi, lo, 0) };
        }
        // signs: +1 on simple and negative simple roots, then X_{a+b} = [X_a, X_b] / N_{a,b}
        // with a simple, by increasing height
        let mut order: Vec<usize> = (0..rs.num_roots()).collect();
        order.sort_by_key(|&i| rs.roots[i].height.abs());
        for &i in &order {
            let root = &rs.roots[i];
            if root.height.abs() == 1 {
                real[i].2 = 1;
                continue;
            }
            let sgn = root.height.signum();
            let k = (0..rs.rank()).find(|&k| root.coords[k] != 0 && {
                let mut c = root.coords.clone();
                c[k] -= sgn;
                rs.root_index(&c).is_some()
            });
            let k = k.expect("every non-simple root is a simple root plus a root");
            let simple = if sgn > 0 { rs.simple_root(k) } else { rs.negative_of(rs.simple_root(k)) };
            let rest = rs.sum_index(i, rs.negative_of(simple)).unwrap();
            // [s E_ab, s' E_bc] = s s' E_ac; E_ab E_bc products only
            let (sa, sb, ss) = real[simple];
            let (ra, rb, rsgn) = real[rest];
            let commutator_sign = if sb == ra {
                ss * rsgn
            } else {
                debug_assert_eq!(rb, sa);
                -ss * rsgn
            };
            real[i].2 = commutator_sign * self.n(simple, rest);
        }
        self.check_realization(&real, n)?;
        Ok(real)
    }

    fn check_realization(&self, real: &[(usize, usize, i64)], n: usize) -> Result<()> {
        let to_matrix = |v: &[i64]| -> Vec<i64> {
            let mut m = vec![0i64; n * n];
            for (i, &c) in v.iter().enumerate().filter(|(_, &c)| c != 0) {
                match self.labels[i] {
                    Label::Root(r) => {
                        let (a, b, s) = real[r];
                        m[a * n + b] += s * c;
                    }
                    Label::Coroot(k) => {
                        m[k * n + k] += c;
                        m[(k + 1) * n + k + 1] -= c;
                    }
                    Label::Center => {
                        for a in 0..n {
                            m[a * n + a] += c;
                        }
                    }
                }
            }
            m
        };
        let commutator = |x: &[i64], y: &[i64]| -> Vec<i64> {
            let mut out = vec![0i64; n * n];
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        out[a * n + c] += x[a * n + b] * y[b * n + c] - y[a * n + b] * x[b * n + c];
                    }
                }
            }
            out
        };
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let lhs = to_matrix(&self.lie.bracket(&self.lie.unit(i), &self.lie.unit(j))?);
                let rhs = commutator(&to_matrix(&self.lie.unit(i)), &to_matrix(&self.lie.unit(j)));
                if lhs != rhs {
                    return Err(Error::NotARepresentation(format!(
                        "matrix realization disagrees on [{}, {}]",
                        self.lie.names[i], self.lie.names[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.lie.to_json();
        v["type"] = serde_json::json!(self.rs.cartan_type.to_string());
        v
    }
}

/// Largest `r` with `b - r a` a root.
fn chain_below(rs: &RootSystem, a: usize, b: usize) -> i64 {
    let mut r = 0;
    let mut cur = b;
    let neg_a = rs.negative_of(a);
    while let Some(next) = rs.sum_index(cur, neg_a) {
        r += 1;
        cur = next;
    }
    r
}

struct ConstantSolver<'a> {
    rs: &'a RootSystem,
    norms: Vec<i64>,
    positive: HashMap<(usize, usize), i64>,
}

impl ConstantSolver<'_> {
    fn norm(&self, i: usize) -> i64 {
        self.norms[i]
    }

    /// `N_{x,y}` for arbitrary roots, from already known positive pairs.
    fn n(&self, x: usize, y: usize) -> i64 {
        let rs = self.rs;
        let Some(s) = rs.sum_index(x, y) else { return 0 };
        let (xp, yp) = (rs.roots[x].is_positive(), rs.roots[y].is_positive());
        match (xp, yp) {
            (true, true) => self.positive[&(x, y)],
            (false, false) => -self.positive[&(rs.negative_of(x), rs.negative_of(y))],
            (false, true) => -self.n(y, x),
            (true, false) => {
                // x + y + z = 0 with N_{x,y}/(z,z) = N_{y,z}/(x,x) = N_{z,x}/(y,y)
                let z = rs.negative_of(s);
                if rs.roots[z].is_positive() {
                    exact_div(self.norm(z) * self.positive[&(z, x)], self.norm(y))
                } else {
                    let (ny, nz) = (rs.negative_of(y), rs.negative_of(z));
                    -exact_div(self.norm(z) * self.positive[&(ny, nz)], self.norm(x))
                }
            }
        }
    }
}

fn exact_div(a: i64, b: i64) -> i64 {
    assert_eq!(a % b, 0, "structure constant {a}/{b} is not integral");
    a / b
}

fn solve_constants(rs: &RootSystem) -> HashMap<(usize, usize), i64> {
    let norms: Vec<i64> = rs.roots.iter().map(|r| rs.inner(&r.coords, &r.coords)).collect();
    let mut solver = ConstantSolver { rs, norms, positive: HashMap::new() };
    let positive: Vec<usize> = rs.positive_roots().collect();
    // positive roots are already sorted by height
    for &xi in &positive {
        let pairs: Vec<(usize, usize)> = positive
            .iter()
            .filter_map(|&g| rs.sum_index(xi, rs.negative_of(g)).filter(|&d| rs.roots[d].is_positive()).map(|d| (g, d)))
            .filter(|&(g, d)| g < d)
            .collect();
        let Some(&(alpha, beta)) = pairs.first() else { continue };
        let n_ab = chain_below(rs, alpha, beta) + 1;
        solver.positive.insert((alpha, beta), n_ab);
        solver.positive.insert((beta, alpha), -n_ab);
        for &(gamma, delta) in &pairs[1..] {
            // four roots alpha + beta - gamma - delta = 0
            let (ng, nd) = (rs.negative_of(gamma), rs.negative_of(delta));
            let mut t = 0i64;
            for (u, v, w, x, s) in [(beta, ng, alpha, nd, rs.sum_index(beta, ng)), (ng, alpha, beta, nd, rs.sum_index(ng, alpha))] {
                if let Some(s) = s {
                    // N_{u,v} N_{w,x} / (u+v, u+v), scaled by (xi, xi)
                    t += exact_div(solver.n(u, v) * solver.n(w, x) * solver.norm(xi), solver.norm(s));
                }
            }
            let n_gd = exact_div(t, n_ab);
            solver.positive.insert((gamma, delta), n_gd);
            solver.positive.insert((delta, gamma), -n_gd);
        }
    }
    let mut all = HashMap::new();
    for x in 0..rs.num_roots() {
        for y in 0..rs.num_roots() {
            if rs.sum_index(x, y).is_some() {
                all.insert((x, y), solver.n(x, y));
            }
        }
    }
    all
}

fn root_name(rs: &RootSystem, i: usize) -> String {
    let root = &rs.roots[i];
    let coords: Vec<String> = root.coords.iter().map(|c| c.abs().to_string()).collect();
    format!("X{}{}", if root.is_positive() { "+" } else { "-" }, coords.join(""))
}

/// The Chevalley basis of the split Lie algebra of `rs`, optionally with a
/// central summand spanned by `Z`.
pub fn build_chevalley(rs: &RootSystem, with_center: bool) -> Result<Chevalley> {
    let constants = solve_constants(rs);
    let nr = rs.num_roots();
    let r = rs.rank();
    let mut labels: Vec<Label> = (0..nr).map(Label::Root).collect();
    labels.extend((0..r).map(Label::Coroot));
    if with_center {
        labels.push(Label::Center);
    }
    let mut names: Vec<String> = (0..nr).map(|i| root_name(rs, i)).collect();
    names.extend((1..=r).map(|i| format!("H{i}")));
    let mut weights: Vec<Weight> = (0..nr).map(|i| rs.root_weight(i)).collect();
    weights.extend((0..r).map(|_| Weight::zero(r)));
    if with_center {
        names.push("Z".into());
        weights.push(Weight::zero(r));
    }
    let mut upper = Vec::new();
    for a in 0..nr {
        for b in a + 1..nr {
            let v = if rs.sum_index(a, b).is_some() {
                vec![(rs.sum_index(a, b).unwrap(), constants[&(a, b)])]
            } else if rs.negative_of(a) == b {
                // [X_a, X_{-a}] = H_a with a the root of index a
                let coroot = rs.coroot_coords(a);
                coroot.iter().enumerate().map(|(k, &c)| (nr + k, c)).collect()
            } else {
                continue;
            };
            upper.push(((a, b), v));
        }
        for k in 0..r {
            // [X_b, H_k] = -<alpha_k^vee, b> X_b
            let c = rs.root_weight(a).0[k];
            if c != 0 {
                upper.push(((a, nr + k), vec![(a, -c)]));
            }
        }
    }
    let lie = StructLie::from_upper_brackets(names, weights, upper)?;
    let ch = Chevalley { rs: rs.clone(), lie, labels, constants };
    ch.validate()?;
    Ok(ch)
}

/// `gl_n` as `A_{n-1}` plus a central `Z`, with weights in the `epsilon` basis of `Z^n`.
pub fn build_gl(n: usize) -> Result<Chevalley> {
    let rs = RootSystem::new(crate::rootsys::CartanType::new(crate::rootsys::Family::A, n - 1)?)?;
    let mut ch = build_chevalley(&rs, true)?;
    for (i, label) in ch.labels.iter().enumerate() {
        ch.lie.weights[i] = match *label {
            Label::Root(r) => epsilon_coords(&rs.roots[r].coords),
            _ => Weight::zero(n),
        };
    }
    Ok(ch)
}

/// `epsilon` coordinates of an `A_{n-1}` root-lattice element.
pub fn epsilon_coords(c: &[i64]) -> Weight {
    let n = c.len() + 1;
    Weight((0..n).map(|k| c.get(k).copied().unwrap_or(0) - if k > 0 { c[k - 1] } else { 0 }).collect())
}

impl Chevalley {
    fn validate(&self) -> Result<()> {
        let rs = &self.rs;
        for (&(a, b), &n) in &self.constants {
            let r = chain_below(rs, a, b);
            if n.abs() != r + 1 {
                return Err(Error::InvalidInput(format!("|N| = {} but chain gives {}", n.abs(), r + 1)));
            }
        }
        if self.rs.rank() <= 3 {
            if let Some((a, b, c)) = self.lie.jacobi_violation() {
                return Err(Error::InvalidInput(format!(
                    "Jacobi identity fails on ({}, {}, {})",
                    self.lie.names[a], self.lie.names[b], self.lie.names[c]
                )));
            }
        }
        Ok(())
    }
}
