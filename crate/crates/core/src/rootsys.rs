//! Root systems: Cartan data, roots, Weyl group, exponents and the dot action.
//!
//! Roots are stored in simple-root coordinates. Weights (elements of the
//! character lattice of the simply connected torus) are stored in
//! fundamental-weight coordinates, so `<lambda, alpha_i^vee>` is simply the
//! `i`-th coordinate. The fundamental-weight coordinates of a root `alpha` are
//! `A c` where `c` are its simple-root coordinates and `A` the Cartan matrix.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// An irreducible Dynkin type such as `A2` or `G2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if !ok || rank > 8 {
            return Err(Error::InvalidInput(format!(
                "{family:?}{rank} is not an irreducible Dynkin type of rank at most 8"
            )));
        }
        Ok(CartanType { family, rank })
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(Error::InvalidInput(format!("unknown Cartan type '{s}'"))),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("missing rank in Cartan type '{s}'")))?;
        CartanType::new(family, rank)
    }
}

/// A character of the maximal torus, as an integer coordinate vector.
///
/// Root-system code uses fundamental-weight coordinates; the `gl_n` helpers
/// use the standard `epsilon` basis of `Z^n`. The coordinate system is fixed by
/// whoever builds the weights.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|&x| x * k).collect())
    }

    pub fn divisible_by(&self, n: i64) -> bool {
        self.0.iter().all(|&x| x % n == 0)
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl Mul<&Weight> for &[Vec<i64>] {
    type Output = Weight;
    fn mul(self, w: &Weight) -> Weight {
        Weight(self.iter().map(|row| row.iter().zip(&w.0).map(|(a, b)| a * b).sum()).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Root {
    /// Simple-root coordinates.
    pub coords: Vec<i64>,
    pub height: i64,
}

impl Root {
    fn new(coords: Vec<i64>) -> Self {
        let height = coords.iter().sum();
        Root { coords, height }
    }

    pub fn is_positive(&self) -> bool {
        self.height > 0
    }

    pub fn negated(&self) -> Root {
        Root::new(self.coords.iter().map(|c| -c).collect())
    }
}

/// Sort key for the deterministic root order: height first, then simple-root
/// coordinates in decreasing lexicographic order (so `alpha_1` precedes `alpha_2`).
fn root_order_key(r: &Root) -> (i64, std::cmp::Reverse<Vec<i64>>) {
    (r.height, std::cmp::Reverse(r.coords.clone()))
}

#[derive(Clone, Debug, Serialize)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    /// `cartan[i][j] = <alpha_i^vee, alpha_j>`.
    pub cartan: Vec<Vec<i64>>,
    /// Half squared lengths `(alpha_i, alpha_i)/2`, the shortest roots having 1.
    pub half_norms: Vec<i64>,
    /// All roots, ordered by height and then by decreasing simple-root coordinates.
    pub roots: Vec<Root>,
    pub coxeter_number: i64,
    pub exponents: Vec<i64>,
    #[serde(skip)]
    index: HashMap<Vec<i64>, usize>,
    #[serde(skip)]
    weight_index: HashMap<Weight, usize>,
}

fn cartan_matrix(t: CartanType) -> Vec<Vec<i64>> {
    let n = t.rank;
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match t.family {
        Family::A | Family::B | Family::C => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        Family::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        Family::E => {
            // Bourbaki: 1-3-4-5-6-7-8 with 2 attached to 4
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
        }
        Family::F => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        Family::G => link(0, 1),
    }
    match t.family {
        // alpha_n short
        Family::B => a[n - 1][n - 2] = -2,
        // alpha_n long
        Family::C => a[n - 2][n - 1] = -2,
        // alpha_1, alpha_2 long; alpha_3, alpha_4 short
        Family::F => a[2][1] = -2,
        // alpha_1 short, alpha_2 long
        Family::G => a[0][1] = -3,
        _ => {}
    }
    a
}

/// Integers `d_i` with `d_i a_ij = d_j a_ji`, minimal and positive.
fn symmetrizer(a: &[Vec<i64>]) -> Vec<i64> {
    let n = a.len();
    // rational d_i as (num, den), fixed by BFS along the connected diagram
    let mut d: Vec<Option<(i64, i64)>> = vec![None; n];
    d[0] = Some((1, 1));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (num, den) = d[i].unwrap();
        for j in 0..n {
            if j != i && a[i][j] != 0 && d[j].is_none() {
                // d_j = d_i a_ij / a_ji
                let (nn, dd) = (num * a[i][j], den * a[j][i]);
                let g = gcd(nn.abs(), dd.abs());
                let s = if dd < 0 { -1 } else { 1 };
                d[j] = Some((s * nn / g, s * dd / g));
                queue.push_back(j);
            }
        }
    }
    let lcm_den = d.iter().fold(1i64, |acc, x| lcm(acc, x.unwrap().1));
    let mut ints: Vec<i64> = d.iter().map(|x| x.unwrap().0 * (lcm_den / x.unwrap().1)).collect();
    let g = ints.iter().fold(0i64, |acc, &x| gcd(acc, x));
    for x in ints.iter_mut() {
        *x /= g;
    }
    ints
}

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

impl RootSystem {
    pub fn new(cartan_type: CartanType) -> Result<Self> {
        let cartan = cartan_matrix(cartan_type);
        let half_norms = symmetrizer(&cartan);
        let r = cartan_type.rank;

        // positive roots by closure: beta + alpha_i is a root iff the alpha_i-string
        // through beta extends upward, i.e. p - <beta, alpha_i^vee> > 0
        let mut positive: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                let mut c = vec![0; r];
                c[i] = 1;
                c
            })
            .collect();
        let mut known: HashSet<Vec<i64>> = positive.iter().cloned().collect();
        let mut frontier = positive.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for beta in &frontier {
                for i in 0..r {
                    let pairing: i64 = (0..r).map(|j| beta[j] * cartan[i][j]).sum();
                    // p = largest k with beta - k alpha_i a root
                    let mut p = 0;
                    loop {
                        let mut down = beta.clone();
                        down[i] -= p + 1;
                        if down.iter().all(|&x| x >= 0) && known.contains(&down) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    if p - pairing > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if known.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            positive.extend(next.iter().cloned());
            frontier = next;
        }

        let mut roots: Vec<Root> = positive
            .iter()
            .map(|c| Root::new(c.clone()))
            .flat_map(|r| [r.negated(), r])
            .collect();
        roots.sort_by_key(root_order_key);

        let max_height = roots.iter().map(|r| r.height).max().unwrap();
        let coxeter_number = max_height + 1;
        let mut count_by_height = vec![0i64; (max_height + 2) as usize];
        for root in roots.iter().filter(|r| r.is_positive()) {
            count_by_height[root.height as usize] += 1;
        }
        let mut exponents = Vec::new();
        for i in 1..=max_height as usize {
            for _ in 0..(count_by_height[i] - count_by_height[i + 1]) {
                exponents.push(i as i64);
            }
        }

        let index = roots.iter().enumerate().map(|(i, r)| (r.coords.clone(), i)).collect();
        let mut rs = RootSystem {
            cartan_type,
            cartan,
            half_norms,
            roots,
            coxeter_number,
            exponents,
            index,
            weight_index: HashMap::new(),
        };
        rs.weight_index = (0..rs.roots.len()).map(|i| (rs.root_weight(i), i)).collect();
        rs.check_invariants()?;
        Ok(rs)
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::new(name.parse()?)
    }

    fn check_invariants(&self) -> Result<()> {
        let r = self.rank() as i64;
        let npos = self.num_positive() as i64;
        if 2 * npos != r * self.coxeter_number {
            return Err(Error::InvalidInput(format!(
                "{}: |Phi+| = {npos} but rank*h/2 = {}",
                self.cartan_type,
                r * self.coxeter_number / 2
            )));
        }
        if self.exponents.len() != self.rank()
            || self.exponents[0] != 1
            || *self.exponents.last().unwrap() != self.coxeter_number - 1
        {
            return Err(Error::InvalidInput(format!(
                "{}: inconsistent exponents {:?}",
                self.cartan_type, self.exponents
            )));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.cartan_type.rank
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.roots[i]
    }

    pub fn root_index(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Index of the root with the given fundamental-weight coordinates.
    pub fn root_index_of_weight(&self, w: &Weight) -> Option<usize> {
        self.weight_index.get(w).copied()
    }

    pub fn negative_of(&self, i: usize) -> usize {
        self.root_index(&self.roots[i].negated().coords).unwrap()
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.roots.len()).filter(|&i| self.roots[i].is_positive())
    }

    pub fn negative_roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.roots.len()).filter(|&i| !self.roots[i].is_positive())
    }

    /// Index of the simple root `alpha_i`.
    pub fn simple_root(&self, i: usize) -> usize {
        let mut c = vec![0; self.rank()];
        c[i] = 1;
        self.root_index(&c).unwrap()
    }

    pub fn highest_root(&self) -> usize {
        self.roots.len() - 1
    }

    /// Index of `a + b` when it is a root.
    pub fn sum_index(&self, a: usize, b: usize) -> Option<usize> {
        let c: Vec<i64> = self.roots[a].coords.iter().zip(&self.roots[b].coords).map(|(x, y)| x + y).collect();
        self.root_index(&c)
    }

    /// Fundamental-weight coordinates of root `i`.
    pub fn root_weight(&self, i: usize) -> Weight {
        self.coords_to_weight(&self.roots[i].coords)
    }

    /// Fundamental-weight coordinates of an element of the root lattice.
    pub fn coords_to_weight(&self, c: &[i64]) -> Weight {
        let r = self.rank();
        Weight((0..r).map(|i| (0..r).map(|j| self.cartan[i][j] * c[j]).sum()).collect())
    }

    /// Simple-root coordinates of a weight as `(numerators, common denominator)`.
    pub fn weight_to_coords(&self, w: &Weight) -> (Vec<i64>, i64) {
        // solve A c = w by fraction-free elimination over the rationals
        let r = self.rank();
        let mut m: Vec<Vec<i128>> = (0..r)
            .map(|i| {
                let mut row: Vec<i128> = self.cartan[i].iter().map(|&x| x as i128).collect();
                row.push(w.0[i] as i128);
                row
            })
            .collect();
        for col in 0..r {
            let piv = (col..r).find(|&i| m[i][col] != 0).expect("Cartan matrix is invertible");
            m.swap(col, piv);
            for i in 0..r {
                if i != col && m[i][col] != 0 {
                    let (a, b) = (m[col][col], m[i][col]);
                    for k in 0..=r {
                        m[i][k] = m[i][k] * a - m[col][k] * b;
                    }
                    let g = m[i].iter().fold(0i128, |acc, &x| gcd128(acc, x));
                    if g > 1 {
                        m[i].iter_mut().for_each(|x| *x /= g);
                    }
                }
            }
        }
        // c_i = m[i][r] / m[i][i]
        let den = (0..r).fold(1i128, |acc, i| {
            let d = m[i][i].abs();
            acc / gcd128(acc, d) * d
        });
        let nums = (0..r).map(|i| (m[i][r] * (den / m[i][i])) as i64).collect();
        let mut out: (Vec<i64>, i64) = (nums, den as i64);
        let g = out.0.iter().fold(out.1, |acc, &x| gcd(acc, x));
        if g > 1 {
            out.0.iter_mut().for_each(|x| *x /= g);
            out.1 /= g;
        }
        out
    }

    /// `(a, b)` for root-lattice elements in simple-root coordinates.
    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let r = self.rank();
        (0..r)
            .map(|i| (0..r).map(|j| a[i] * b[j] * self.half_norms[i] * self.cartan[i][j]).sum::<i64>())
            .sum()
    }

    /// Coordinates of `alpha^vee` in the simple coroots.
    pub fn coroot_coords(&self, i: usize) -> Vec<i64> {
        let root = &self.roots[i];
        let half_norm = self.inner(&root.coords, &root.coords) / 2;
        root.coords
            .iter()
            .zip(&self.half_norms)
            .map(|(&c, &d)| {
                debug_assert_eq!((c * d) % half_norm, 0);
                c * d / half_norm
            })
            .collect()
    }

    /// `<lambda, alpha_i^vee>` for root index `i`.
    pub fn pairing(&self, lambda: &Weight, i: usize) -> i64 {
        self.coroot_coords(i).iter().zip(&lambda.0).map(|(a, b)| a * b).sum()
    }

    /// Half sum of positive roots; all fundamental-weight coordinates equal 1.
    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank()])
    }

    /// `prod_i (1 + t + ... + t^{m_i})` as a coefficient list.
    pub fn length_polynomial(&self) -> Vec<u64> {
        self.exponents.iter().fold(vec![1u64], |acc, &m| {
            let factor = vec![1u64; m as usize + 1];
            poly_mul(&acc, &factor)
        })
    }

    /// `prod_i (1 + t^{2 m_i + 1})` as a coefficient list.
    pub fn exterior_poincare(&self) -> Vec<u64> {
        self.exponents.iter().fold(vec![1u64], |acc, &m| {
            let mut factor = vec![0u64; 2 * m as usize + 2];
            factor[0] = 1;
            factor[2 * m as usize + 1] = 1;
            poly_mul(&acc, &factor)
        })
    }

    /// Simple reflection `s_i` on fundamental-weight coordinates.
    pub fn simple_reflection(&self, i: usize) -> Vec<Vec<i64>> {
        let r = self.rank();
        (0..r)
            .map(|k| (0..r).map(|l| i64::from(k == l) - if l == i { self.cartan[k][i] } else { 0 }).collect())
            .collect()
    }
}

fn gcd128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn poly_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// An element of the Weyl group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WeylElement {
    /// Action on fundamental-weight coordinates.
    pub matrix: Vec<Vec<i64>>,
    /// `root_permutation[i]` is the index of `w(alpha_i)`.
    pub root_permutation: Vec<usize>,
    pub length: usize,
}

impl WeylElement {
    pub fn apply(&self, lambda: &Weight) -> Weight {
        self.matrix.as_slice() * lambda
    }
}

/// Largest rank for which the Weyl group is enumerated (`|W(F4)| = 1152`).
pub const WEYL_ENUMERATION_RANK: usize = 4;

/// All elements of `W`, in breadth-first order over words in simple reflections.
pub fn weyl_group(rs: &RootSystem) -> Result<Vec<WeylElement>> {
    if rs.rank() > WEYL_ENUMERATION_RANK {
        return Err(Error::EnumerationLimit(format!(
            "Weyl group of {} not enumerated (rank above {WEYL_ENUMERATION_RANK})",
            rs.cartan_type
        )));
    }
    let r = rs.rank();
    let gens: Vec<Vec<Vec<i64>>> = (0..r).map(|i| rs.simple_reflection(i)).collect();
    let identity: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::from([identity.clone()]);
    let mut order = vec![identity.clone()];
    let mut queue = VecDeque::from([identity]);
    while let Some(m) = queue.pop_front() {
        for g in &gens {
            let prod = mat_mul(g, &m);
            if seen.insert(prod.clone()) {
                order.push(prod.clone());
                queue.push_back(prod);
            }
        }
    }
    Ok(order.into_iter().map(|m| weyl_element(rs, m)).collect())
}

fn weyl_element(rs: &RootSystem, matrix: Vec<Vec<i64>>) -> WeylElement {
    let root_permutation: Vec<usize> = (0..rs.num_roots())
        .map(|i| {
            let image = matrix.as_slice() * &rs.root_weight(i);
            rs.root_index_of_weight(&image).expect("Weyl group preserves the roots")
        })
        .collect();
    let length = rs
        .positive_roots()
        .filter(|&i| !rs.roots[root_permutation[i]].is_positive())
        .count();
    WeylElement { matrix, root_permutation, length }
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// `w . lambda = w(lambda + rho) - rho`.
pub fn dot_action(rs: &RootSystem, w: &WeylElement, lambda: &Weight) -> Weight {
    let rho = rs.rho();
    &w.apply(&(lambda + &rho)) - &rho
}

/// Weights of the exterior algebra on `g`: sums of sets of pairwise distinct roots.
pub fn exterior_weights(rs: &RootSystem) -> Result<Vec<Weight>> {
    if rs.num_roots() > 24 {
        return Err(Error::EnumerationLimit(format!(
            "exterior weights of {} ({} roots) not enumerated",
            rs.cartan_type,
            rs.num_roots()
        )));
    }
    let mut sums: HashSet<Weight> = HashSet::from([Weight::zero(rs.rank())]);
    for i in 0..rs.num_roots() {
        let w = rs.root_weight(i);
        let shifted: Vec<Weight> = sums.iter().map(|s| s + &w).collect();
        sums.extend(shifted);
    }
    let mut out: Vec<Weight> = sums.into_iter().collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightLemmaReport {
    pub holds: bool,
    /// Whether `n > h (1 + p + ... + p^{f-1})`.
    pub hypothesis_ok: bool,
    /// Tuple `(lambda_0, ..., lambda_{f-1})` with `sum lambda_i p^i` a nonzero element of `n X^*(T)`.
    pub witness: Option<Vec<Weight>>,
    pub tuples_checked: u64,
}

/// Enumeration budget for `|weights|^f`.
pub const WEIGHT_LEMMA_BUDGET: u64 = 50_000_000;

/// Checks that every `f`-tuple of weights of the exterior algebra on `g` whose
/// `p`-adic combination lies in `n X^*(T)` combines to zero.
pub fn check_weight_lemma(rs: &RootSystem, p: u64, f: u32, n: u64) -> Result<WeightLemmaReport> {
    if f == 0 || n == 0 {
        return Err(Error::InvalidInput("f and n must be positive".into()));
    }
    let weights = exterior_weights(rs)?;
    let total = (weights.len() as u64).checked_pow(f).filter(|&t| t <= WEIGHT_LEMMA_BUDGET).ok_or_else(|| {
        Error::EnumerationLimit(format!("{}^{f} weight tuples exceed the budget", weights.len()))
    })?;
    let geometric: u64 = (0..f).map(|i| p.pow(i)).sum();
    let hypothesis_ok = n as i128 > rs.coxeter_number as i128 * geometric as i128;

    let mut witness = None;
    let mut idx = vec![0usize; f as usize];
    'outer: for _ in 0..total {
        let mut lambda = vec![0i64; rs.rank()];
        for (i, &k) in idx.iter().enumerate() {
            let pi = p.pow(i as u32) as i64;
            for (l, x) in lambda.iter_mut().zip(&weights[k].0) {
                *l += pi * x;
            }
        }
        let lambda = Weight(lambda);
        if !lambda.is_zero() && lambda.divisible_by(n as i64) {
            witness = Some(idx.iter().map(|&k| weights[k].clone()).collect());
            break 'outer;
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
