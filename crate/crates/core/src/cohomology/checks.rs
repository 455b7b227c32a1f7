//! Dimension identities for `n`, `gbar` and their coadjoint modules.

use serde::Serialize;

use super::{ce_complex, cohomology_dims, CEModule, CohomologyTable, WeightFilter};
use crate::chevalley::{build_chevalley, Chevalley};
use crate::error::{Error, Result};
use crate::gradedlie::build_gbar;
use crate::rootsys::{dot_action, poly_mul, weyl_group, RootSystem, Weight};

/// `prod_i (1 + t^{2 m_i + 1})^f`.
pub fn predicted_poincare(exponents: &[i64], f: u32) -> Vec<u64> {
    let single = exponents.iter().fold(vec![1u64], |acc, &m| {
        let mut factor = vec![0u64; 2 * m as usize + 2];
        factor[0] = 1;
        factor[2 * m as usize + 1] = 1;
        poly_mul(&acc, &factor)
    });
    (0..f).fold(vec![1u64], |acc, _| poly_mul(&acc, &single))
}

/// Cohomology of `gbar` with trivial coefficients over `F_p`.
pub fn gbar_table(ch: &Chevalley, p: u64, filter: &WeightFilter) -> Result<CohomologyTable> {
    let gb = build_gbar(ch, p)?;
    let module = CEModule::trivial(&gb.lie, p)?;
    let c = ce_complex(&gb.lie, &module, filter)?;
    Ok(cohomology_dims(&c, filter, &ch.rs.cartan_type.to_string(), p))
}

fn require_prime(p: u64) -> Result<()> {
    if !crate::linfp::is_prime(p) || p >= 1 << 31 {
        return Err(Error::InvalidInput(format!("{p} is not a prime below 2^31")));
    }
    Ok(())
}

fn nilradical(ch: &Chevalley) -> Result<(crate::chevalley::StructLie, Vec<usize>)> {
    let members = ch.triangular()[2].members.clone();
    Ok((ch.lie.restrict(&members)?, members))
}

#[derive(Clone, Debug, Serialize)]
pub struct KostantReport {
    pub ok: bool,
    /// Per degree: computed and predicted weights, sorted.
    pub degrees: Vec<(Vec<Weight>, Vec<Weight>)>,
    pub total: u64,
    pub weyl_order: u64,
}

/// Compares the weights of `H^i(n, lambda)` with `{w . 0 + lambda : l(w) = i}`.
pub fn kostant_check(rs: &RootSystem, p: u64, lambda: &Weight) -> Result<KostantReport> {
    require_prime(p)?;
    if (p as i64) < rs.coxeter_number - 1 {
        return Err(Error::Hypothesis(format!("Kostant's theorem needs p >= h - 1 = {}", rs.coxeter_number - 1)));
    }
    let ch = build_chevalley(rs, false)?;
    let (n, _) = nilradical(&ch)?;
    let module = CEModule::character(&n, p, lambda.clone())?;
    let c = ce_complex(&n, &module, &WeightFilter::All)?;
    let table = cohomology_dims(&c, &WeightFilter::All, &rs.cartan_type.to_string(), p);
    let top = rs.num_positive();
    let mut computed = vec![Vec::new(); top + 1];
    for (q, w, d) in &table.dims {
        for _ in 0..*d {
            computed[*q].push(Weight(w.clone()));
        }
    }
    let mut predicted = vec![Vec::new(); top + 1];
    let weyl = weyl_group(rs)?;
    for w in &weyl {
        predicted[w.length].push(&dot_action(rs, w, &Weight::zero(rs.rank())) + lambda);
    }
    let degrees: Vec<(Vec<Weight>, Vec<Weight>)> = computed
        .into_iter()
        .zip(predicted)
        .map(|(mut a, mut b)| {
            a.sort();
            b.sort();
            (a, b)
        })
        .collect();
    let ok = degrees.iter().all(|(a, b)| a == b) && table.total() == weyl.len() as u64;
    Ok(KostantReport { ok, degrees, total: table.total(), weyl_order: weyl.len() as u64 })
}

#[derive(Clone, Debug, Serialize)]
pub struct HodgeReport {
    pub ok: bool,
    /// `table[i][j] = dim H^i(n, wedge^j (g/b)^vee)^T`.
    pub table: Vec<Vec<u64>>,
    pub length_counts: Vec<u64>,
}

/// Checks `dim H^i(n, wedge^j (g/b)^vee)^T = delta_ij #{w : l(w) = i}`.
pub fn hodge_dims_check(rs: &RootSystem, p: u64) -> Result<HodgeReport> {
    require_prime(p)?;
    if (p as i64) < rs.coxeter_number - 1 {
        return Err(Error::Hypothesis(format!("the Hodge comparison needs p >= h - 1 = {}", rs.coxeter_number - 1)));
    }
    let ch = build_chevalley(rs, false)?;
    let (n, members) = nilradical(&ch)?;
    let b = ch.triangular()[3].members.clone();
    let top = rs.num_positive();
    let module = CEModule::coadjoint_quotient(&ch.lie, &n, &members, &b, p)?.exterior_powers(&n, 0..=top)?;
    let c = ce_complex(&n, &module, &WeightFilter::Zero)?;
    let f = c.field;
    let mut table = vec![vec![0u64; top + 1]; top + 1];
    for block in &c.blocks {
        let j = block.key.grade as usize;
        for (i, d) in block.cohomology(&f).into_iter().enumerate() {
            table[i][j] += d;
        }
    }
    let length_counts = rs.length_polynomial();
    let ok = (0..=top).all(|i| (0..=top).all(|j| table[i][j] == if i == j { length_counts[i] } else { 0 }));
    Ok(HodgeReport { ok, table, length_counts })
}

#[derive(Clone, Debug, Serialize)]
pub struct SemidirectReport {
    pub ok: bool,
    /// `dim H^k(gbar)`.
    pub gbar: Vec<u64>,
    /// `sum_{i+j=k} dim H^i(n, wedge^j (g/n)^vee)`.
    pub spectral: Vec<u64>,
}

/// Compares `H^*(gbar)` with the `E_2` page of the extension `g/n -> gbar -> n`.
///
/// With `zero_action` the coadjoint action on `(g/n)^vee` is replaced by zero,
/// which breaks the identity in general.
pub fn semidirect_degeneration_check(rs: &RootSystem, p: u64, zero_action: bool) -> Result<SemidirectReport> {
    require_prime(p)?;
    if (p as i64) <= rs.coxeter_number + 1 {
        return Err(Error::Hypothesis(format!("the semidirect comparison needs p > h + 1 = {}", rs.coxeter_number + 1)));
    }
    let ch = build_chevalley(rs, false)?;
    let lhs = gbar_table(&ch, p, &WeightFilter::All)?;
    let (n, members) = nilradical(&ch)?;
    let mut coadjoint = CEModule::coadjoint_quotient(&ch.lie, &n, &members, &members, p)?;
    if zero_action {
        coadjoint = coadjoint.with_zero_action();
    }
    let m = coadjoint.dim();
    let module = coadjoint.exterior_powers(&n, 0..=m)?;
    let c = ce_complex(&n, &module, &WeightFilter::All)?;
    let f = c.field;
    let mut spectral = vec![0u64; n.dim() + m + 1];
    for block in &c.blocks {
        let j = block.key.grade as usize;
        for (i, d) in block.cohomology(&f).into_iter().enumerate() {
            spectral[i + j] += d;
        }
    }
    let mut gbar = lhs.poincare.clone();
    gbar.resize(spectral.len(), 0);
    Ok(SemidirectReport { ok: gbar == spectral, gbar, spectral })
}
