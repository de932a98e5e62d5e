//! The blocked configuration DP that evaluates the weak connectedness
//! polynomial at `u = 0..n` and interpolates, plus the bivariate extension
//! that tracks edge counts through a symbolic weight on the relation.
//!
//! One DP layer holds the summed weight of all ways to distribute elements
//! over the 1-types of the layers built so far. Extending by a layer splits
//! each configuration `c` into `cbar + cstar`, weighs the new block
//! internally with [`w_in`] and against the older layers with the
//! no-edge cross coefficients; elements in different layers never share an
//! edge of the relation, which is exactly what makes a layer choice count
//! connected components.
//!
//! With evidence, configurations carry one count vector per evidence group
//! and the choose/multinomial factors are taken per group; the coefficient
//! exponents only ever see cell totals, since edge weights do not depend on
//! which group an element came from.

use std::collections::{BTreeMap, HashMap};

use num_traits::One;
use rayon::prelude::*;

use crate::cells::{
    compute_coefficients, compute_coefficients_plain, enumerate_cells, verify_closure, CellSpace,
    CellCoefficients,
};
use crate::error::{Error, Result};
use crate::fol::{NExpr, PredId};
use crate::normalize::{attach_edge_symbol, NormalizedSentence};
use crate::poly::{binomial, interpolate_1d, multinomial, Poly, Rational, Symbol};

/// Flattened configuration: `counts[g * L + i]` elements of evidence group
/// `g` occupy cell `i`.
pub type Config = Vec<u32>;

/// Engine counters reported by the CLI.
#[derive(Clone, Copy, Debug, Default)]
pub struct EngineStats {
    pub cells: usize,
    pub configs: usize,
    pub layers: usize,
}

pub struct EngineRun {
    pub poly: Poly,
    pub stats: EngineStats,
}

/// The configuration lattice shared by both DP engines.
pub(crate) struct DpContext {
    pub l: usize,
    pub group_sizes: Vec<usize>,
    pub configs: Vec<Config>,
    pub index: HashMap<Config, usize>,
    pub full: Vec<usize>,
    pub caps: BTreeMap<Symbol, u32>,
}

impl DpContext {
    /// Builds the lattice of all configurations with per-group sums at most
    /// the group sizes, restricted to cells compatible with each group's
    /// evidence signature. Configurations are ordered graded-lexicographically.
    pub fn new(
        ns: &NormalizedSentence,
        n: usize,
        space: &CellSpace,
        kept_cells: &[usize],
    ) -> Result<DpContext> {
        let groups = ns.groups_at(n)?;
        let l = kept_cells.len();
        let group_sizes: Vec<usize> = groups.iter().map(|g| g.size).collect();
        let allowed: Vec<Vec<bool>> = groups
            .iter()
            .map(|g| {
                kept_cells
                    .iter()
                    .map(|&ci| space.allows(&space.cells[ci], &g.signature))
                    .collect()
            })
            .collect();
        // per-group configurations, then cartesian product
        let mut per_group: Vec<Vec<Vec<u32>>> = Vec::new();
        for (g, &size) in group_sizes.iter().enumerate() {
            let mut partial: Vec<Vec<u32>> = vec![vec![]];
            for i in 0..l {
                let mut next = Vec::new();
                for p in &partial {
                    let used: u32 = p.iter().sum();
                    let max = if allowed[g][i] {
                        size as u32 - used
                    } else {
                        0
                    };
                    for k in 0..=max {
                        let mut q = p.clone();
                        q.push(k);
                        next.push(q);
                    }
                }
                partial = next;
            }
            per_group.push(partial);
        }
        let mut configs: Vec<Config> = vec![vec![]];
        for group_configs in &per_group {
            let mut next = Vec::with_capacity(configs.len() * group_configs.len());
            for c in &configs {
                for gc in group_configs {
                    let mut q = c.clone();
                    q.extend_from_slice(gc);
                    next.push(q);
                }
            }
            configs = next;
        }
        configs.sort_by_key(|c| (c.iter().sum::<u32>(), c.clone()));
        let index: HashMap<Config, usize> = configs
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        let full: Vec<usize> = configs
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                group_sizes.iter().enumerate().all(|(g, &size)| {
                    c[g * l..(g + 1) * l].iter().sum::<u32>() as usize == size
                })
            })
            .map(|(i, _)| i)
            .collect();
        Ok(DpContext {
            l,
            group_sizes,
            configs,
            index,
            full,
            caps: ns.caps_at(n),
        })
    }

    pub fn cell_totals(&self, c: &[u32]) -> Vec<u32> {
        let mut t = vec![0u32; self.l];
        for (pos, &v) in c.iter().enumerate() {
            t[pos % self.l.max(1)] += v;
        }
        t
    }

    fn group_totals(&self, c: &[u32]) -> Vec<u32> {
        self.group_sizes
            .iter()
            .enumerate()
            .map(|(g, _)| c[g * self.l..(g + 1) * self.l].iter().sum())
            .collect()
    }

    fn choose_factor(&self, c: &[u32], cstar: &[u32]) -> Rational {
        let mut acc = num_bigint::BigInt::one();
        for (total, part) in self.group_totals(c).iter().zip(self.group_totals(cstar)) {
            acc *= binomial(*total as usize, part as usize);
        }
        Rational::from_integer(acc)
    }

    pub fn sum_full(&self, table: &[Poly]) -> Poly {
        let mut acc = Poly::zero();
        for &i in &self.full {
            acc = acc.add(&table[i]);
        }
        acc
    }
}

/// Cached powers of one coefficient, truncated at the context's caps.
pub(crate) struct Powers {
    pows: Vec<Poly>,
}

impl Powers {
    fn new(base: &Poly, max: usize, caps: &BTreeMap<Symbol, u32>) -> Powers {
        let mut pows = Vec::with_capacity(max + 1);
        pows.push(Poly::one());
        for k in 1..=max {
            let mut next = pows[k - 1].mul(base);
            next.truncate(caps);
            pows.push(next);
        }
        Powers { pows }
    }

    fn get(&self, e: usize) -> &Poly {
        &self.pows[e]
    }
}

pub(crate) fn power_matrix(
    matrix: &[Vec<Poly>],
    kept: &[usize],
    max: usize,
    caps: &BTreeMap<Symbol, u32>,
) -> Vec<Vec<Powers>> {
    kept.iter()
        .map(|&i| {
            kept.iter()
                .map(|&j| Powers::new(&matrix[i][j], max, caps))
                .collect()
        })
        .collect()
}

pub(crate) fn power_vec(
    values: &[Poly],
    kept: &[usize],
    max: usize,
    caps: &BTreeMap<Symbol, u32>,
) -> Vec<Powers> {
    kept.iter()
        .map(|&i| Powers::new(&values[i], max, caps))
        .collect()
}

/// Builds the within-block weight table over the whole lattice: multinomials
/// per group times `W(C_i)^{t_i} * s_i^{C(t_i,2)} * prod_{i<j} r_ij^{t_i t_j}`
/// over cell totals.
pub(crate) fn build_inner_table(
    ctx: &DpContext,
    weight_pows: &[Powers],
    s_pows: &[Powers],
    pair_pows: &[Vec<Powers>],
) -> Vec<Poly> {
    ctx.configs
        .par_iter()
        .map(|c| {
            let t = ctx.cell_totals(c);
            let mut acc = Poly::one();
            for g in 0..ctx.group_sizes.len() {
                let part = &c[g * ctx.l..(g + 1) * ctx.l];
                let m = multinomial(part);
                if !m.is_one() {
                    acc = acc.scale(&Rational::from_integer(m));
                }
            }
            for (i, &ti) in t.iter().enumerate() {
                if ti == 0 {
                    continue;
                }
                acc = acc.mul(weight_pows[i].get(ti as usize));
                let pairs = (ti as usize) * (ti as usize - 1) / 2;
                if pairs > 0 {
                    acc = acc.mul(s_pows[i].get(pairs));
                }
                for (j, &tj) in t.iter().enumerate().skip(i + 1) {
                    if tj > 0 {
                        acc = acc.mul(pair_pows[i][j].get((ti * tj) as usize));
                    }
                }
                acc.truncate(&ctx.caps);
            }
            acc
        })
        .collect()
}

/// One DP layer extension: splits every configuration into an old part and a
/// new block, weighing the block by `inner` and the interaction by `cross`.
pub(crate) fn extend_layer(
    ctx: &DpContext,
    prev: &[Poly],
    inner: &[Poly],
    cross: &[Vec<Powers>],
) -> Vec<Poly> {
    ctx.configs
        .par_iter()
        .map(|c| {
            let mut acc = Poly::zero();
            // odometer over componentwise sub-configurations cstar <= c
            let mut cstar: Config = vec![0; c.len()];
            loop {
                let cbar: Config = c.iter().zip(&cstar).map(|(a, b)| a - b).collect();
                let prev_val = &prev[ctx.index[&cbar]];
                let inner_val = &inner[ctx.index[&cstar]];
                if !prev_val.is_zero() && !inner_val.is_zero() {
                    let tbar = ctx.cell_totals(&cbar);
                    let tstar = ctx.cell_totals(&cstar);
                    let mut term = prev_val.mul(inner_val);
                    for (i, &ti) in tbar.iter().enumerate() {
                        if ti == 0 {
                            continue;
                        }
                        for (j, &tj) in tstar.iter().enumerate() {
                            if tj > 0 {
                                term = term.mul(cross[i][j].get((ti * tj) as usize));
                            }
                        }
                        term.truncate(&ctx.caps);
                    }
                    acc = acc.add(&term.scale(&ctx.choose_factor(c, &cstar)));
                }
                // advance odometer
                let mut pos = 0;
                loop {
                    if pos == cstar.len() {
                        acc.truncate(&ctx.caps);
                        return acc;
                    }
                    cstar[pos] += 1;
                    if cstar[pos] <= c[pos] {
                        break;
                    }
                    cstar[pos] = 0;
                    pos += 1;
                }
            }
        })
        .collect()
}

/// Within-layer weight of a new block for a single evidence group, as used by
/// the layer DP: multinomial times cell weights, internal pair weights, and
/// cross-cell pair weights.
pub fn w_in(counts: &[u32], coeffs: &CellCoefficients) -> Poly {
    let mut acc = Poly::constant(Rational::from_integer(multinomial(counts)));
    for (i, &ci) in counts.iter().enumerate() {
        if ci == 0 {
            continue;
        }
        acc = acc.mul(&coeffs.cell_weight[i].pow(ci));
        let pairs = (ci as usize * (ci as usize - 1) / 2) as u32;
        if pairs > 0 {
            acc = acc.mul(&coeffs.s[i].pow(pairs));
        }
        for (j, &cj) in counts.iter().enumerate().skip(i + 1) {
            if cj > 0 {
                acc = acc.mul(&coeffs.r[i][j].pow(ci * cj));
            }
        }
    }
    acc
}

/// Weight between a new block and all earlier layers: no edge of the
/// distinguished relation may cross, in either direction.
pub fn w_cross(cbar: &[u32], cstar: &[u32], coeffs: &CellCoefficients) -> Poly {
    let mut acc = Poly::one();
    for (i, &ci) in cbar.iter().enumerate() {
        if ci == 0 {
            continue;
        }
        for (j, &cj) in cstar.iter().enumerate() {
            if cj > 0 {
                acc = acc.mul(&coeffs.r_nonadj[i][j].pow(ci * cj));
            }
        }
    }
    acc
}

fn max_pair_exponent(n: usize) -> usize {
    n * n
}

/// Plain weighted model count of a normalized sentence: the sum of
/// within-block weights over full configurations, with cardinality
/// extraction applied.
pub fn compute_wfomc(ns: &NormalizedSentence, n: usize) -> Result<Poly> {
    let space = enumerate_cells(ns);
    let coeffs = compute_coefficients_plain(ns, &space)?;
    let kept: Vec<usize> = (0..space.len()).collect();
    let ctx = DpContext::new(ns, n, &space, &kept)?;
    let max = max_pair_exponent(n);
    let weight_pows = power_vec(&coeffs.cell_weight, &kept, n, &ctx.caps);
    let s_pows = power_vec(&coeffs.s, &kept, max, &ctx.caps);
    let pair_pows = power_matrix(&coeffs.r, &kept, max, &ctx.caps);
    let table = build_inner_table(&ctx, &weight_pows, &s_pows, &pair_pows);
    Ok(ns.extract_at(&ctx.sum_full(&table), n))
}

/// The weighted model count as an exact rational; errors when symbols that
/// should have been extracted remain.
pub fn wfomc_value(ns: &NormalizedSentence, n: usize) -> Result<Rational> {
    compute_wfomc(ns, n)?
        .as_constant()
        .ok_or(Error::DegreeExceeded)
}

/// Computes the weak connectedness polynomial `f_n(u)` of the normalized
/// sentence for the relation: the unique degree-at-most-n polynomial with
/// `f_n(u) = sum over models of W(model) * (u+1)^(weak components)`.
pub fn compute_wcp(ns: &NormalizedSentence, n: usize, relation: PredId) -> Result<Poly> {
    compute_wcp_run(ns, n, relation).map(|r| r.poly)
}

pub fn compute_wcp_run(ns: &NormalizedSentence, n: usize, relation: PredId) -> Result<EngineRun> {
    if n < 1 {
        return Err(Error::DomainTooSmall);
    }
    ns.vocab.require_binary(relation)?;
    let space = enumerate_cells(ns);
    let coeffs = compute_coefficients(ns, &space, relation)?;
    let kept: Vec<usize> = (0..space.len()).collect();
    let ctx = DpContext::new(ns, n, &space, &kept)?;
    let max = max_pair_exponent(n);
    let weight_pows = power_vec(&coeffs.cell_weight, &kept, n, &ctx.caps);
    let s_pows = power_vec(&coeffs.s, &kept, max, &ctx.caps);
    let pair_pows = power_matrix(&coeffs.r, &kept, max, &ctx.caps);
    let cross_pows = power_matrix(&coeffs.r_nonadj, &kept, max, &ctx.caps);

    let inner = build_inner_table(&ctx, &weight_pows, &s_pows, &pair_pows);
    let usym = Symbol::new("u");
    let mut table = inner.clone();
    let mut points: Vec<(Rational, Poly)> = vec![(crate::poly::rat(0), ctx.sum_full(&table))];
    for u in 1..=n {
        table = extend_layer(&ctx, &table, &inner, &cross_pows);
        points.push((crate::poly::rat(u as i64), ctx.sum_full(&table)));
    }
    let f = interpolate_1d(&points, &usym, n)?;
    Ok(EngineRun {
        poly: ns.extract_at(&f, n),
        stats: EngineStats {
            cells: space.len(),
            configs: ctx.configs.len(),
            layers: n,
        },
    })
}

/// The bivariate extension: multiplies the relation's positive weight by the
/// symbol `v`, so each term carries `v` to the number of positive ground
/// literals (twice the edge count for a symmetric irreflexive relation).
/// Requires the closure clauses to be present.
pub fn compute_extended_wcp(ns: &NormalizedSentence, n: usize, relation: PredId) -> Result<Poly> {
    compute_extended_wcp_run(ns, n, relation).map(|r| r.poly)
}

pub fn compute_extended_wcp_run(
    ns: &NormalizedSentence,
    n: usize,
    relation: PredId,
) -> Result<EngineRun> {
    if n < 1 {
        return Err(Error::DomainTooSmall);
    }
    let space = enumerate_cells(ns);
    verify_closure(ns, &space, relation)?;
    let mut tagged = ns.clone();
    // degree in v cannot exceed one per non-reflexive ordered pair
    attach_edge_symbol(
        &mut tagged,
        relation,
        "v",
        NExpr::n().mul(&NExpr::n().sub(&NExpr::constant(1))),
    );
    compute_wcp_run(&tagged, n, relation)
}
