//! The grid DP producing the strong-connectedness polynomials: the
//! non-strict polynomial weighs each model by the non-strict directed
//! chromatic polynomial of the relation's graph at `v + 1`, the strict one by
//! the strict directed chromatic polynomial.
//!
//! Conceptually the 1-types replicate over a `(v+1) x (u+1)` grid of labels.
//! Within one grid cell edges are free; within a column edges may only point
//! from lower to higher rows (strictly higher in strict mode, where the cell
//! itself also forbids internal and reflexive edges); across columns edges
//! are forbidden entirely. The DP therefore runs a vertical pass per row and
//! a horizontal pass per column, reusing the blocked-extension machinery of
//! the layer engine. All columns carry identical weights, so a single
//! vertical table is stored and reused for every column.

use crate::cells::{
    compute_coefficients, enumerate_cells, CellCoefficients, CellSpace,
};
use crate::error::{Error, Result};
use crate::fol::PredId;
use crate::normalize::NormalizedSentence;
use crate::poly::{
    interpolate_1d, interpolate_2d, multinomial, rat, Poly, Rational, Symbol,
};
use crate::wcp::{
    build_inner_table, extend_layer, power_matrix, power_vec, DpContext, EngineRun, EngineStats,
};

/// Strict mode excludes reflexive edges and edges within one grid cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScpMode {
    NonStrict,
    Strict,
}

/// Weight of a new block in the vertical pass. In non-strict mode this is
/// the ordinary within-layer weight; in strict mode cells carrying a
/// reflexive edge admit no elements and all internal pair weights forbid the
/// relation in both directions.
pub fn w_in_vertical(counts: &[u32], coeffs: &CellCoefficients, mode: ScpMode) -> Poly {
    if mode == ScpMode::NonStrict {
        return crate::wcp::w_in(counts, coeffs);
    }
    if counts
        .iter()
        .enumerate()
        .any(|(i, &c)| c > 0 && coeffs.has_loop[i])
    {
        return Poly::zero();
    }
    let mut acc = Poly::constant(Rational::from_integer(multinomial(counts)));
    for (i, &ci) in counts.iter().enumerate() {
        if ci == 0 {
            continue;
        }
        acc = acc.mul(&coeffs.cell_weight[i].pow(ci));
        let pairs = (ci as usize * (ci as usize - 1) / 2) as u32;
        if pairs > 0 {
            acc = acc.mul(&coeffs.s_nonadj[i].pow(pairs));
        }
        for (j, &cj) in counts.iter().enumerate().skip(i + 1) {
            if cj > 0 {
                acc = acc.mul(&coeffs.r_nonadj[i][j].pow(ci * cj));
            }
        }
    }
    acc
}

struct GridEngine {
    ctx: DpContext,
    inner: Vec<Poly>,
    arrow_pows: Vec<Vec<crate::wcp::Powers>>,
    nonadj_pows: Vec<Vec<crate::wcp::Powers>>,
    cells: usize,
}

fn grid_engine(
    ns: &NormalizedSentence,
    n: usize,
    relation: PredId,
    mode: ScpMode,
) -> Result<GridEngine> {
    if n < 1 {
        return Err(Error::DomainTooSmall);
    }
    ns.vocab.require_binary(relation)?;
    let space: CellSpace = enumerate_cells(ns);
    let coeffs = compute_coefficients(ns, &space, relation)?;
    // strict mode prunes cells with a reflexive edge of the relation
    let kept: Vec<usize> = (0..space.len())
        .filter(|&i| mode == ScpMode::NonStrict || !coeffs.has_loop[i])
        .collect();
    let ctx = DpContext::new(ns, n, &space, &kept)?;
    let max = n * n;
    let weight_pows = power_vec(&coeffs.cell_weight, &kept, n, &ctx.caps);
    let (s_like, pair_like) = match mode {
        ScpMode::NonStrict => (&coeffs.s, &coeffs.r),
        ScpMode::Strict => (&coeffs.s_nonadj, &coeffs.r_nonadj),
    };
    let s_pows = power_vec(s_like, &kept, max, &ctx.caps);
    let pair_pows = power_matrix(pair_like, &kept, max, &ctx.caps);
    let inner = build_inner_table(&ctx, &weight_pows, &s_pows, &pair_pows);
    let arrow_pows = power_matrix(&coeffs.r_arrow, &kept, max, &ctx.caps);
    let nonadj_pows = power_matrix(&coeffs.r_nonadj, &kept, max, &ctx.caps);
    Ok(GridEngine {
        ctx,
        inner,
        arrow_pows,
        nonadj_pows,
        cells: space.len(),
    })
}

fn compute_scp_run(
    ns: &NormalizedSentence,
    n: usize,
    relation: PredId,
    mode: ScpMode,
) -> Result<EngineRun> {
    let engine = grid_engine(ns, n, relation, mode)?;
    let GridEngine {
        ctx,
        inner,
        arrow_pows,
        nonadj_pows,
        cells,
    } = engine;
    let (usym, vsym) = (Symbol::new("u"), Symbol::new("v"));
    let mut triples: Vec<(Rational, Rational, Poly)> = Vec::with_capacity((n + 1) * (n + 1));
    let mut layers = 0usize;
    let mut vertical = inner.clone();
    for v in 0..=n {
        if v > 0 {
            vertical = extend_layer(&ctx, &vertical, &inner, &arrow_pows);
            layers += 1;
        }
        let mut horizontal = vertical.clone();
        triples.push((rat(0), rat(v as i64), ctx.sum_full(&horizontal)));
        for u in 1..=n {
            horizontal = extend_layer(&ctx, &horizontal, &vertical, &nonadj_pows);
            layers += 1;
            triples.push((rat(u as i64), rat(v as i64), ctx.sum_full(&horizontal)));
        }
    }
    let g = interpolate_2d(&triples, &usym, &vsym, n, n)?;
    Ok(EngineRun {
        poly: ns.extract_at(&g, n),
        stats: EngineStats {
            cells,
            configs: ctx.configs.len(),
            layers,
        },
    })
}

/// Non-strict connectedness polynomial: `sum over models of
/// W * (u+1)^(weak components) * nonstrict_chromatic(v+1)`.
pub fn compute_nscp(ns: &NormalizedSentence, n: usize, relation: PredId) -> Result<Poly> {
    compute_nscp_run(ns, n, relation).map(|r| r.poly)
}

pub fn compute_nscp_run(ns: &NormalizedSentence, n: usize, relation: PredId) -> Result<EngineRun> {
    compute_scp_run(ns, n, relation, ScpMode::NonStrict)
}

/// Strict connectedness polynomial: as the non-strict one but with the
/// strict directed chromatic polynomial.
pub fn compute_sscp(ns: &NormalizedSentence, n: usize, relation: PredId) -> Result<Poly> {
    compute_sscp_run(ns, n, relation).map(|r| r.poly)
}

pub fn compute_sscp_run(ns: &NormalizedSentence, n: usize, relation: PredId) -> Result<EngineRun> {
    compute_scp_run(ns, n, relation, ScpMode::Strict)
}

pub fn compute_scp(
    ns: &NormalizedSentence,
    n: usize,
    relation: PredId,
    mode: ScpMode,
) -> Result<Poly> {
    compute_scp_run(ns, n, relation, mode).map(|r| r.poly)
}

/// The `u = 0` column of the strict polynomial, `g_n(0, v)`, as a univariate
/// polynomial in `v`. Point queries at `u = 0` (acyclicity-style axioms)
/// need only the vertical passes, skipping the horizontal work entirely.
pub fn compute_sscp_u0(ns: &NormalizedSentence, n: usize, relation: PredId) -> Result<Poly> {
    compute_scp_u0(ns, n, relation, ScpMode::Strict)
}

/// The `u = 0` column of either polynomial.
pub fn compute_scp_u0(
    ns: &NormalizedSentence,
    n: usize,
    relation: PredId,
    mode: ScpMode,
) -> Result<Poly> {
    let engine = grid_engine(ns, n, relation, mode)?;
    let GridEngine {
        ctx, inner, arrow_pows, ..
    } = engine;
    let vsym = Symbol::new("v");
    let mut vertical = inner.clone();
    let mut points: Vec<(Rational, Poly)> = vec![(rat(0), ctx.sum_full(&vertical))];
    for v in 1..=n {
        vertical = extend_layer(&ctx, &vertical, &inner, &arrow_pows);
        points.push((rat(v as i64), ctx.sum_full(&vertical)));
    }
    let g0 = interpolate_1d(&points, &vsym, n)?;
    Ok(ns.extract_at(&g0, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::parse_sentence;
    use crate::normalize::normalize;
    use crate::oracle;
    use crate::wcp::compute_wcp;
    use std::collections::BTreeMap;

    const DG: &str = "forall x. ~R(x,x)";

    fn dg_setup() -> (NormalizedSentence, PredId) {
        let s = parse_sentence(DG).unwrap();
        let r = s.vocab.lookup("R").unwrap();
        (normalize(&s).unwrap(), r)
    }

    fn shifted_u(p: &Poly) -> Poly {
        let u = Symbol::new("u");
        p.subst(&u, &Poly::var(u.clone()).sub(&Poly::one()))
    }

    fn coeff(p: &Poly, du: u32, dv: u32) -> Rational {
        p.coefficient(&[(Symbol::new("u"), du), (Symbol::new("v"), dv)])
    }

    #[test]
    fn vertical_block_weights_of_digraphs() {
        let (ns, r) = dg_setup();
        let space = enumerate_cells(&ns);
        let coeffs = compute_coefficients(&ns, &space, r).unwrap();
        assert_eq!(
            w_in_vertical(&[0], &coeffs, ScpMode::Strict)
                .as_constant()
                .unwrap(),
            rat(1)
        );
        assert_eq!(
            w_in_vertical(&[2], &coeffs, ScpMode::NonStrict)
                .as_constant()
                .unwrap(),
            rat(4)
        );
        assert_eq!(
            w_in_vertical(&[2], &coeffs, ScpMode::Strict)
                .as_constant()
                .unwrap(),
            rat(1)
        );
    }

    #[test]
    fn nscp_of_digraphs_matches_reported_rows() {
        let (ns, r) = dg_setup();
        // n=1: u + uv
        let g1 = shifted_u(&compute_nscp(&ns, 1, r).unwrap());
        assert_eq!(coeff(&g1, 1, 0), rat(1));
        assert_eq!(coeff(&g1, 1, 1), rat(1));
        assert_eq!(g1.num_terms(), 2);
        // n=2: 3u + 4uv + uv^2 + 2u^2v + u^2v^2 + u^2
        let g2 = shifted_u(&compute_nscp(&ns, 2, r).unwrap());
        for (du, dv, c) in [
            (1, 0, 3),
            (1, 1, 4),
            (1, 2, 1),
            (2, 1, 2),
            (2, 2, 1),
            (2, 0, 1),
        ] {
            assert_eq!(coeff(&g2, du, dv), rat(c), "u^{du} v^{dv}");
        }
        assert_eq!(g2.num_terms(), 6);
    }

    #[test]
    fn sscp_of_digraphs_matches_reported_rows() {
        let (ns, r) = dg_setup();
        // n=2: uv + uv^2 + 2u^2v + u^2v^2 + u^2
        let g2 = shifted_u(&compute_sscp(&ns, 2, r).unwrap());
        for (du, dv, c) in [(1, 1, 1), (1, 2, 1), (2, 1, 2), (2, 2, 1), (2, 0, 1)] {
            assert_eq!(coeff(&g2, du, dv), rat(c), "u^{du} v^{dv}");
        }
        assert_eq!(g2.num_terms(), 5);
    }

    #[test]
    fn scp_agrees_with_oracle_up_to_three() {
        let s = parse_sentence(DG).unwrap();
        let (ns, r) = dg_setup();
        for n in 1..=3 {
            assert_eq!(
                compute_nscp(&ns, n, r).unwrap(),
                oracle::scp_by_enumeration(&s, n, r, false).unwrap(),
                "nscp n={n}"
            );
            assert_eq!(
                compute_sscp(&ns, n, r).unwrap(),
                oracle::scp_by_enumeration(&s, n, r, true).unwrap(),
                "sscp n={n}"
            );
        }
    }

    #[test]
    fn weighted_two_cell_sentence_agrees_with_oracle() {
        let text = "predicate R/2, S/1\nweight R = 2, 1\nweight S = 1, -1\nsentence: forall x. forall y. (R(x,y) -> S(y))";
        let s = parse_sentence(text).unwrap();
        let r = s.vocab.lookup("R").unwrap();
        let ns = normalize(&s).unwrap();
        for n in 1..=3 {
            assert_eq!(
                compute_nscp(&ns, n, r).unwrap(),
                oracle::scp_by_enumeration(&s, n, r, false).unwrap(),
                "nscp n={n}"
            );
            assert_eq!(
                compute_sscp(&ns, n, r).unwrap(),
                oracle::scp_by_enumeration(&s, n, r, true).unwrap(),
                "sscp n={n}"
            );
        }
    }

    #[test]
    fn nscp_at_v_zero_is_the_wcp() {
        let (ns, r) = dg_setup();
        for n in 1..=3 {
            let g = compute_nscp(&ns, n, r).unwrap();
            let mut v0 = BTreeMap::new();
            v0.insert(Symbol::new("v"), rat(0));
            assert_eq!(g.eval(&v0), compute_wcp(&ns, n, r).unwrap(), "n={n}");
        }
    }

    #[test]
    fn sscp_at_v_zero_counts_edgeless_models() {
        // strict one-coloring exists exactly when the relation is empty
        let (ns, r) = dg_setup();
        let s_empty = parse_sentence(&format!("sentence: {DG}\ncardinality: |R| = 0")).unwrap();
        let ns_empty = normalize(&s_empty).unwrap();
        for n in 1..=3 {
            let g = compute_sscp(&ns, n, r).unwrap();
            let mut v0 = BTreeMap::new();
            v0.insert(Symbol::new("v"), rat(0));
            assert_eq!(
                g.eval(&v0),
                compute_wcp(&ns_empty, n, r).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn u0_column_matches_full_polynomial() {
        let (ns, r) = dg_setup();
        for n in 1..=3 {
            let full = compute_sscp(&ns, n, r).unwrap();
            let column = compute_sscp_u0(&ns, n, r).unwrap();
            let mut u0 = BTreeMap::new();
            u0.insert(Symbol::new("u"), rat(0));
            assert_eq!(full.eval(&u0), column, "n={n}");
        }
    }

    #[test]
    fn per_variable_degrees_are_bounded_by_n() {
        let (ns, r) = dg_setup();
        for n in 1..=3 {
            let g = compute_nscp(&ns, n, r).unwrap();
            assert!(g.degree(&Symbol::new("u")) as usize <= n);
            assert!(g.degree(&Symbol::new("v")) as usize <= n);
        }
    }
}
