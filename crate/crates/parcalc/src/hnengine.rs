//! Slope polygons and the arithmetic constraint machinery around them.
//!
//! An [`HNPolygon`] is the numerical profile of a strictly-decreasing-slope
//! filtration: an ordered list of pieces `(rank, slope)` with strictly
//! decreasing rational slopes. On top of it this module provides
//!
//! * section-count bounds ([`rr_lower_bound`], [`clifford_h0_bound`]),
//! * a step-by-step rank-bound certificate ([`rank_chain_certify`]) whose
//!   inequalities are all recorded and individually checkable,
//! * the structural constraint report ([`hn_constraints_check`]): adjacent
//!   slope gaps at most 1, and for every middle index a pair of outer
//!   pieces whose rank product reaches `g + 1`,
//! * the pure counting shortcut [`semistable_forced`] (`rank^2 < 4(g+1)`
//!   leaves no room for a destabilizing profile), and
//! * an exhaustive enumerator of candidate polygons over a rational slope
//!   grid ([`enumerate_candidate_polygons`]).

use crate::rational::{qstr, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Failures of polygon construction and of the constraint engine's
/// preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HnError {
    #[error("invalid polygon: {detail}")]
    InvalidPolygon { detail: String },
    #[error("piece {index} has slope {slope}, outside the required window [0, {max}]")]
    SlopeOutOfRange { index: usize, slope: String, max: String },
    #[error("search space estimate {estimate} exceeds the cap {cap}; raise the cap or shrink the bounds")]
    CapExceeded { estimate: u128, cap: u64 },
    #[error("invalid enumeration bounds: {detail}")]
    BadBounds { detail: String },
}

/// One piece of a slope polygon: `rk` parallel units of slope `mu`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolygonPiece {
    pub rk: u32,
    #[serde(with = "qstr")]
    pub mu: Rational,
}

impl PolygonPiece {
    pub fn new(rk: u32, mu: Rational) -> PolygonPiece {
        PolygonPiece { rk, mu }
    }

    /// Degree carried by the piece: `rk * mu`.
    pub fn degree(&self) -> Rational {
        &self.mu * Rational::from_integer(BigInt::from(self.rk))
    }
}

/// A strictly-decreasing-slope profile with positive piece ranks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPolygon")]
pub struct HNPolygon {
    pieces: Vec<PolygonPiece>,
}

#[derive(Deserialize)]
struct RawPolygon {
    pieces: Vec<PolygonPiece>,
}

impl TryFrom<RawPolygon> for HNPolygon {
    type Error = HnError;
    fn try_from(r: RawPolygon) -> Result<HNPolygon, HnError> {
        HNPolygon::new(r.pieces)
    }
}

/// Checks the polygon shape conditions without building a polygon.
pub fn validate_pieces(pieces: &[PolygonPiece]) -> Result<(), HnError> {
    if pieces.is_empty() {
        return Err(HnError::InvalidPolygon { detail: "a polygon needs at least one piece".into() });
    }
    for (i, p) in pieces.iter().enumerate() {
        if p.rk == 0 {
            return Err(HnError::InvalidPolygon { detail: format!("piece {i} has rank 0") });
        }
    }
    for (i, w) in pieces.windows(2).enumerate() {
        if w[0].mu <= w[1].mu {
            return Err(HnError::InvalidPolygon {
                detail: format!("slopes must strictly decrease, but piece {} has mu {} followed by {}", i, w[0].mu, w[1].mu),
            });
        }
    }
    Ok(())
}

impl HNPolygon {
    pub fn new(pieces: Vec<PolygonPiece>) -> Result<HNPolygon, HnError> {
        validate_pieces(&pieces)?;
        Ok(HNPolygon { pieces })
    }

    pub fn pieces(&self) -> &[PolygonPiece] {
        &self.pieces
    }

    pub fn total_rank(&self) -> u64 {
        self.pieces.iter().map(|p| u64::from(p.rk)).sum()
    }

    pub fn degree(&self) -> Rational {
        self.pieces.iter().map(|p| p.degree()).sum()
    }
}

/// Euler-characteristic lower bound for the section count of a bundle of
/// the given degree and rank on a genus-`g` curve: `deg + (1 - g) * rk`.
pub fn rr_lower_bound(deg: &Rational, rk: u32, g: u32) -> Rational {
    deg + Rational::from_integer(BigInt::from(1 - i64::from(g))) * Rational::from_integer(BigInt::from(rk))
}

/// Upper bound for the section count of a bundle whose slope profile is
/// `p`, all slopes within `[0, 2g]`.
///
/// Each piece contributes its Euler characteristic when its slope exceeds
/// `2g - 2` (sections of such a piece are governed by vanishing of the
/// complementary cohomology) and the classical section bound
/// `deg/2 + rk` otherwise. The total never exceeds
/// `deg(p)/2 + total_rank(p)`, which is asserted.
pub fn clifford_h0_bound(p: &HNPolygon, g: u32) -> Result<Rational, HnError> {
    let upper = Rational::from_integer(BigInt::from(2 * i64::from(g)));
    for (i, piece) in p.pieces.iter().enumerate() {
        if piece.mu.is_negative() || piece.mu > upper {
            return Err(HnError::SlopeOutOfRange {
                index: i,
                slope: piece.mu.to_string(),
                max: upper.to_string(),
            });
        }
    }
    let threshold = Rational::from_integer(BigInt::from(2 * i64::from(g) - 2));
    let mut total = Rational::zero();
    for piece in &p.pieces {
        let deg = piece.degree();
        let rk = Rational::from_integer(BigInt::from(piece.rk));
        total += if piece.mu > threshold {
            // Euler-characteristic branch.
            &deg + Rational::from_integer(BigInt::from(1 - i64::from(g))) * &rk
        } else {
            // Section-bound branch.
            &deg / Rational::from_integer(BigInt::from(2)) + &rk
        };
    }
    let aggregate = p.degree() / Rational::from_integer(BigInt::from(2))
        + Rational::from_integer(BigInt::from(p.total_rank()));
    assert!(total <= aggregate, "per-piece bound must refine the aggregate bound");
    Ok(total)
}

/// Minimal rank forced on a bundle that is nowhere globally generated at a
/// general point, in terms of its slope position: `g + 1` when the slope
/// strictly exceeds `2g - 2`, and `g` at slope exactly `2g - 2`.
pub fn non_ggg_min_rank(g: u32, strict_slope: bool) -> u32 {
    if strict_slope {
        g + 1
    } else {
        g
    }
}

/// One recorded inequality of a certificate: `lhs REL rhs`, with the
/// verdict of the exact comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertLine {
    pub label: String,
    #[serde(with = "qstr")]
    pub lhs: Rational,
    pub relation: String,
    #[serde(with = "qstr")]
    pub rhs: Rational,
    pub holds: bool,
}

impl CertLine {
    fn le(label: &str, lhs: Rational, rhs: Rational) -> CertLine {
        let holds = lhs <= rhs;
        CertLine { label: label.to_string(), lhs, relation: "<=".to_string(), rhs, holds }
    }

    fn lt(label: &str, lhs: Rational, rhs: Rational) -> CertLine {
        let holds = lhs < rhs;
        CertLine { label: label.to_string(), lhs, relation: "<".to_string(), rhs, holds }
    }

    fn cmp(label: &str, lhs: Rational, rhs: Rational, strict: bool) -> CertLine {
        if strict {
            CertLine::lt(label, lhs, rhs)
        } else {
            CertLine::le(label, lhs, rhs)
        }
    }
}

/// Full transcript of the rank-bound derivation: the hypothesis checks, the
/// chained inequalities, and the concluding bound `rk V >= g*c - delta`
/// (strict `>` in the strict variant).
///
/// A violated hypothesis yields a certificate with `hypotheses_hold =
/// false` (and hence `passed = false`) rather than an error: the transcript
/// shows exactly which line failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankChainCertificate {
    pub strict: bool,
    /// Corank `c = rk V - rk U`.
    pub corank: u32,
    #[serde(with = "qstr")]
    pub section_bound_lhs: Rational,
    #[serde(with = "qstr")]
    pub section_bound_rhs: Rational,
    /// The concluded lower bound `g * c - delta` for `rk V`.
    pub final_bound: i64,
    pub hypotheses: Vec<CertLine>,
    pub chain: Vec<CertLine>,
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
    pub passed: bool,
}

/// Certifies the rank bound `rk V >= g*c - delta` from the section-count
/// comparison `deg V + (1-g) rk V <= deg U / 2 + rk U + delta`, where `U`
/// is a subsheaf of corank `c = rk V - rk U` whose slope sits in `[0, 2g]`
/// below the slope of `V`, and the slope of `V` is at least `2g - 2`
/// (strictly greater in the strict variant, which sharpens the conclusion
/// to `>`).
///
/// `rk_u = 0` encodes the no-subsheaf case: `mu_u` is ignored, the
/// section-bound right side is `delta` alone, and the conclusion reduces to
/// `delta >= (g - 1) rk V`.
pub fn rank_chain_certify(
    mu_v: &Rational,
    rk_v: u32,
    mu_u: &Rational,
    rk_u: u32,
    delta: u32,
    g: u32,
    strict: bool,
) -> RankChainCertificate {
    let int = |x: i64| Rational::from_integer(BigInt::from(x));
    let rkv = int(i64::from(rk_v));
    let rku = int(i64::from(rk_u));
    let d = int(i64::from(delta));
    let gg = int(i64::from(g));
    let two = int(2);
    let c = rk_v.saturating_sub(rk_u);
    let cq = int(i64::from(c));

    let deg_v = mu_v * &rkv;
    let deg_u = if rk_u > 0 { mu_u * &rku } else { Rational::zero() };

    let mut hypotheses = Vec::new();
    hypotheses.push(CertLine::cmp(
        "slope_window_lower",
        int(2 * i64::from(g) - 2),
        mu_v.clone(),
        strict,
    ));
    hypotheses.push(CertLine::le(
        "corank_positive",
        Rational::one(),
        cq.clone(),
    ));
    if rk_u > 0 {
        hypotheses.push(CertLine::le("sub_slope_nonnegative", Rational::zero(), mu_u.clone()));
        hypotheses.push(CertLine::le("sub_slope_at_most_2g", mu_u.clone(), int(2 * i64::from(g))));
        hypotheses.push(CertLine::le("sub_slope_below_slope", mu_u.clone(), mu_v.clone()));
    }
    let section_lhs = &deg_v + (Rational::one() - &gg) * &rkv;
    let section_rhs = &deg_u / &two + &rku + &d;
    hypotheses.push(CertLine::le("section_bound", section_lhs.clone(), section_rhs.clone()));

    // The derivation chain; each line is checked independently so a reader
    // can audit the transcript line by line.
    let mut chain = Vec::new();
    // Replace the U-terms using mu_u <= mu_v and rk_u = rk_v - c.
    chain.push(CertLine::le(
        "substitute_sub_bound",
        section_rhs.clone(),
        (mu_v / &two + Rational::one()) * (&rkv - &cq) + &d,
    ));
    // Rearranged form of the two lines above.
    chain.push(CertLine::le(
        "rearranged",
        (mu_v + &two) * &cq,
        (&two * &gg - mu_v) * &rkv + &two * &d,
    ));
    // Lower window: 2g <= mu_v + 2.
    chain.push(CertLine::le(
        "window_lower",
        &two * &gg * &cq,
        (mu_v + &two) * &cq,
    ));
    // Upper window: 2g - mu_v <= 2 (strict when the slope hypothesis is
    // strict), scaled by rk_v.
    chain.push(CertLine::cmp(
        "window_upper",
        (&two * &gg - mu_v) * &rkv + &two * &d,
        &two * &rkv + &two * &d,
        strict,
    ));
    // Collapse: 2g c <= 2 rk_v + 2 delta.
    chain.push(CertLine::cmp(
        "collapsed",
        &two * &gg * &cq,
        &two * &rkv + &two * &d,
        strict,
    ));

    let final_bound = i64::from(g) * i64::from(c) - i64::from(delta);
    let conclusion = CertLine::cmp("rank_bound", int(final_bound), rkv.clone(), strict);
    let conclusion_holds = conclusion.holds;
    chain.push(conclusion);

    let hypotheses_hold = hypotheses.iter().all(|l| l.holds);
    let passed = hypotheses_hold && chain.iter().all(|l| l.holds);
    RankChainCertificate {
        strict,
        corank: c,
        section_bound_lhs: section_lhs,
        section_bound_rhs: section_rhs,
        final_bound,
        hypotheses,
        chain,
        hypotheses_hold,
        conclusion_holds,
        passed,
    }
}

/// A witness pair for one middle index of the product condition: pieces
/// `j + 1` and `k` (1-based, `j < i < k`) whose rank product reaches
/// `g + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductWitness {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

/// Verdict of the structural constraints on a slope profile.
///
/// Indices are 1-based piece positions: a gap violation at `i` means the
/// drop from piece `i` to piece `i + 1` exceeds 1; a product failure at a
/// middle index `i` (`0 < i < m`) means no pieces `j + 1 <= i < k` have
/// rank product at least `g + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub gap_ok: bool,
    pub gap_violations: Vec<usize>,
    pub product_ok: bool,
    pub product_failures: Vec<usize>,
    pub product_witnesses: Vec<ProductWitness>,
    pub amgm_forced_semistable: bool,
}

/// True when a destabilizing profile is arithmetically impossible:
/// `rank^2 < 4 (g + 1)` leaves no pair of pieces with rank product
/// `g + 1`.
pub fn semistable_forced(total_rank: u64, g: u32) -> bool {
    u128::from(total_rank) * u128::from(total_rank) < 4 * (u128::from(g) + 1)
}

/// Checks the two structural constraints a genuine slope profile must
/// satisfy on a genus-`g` curve: adjacent slope gaps at most 1, and for
/// every middle index some outer rank product reaching `g + 1`. A
/// single-piece polygon passes vacuously.
pub fn hn_constraints_check(p: &HNPolygon, g: u32) -> ConstraintReport {
    let pieces = p.pieces();
    let m = pieces.len();
    let one = Rational::one();

    let mut gap_violations = Vec::new();
    for i in 0..m.saturating_sub(1) {
        if &pieces[i].mu - &pieces[i + 1].mu > one {
            gap_violations.push(i + 1);
        }
    }

    let target = u64::from(g) + 1;
    let mut product_failures = Vec::new();
    let mut product_witnesses = Vec::new();
    for i in 1..m {
        // 0-based split: left pieces 0..i, right pieces i..m.
        let mut found = None;
        'search: for a in 0..i {
            for b in i..m {
                if u64::from(pieces[a].rk) * u64::from(pieces[b].rk) >= target {
                    found = Some((a, b));
                    break 'search;
                }
            }
        }
        match found {
            Some((a, b)) => product_witnesses.push(ProductWitness { i, j: a, k: b + 1 }),
            None => product_failures.push(i),
        }
    }

    ConstraintReport {
        gap_ok: gap_violations.is_empty(),
        gap_violations,
        product_ok: product_failures.is_empty(),
        product_failures,
        product_witnesses,
        amgm_forced_semistable: semistable_forced(p.total_rank(), g),
    }
}

/// Knobs for [`enumerate_candidate_polygons`].
#[derive(Debug, Clone)]
pub struct EnumerateOptions {
    /// Refuse to start when the estimated search-space size exceeds this.
    pub cap: u64,
    /// Optional degree window: keep only translation classes with a grid
    /// representative whose degree lies in `[min, max]`.
    pub degree_window: Option<(Rational, Rational)>,
}

/// Default search-space cap for the enumerator (overridable per call, via
/// the CLI flag `--cap`, or the `PARCALC_CAP` environment variable).
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;

impl Default for EnumerateOptions {
    fn default() -> EnumerateOptions {
        EnumerateOptions { cap: DEFAULT_ENUMERATION_CAP, degree_window: None }
    }
}

/// All reduced rationals `p/q` with `1 <= q <= denom_bound` and
/// `|p/q| <= slope_bound`, in decreasing order.
fn slope_grid(denom_bound: u32, slope_bound: &Rational) -> Vec<Rational> {
    let mut set = std::collections::BTreeSet::new();
    for q in 1..=i64::from(denom_bound) {
        let limit = (slope_bound * Rational::from_integer(BigInt::from(q))).floor().to_integer();
        let mut p = -limit.clone();
        while p <= limit {
            set.insert(Rational::new(p.clone(), BigInt::from(q)));
            p += 1;
        }
    }
    set.into_iter().rev().collect()
}

/// Ordered compositions of `total` into at least two positive parts.
fn compositions_at_least_two(total: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            if current.len() >= 2 {
                out.push(current.clone());
            }
            return;
        }
        for part in 1..=rest {
            current.push(part);
            go(rest - part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(total, &mut Vec::new(), &mut out);
    out
}

/// The product condition evaluated on ranks alone (slope-independent).
fn ranks_pass_product(ranks: &[u32], g: u32) -> bool {
    let target = u64::from(g) + 1;
    let m = ranks.len();
    (1..m).all(|i| {
        let left = ranks[..i].iter().copied().max().unwrap_or(0);
        let right = ranks[i..].iter().copied().max().unwrap_or(0);
        u64::from(left) * u64::from(right) >= target
    })
}

/// Enumerates, up to simultaneous slope translation, every polygon with the
/// given total rank whose slopes lie on the grid of rationals bounded by
/// `denom_bound` and `slope_bound`, and which passes
/// [`hn_constraints_check`] (gap and product conditions).
///
/// Translation classes (same ranks, same slope gaps) are collapsed to a
/// single representative: the grid member whose degree is closest to zero
/// (ties resolved toward the non-negative side), or, when a degree window
/// is supplied, the closest-to-zero member inside the window. Output order
/// is lexicographic in (ranks, slopes) and is stable across runs.
///
/// Refuses with an estimate when the search space would exceed the cap.
pub fn enumerate_candidate_polygons(
    total_rank: u32,
    g: u32,
    denom_bound: u32,
    slope_bound: &Rational,
    opts: &EnumerateOptions,
) -> Result<Vec<HNPolygon>, HnError> {
    if total_rank == 0 {
        return Err(HnError::BadBounds { detail: "total rank must be positive".into() });
    }
    if denom_bound == 0 {
        return Err(HnError::BadBounds { detail: "denominator bound must be positive".into() });
    }
    if !slope_bound.is_positive() {
        return Err(HnError::BadBounds { detail: "slope bound must be positive".into() });
    }

    let grid = slope_grid(denom_bound, slope_bound);
    let viable: Vec<Vec<u32>> = compositions_at_least_two(total_rank)
        .into_iter()
        .filter(|ranks| ranks_pass_product(ranks, g))
        .collect();

    // Branching factor: the most grid points any half-open unit interval
    // (x - 1, x] can contain, which bounds the choices for each subsequent
    // slope.
    let one = Rational::one();
    let branch: u128 = grid
        .iter()
        .map(|x| grid.iter().filter(|y| **y < *x && x - *y <= one).count() as u128)
        .max()
        .unwrap_or(0);
    let mut estimate: u128 = 0;
    for ranks in &viable {
        let mut comb = grid.len() as u128;
        for _ in 1..ranks.len() {
            comb = comb.saturating_mul(branch);
        }
        estimate = estimate.saturating_add(comb);
    }
    if estimate > u128::from(opts.cap) {
        return Err(HnError::CapExceeded { estimate, cap: opts.cap });
    }

    // Keyed by translation class: (ranks, slope gaps) -> best representative.
    type ClassKey = (Vec<u32>, Vec<Rational>);
    let mut best: BTreeMap<ClassKey, (Rational, Vec<Rational>)> = BTreeMap::new();

    let in_window = |deg: &Rational| match &opts.degree_window {
        None => true,
        Some((lo, hi)) => deg >= lo && deg <= hi,
    };
    // Smaller |degree| wins; among equal magnitudes prefer the larger
    // (non-negative) degree.
    let better = |cand: &Rational, incumbent: &Rational| {
        let (ca, ia) = (cand.abs(), incumbent.abs());
        ca < ia || (ca == ia && cand > incumbent)
    };

    for ranks in &viable {
        let m = ranks.len();
        let mut slopes: Vec<Rational> = Vec::with_capacity(m);
        // Depth-first over grid slopes, each subsequent slope within
        // (prev - 1, prev).
        fn descend(
            grid: &[Rational],
            ranks: &[u32],
            slopes: &mut Vec<Rational>,
            start: usize,
            one: &Rational,
            in_window: &dyn Fn(&Rational) -> bool,
            better: &dyn Fn(&Rational, &Rational) -> bool,
            best: &mut BTreeMap<(Vec<u32>, Vec<Rational>), (Rational, Vec<Rational>)>,
        ) {
            let depth = slopes.len();
            if depth == ranks.len() {
                let deg: Rational = slopes
                    .iter()
                    .zip(ranks)
                    .map(|(mu, rk)| mu * Rational::from_integer(BigInt::from(*rk)))
                    .sum();
                if !in_window(&deg) {
                    return;
                }
                let gaps: Vec<Rational> =
                    slopes.windows(2).map(|w| &w[0] - &w[1]).collect();
                let key = (ranks.to_vec(), gaps);
                match best.get_mut(&key) {
                    Some((inc_deg, inc_slopes)) => {
                        if better(&deg, inc_deg) {
                            *inc_deg = deg;
                            *inc_slopes = slopes.clone();
                        }
                    }
                    None => {
                        best.insert(key, (deg, slopes.clone()));
                    }
                }
                return;
            }
            for (idx, mu) in grid.iter().enumerate().skip(start) {
                if depth > 0 {
                    let prev = &slopes[depth - 1];
                    if mu >= prev {
                        continue;
                    }
                    if prev - mu > *one {
                        break; // grid is sorted descending; gaps only grow
                    }
                }
                slopes.push(mu.clone());
                descend(grid, ranks, slopes, idx + 1, one, in_window, better, best);
                slopes.pop();
            }
        }
        descend(&grid, ranks, &mut slopes, 0, &one, &in_window, &better, &mut best);
    }

    let mut out: Vec<(Vec<u32>, Vec<Rational>)> =
        best.into_iter().map(|((ranks, _), (_, slopes))| (ranks, slopes)).collect();
    out.sort();
    out.into_iter()
        .map(|(ranks, slopes)| {
            HNPolygon::new(
                ranks
                    .into_iter()
                    .zip(slopes)
                    .map(|(rk, mu)| PolygonPiece::new(rk, mu))
                    .collect(),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, zero};

    fn polygon(data: &[(u32, Rational)]) -> HNPolygon {
        HNPolygon::new(data.iter().map(|(rk, mu)| PolygonPiece::new(*rk, mu.clone())).collect())
            .unwrap()
    }

    #[test]
    fn polygon_validation() {
        assert!(HNPolygon::new(vec![]).is_err());
        assert!(HNPolygon::new(vec![PolygonPiece::new(0, int(1))]).is_err());
        assert!(HNPolygon::new(vec![
            PolygonPiece::new(1, int(1)),
            PolygonPiece::new(1, int(1)),
        ])
        .is_err());
        let p = polygon(&[(2, int(1)), (1, rat(1, 2))]);
        assert_eq!(p.total_rank(), 3);
        assert_eq!(p.degree(), rat(5, 2));
    }

    #[test]
    fn polygon_json_round_trip() {
        let p = polygon(&[(2, rat(1, 2)), (2, rat(-1, 2))]);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"pieces":[{"rk":2,"mu":"1/2"},{"rk":2,"mu":"-1/2"}]}"#);
        let back: HNPolygon = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        // Non-decreasing slopes are rejected at the parse boundary.
        let bad = r#"{"pieces":[{"rk":1,"mu":"0"},{"rk":1,"mu":"0"}]}"#;
        assert!(serde_json::from_str::<HNPolygon>(bad).is_err());
    }

    #[test]
    fn rr_bound_values() {
        assert_eq!(rr_lower_bound(&int(3), 1, 2), int(2));
        assert_eq!(rr_lower_bound(&zero(), 5, 1), zero());
        assert_eq!(rr_lower_bound(&rat(7, 2), 2, 0), rat(11, 2));
    }

    #[test]
    fn clifford_single_pieces() {
        // Slope above 2g - 2 takes the Euler-characteristic branch.
        let p = polygon(&[(1, int(3))]);
        assert_eq!(clifford_h0_bound(&p, 2).unwrap(), int(2));
        // Slope at 2g - 2 takes the section-bound branch.
        let p = polygon(&[(1, int(2))]);
        assert_eq!(clifford_h0_bound(&p, 2).unwrap(), int(2));
        // Slope 0 contributes the rank, for any genus.
        for g in 0..4 {
            let p = polygon(&[(3, zero())]);
            assert_eq!(clifford_h0_bound(&p, g).unwrap(), int(3));
        }
    }

    #[test]
    fn clifford_mixed_profile_meets_aggregate() {
        // g = 2: pieces (1, 4) and (1, 2) give 3 + 2 = 5, equal to the
        // aggregate bound 6/2 + 2.
        let p = polygon(&[(1, int(4)), (1, int(2))]);
        assert_eq!(clifford_h0_bound(&p, 2).unwrap(), int(5));
    }

    #[test]
    fn clifford_rejects_out_of_window_slopes() {
        let p = polygon(&[(1, int(5))]);
        assert!(matches!(clifford_h0_bound(&p, 2), Err(HnError::SlopeOutOfRange { .. })));
        let p = polygon(&[(1, rat(-1, 2))]);
        assert!(matches!(clifford_h0_bound(&p, 2), Err(HnError::SlopeOutOfRange { .. })));
    }

    #[test]
    fn non_ggg_rank_floor() {
        assert_eq!(non_ggg_min_rank(2, true), 3);
        assert_eq!(non_ggg_min_rank(2, false), 2);
        assert_eq!(non_ggg_min_rank(0, true), 1);
        assert_eq!(non_ggg_min_rank(0, false), 0);
    }

    #[test]
    fn rank_chain_worked_example() {
        // g = 2, mu_v = 2, rk_v = 3, mu_u = 2, rk_u = 2, delta = 0.
        let cert = rank_chain_certify(&int(2), 3, &int(2), 2, 0, 2, false);
        assert!(cert.hypotheses_hold);
        assert!(cert.passed);
        assert_eq!(cert.corank, 1);
        assert_eq!(cert.final_bound, 2);
        assert_eq!(cert.section_bound_lhs, int(3));
        assert_eq!(cert.section_bound_rhs, int(4));
    }

    #[test]
    fn rank_chain_no_subsheaf_case() {
        // rk_u = 0: the comparison degenerates to delta >= (g-1) rk_v.
        let cert = rank_chain_certify(&int(2), 4, &zero(), 0, 4, 2, false);
        assert!(cert.passed);
        assert_eq!(cert.final_bound, 2 * 4 - 4);
        assert_eq!(cert.section_bound_rhs, int(4));
        // delta too small: the section bound itself fails.
        let cert = rank_chain_certify(&int(2), 4, &zero(), 0, 3, 2, false);
        assert!(!cert.hypotheses_hold);
        assert!(!cert.passed);
    }

    #[test]
    fn rank_chain_strictness() {
        // At slope exactly 2g - 2 the strict variant's slope hypothesis
        // fails while the non-strict one passes.
        let lax = rank_chain_certify(&int(2), 3, &int(1), 2, 1, 2, false);
        assert!(lax.passed);
        assert_eq!(lax.final_bound, 1);
        let strict = rank_chain_certify(&int(2), 3, &int(1), 2, 1, 2, true);
        assert!(!strict.hypotheses_hold);
        // Above the threshold, the strict variant concludes a strict bound.
        let strict = rank_chain_certify(&rat(5, 2), 4, &int(1), 2, 4, 2, true);
        assert!(strict.hypotheses_hold, "{:#?}", strict.hypotheses);
        assert!(strict.passed);
        assert_eq!(strict.final_bound, 0);
        assert_eq!(strict.chain.last().unwrap().relation, "<");
    }

    #[test]
    fn rank_chain_genus_zero_is_trivial() {
        let cert = rank_chain_certify(&int(-2), 1, &zero(), 0, 0, 0, false);
        assert!(cert.passed);
        assert_eq!(cert.final_bound, 0);
    }

    #[test]
    fn rank_chain_reports_failed_hypothesis() {
        // Slope below the window.
        let cert = rank_chain_certify(&zero(), 3, &zero(), 2, 0, 2, false);
        assert!(!cert.hypotheses_hold);
        let failed: Vec<&str> = cert
            .hypotheses
            .iter()
            .filter(|l| !l.holds)
            .map(|l| l.label.as_str())
            .collect();
        assert!(failed.contains(&"slope_window_lower"));
    }

    #[test]
    fn constraint_report_two_piece_pass() {
        let p = polygon(&[(2, rat(1, 2)), (2, rat(-1, 2))]);
        let rep = hn_constraints_check(&p, 2);
        assert!(rep.gap_ok);
        assert!(rep.product_ok);
        assert_eq!(rep.product_witnesses, vec![ProductWitness { i: 1, j: 0, k: 2 }]);
        assert!(!rep.amgm_forced_semistable);
    }

    #[test]
    fn constraint_report_failures() {
        // Rank product too small for g = 2.
        let p = polygon(&[(1, rat(1, 2)), (2, rat(-1, 2))]);
        let rep = hn_constraints_check(&p, 2);
        assert!(!rep.product_ok);
        assert_eq!(rep.product_failures, vec![1]);
        // Gap of 3/2 violates the unit bound.
        let p = polygon(&[(2, int(1)), (2, rat(-1, 2))]);
        let rep = hn_constraints_check(&p, 2);
        assert!(!rep.gap_ok);
        assert_eq!(rep.gap_violations, vec![1]);
        assert!(rep.product_ok);
    }

    #[test]
    fn constraint_report_middle_indices() {
        // Three pieces: both split positions need a product witness.
        let p = polygon(&[(3, int(1)), (1, rat(1, 2)), (3, zero())]);
        let rep = hn_constraints_check(&p, 8);
        assert!(rep.product_ok); // 3 * 3 = 9 >= 9 at both splits
        assert_eq!(
            rep.product_witnesses,
            vec![ProductWitness { i: 1, j: 0, k: 3 }, ProductWitness { i: 2, j: 0, k: 3 }]
        );
        let rep = hn_constraints_check(&p, 9);
        assert!(!rep.product_ok); // target 10 beats every pair
        assert_eq!(rep.product_failures, vec![1, 2]);
    }

    #[test]
    fn semistable_forced_threshold() {
        assert!(semistable_forced(3, 2)); // 9 < 12
        assert!(!semistable_forced(4, 2)); // 16 >= 12
        assert!(semistable_forced(3, 3)); // 9 < 16
        assert!(!semistable_forced(4, 3)); // 16 = 16
        assert!(!semistable_forced(2, 0)); // 4 = 4
        assert!(semistable_forced(1, 0)); // 1 < 4
    }

    #[test]
    fn enumerate_empty_below_amgm_threshold() {
        let out = enumerate_candidate_polygons(3, 2, 2, &int(2), &EnumerateOptions::default())
            .unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn enumerate_finds_balanced_witness() {
        let out = enumerate_candidate_polygons(4, 2, 2, &int(2), &EnumerateOptions::default())
            .unwrap();
        assert!(!out.is_empty());
        let witness = polygon(&[(2, rat(1, 2)), (2, rat(-1, 2))]);
        assert!(out.contains(&witness), "expected the degree-0 balanced witness; got {out:?}");
        // Everything returned passes the constraint check.
        for p in &out {
            let rep = hn_constraints_check(p, 2);
            assert!(rep.gap_ok && rep.product_ok);
            assert_eq!(p.total_rank(), 4);
        }
    }

    #[test]
    fn enumerate_is_deterministic() {
        let a = enumerate_candidate_polygons(4, 2, 3, &int(2), &EnumerateOptions::default())
            .unwrap();
        let b = enumerate_candidate_polygons(4, 2, 3, &int(2), &EnumerateOptions::default())
            .unwrap();
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_by(|x, y| {
            let kx: (Vec<u32>, Vec<Rational>) = (
                x.pieces().iter().map(|p| p.rk).collect(),
                x.pieces().iter().map(|p| p.mu.clone()).collect(),
            );
            let ky: (Vec<u32>, Vec<Rational>) = (
                y.pieces().iter().map(|p| p.rk).collect(),
                y.pieces().iter().map(|p| p.mu.clone()).collect(),
            );
            kx.cmp(&ky)
        });
        assert_eq!(a, sorted, "output must arrive already sorted");
    }

    #[test]
    fn enumerate_respects_degree_window() {
        let opts = EnumerateOptions {
            degree_window: Some((zero(), zero())),
            ..EnumerateOptions::default()
        };
        let out = enumerate_candidate_polygons(4, 2, 2, &int(2), &opts).unwrap();
        for p in &out {
            assert_eq!(p.degree(), zero());
        }
        assert!(out.contains(&polygon(&[(2, rat(1, 2)), (2, rat(-1, 2))])));
    }

    #[test]
    fn enumerate_refuses_over_cap() {
        let opts = EnumerateOptions { cap: 1, ..EnumerateOptions::default() };
        let err = enumerate_candidate_polygons(4, 2, 4, &int(3), &opts).unwrap_err();
        match err {
            HnError::CapExceeded { estimate, cap } => {
                assert!(estimate > 1);
                assert_eq!(cap, 1);
            }
            other => panic!("expected CapExceeded, got {other:?}"),
        }
    }

    #[test]
    fn enumerate_rejects_bad_bounds() {
        assert!(enumerate_candidate_polygons(0, 2, 2, &int(2), &EnumerateOptions::default()).is_err());
        assert!(enumerate_candidate_polygons(4, 2, 0, &int(2), &EnumerateOptions::default()).is_err());
        assert!(enumerate_candidate_polygons(4, 2, 2, &int(-1), &EnumerateOptions::default()).is_err());
    }

    #[test]
    fn gap_condition_matches_twisted_hom_slope() {
        // The unit-gap condition between adjacent polygon slopes is the
        // numerical shadow of a slope bound on the twisted Hom sheaf:
        // realize each slope p/q as a rank-q, degree-p sheaf with trivial
        // weights, form Hom(F, G) = dual(F) (x) G with the actual sheaf
        // operations, and compare.
        use crate::parabolic::{dual_shell, serre_twist, tensor_shell, MarkedCurve, ParabolicShell};
        let curve = MarkedCurve::new(2, 1);
        let twist_bound = int(2 * 2 - 1 + 1); // 2g - 1 + n
        let realize = |mu: &Rational| {
            let q = u32::try_from(mu.denom().clone()).unwrap();
            let p = i64::try_from(mu.numer().clone()).unwrap();
            ParabolicShell::trivial(q, p, curve).unwrap()
        };
        let cases = [
            (rat(1, 2), rat(-1, 4)), // gap 3/4
            (rat(1, 2), rat(-1, 2)), // gap 1
            (rat(1, 4), int(-1)),    // gap 5/4
            (int(2), rat(3, 2)),     // gap 1/2
        ];
        for (mu_f, mu_g) in cases {
            let f = realize(&mu_f);
            let g = realize(&mu_g);
            let hom = tensor_shell(&dual_shell(&f).unwrap(), &g).unwrap();
            assert_eq!(hom.par_slope(), &mu_g - &mu_f);
            let twisted = serre_twist(&hom).unwrap();
            let gap = &mu_f - &mu_g;
            let poly = polygon(&[(1, mu_f.clone()), (1, mu_g.clone())]);
            let rep = hn_constraints_check(&poly, 2);
            let unit_gap = gap <= Rational::one();
            assert_eq!(rep.gap_ok, unit_gap);
            assert_eq!(hom.par_slope() >= -Rational::one(), unit_gap);
            assert_eq!(twisted.par_slope() <= twist_bound, unit_gap);
        }
    }

    #[test]
    fn amgm_consistency_small_grid() {
        // Below the threshold the enumerator must return nothing; at the
        // first admissible rank the near-even split provides a witness.
        for g in 0..=6u32 {
            let mut r = 2u32;
            while semistable_forced(u64::from(r), g) {
                for denom in 1..=3u32 {
                    let out = enumerate_candidate_polygons(
                        r,
                        g,
                        denom,
                        &int(3),
                        &EnumerateOptions::default(),
                    )
                    .unwrap();
                    assert!(out.is_empty(), "g={g} rank={r} denom={denom} should be empty");
                }
                r += 1;
            }
            let out =
                enumerate_candidate_polygons(r, g, 2, &int(3), &EnumerateOptions::default())
                    .unwrap();
            assert!(!out.is_empty(), "g={g} first admissible rank {r} should be non-empty");
            let hi = r.div_ceil(2);
            let lo = r / 2;
            assert!(
                out.iter().any(|p| {
                    let ranks: Vec<u32> = p.pieces().iter().map(|q| q.rk).collect();
                    let gap_one = p.pieces().len() == 2
                        && &p.pieces()[0].mu - &p.pieces()[1].mu == int(1);
                    ranks == vec![hi, lo] && gap_one
                }),
                "g={g} rank={r}: expected the ({hi},{lo}) unit-gap witness"
            );
        }
    }
}
