//! Weighted flags on marked curves and their degree calculus.
//!
//! A *shell* ([`ParabolicShell`]) records the numerical data of a vector
//! bundle with weighted flags at the marked points of a curve: rank, degree
//! of the underlying bundle, and for each marked point a strictly increasing
//! list of rational weights in `[0, 1)` with multiplicities summing to the
//! rank. The weighted degree and slope, and the tensor / dual / shift /
//! twist operations, are computed exactly at this level.
//!
//! An [`ExplicitParabolicBundle`] adds actual flag subspaces in coordinate
//! fibers, which is enough to *induce* weighted structures on a subbundle
//! datum and on the corresponding quotient; the induced structures satisfy
//! the degree additivity law `deg(E) = deg(sub) + deg(quot)` on the nose.

use crate::exactlin::{self, ExactLinError, Subspace};
use crate::rational::{frac_part, parse_rational, qstr, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Everything that can go wrong while building or combining weighted-flag
/// data. Variants are structural (invalid data) or preconditions (valid
/// data fed to an operation outside its domain).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParabolicError {
    #[error("rank must be positive")]
    ZeroRank,
    #[error("curve has {expected} marked points but {got} weight lists were given")]
    PointCountMismatch { expected: usize, got: usize },
    #[error("weight {w} at point {point} is outside [0, 1)")]
    WeightOutOfRange { point: usize, w: String },
    #[error("weights at point {point} are not strictly increasing")]
    WeightsNotIncreasing { point: usize },
    #[error("weight multiplicity at point {point} must be positive")]
    ZeroMultiplicity { point: usize },
    #[error("multiplicities at point {point} sum to {got}, expected rank {expected}")]
    MultiplicitySum { point: usize, expected: u32, got: u64 },
    #[error("shells live on different curves")]
    CurveMismatch,
    #[error("rank product overflows")]
    RankOverflow,
    #[error("degree arithmetic overflows the representable range")]
    DegreeOverflow,
    #[error("shift amount {t} is negative; only shifts by t >= 0 are supported")]
    NegativeShift { t: String },
    #[error("flag chain at point {point} has {got} steps, expected {expected}")]
    FlagChainLength { point: usize, expected: usize, got: usize },
    #[error("flag subspace at point {point} lives in ambient dimension {got}, expected {expected}")]
    FlagAmbient { point: usize, expected: usize, got: usize },
    #[error("flag chain at point {point} must start with the full fiber")]
    FlagNotFull { point: usize },
    #[error("flag chain at point {point} must end with the zero subspace")]
    FlagNotZero { point: usize },
    #[error("flag chain at point {point} is not nested at step {step}")]
    FlagNotNested { point: usize, step: usize },
    #[error("flag chain at point {point} drops dimension {got} at step {step}, expected multiplicity {expected}")]
    FlagDropMismatch { point: usize, step: usize, expected: u32, got: usize },
    #[error("sub-rank {sub_rank} must satisfy 0 < sub_rank < rank {rank}")]
    SubrankOutOfRange { sub_rank: u32, rank: u32 },
    #[error("subbundle fiber at point {point} has dimension {got}, expected sub-rank {expected}")]
    FiberDim { point: usize, expected: u32, got: usize },
    #[error("subbundle datum has {got} fibers, expected one per marked point ({expected})")]
    FiberCount { expected: usize, got: usize },
    #[error("rational entry {entry:?} is malformed: {detail}")]
    BadRationalEntry { entry: String, detail: String },
    #[error(transparent)]
    Lin(#[from] ExactLinError),
}

/// A smooth projective curve of genus `g` with `n` ordered marked points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedCurve {
    pub g: u32,
    pub n: u32,
}

impl MarkedCurve {
    pub fn new(g: u32, n: u32) -> MarkedCurve {
        MarkedCurve { g, n }
    }

    /// Negative-Euler-characteristic test: genus at least 2, or genus 1
    /// with at least one marked point, or genus 0 with at least three.
    pub fn is_hyperbolic(&self) -> bool {
        self.g >= 2 || (self.g == 1 && self.n > 0) || (self.g == 0 && self.n > 2)
    }
}

/// One weight step at a marked point: weight `w` with multiplicity `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedStep {
    #[serde(with = "qstr")]
    pub w: Rational,
    pub m: u32,
}

impl WeightedStep {
    pub fn new(w: Rational, m: u32) -> WeightedStep {
        WeightedStep { w, m }
    }
}

/// The weight data at a single marked point: strictly increasing weights in
/// `[0, 1)` whose multiplicities sum to the rank of the ambient shell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointWeights(pub Vec<WeightedStep>);

impl PointWeights {
    /// The single step `(0, rank)` — the structure every plain bundle
    /// carries.
    pub fn trivial(rank: u32) -> PointWeights {
        PointWeights(vec![WeightedStep::new(Rational::zero(), rank)])
    }

    pub fn steps(&self) -> &[WeightedStep] {
        &self.0
    }

    /// Multiplicity carried by weight zero (0 when absent).
    pub fn multiplicity_at_zero(&self) -> u32 {
        match self.0.first() {
            Some(s) if s.w.is_zero() => s.m,
            _ => 0,
        }
    }

    /// Largest weight at this point. Present whenever the list is
    /// non-empty, which validation guarantees.
    pub fn max_weight(&self) -> Option<&Rational> {
        self.0.last().map(|s| &s.w)
    }

    fn validate(&self, point: usize, rank: u32) -> Result<(), ParabolicError> {
        let mut total: u64 = 0;
        let mut prev: Option<&Rational> = None;
        for step in &self.0 {
            if step.w.is_negative() || step.w >= Rational::one() {
                return Err(ParabolicError::WeightOutOfRange {
                    point,
                    w: step.w.to_string(),
                });
            }
            if let Some(p) = prev {
                if step.w <= *p {
                    return Err(ParabolicError::WeightsNotIncreasing { point });
                }
            }
            if step.m == 0 {
                return Err(ParabolicError::ZeroMultiplicity { point });
            }
            total += u64::from(step.m);
            prev = Some(&step.w);
        }
        if total != u64::from(rank) {
            return Err(ParabolicError::MultiplicitySum { point, expected: rank, got: total });
        }
        Ok(())
    }
}

/// The numerical data of a weighted-flag bundle: rank and plain degree of
/// the underlying bundle plus per-point weight lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawShell")]
pub struct ParabolicShell {
    rank: u32,
    degree0: i64,
    curve: MarkedCurve,
    points: Vec<PointWeights>,
}

#[derive(Deserialize)]
struct RawShell {
    rank: u32,
    degree0: i64,
    curve: MarkedCurve,
    points: Vec<PointWeights>,
}

impl TryFrom<RawShell> for ParabolicShell {
    type Error = ParabolicError;
    fn try_from(r: RawShell) -> Result<ParabolicShell, ParabolicError> {
        ParabolicShell::new(r.rank, r.degree0, r.curve, r.points)
    }
}

impl ParabolicShell {
    pub fn new(
        rank: u32,
        degree0: i64,
        curve: MarkedCurve,
        points: Vec<PointWeights>,
    ) -> Result<ParabolicShell, ParabolicError> {
        if rank == 0 {
            return Err(ParabolicError::ZeroRank);
        }
        if points.len() != curve.n as usize {
            return Err(ParabolicError::PointCountMismatch {
                expected: curve.n as usize,
                got: points.len(),
            });
        }
        for (j, pw) in points.iter().enumerate() {
            pw.validate(j, rank)?;
        }
        Ok(ParabolicShell { rank, degree0, curve, points })
    }

    /// A bundle with no weighting: step `(0, rank)` at every marked point.
    pub fn trivial(rank: u32, degree0: i64, curve: MarkedCurve) -> Result<ParabolicShell, ParabolicError> {
        let points = (0..curve.n).map(|_| PointWeights::trivial(rank)).collect();
        ParabolicShell::new(rank, degree0, curve, points)
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn degree0(&self) -> i64 {
        self.degree0
    }

    pub fn curve(&self) -> MarkedCurve {
        self.curve
    }

    pub fn points(&self) -> &[PointWeights] {
        &self.points
    }

    /// Weighted degree: plain degree plus the weight-multiplicity sum over
    /// all marked points.
    pub fn par_deg(&self) -> Rational {
        let mut total = Rational::from_integer(BigInt::from(self.degree0));
        for pw in &self.points {
            for step in pw.steps() {
                total += &step.w * Rational::from_integer(BigInt::from(step.m));
            }
        }
        total
    }

    /// Weighted slope: weighted degree divided by rank.
    pub fn par_slope(&self) -> Rational {
        self.par_deg() / Rational::from_integer(BigInt::from(self.rank))
    }

    /// Plain slope of the underlying bundle.
    pub fn slope0(&self) -> Rational {
        Rational::new(BigInt::from(self.degree0), BigInt::from(self.rank))
    }

    /// Weighted slope minus plain slope — the part contributed by the
    /// weights alone. Bounded by `n * max_weight`, with equality exactly
    /// when every weight at every point equals the maximum.
    pub fn slope_excess(&self) -> Rational {
        self.par_slope() - self.slope0()
    }

    /// Largest weight appearing anywhere (`None` when the curve has no
    /// marked points).
    pub fn max_weight(&self) -> Option<Rational> {
        self.points.iter().filter_map(|pw| pw.max_weight()).max().cloned()
    }
}

/// A shell reinterpreted as the *co*-weighted counterpart (the structure
/// whose sheaf sits between `E(-D)` and `E` from the other side). It keeps
/// the same numerical data; only the degree convention is named
/// differently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coparabolic(pub ParabolicShell);

impl Coparabolic {
    /// The co-weighted degree is by definition the weighted degree of the
    /// underlying shell.
    pub fn copar_deg(&self) -> Rational {
        self.0.par_deg()
    }

    pub fn copar_slope(&self) -> Rational {
        self.0.par_slope()
    }
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn to_i64(x: &BigInt, err: ParabolicError) -> Result<i64, ParabolicError> {
    x.to_i64().ok_or(err)
}

/// Tensor product at the level of shells.
///
/// Per point, every pair of weights adds; sums at or above 1 wrap around
/// and deposit their integer part into the plain degree (the wrap is a
/// twist by the divisor of marked points). The result satisfies
/// `par_deg(a ⊗ b) = par_deg(a)·rk(b) + par_deg(b)·rk(a)` exactly, which is
/// asserted.
pub fn tensor_shell(a: &ParabolicShell, b: &ParabolicShell) -> Result<ParabolicShell, ParabolicError> {
    if a.curve != b.curve {
        return Err(ParabolicError::CurveMismatch);
    }
    let rank = a.rank.checked_mul(b.rank).ok_or(ParabolicError::RankOverflow)?;
    let mut carry = BigInt::zero();
    let mut points = Vec::with_capacity(a.points.len());
    for (pa, pb) in a.points.iter().zip(&b.points) {
        let mut merged: std::collections::BTreeMap<Rational, u64> = std::collections::BTreeMap::new();
        for s1 in pa.steps() {
            for s2 in pb.steps() {
                let sum = &s1.w + &s2.w;
                let mult = u64::from(s1.m) * u64::from(s2.m);
                carry += sum.floor().to_integer() * BigInt::from(mult);
                *merged.entry(frac_part(&sum)).or_insert(0) += mult;
            }
        }
        let steps = merged
            .into_iter()
            .map(|(w, m)| {
                u32::try_from(m).map(|m| WeightedStep::new(w, m)).map_err(|_| ParabolicError::RankOverflow)
            })
            .collect::<Result<Vec<_>, _>>()?;
        points.push(PointWeights(steps));
    }
    let degree0 = big(a.degree0) * big(i64::from(b.rank)) + big(b.degree0) * big(i64::from(a.rank)) + carry;
    let degree0 = to_i64(&degree0, ParabolicError::DegreeOverflow)?;
    let out = ParabolicShell::new(rank, degree0, a.curve, points)?;
    debug_assert_eq!(
        out.par_deg(),
        a.par_deg() * Rational::from_integer(big(i64::from(b.rank)))
            + b.par_deg() * Rational::from_integer(big(i64::from(a.rank))),
        "tensor degree law must hold"
    );
    Ok(out)
}

/// Dual at the level of shells.
///
/// Weight 0 stays at 0; a weight `w > 0` becomes `1 - w` (the dual flag
/// jumps mirrored through the wrap point). The plain degree picks up one
/// twist per marked point for the positively-weighted part, so that
/// `par_deg(dual(a)) = -par_deg(a)` exactly (asserted).
pub fn dual_shell(a: &ParabolicShell) -> Result<ParabolicShell, ParabolicError> {
    let mut twist = BigInt::zero();
    let mut points = Vec::with_capacity(a.points.len());
    for pw in &a.points {
        let m0 = pw.multiplicity_at_zero();
        twist += big(i64::from(a.rank)) - big(i64::from(m0));
        let mut steps = Vec::with_capacity(pw.steps().len());
        if m0 > 0 {
            steps.push(WeightedStep::new(Rational::zero(), m0));
        }
        for s in pw.steps().iter().rev() {
            if !s.w.is_zero() {
                steps.push(WeightedStep::new(Rational::one() - &s.w, s.m));
            }
        }
        points.push(PointWeights(steps));
    }
    let degree0 = -big(a.degree0) - twist;
    let degree0 = to_i64(&degree0, ParabolicError::DegreeOverflow)?;
    let out = ParabolicShell::new(a.rank, degree0, a.curve, points)?;
    debug_assert_eq!(out.par_deg(), -a.par_deg(), "dual degree law must hold");
    Ok(out)
}

/// Shift of the weighted structure by `t >= 0` (the bundle whose sheaf at
/// parameter `β` is the original sheaf at `t + β`).
///
/// Each weight `w` becomes `frac(w - t)`; weights that cross an integer cut
/// twist the underlying bundle down by one at their point, and every whole
/// unit of `t` twists by the full divisor of marked points. `t = 0` is the
/// identity; `t = 1` keeps all weights and drops the plain degree by
/// `n · rank`.
pub fn weight_shift(a: &ParabolicShell, t: &Rational) -> Result<ParabolicShell, ParabolicError> {
    if t.is_negative() {
        return Err(ParabolicError::NegativeShift { t: t.to_string() });
    }
    let ft = frac_part(t);
    let whole = t.floor().to_integer();
    let mut wrapped_total = BigInt::zero();
    let mut points = Vec::with_capacity(a.points.len());
    for pw in &a.points {
        let mut kept = Vec::new();
        let mut wrapped = Vec::new();
        for s in pw.steps() {
            if s.w < ft {
                wrapped_total += big(i64::from(s.m));
                wrapped.push(WeightedStep::new(&s.w - &ft + Rational::one(), s.m));
            } else {
                kept.push(WeightedStep::new(&s.w - &ft, s.m));
            }
        }
        // Unwrapped weights land in [0, 1 - ft), wrapped ones in
        // [1 - ft, 1); concatenation is already strictly increasing.
        kept.extend(wrapped);
        points.push(PointWeights(kept));
    }
    let degree0 =
        big(a.degree0) - wrapped_total - whole * big(i64::from(a.curve.n)) * big(i64::from(a.rank));
    let degree0 = to_i64(&degree0, ParabolicError::DegreeOverflow)?;
    ParabolicShell::new(a.rank, degree0, a.curve, points)
}

/// The degree of the twisting line bundle used by [`serre_twist`]:
/// `2g - 2 + n` for a curve of genus `g` with `n` marked points.
pub fn serre_twist_degree(curve: &MarkedCurve) -> i64 {
    2 * i64::from(curve.g) - 2 + i64::from(curve.n)
}

/// The shell appearing on the dual side of cohomological duality: the dual
/// shell tensored with the canonical-plus-marked-points line bundle
/// (trivially weighted, degree `2g - 2 + n`).
///
/// Slopes satisfy `par_slope(serre_twist(a)) + par_slope(a) = 2g - 2 + n`
/// exactly.
pub fn serre_twist(a: &ParabolicShell) -> Result<ParabolicShell, ParabolicError> {
    let omega = ParabolicShell::trivial(1, serre_twist_degree(&a.curve), a.curve)?;
    tensor_shell(&dual_shell(a)?, &omega)
}

// ---------------------------------------------------------------------------
// Explicit flags and induced structures.
// ---------------------------------------------------------------------------

/// A shell together with actual flag subspaces in coordinate fibers
/// `Q^rank`, one strictly decreasing chain per marked point running from
/// the full fiber to zero, with dimension drops matching the weight
/// multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBundle", into = "RawBundle")]
pub struct ExplicitParabolicBundle {
    shell: ParabolicShell,
    flags: Vec<Vec<Subspace>>,
}

impl ExplicitParabolicBundle {
    pub fn new(
        shell: ParabolicShell,
        flags: Vec<Vec<Subspace>>,
    ) -> Result<ExplicitParabolicBundle, ParabolicError> {
        let rank = shell.rank as usize;
        if flags.len() != shell.points.len() {
            return Err(ParabolicError::PointCountMismatch {
                expected: shell.points.len(),
                got: flags.len(),
            });
        }
        for (j, (chain, pw)) in flags.iter().zip(&shell.points).enumerate() {
            let expected = pw.steps().len() + 1;
            if chain.len() != expected {
                return Err(ParabolicError::FlagChainLength {
                    point: j,
                    expected,
                    got: chain.len(),
                });
            }
            for s in chain {
                if s.ambient_dim() != rank {
                    return Err(ParabolicError::FlagAmbient {
                        point: j,
                        expected: rank,
                        got: s.ambient_dim(),
                    });
                }
            }
            if !chain[0].is_full() {
                return Err(ParabolicError::FlagNotFull { point: j });
            }
            if !chain[chain.len() - 1].is_zero() {
                return Err(ParabolicError::FlagNotZero { point: j });
            }
            for (i, step) in pw.steps().iter().enumerate() {
                if !chain[i].contains(&chain[i + 1])? {
                    return Err(ParabolicError::FlagNotNested { point: j, step: i + 1 });
                }
                let drop = chain[i].dim() - chain[i + 1].dim();
                if drop != step.m as usize {
                    return Err(ParabolicError::FlagDropMismatch {
                        point: j,
                        step: i + 1,
                        expected: step.m,
                        got: drop,
                    });
                }
            }
        }
        Ok(ExplicitParabolicBundle { shell, flags })
    }

    /// A bundle with the trivial weighting and the two-step chain
    /// (full, zero) at every marked point.
    pub fn trivial(rank: u32, degree0: i64, curve: MarkedCurve) -> Result<ExplicitParabolicBundle, ParabolicError> {
        let shell = ParabolicShell::trivial(rank, degree0, curve)?;
        let chain = vec![Subspace::full(rank as usize), Subspace::zero(rank as usize)];
        let flags = (0..curve.n).map(|_| chain.clone()).collect();
        ExplicitParabolicBundle::new(shell, flags)
    }

    pub fn shell(&self) -> &ParabolicShell {
        &self.shell
    }

    pub fn flags(&self) -> &[Vec<Subspace>] {
        &self.flags
    }

    pub fn par_deg(&self) -> Rational {
        self.shell.par_deg()
    }
}

/// The data of a subbundle: its rank, the plain degree the caller assigns
/// to it, and its fiber inside `Q^rank` at every marked point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSubbundle", into = "RawSubbundle")]
pub struct SubbundleDatum {
    sub_rank: u32,
    sub_degree0: i64,
    fibers: Vec<Subspace>,
}

impl SubbundleDatum {
    pub fn new(sub_rank: u32, sub_degree0: i64, fibers: Vec<Subspace>) -> Result<SubbundleDatum, ParabolicError> {
        if sub_rank == 0 {
            return Err(ParabolicError::SubrankOutOfRange { sub_rank, rank: 0 });
        }
        for (j, f) in fibers.iter().enumerate() {
            if f.dim() != sub_rank as usize {
                return Err(ParabolicError::FiberDim { point: j, expected: sub_rank, got: f.dim() });
            }
        }
        Ok(SubbundleDatum { sub_rank, sub_degree0, fibers })
    }

    pub fn sub_rank(&self) -> u32 {
        self.sub_rank
    }

    pub fn sub_degree0(&self) -> i64 {
        self.sub_degree0
    }

    pub fn fibers(&self) -> &[Subspace] {
        &self.fibers
    }

    fn check_against(&self, e: &ExplicitParabolicBundle) -> Result<(), ParabolicError> {
        let rank = e.shell.rank;
        if self.sub_rank >= rank {
            return Err(ParabolicError::SubrankOutOfRange { sub_rank: self.sub_rank, rank });
        }
        if self.fibers.len() != e.flags.len() {
            return Err(ParabolicError::FiberCount { expected: e.flags.len(), got: self.fibers.len() });
        }
        for (j, f) in self.fibers.iter().enumerate() {
            if f.ambient_dim() != rank as usize {
                return Err(ParabolicError::FlagAmbient {
                    point: j,
                    expected: rank as usize,
                    got: f.ambient_dim(),
                });
            }
        }
        Ok(())
    }
}

/// Rewrites a subspace `x ⊆ f` in the internal coordinates of `f` given by
/// its canonical basis: the coefficient of the `i`-th basis row of `f` is
/// read off at that row's pivot column.
fn restrict_to_fiber_coords(x: &Subspace, f: &Subspace) -> Result<Subspace, ParabolicError> {
    debug_assert!(f.contains(x).unwrap_or(false), "restriction requires x inside f");
    let pivots: Vec<usize> = f
        .basis()
        .iter()
        .map(|row| row.iter().position(|e| !e.is_zero()).expect("canonical basis rows are nonzero"))
        .collect();
    let rows: Vec<Vec<Rational>> =
        x.basis().iter().map(|v| pivots.iter().map(|&p| v[p].clone()).collect()).collect();
    Ok(Subspace::from_rows(f.dim(), &rows)?)
}

/// Collapses an image chain (one subspace per original flag step, weakly
/// decreasing, first full and last zero) into a strictly decreasing flag:
/// each surviving step keeps the *largest* weight among the original steps
/// that map onto it.
fn collapse_chain(
    images: &[Subspace],
    weights: &PointWeights,
) -> (PointWeights, Vec<Subspace>) {
    let mut steps = Vec::new();
    let mut chain = Vec::new();
    for (k, step) in weights.steps().iter().enumerate() {
        // images[k] is the image of the step carrying weight `step.w`;
        // images[k + 1] is the image of the next (smaller) step.
        let drop = images[k].dim() - images[k + 1].dim();
        if drop > 0 {
            steps.push(WeightedStep::new(step.w.clone(), drop as u32));
            chain.push(images[k].clone());
        }
    }
    chain.push(images[images.len() - 1].clone());
    (PointWeights(steps), chain)
}

/// The weighted structure induced on a subbundle: intersect every flag step
/// with the sub-fiber, drop repetitions, and give each surviving step the
/// largest weight among the steps that intersected down to it.
///
/// The result is a full explicit bundle of rank `sub_rank` over the same
/// curve, with plain degree the caller-supplied `sub_degree0`.
pub fn induced_sub_structure(
    e: &ExplicitParabolicBundle,
    f: &SubbundleDatum,
) -> Result<ExplicitParabolicBundle, ParabolicError> {
    f.check_against(e)?;
    let mut points = Vec::with_capacity(e.flags.len());
    let mut flags = Vec::with_capacity(e.flags.len());
    for (j, chain) in e.flags.iter().enumerate() {
        let fiber = &f.fibers[j];
        let mut images = Vec::with_capacity(chain.len());
        for step in chain {
            let cut = exactlin::intersect(step, fiber)?;
            images.push(restrict_to_fiber_coords(&cut, fiber)?);
        }
        let (pw, new_chain) = collapse_chain(&images, &e.shell.points[j]);
        points.push(pw);
        flags.push(new_chain);
    }
    let shell = ParabolicShell::new(f.sub_rank, f.sub_degree0, e.shell.curve, points)?;
    ExplicitParabolicBundle::new(shell, flags)
}

/// The weighted structure induced on the quotient by a subbundle: push every
/// flag step into the quotient fiber (via the deterministic quotient
/// coordinate model of [`exactlin::project_to_quotient`]), drop repetitions,
/// and keep the largest weight mapping onto each surviving step.
///
/// The quotient's plain degree is `degree0(e) - sub_degree0(f)`, so the
/// degree additivity law `par_deg(e) = par_deg(sub) + par_deg(quot)` holds
/// exactly.
pub fn induced_quotient_structure(
    e: &ExplicitParabolicBundle,
    f: &SubbundleDatum,
) -> Result<ExplicitParabolicBundle, ParabolicError> {
    f.check_against(e)?;
    let mut points = Vec::with_capacity(e.flags.len());
    let mut flags = Vec::with_capacity(e.flags.len());
    for (j, chain) in e.flags.iter().enumerate() {
        let fiber = &f.fibers[j];
        let mut images = Vec::with_capacity(chain.len());
        for step in chain {
            images.push(exactlin::project_to_quotient(step, fiber)?);
        }
        let (pw, new_chain) = collapse_chain(&images, &e.shell.points[j]);
        points.push(pw);
        flags.push(new_chain);
    }
    let rank = e.shell.rank - f.sub_rank;
    let degree0 = e
        .shell
        .degree0
        .checked_sub(f.sub_degree0)
        .ok_or(ParabolicError::DegreeOverflow)?;
    let shell = ParabolicShell::new(rank, degree0, e.shell.curve, points)?;
    ExplicitParabolicBundle::new(shell, flags)
}

// ---------------------------------------------------------------------------
// Wire format for explicit bundles and subbundle data.
// ---------------------------------------------------------------------------

fn subspace_to_rows(s: &Subspace) -> Vec<Vec<String>> {
    s.basis().iter().map(|row| row.iter().map(|q| q.to_string()).collect()).collect()
}

fn subspace_from_rows(ambient: usize, rows: &[Vec<String>]) -> Result<Subspace, ParabolicError> {
    let mut parsed = Vec::with_capacity(rows.len());
    for row in rows {
        let mut r = Vec::with_capacity(row.len());
        for entry in row {
            r.push(parse_rational(entry).map_err(|e| ParabolicError::BadRationalEntry {
                entry: entry.clone(),
                detail: e.to_string(),
            })?);
        }
        parsed.push(r);
    }
    Ok(Subspace::from_rows(ambient, &parsed)?)
}

#[derive(Serialize, Deserialize)]
struct RawBundle {
    shell: ParabolicShell,
    flags: Vec<Vec<Vec<Vec<String>>>>,
}

impl From<ExplicitParabolicBundle> for RawBundle {
    fn from(b: ExplicitParabolicBundle) -> RawBundle {
        let flags = b
            .flags
            .iter()
            .map(|chain| chain.iter().map(subspace_to_rows).collect())
            .collect();
        RawBundle { shell: b.shell, flags }
    }
}

impl TryFrom<RawBundle> for ExplicitParabolicBundle {
    type Error = ParabolicError;
    fn try_from(r: RawBundle) -> Result<ExplicitParabolicBundle, ParabolicError> {
        let rank = r.shell.rank as usize;
        let mut flags = Vec::with_capacity(r.flags.len());
        for chain in &r.flags {
            let mut parsed = Vec::with_capacity(chain.len());
            for step in chain {
                parsed.push(subspace_from_rows(rank, step)?);
            }
            flags.push(parsed);
        }
        ExplicitParabolicBundle::new(r.shell, flags)
    }
}

#[derive(Serialize, Deserialize)]
struct RawSubbundle {
    sub_rank: u32,
    sub_degree0: i64,
    fibers: Vec<Vec<Vec<String>>>,
}

impl From<SubbundleDatum> for RawSubbundle {
    fn from(f: SubbundleDatum) -> RawSubbundle {
        RawSubbundle {
            sub_rank: f.sub_rank,
            sub_degree0: f.sub_degree0,
            fibers: f.fibers.iter().map(subspace_to_rows).collect(),
        }
    }
}

impl TryFrom<RawSubbundle> for SubbundleDatum {
    type Error = ParabolicError;
    fn try_from(r: RawSubbundle) -> Result<SubbundleDatum, ParabolicError> {
        // The fiber rows determine their ambient dimension; rows must be
        // non-empty since each fiber has dimension sub_rank >= 1.
        let mut fibers = Vec::with_capacity(r.fibers.len());
        for rows in &r.fibers {
            let ambient = rows.first().map(|row| row.len()).unwrap_or(0);
            fibers.push(subspace_from_rows(ambient, rows)?);
        }
        SubbundleDatum::new(r.sub_rank, r.sub_degree0, fibers)
    }
}
