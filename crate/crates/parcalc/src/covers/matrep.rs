//! Integer matrix representations of surface groups.
//!
//! An [`IntMatrixRep`] assigns an invertible integer matrix to each
//! generator of a surface-group presentation (omitted generators act as
//! the identity); invertibility over the integers — determinant `±1` — is
//! verified at construction by computing the exact inverse and checking
//! integrality. For a closed surface the single relator must map to the
//! identity, which is also enforced.
//!
//! [`explicit_nondensity_rep`] builds the two-generator family sending one
//! handle generator to the upper unitriangular elementary matrix `U` and a
//! generator on a *different* handle to its lower transpose `L`, and
//! [`vs_test`] probes such a representation for a pair of words whose
//! `s`-th powers fail to commute — returning the first witness in a fixed
//! deterministic order, so outputs are reproducible.

use super::surface::SurfacePresentation;
use super::CoversError;
use crate::exactlin;
use crate::parabolic::MarkedCurve;
use crate::rational::Rational;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use std::collections::BTreeMap;

/// A square integer matrix in row-major order.
pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn identity_matrix(rank: usize) -> IntMatrix {
    (0..rank)
        .map(|i| (0..rank).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * &b[k][j];
            }
        }
    }
    out
}

/// `base^exponent` by repeated squaring.
pub fn mat_pow(base: &IntMatrix, exponent: u64) -> IntMatrix {
    let mut result = identity_matrix(base.len());
    let mut square = base.clone();
    let mut e = exponent;
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul(&result, &square);
        }
        e >>= 1;
        if e > 0 {
            square = mat_mul(&square, &square);
        }
    }
    result
}

pub fn is_identity_matrix(m: &IntMatrix) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}

fn matrix_commutator(a: &IntMatrix, a_inv: &IntMatrix, b: &IntMatrix, b_inv: &IntMatrix) -> IntMatrix {
    mat_mul(&mat_mul(a, b), &mat_mul(a_inv, b_inv))
}

/// Exact inverse of an integer matrix, provided it is invertible over the
/// integers (determinant `±1`).
fn integer_inverse(label: &str, m: &IntMatrix) -> Result<IntMatrix, CoversError> {
    let rational: Vec<Vec<Rational>> =
        m.iter().map(|row| row.iter().map(|x| Rational::from_integer(x.clone())).collect()).collect();
    let inverse = exactlin::invert(&rational)
        .map_err(|e| CoversError::BadMatrix { detail: e.to_string() })?
        .ok_or_else(|| CoversError::NotUnimodular { label: label.to_string() })?;
    let mut out = Vec::with_capacity(inverse.len());
    for row in inverse {
        let mut int_row = Vec::with_capacity(row.len());
        for x in row {
            if !x.is_integer() {
                return Err(CoversError::NotUnimodular { label: label.to_string() });
            }
            int_row.push(x.to_integer());
        }
        out.push(int_row);
    }
    Ok(out)
}

/// An assignment of unimodular integer matrices to the generators of a
/// surface-group presentation. Generators missing from `images` act as
/// the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrixRep {
    g: u32,
    n: u32,
    rank: u32,
    images: BTreeMap<String, IntMatrix>,
    inverses: BTreeMap<String, IntMatrix>,
}

impl IntMatrixRep {
    pub fn new(
        g: u32,
        n: u32,
        rank: u32,
        images: BTreeMap<String, IntMatrix>,
    ) -> Result<IntMatrixRep, CoversError> {
        if rank == 0 {
            return Err(CoversError::BadMatrix { detail: "matrix rank must be positive".into() });
        }
        let presentation = SurfacePresentation::new(g, n);
        let labels = presentation.labels();
        let mut inverses = BTreeMap::new();
        for (label, m) in &images {
            if !labels.iter().any(|l| l == label) {
                return Err(CoversError::BadSurface {
                    detail: format!("unknown generator label {label:?} for genus {g} with {n} punctures"),
                });
            }
            if m.len() != rank as usize || m.iter().any(|row| row.len() != rank as usize) {
                return Err(CoversError::BadMatrix {
                    detail: format!("image of {label} is not a {rank}x{rank} matrix"),
                });
            }
            inverses.insert(label.clone(), integer_inverse(label, m)?);
        }
        let rep = IntMatrixRep { g, n, rank, images, inverses };
        if n == 0 && g > 0 {
            let rel = rep.relator_image()?;
            if !is_identity_matrix(&rel) {
                return Err(CoversError::RelatorNotSatisfied {
                    image: format!("{rel:?}"),
                });
            }
        }
        Ok(rep)
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn punctures(&self) -> u32 {
        self.n
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn presentation(&self) -> SurfacePresentation {
        SurfacePresentation::new(self.g, self.n)
    }

    /// The stored (non-identity) images.
    pub fn images(&self) -> &BTreeMap<String, IntMatrix> {
        &self.images
    }

    /// The image of a generator; omitted generators give the identity.
    pub fn image_of(&self, label: &str) -> Result<IntMatrix, CoversError> {
        self.lookup(label, &self.images)
    }

    /// The inverse image of a generator.
    pub fn inverse_image_of(&self, label: &str) -> Result<IntMatrix, CoversError> {
        self.lookup(label, &self.inverses)
    }

    fn lookup(
        &self,
        label: &str,
        table: &BTreeMap<String, IntMatrix>,
    ) -> Result<IntMatrix, CoversError> {
        if !self.presentation().labels().iter().any(|l| l == label) {
            return Err(CoversError::BadWord { detail: format!("unknown generator {label:?}") });
        }
        Ok(table.get(label).cloned().unwrap_or_else(|| identity_matrix(self.rank as usize)))
    }

    /// The image of the closed-surface relator `prod_i [a_i, b_i]`; only
    /// meaningful when `n = 0`.
    pub fn relator_image(&self) -> Result<IntMatrix, CoversError> {
        if self.n != 0 {
            return Err(CoversError::Unsupported {
                detail: "the relator exists only on a closed surface (n = 0)".into(),
            });
        }
        let mut acc = identity_matrix(self.rank as usize);
        for i in 1..=self.g {
            let a = self.image_of(&format!("a{i}"))?;
            let a_inv = self.inverse_image_of(&format!("a{i}"))?;
            let b = self.image_of(&format!("b{i}"))?;
            let b_inv = self.inverse_image_of(&format!("b{i}"))?;
            acc = mat_mul(&acc, &matrix_commutator(&a, &a_inv, &b, &b_inv));
        }
        Ok(acc)
    }

    /// Evaluates a word given as letters `(label, sign)`.
    pub fn evaluate(&self, word: &[(String, i8)]) -> Result<IntMatrix, CoversError> {
        let mut acc = identity_matrix(self.rank as usize);
        for (label, sign) in word {
            let m = match sign {
                1 => self.image_of(label)?,
                -1 => self.inverse_image_of(label)?,
                _ => {
                    return Err(CoversError::BadWord {
                        detail: format!("letter sign must be 1 or -1, got {sign}"),
                    })
                }
            };
            acc = mat_mul(&acc, &m);
        }
        Ok(acc)
    }
}

#[derive(Deserialize)]
struct RawRep {
    g: u32,
    n: u32,
    rank: u32,
    #[serde(default)]
    images: BTreeMap<String, Vec<Vec<i64>>>,
}

impl TryFrom<RawRep> for IntMatrixRep {
    type Error = CoversError;
    fn try_from(raw: RawRep) -> Result<IntMatrixRep, CoversError> {
        let images = raw
            .images
            .into_iter()
            .map(|(label, m)| {
                (label, m.into_iter().map(|row| row.into_iter().map(BigInt::from).collect()).collect())
            })
            .collect();
        IntMatrixRep::new(raw.g, raw.n, raw.rank, images)
    }
}

impl<'de> Deserialize<'de> for IntMatrixRep {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawRep::deserialize(deserializer)?;
        IntMatrixRep::try_from(raw).map_err(serde::de::Error::custom)
    }
}

impl Serialize for IntMatrixRep {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::Error;
        let mut images: BTreeMap<&str, Vec<Vec<i64>>> = BTreeMap::new();
        for (label, m) in &self.images {
            let rows = m
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| {
                            x.to_i64().ok_or_else(|| {
                                S::Error::custom(format!("matrix entry {x} exceeds the wire range"))
                            })
                        })
                        .collect::<Result<Vec<i64>, S::Error>>()
                })
                .collect::<Result<Vec<Vec<i64>>, S::Error>>()?;
            images.insert(label, rows);
        }
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("g", &self.g)?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("rank", &self.rank)?;
        map.serialize_entry("images", &images)?;
        map.end()
    }
}

/// The two-generator unipotent family on a hyperbolic surface with at
/// least one handle: the first handle's `a`-generator maps to
/// `U = I + E_{12}` and a generator on a *different* handle — `a2` when
/// `g >= 2`, else `b1` (possible since `g = 1` forces `n >= 1`, a free
/// group) — maps to `L = I + E_{21}`; everything else acts as the
/// identity. For a closed surface the two images sit on different
/// handles, so the relator image is a product of commutators of identity
/// blocks and the assignment is a genuine representation (verified by
/// construction).
pub fn explicit_nondensity_rep(g: u32, n: u32, rank: u32) -> Result<IntMatrixRep, CoversError> {
    if !MarkedCurve::new(g, n).is_hyperbolic() {
        return Err(CoversError::Unsupported {
            detail: format!("(g, n) = ({g}, {n}) is not hyperbolic"),
        });
    }
    if g == 0 {
        return Err(CoversError::Unsupported {
            detail: "the construction uses a handle generator; need g >= 1".into(),
        });
    }
    if rank < 2 {
        return Err(CoversError::Unsupported {
            detail: "the unipotent pair needs matrix rank >= 2".into(),
        });
    }
    let r = rank as usize;
    let mut upper = identity_matrix(r);
    upper[0][1] = BigInt::one();
    let mut lower = identity_matrix(r);
    lower[1][0] = BigInt::one();
    let mut images = BTreeMap::new();
    images.insert("a1".to_string(), upper);
    let second = if g >= 2 { "a2" } else { "b1" };
    images.insert(second.to_string(), lower);
    IntMatrixRep::new(g, n, rank, images)
}

/// A pair of words whose images have non-commuting `s`-th powers. Words
/// are space-separated tokens `a1` / `a1^-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VsWitness {
    pub x: String,
    pub y: String,
}

fn render_word(word: &[(usize, i8)], labels: &[String]) -> String {
    word.iter()
        .map(|&(idx, sign)| {
            if sign >= 0 {
                labels[idx].clone()
            } else {
                format!("{}^-1", labels[idx])
            }
        })
        .collect::<Vec<String>>()
        .join(" ")
}

/// All reduced words (no letter followed by its inverse) over the
/// generators and their inverses, of length `1..=bound`, in order of
/// (length, letter sequence).
fn reduced_words(generator_count: usize, bound: usize) -> Vec<Vec<(usize, i8)>> {
    let letters: Vec<(usize, i8)> =
        (0..generator_count).flat_map(|i| [(i, 1i8), (i, -1i8)]).collect();
    let mut out: Vec<Vec<(usize, i8)>> = Vec::new();
    let mut current: Vec<Vec<(usize, i8)>> = vec![Vec::new()];
    for _ in 0..bound {
        let mut next = Vec::new();
        for word in &current {
            for &letter in &letters {
                if let Some(&(last_idx, last_sign)) = word.last() {
                    if last_idx == letter.0 && last_sign == -letter.1 {
                        continue; // would cancel
                    }
                }
                let mut longer = word.clone();
                longer.push(letter);
                next.push(longer);
            }
        }
        out.extend(next.iter().cloned());
        current = next;
    }
    out
}

/// Searches for two words `x, y` of length at most `word_length_bound`
/// whose images under `rep` have non-commuting `s`-th powers, i.e.
/// `rho(x)^s rho(y)^s != rho(y)^s rho(x)^s`. Scans word pairs in a fixed
/// order (both words by length then letter sequence), returning the first
/// witness, so results are deterministic; `None` means no witness exists
/// within the bound.
pub fn vs_test(
    rep: &IntMatrixRep,
    s: u64,
    word_length_bound: usize,
) -> Result<Option<VsWitness>, CoversError> {
    if word_length_bound == 0 {
        return Err(CoversError::BadWord { detail: "word length bound must be positive".into() });
    }
    let labels = rep.presentation().labels();
    let words = reduced_words(labels.len(), word_length_bound);
    let mut powers: Vec<IntMatrix> = Vec::with_capacity(words.len());
    for word in &words {
        let resolved: Vec<(String, i8)> =
            word.iter().map(|&(idx, sign)| (labels[idx].clone(), sign)).collect();
        powers.push(mat_pow(&rep.evaluate(&resolved)?, s));
    }
    for i in 0..words.len() {
        for j in (i + 1)..words.len() {
            if mat_mul(&powers[i], &powers[j]) != mat_mul(&powers[j], &powers[i]) {
                return Ok(Some(VsWitness {
                    x: render_word(&words[i], &labels),
                    y: render_word(&words[j], &labels),
                }));
            }
        }
    }
    Ok(None)
}
