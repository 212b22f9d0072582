//! Surface-group presentations and their homomorphisms to finite
//! permutation groups.
//!
//! The fundamental group of a genus-`g` surface with `n` punctures is free
//! of rank `2g + n - 1` once `n >= 1`; generators are labeled
//! `a1, b1, ..., ag, bg` (handles) and `g1, ..., g(n-1)` (boundary loops).
//! For a closed surface (`n = 0`) the same handle generators satisfy the
//! single relator `prod_i [a_i, b_i]`, which every homomorphism must kill.
//!
//! On a once-punctured surface the distinguished boundary loop is the
//! product of handle commutators; its image under a homomorphism is the
//! local monodromy of the corresponding branched cover, and feeds the
//! genus computation of [`riemann_hurwitz_genus`].

use super::group::PermGroup;
use super::perm::{commutator, Perm};
use super::CoversError;
use std::collections::BTreeMap;

/// The `(g, n)` shape of a presented surface group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfacePresentation {
    g: u32,
    n: u32,
}

impl SurfacePresentation {
    pub fn new(g: u32, n: u32) -> SurfacePresentation {
        SurfacePresentation { g, n }
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn punctures(&self) -> u32 {
        self.n
    }

    /// True when the group is free (any punctured surface).
    pub fn is_free(&self) -> bool {
        self.n >= 1
    }

    /// Number of generators: `2g` handle generators, plus `n - 1` boundary
    /// generators when punctured.
    pub fn generator_count(&self) -> usize {
        2 * self.g as usize + (self.n as usize).saturating_sub(1)
    }

    /// Generator labels in canonical order: `a1, b1, a2, b2, ...` then
    /// `g1, g2, ...` for all but one boundary loop.
    pub fn labels(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.generator_count());
        for i in 1..=self.g {
            out.push(format!("a{i}"));
            out.push(format!("b{i}"));
        }
        for j in 1..self.n {
            out.push(format!("g{j}"));
        }
        out
    }
}

/// A homomorphism from a surface group into a permutation group, recorded
/// by its generator images (in [`SurfacePresentation::labels`] order).
///
/// For a closed surface the construction checks the relator
/// `prod_i [a_i, b_i] = 1`; punctured surfaces are free, so any image
/// tuple works.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceHom {
    presentation: SurfacePresentation,
    images: Vec<Perm>,
}

impl SurfaceHom {
    pub fn new(
        presentation: SurfacePresentation,
        images: Vec<Perm>,
    ) -> Result<SurfaceHom, CoversError> {
        let expected = presentation.generator_count();
        if images.len() != expected {
            return Err(CoversError::ImageCountMismatch { expected, got: images.len() });
        }
        if let Some(first) = images.first() {
            if let Some(bad) = images.iter().find(|p| p.degree() != first.degree()) {
                return Err(CoversError::DegreeMismatch {
                    detail: format!(
                        "images of degree {} and {} in one homomorphism",
                        first.degree(),
                        bad.degree()
                    ),
                });
            }
        }
        if !presentation.is_free() && presentation.g > 0 {
            let rel = handle_commutator_product(presentation.g, &images);
            if !rel.is_identity() {
                return Err(CoversError::RelatorNotSatisfied { image: rel.to_string() });
            }
        }
        Ok(SurfaceHom { presentation, images })
    }

    pub fn presentation(&self) -> SurfacePresentation {
        self.presentation
    }

    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    /// The image of the labeled generator, if the label exists.
    pub fn image_of(&self, label: &str) -> Option<&Perm> {
        self.presentation.labels().iter().position(|l| l == label).map(|i| &self.images[i])
    }
}

fn handle_commutator_product(g: u32, images: &[Perm]) -> Perm {
    let degree = images.first().map_or(1, Perm::degree);
    let mut acc = Perm::identity(degree);
    for i in 0..g as usize {
        acc = &acc * &commutator(&images[2 * i], &images[2 * i + 1]);
    }
    acc
}

/// Default bound on how many homomorphisms an enumeration may visit.
pub const DEFAULT_HOM_CAP: u64 = 100_000_000;

/// All homomorphisms from the once-punctured genus-`g` surface group
/// (free on `2g` handle generators, `g >= 1`) into `group`, in
/// lexicographic order of generator-image indices.
pub fn enumerate_surface_homs(
    g: u32,
    group: &PermGroup,
    cap: u64,
) -> Result<Vec<SurfaceHom>, CoversError> {
    if g == 0 {
        return Err(CoversError::BadSurface {
            detail: "enumeration needs at least one handle (g >= 1)".into(),
        });
    }
    let presentation = SurfacePresentation::new(g, 1);
    let elements = group.elements()?;
    let k = presentation.generator_count();
    let count = (elements.len() as u128)
        .checked_pow(k as u32)
        .ok_or(CoversError::EnumerationCapExceeded { count: u128::MAX, cap })?;
    if count > u128::from(cap) {
        return Err(CoversError::EnumerationCapExceeded { count, cap });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut odometer = vec![0usize; k];
    loop {
        let images: Vec<Perm> = odometer.iter().map(|&i| elements[i].clone()).collect();
        out.push(SurfaceHom::new(presentation, images)?);
        // Advance the rightmost digit, carrying leftward.
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < elements.len() {
                break;
            }
            odometer[pos] = 0;
        }
    }
}

/// Monodromy around the distinguished puncture of a once-punctured
/// surface: the product of handle commutators `prod_i [a_i, b_i]`.
pub fn boundary_image(hom: &SurfaceHom) -> Result<Perm, CoversError> {
    if hom.presentation.punctures() != 1 {
        return Err(CoversError::BadSurface {
            detail: format!(
                "boundary monodromy needs exactly one puncture, got {}",
                hom.presentation.punctures()
            ),
        });
    }
    Ok(handle_commutator_product(hom.presentation.genus(), &hom.images))
}

/// The three conditions a once-punctured-surface homomorphism must meet to
/// drive the branched-cover construction: the target group is
/// center-free, the homomorphism is surjective, and the boundary
/// monodromy is nontrivial.
pub fn kodaira_parshin_admissible(
    group: &PermGroup,
    hom: &SurfaceHom,
) -> Result<bool, CoversError> {
    Ok(group.is_center_free()?
        && group.is_generating_set(hom.images())?
        && !boundary_image(hom)?.is_identity())
}

/// A conjugation orbit of homomorphisms: the lexicographically least
/// conjugate as representative, plus the orbit size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NielsenClass {
    pub representative: SurfaceHom,
    pub size: u64,
}

/// Groups homomorphisms by simultaneous conjugation of all generator
/// images, optionally restricted to the surjective ones. Classes come
/// back ordered by their canonical representative.
pub fn nielsen_classify(
    group: &PermGroup,
    homs: &[SurfaceHom],
    surjective_only: bool,
) -> Result<Vec<NielsenClass>, CoversError> {
    let elements = group.elements()?;
    let mut counts: BTreeMap<Vec<Perm>, u64> = BTreeMap::new();
    let mut presentation = None;
    for hom in homs {
        if surjective_only && !group.is_generating_set(hom.images())? {
            continue;
        }
        presentation = Some(hom.presentation());
        let canonical = elements
            .iter()
            .map(|m| {
                let m_inv = m.inverse();
                hom.images().iter().map(|p| &(m * p) * &m_inv).collect::<Vec<Perm>>()
            })
            .min()
            .expect("a group has at least the identity element");
        *counts.entry(canonical).or_insert(0) += 1;
    }
    let presentation = match presentation {
        Some(p) => p,
        None => return Ok(Vec::new()),
    };
    counts
        .into_iter()
        .map(|(images, size)| {
            Ok(NielsenClass { representative: SurfaceHom::new(presentation, images)?, size })
        })
        .collect()
}

/// Headline statistics for the homomorphism space of a once-punctured
/// genus-`g` surface group into a finite group: total count, surjective
/// count, and the number of conjugation classes of surjective ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct GammaIndexReport {
    pub hom_count: u64,
    pub epi_count: u64,
    pub nielsen_class_count: u64,
}

pub fn gamma_index_report(
    g: u32,
    group: &PermGroup,
    cap: u64,
) -> Result<GammaIndexReport, CoversError> {
    let homs = enumerate_surface_homs(g, group, cap)?;
    let mut epi_count = 0u64;
    for hom in &homs {
        if group.is_generating_set(hom.images())? {
            epi_count += 1;
        }
    }
    let classes = nielsen_classify(group, &homs, true)?;
    Ok(GammaIndexReport {
        hom_count: homs.len() as u64,
        epi_count,
        nielsen_class_count: classes.len() as u64,
    })
}

/// Genus of the cover produced by a degree-`group_order` branched cover of
/// a genus-`g_base` curve with one branch point of local monodromy order
/// `boundary_order`:
///
/// `2h - 2 = |G| (2 g_base - 2) + |G| (1 - 1/e)`.
///
/// Requires `e >= 1` and `e` dividing `|G|`; fails when the right-hand
/// side is odd, since then no integer genus exists.
pub fn riemann_hurwitz_genus(
    g_base: u32,
    group_order: u64,
    boundary_order: u64,
) -> Result<i64, CoversError> {
    if group_order == 0 {
        return Err(CoversError::BadRamification { detail: "group order must be positive".into() });
    }
    if boundary_order == 0 {
        return Err(CoversError::BadRamification {
            detail: "monodromy order must be positive".into(),
        });
    }
    if group_order % boundary_order != 0 {
        return Err(CoversError::BadRamification {
            detail: format!("monodromy order {boundary_order} does not divide the group order {group_order}"),
        });
    }
    let order = i64::try_from(group_order).map_err(|_| CoversError::BadRamification {
        detail: "group order too large".into(),
    })?;
    let twice = order * (2 * i64::from(g_base) - 2) + order - order / i64::try_from(boundary_order).unwrap();
    if twice % 2 != 0 {
        return Err(CoversError::NonIntegralGenus { twice });
    }
    Ok((twice + 2) / 2)
}
