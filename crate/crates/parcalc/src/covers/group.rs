//! Finite permutation groups presented by generators.
//!
//! Elements are materialized lazily by breadth-first closure under the
//! generators, guarded by an element cap so a typo'd generating set cannot
//! eat the machine. The closure is cached sorted, so element order — and
//! everything downstream that iterates over it — is deterministic.

use super::perm::Perm;
use super::CoversError;
use std::collections::BTreeSet;
use std::sync::OnceLock;

/// Default bound on the number of elements a closure may reach.
pub const DEFAULT_CLOSURE_CAP: usize = 100_000;

/// A finite permutation group, given by its degree and generators.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    closure_cap: usize,
    elements: OnceLock<Vec<Perm>>,
}

/// Breadth-first closure of the identity under right multiplication by the
/// generators, returned sorted. Fails without side effects when the
/// element count would exceed `cap`.
pub fn closure_of(degree: usize, generators: &[Perm], cap: usize) -> Result<Vec<Perm>, CoversError> {
    for g in generators {
        if g.degree() != degree {
            return Err(CoversError::DegreeMismatch {
                detail: format!("generator degree {} in a degree-{} group", g.degree(), degree),
            });
        }
    }
    let mut seen: BTreeSet<Perm> = BTreeSet::new();
    let mut frontier = vec![Perm::identity(degree)];
    seen.insert(Perm::identity(degree));
    while let Some(current) = frontier.pop() {
        for g in generators {
            let next = &current * g;
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return Err(CoversError::ClosureCapExceeded { cap });
                }
                seen.insert(next.clone());
                frontier.push(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

impl PermGroup {
    /// A group from explicit generators, with the default closure cap.
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<PermGroup, CoversError> {
        PermGroup::with_cap(degree, generators, DEFAULT_CLOSURE_CAP)
    }

    pub fn with_cap(
        degree: usize,
        generators: Vec<Perm>,
        closure_cap: usize,
    ) -> Result<PermGroup, CoversError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(CoversError::DegreeMismatch {
                    detail: format!(
                        "generator degree {} in a degree-{} group",
                        g.degree(),
                        degree
                    ),
                });
            }
        }
        Ok(PermGroup { degree, generators, closure_cap, elements: OnceLock::new() })
    }

    /// The trivial group acting on one point.
    pub fn trivial() -> PermGroup {
        PermGroup::new(1, Vec::new()).expect("trivial group is well-formed")
    }

    /// The full symmetric group on `n >= 1` points, generated by `(1 2)`
    /// and the `n`-cycle.
    pub fn symmetric(n: usize) -> Result<PermGroup, CoversError> {
        if n == 0 {
            return Err(CoversError::BadPermutation { detail: "degree must be positive".into() });
        }
        if n == 1 {
            return PermGroup::new(1, Vec::new());
        }
        let transposition = Perm::parse_cycles("(1 2)", n)?;
        let mut rotation: Vec<usize> = (1..n).collect();
        rotation.push(0);
        PermGroup::new(n, vec![transposition, Perm::new(rotation)?])
    }

    /// The alternating group on an odd number `n >= 3` of points,
    /// generated by `(1 2 3)` and the `n`-cycle.
    pub fn alternating_odd(n: usize) -> Result<PermGroup, CoversError> {
        if n < 3 || n % 2 == 0 {
            return Err(CoversError::BadPermutation {
                detail: format!("alternating_odd needs an odd degree >= 3, got {n}"),
            });
        }
        let three_cycle = Perm::parse_cycles("(1 2 3)", n)?;
        let mut rotation: Vec<usize> = (1..n).collect();
        rotation.push(0);
        PermGroup::new(n, vec![three_cycle, Perm::new(rotation)?])
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// All elements, sorted; computed on first use and cached.
    pub fn elements(&self) -> Result<&[Perm], CoversError> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let closed = closure_of(self.degree, &self.generators, self.closure_cap)?;
        Ok(self.elements.get_or_init(|| closed))
    }

    pub fn order(&self) -> Result<u64, CoversError> {
        Ok(self.elements()?.len() as u64)
    }

    pub fn contains(&self, p: &Perm) -> Result<bool, CoversError> {
        Ok(self.elements()?.binary_search(p).is_ok())
    }

    /// True when only the identity commutes with every generator.
    pub fn is_center_free(&self) -> Result<bool, CoversError> {
        let elements = self.elements()?;
        for e in elements {
            if e.is_identity() {
                continue;
            }
            if self.generators.iter().all(|g| (e * g) == (g * e)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True when the given permutations generate the whole group.
    pub fn is_generating_set(&self, perms: &[Perm]) -> Result<bool, CoversError> {
        let sub = closure_of(self.degree, perms, self.closure_cap)?;
        Ok(sub.len() as u64 == self.order()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_group_orders() {
        assert_eq!(PermGroup::trivial().order().unwrap(), 1);
        assert_eq!(PermGroup::symmetric(3).unwrap().order().unwrap(), 6);
        assert_eq!(PermGroup::symmetric(4).unwrap().order().unwrap(), 24);
        assert_eq!(PermGroup::alternating_odd(5).unwrap().order().unwrap(), 60);
    }

    #[test]
    fn alternating_five_is_even_only() {
        let a5 = PermGroup::alternating_odd(5).unwrap();
        assert!(!a5.contains(&Perm::parse_cycles("(1 2)", 5).unwrap()).unwrap());
        assert!(a5.contains(&Perm::parse_cycles("(1 2)(3 4)", 5).unwrap()).unwrap());
        assert!(a5.contains(&Perm::parse_cycles("(1 2 3 4 5)", 5).unwrap()).unwrap());
    }

    #[test]
    fn center_detection() {
        assert!(PermGroup::symmetric(3).unwrap().is_center_free().unwrap());
        assert!(PermGroup::symmetric(4).unwrap().is_center_free().unwrap());
        assert!(PermGroup::alternating_odd(5).unwrap().is_center_free().unwrap());
        // The trivial group's center is trivial.
        assert!(PermGroup::trivial().is_center_free().unwrap());
        // A cyclic group is its own center.
        let c3 = PermGroup::new(3, vec![Perm::parse_cycles("(1 2 3)", 3).unwrap()]).unwrap();
        assert!(!c3.is_center_free().unwrap());
    }

    #[test]
    fn generating_set_detection() {
        let s3 = PermGroup::symmetric(3).unwrap();
        let a = Perm::parse_cycles("(1 2)", 3).unwrap();
        let b = Perm::parse_cycles("(1 3)", 3).unwrap();
        let r = Perm::parse_cycles("(1 2 3)", 3).unwrap();
        assert!(s3.is_generating_set(&[a.clone(), b]).unwrap());
        assert!(!s3.is_generating_set(&[a]).unwrap());
        assert!(!s3.is_generating_set(&[r]).unwrap());
        assert!(!s3.is_generating_set(&[]).unwrap());
    }

    #[test]
    fn closure_cap_refuses_large_groups() {
        let err = PermGroup::with_cap(
            4,
            vec![
                Perm::parse_cycles("(1 2)", 4).unwrap(),
                Perm::parse_cycles("(1 2 3 4)", 4).unwrap(),
            ],
            10,
        )
        .unwrap()
        .elements()
        .map(|e| e.len());
        assert_eq!(err.unwrap_err(), CoversError::ClosureCapExceeded { cap: 10 });
    }

    #[test]
    fn elements_are_sorted_and_start_with_identity() {
        let s3 = PermGroup::symmetric(3).unwrap();
        let elements = s3.elements().unwrap();
        assert_eq!(elements[0], Perm::identity(3));
        let mut sorted = elements.to_vec();
        sorted.sort();
        assert_eq!(elements, &sorted[..]);
    }
}
