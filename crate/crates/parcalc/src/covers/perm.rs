//! Permutations of `{0, ..., degree-1}` with cycle-notation input and
//! output.
//!
//! Internally a permutation is its one-line image table (0-based).
//! Composition is right-to-left: `(p * q)(x) = p(q(x))`, so in a product
//! the rightmost factor acts first — commutators are
//! `[a, b] = a * b * a^-1 * b^-1`. Cycle notation is 1-based on the wire,
//! canonicalized so equal permutations print identically: cycles start at
//! their smallest point, are sorted by that point, fixed points are
//! omitted, and the identity prints as `()`.

use super::CoversError;
use num_integer::Integer;
use std::fmt;
use std::ops::Mul;

/// A permutation, stored as the image table `perm[i] = image of i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    /// Builds a permutation from its 0-based image table, rejecting
    /// non-bijections.
    pub fn new(images: Vec<usize>) -> Result<Perm, CoversError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n {
                return Err(CoversError::BadPermutation {
                    detail: format!("image {x} out of range for degree {n}"),
                });
            }
            if seen[x] {
                return Err(CoversError::BadPermutation {
                    detail: format!("image {x} repeated"),
                });
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    pub fn identity(degree: usize) -> Perm {
        Perm((0..degree).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// Multiplicative order: least `k >= 1` with `self^k = identity`.
    pub fn order(&self) -> u64 {
        self.cycles_with_fixed_points()
            .into_iter()
            .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    fn cycles_with_fixed_points(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.0[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.0[x];
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Nontrivial cycles in canonical order: each starts at its smallest
    /// point, sorted by that point (0-based points).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.cycles_with_fixed_points()
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect()
    }

    /// Parses 1-based cycle notation of the given degree. Accepts
    /// whitespace- or comma-separated points, e.g. `(1 2 3)(4 5)`, and the
    /// compact digit form `(123)(45)` — a token whose value exceeds the
    /// degree is read digit by digit. `()` is the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Perm, CoversError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(CoversError::CycleParse { detail: "empty input".into() });
        }
        let mut images: Vec<usize> = (0..degree).collect();
        let mut moved = vec![false; degree];
        let mut rest = text;
        while !rest.is_empty() {
            let open = rest.find('(').ok_or_else(|| CoversError::CycleParse {
                detail: format!("expected '(' at {rest:?}"),
            })?;
            if !rest[..open].trim().is_empty() {
                return Err(CoversError::CycleParse {
                    detail: format!("unexpected text before cycle: {:?}", &rest[..open]),
                });
            }
            let close = rest.find(')').ok_or_else(|| CoversError::CycleParse {
                detail: "unbalanced parenthesis".into(),
            })?;
            if close < open {
                return Err(CoversError::CycleParse { detail: "unbalanced parenthesis".into() });
            }
            let body = &rest[open + 1..close];
            rest = &rest[close + 1..];
            let mut points: Vec<usize> = Vec::new();
            for token in body.split(|c: char| c.is_whitespace() || c == ',') {
                if token.is_empty() {
                    continue;
                }
                let value: usize = token.parse().map_err(|_| CoversError::CycleParse {
                    detail: format!("bad point {token:?}"),
                })?;
                if (1..=degree).contains(&value) {
                    points.push(value - 1);
                } else if value > degree && token.chars().all(|c| c.is_ascii_digit()) {
                    // Compact digit form: split into single-digit points.
                    for c in token.chars() {
                        let d = c.to_digit(10).unwrap() as usize;
                        if !(1..=degree).contains(&d) {
                            return Err(CoversError::CycleParse {
                                detail: format!("point {d} out of range 1..={degree}"),
                            });
                        }
                        points.push(d - 1);
                    }
                } else {
                    return Err(CoversError::CycleParse {
                        detail: format!("point {value} out of range 1..={degree}"),
                    });
                }
            }
            if points.len() == 1 {
                continue; // explicit fixed point
            }
            for window in 0..points.len() {
                let from = points[window];
                let to = points[(window + 1) % points.len()];
                if moved[from] {
                    return Err(CoversError::CycleParse {
                        detail: format!("point {} appears twice", from + 1),
                    });
                }
                moved[from] = true;
                images[from] = to;
            }
        }
        Perm::new(images)
    }
}

impl fmt::Display for Perm {
    /// Canonical 1-based cycle notation; the identity is `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Mul for &Perm {
    type Output = Perm;
    /// Right-to-left composition: `(p * q)(x) = p(q(x))`.
    fn mul(self, rhs: &Perm) -> Perm {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch in composition");
        Perm(rhs.0.iter().map(|&x| self.0[x]).collect())
    }
}

impl Mul for Perm {
    type Output = Perm;
    fn mul(self, rhs: Perm) -> Perm {
        &self * &rhs
    }
}

/// The commutator `[a, b] = a b a^-1 b^-1`.
pub fn commutator(a: &Perm, b: &Perm) -> Perm {
    &(&(a * b) * &a.inverse()) * &b.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, degree: usize) -> Perm {
        Perm::parse_cycles(text, degree).unwrap()
    }

    #[test]
    fn builds_and_rejects() {
        assert!(Perm::new(vec![1, 0, 2]).is_ok());
        assert!(Perm::new(vec![1, 1, 2]).is_err());
        assert!(Perm::new(vec![3, 0, 1]).is_err());
        assert!(Perm::identity(4).is_identity());
    }

    #[test]
    fn composes_right_to_left() {
        // (1 2) * (1 3): first swap 1,3 then swap 1,2 — sends 1 -> 3 -> 3,
        // 3 -> 1 -> 2, 2 -> 2 -> 1, i.e. the 3-cycle (1 3 2) 0-based.
        let a = p("(1 2)", 3);
        let b = p("(1 3)", 3);
        let ab = &a * &b;
        assert_eq!(ab.apply(0), 2);
        assert_eq!(ab.apply(2), 1);
        assert_eq!(ab.apply(1), 0);
    }

    #[test]
    fn commutator_of_transpositions_is_three_cycle() {
        let a = p("(1 2)", 3);
        let b = p("(1 3)", 3);
        let c = commutator(&a, &b);
        assert_eq!(c.to_string(), "(1 2 3)");
        assert_eq!(c.apply(0), 1); // 1 -> 2
        assert_eq!(c.apply(1), 2); // 2 -> 3
        assert_eq!(c.apply(2), 0); // 3 -> 1
        assert_eq!(c.order(), 3);
    }

    #[test]
    fn inverse_and_order() {
        let a = p("(1 2 3 4 5)", 5);
        assert_eq!(a.order(), 5);
        assert!((&a * &a.inverse()).is_identity());
        let b = p("(1 2)(3 4 5)", 5);
        assert_eq!(b.order(), 6);
    }

    #[test]
    fn canonical_display() {
        assert_eq!(Perm::identity(5).to_string(), "()");
        assert_eq!(p("(3 4)(1 2)", 5).to_string(), "(1 2)(3 4)");
        assert_eq!(p("(2 3 1)", 3).to_string(), "(1 2 3)");
        // Round trip through text.
        let q = p("(1 5)(2 4)", 6);
        assert_eq!(Perm::parse_cycles(&q.to_string(), 6).unwrap(), q);
    }

    #[test]
    fn parses_compact_and_comma_forms() {
        assert_eq!(p("(12)", 3), p("(1 2)", 3));
        assert_eq!(p("(123)(45)", 5), p("(1 2 3)(4 5)", 5));
        assert_eq!(p("(1,2,3)", 3), p("(1 2 3)", 3));
        assert_eq!(p("()", 3), Perm::identity(3));
        assert_eq!(p("(2)", 3), Perm::identity(3)); // explicit fixed point
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(Perm::parse_cycles("", 3).is_err());
        assert!(Perm::parse_cycles("(1 2", 3).is_err());
        assert!(Perm::parse_cycles("(1 4)", 3).is_err());
        assert!(Perm::parse_cycles("(1 2)(2 3)", 3).is_err());
        assert!(Perm::parse_cycles("(1 0)", 3).is_err());
        assert!(Perm::parse_cycles("x(1 2)", 3).is_err());
    }

    #[test]
    fn identity_is_lexicographically_least() {
        let e = Perm::identity(3);
        for images in [[0, 2, 1], [1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            assert!(e < Perm::new(images.to_vec()).unwrap());
        }
    }
}
