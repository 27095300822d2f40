use std::fmt;

use crate::error::{Error, Result};

/// A bijection on the cells `1..=len`.
///
/// Images are stored 1-based: `image(i)` is the cell that `i` is sent to.
/// The action on vectors follows the convention `π(x)_i = x_{π⁻¹(i)}`, i.e.
/// the value at cell `i` is carried to cell `π(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Permutation {
            images: (1..=len).collect(),
        }
    }

    /// Builds a permutation from its 1-based image list, rejecting anything
    /// that is not a bijection of `1..=images.len()`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let len = images.len();
        let mut seen = vec![false; len];
        for &img in &images {
            if img == 0 || img > len {
                return Err(Error::InvalidPermutation {
                    len,
                    reason: format!("image {img} out of range"),
                });
            }
            if std::mem::replace(&mut seen[img - 1], true) {
                return Err(Error::InvalidPermutation {
                    len,
                    reason: format!("image {img} appears twice"),
                });
            }
        }
        Ok(Permutation { images })
    }

    /// The transposition exchanging cells `a` and `b`.
    pub fn transposition(len: usize, a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 || a > len || b > len {
            return Err(Error::invalid(format!(
                "transposition ({a} {b}) outside 1..={len}"
            )));
        }
        let mut images: Vec<usize> = (1..=len).collect();
        images.swap(a - 1, b - 1);
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles; cells not mentioned are fixed.
    pub fn from_cycles(len: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=len).collect();
        for cycle in cycles {
            for (k, &from) in cycle.iter().enumerate() {
                let to = cycle[(k + 1) % cycle.len()];
                if from == 0 || from > len || to == 0 || to > len {
                    return Err(Error::invalid(format!("cycle entry outside 1..={len}")));
                }
                images[from - 1] = to;
            }
        }
        Self::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `π(cell)` for a 1-based cell.
    pub fn image(&self, cell: usize) -> usize {
        self.images[cell - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| img == i + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&c| self.image(c)).collect(),
        })
    }

    /// The vector action `π(x) = (x_{π⁻¹(1)}, …, x_{π⁻¹(len)})`.
    pub fn act<T: Clone>(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: x.len(),
            });
        }
        let mut out: Vec<Option<T>> = vec![None; x.len()];
        for (i, value) in x.iter().enumerate() {
            out[self.images[i] - 1] = Some(value.clone());
        }
        Ok(out.into_iter().map(|v| v.expect("bijection")).collect())
    }

    /// Disjoint cycles with fixed points omitted, each rotated so its smallest
    /// cell comes first, sorted by that cell.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut visited = vec![false; self.len()];
        let mut cycles = Vec::new();
        for start in 1..=self.len() {
            if visited[start - 1] || self.image(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            visited[start - 1] = true;
            let mut cur = self.image(start);
            while cur != start {
                visited[cur - 1] = true;
                cycle.push(cur);
                cur = self.image(cur);
            }
            cycles.push(cycle);
        }
        cycles
    }
}

/// Disjoint-cycle notation, fixed points omitted; the identity prints as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, c) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Serialized in cycle notation.
impl serde::Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![1, 1, 3]).is_err());
        assert!(Permutation::from_images(vec![0, 1]).is_err());
        assert!(Permutation::from_images(vec![2, 3]).is_err());
        assert!(Permutation::from_images(vec![]).is_ok());
    }

    #[test]
    fn act_on_vectors() {
        let id = Permutation::identity(4);
        assert_eq!(id.act(&[1, 2, 1, 2]).unwrap(), vec![1, 2, 1, 2]);

        let swap = Permutation::from_cycles(4, &[&[1, 2]]).unwrap();
        assert_eq!(swap.act(&[1, 2, 1, 2]).unwrap(), vec![2, 1, 1, 2]);

        // π = (1 2 3): value at cell 1 moves to cell 2, etc.
        let rot = Permutation::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        assert_eq!(rot.act(&['a', 'b', 'c']).unwrap(), vec!['c', 'a', 'b']);

        assert!(id.act(&[1, 2]).is_err());
    }

    #[test]
    fn cycle_notation() {
        assert_eq!(Permutation::identity(5).to_string(), "()");
        let p = Permutation::from_images(vec![3, 1, 2, 4, 6, 5]).unwrap();
        assert_eq!(p.to_string(), "(1 3 2)(5 6)");
        assert_eq!(
            Permutation::transposition(4, 4, 2).unwrap().to_string(),
            "(2 4)"
        );
    }

    fn arb_perm(max_len: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_len)
            .prop_flat_map(|len| Just((1..=len).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_and_composition_laws(p in arb_perm(16)) {
            let inv = p.inverse();
            prop_assert!(p.compose(&inv).unwrap().is_identity());
            prop_assert!(inv.compose(&p).unwrap().is_identity());
            let x: Vec<usize> = (0..p.len()).map(|i| i * 7 % 5).collect();
            prop_assert_eq!(p.act(&inv.act(&x).unwrap()).unwrap(), x);
        }

        #[test]
        fn action_is_a_homomorphism(
            (p, q) in (1usize..10).prop_flat_map(|len| {
                let s = Just((1..=len).collect::<Vec<_>>()).prop_shuffle();
                (s.clone(), s)
            })
        ) {
            let p = Permutation::from_images(p).unwrap();
            let q = Permutation::from_images(q).unwrap();
            let x: Vec<usize> = (1..=p.len()).collect();
            let lhs = p.compose(&q).unwrap().act(&x).unwrap();
            let rhs = p.act(&q.act(&x).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cycles_rebuild_the_permutation(p in arb_perm(12)) {
            let cycles = p.cycles();
            let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
            prop_assert_eq!(Permutation::from_cycles(p.len(), &refs).unwrap(), p);
        }
    }
}
