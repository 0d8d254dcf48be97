//! Permutations of `0..n` with left-to-right composition.
//!
//! All monodromy bookkeeping in this crate composes left-to-right:
//! `p.compose(&q)` applies `p` first, then `q`, so a product over a label
//! list multiplies in label order.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {} out of range for degree {}",
                    v, n
                )));
            }
            if seen[v] {
                return Err(Error::InvalidPermutation(format!("image {} repeated", v)));
            }
            seen[v] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of `0..n` from disjoint cycles (0-based entries).
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        for cycle in cycles {
            for (k, &v) in cycle.iter().enumerate() {
                if v >= n {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle entry {} out of range for degree {}",
                        v, n
                    )));
                }
                if used[v] {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle entry {} appears twice",
                        v
                    )));
                }
                used[v] = true;
                images[v] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self` first, then `other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&v| other.images[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Disjoint cycles, each starting at its minimal element, sorted by that
    /// element; fixed points appear as length-1 cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.images[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.images[cur];
            }
            out.push(cycle);
        }
        out
    }

    /// Multiset of cycle lengths, descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    /// Length of the cycle through `i`.
    pub fn cycle_len_through(&self, i: usize) -> usize {
        let mut len = 1;
        let mut cur = self.images[i];
        while cur != i {
            len += 1;
            cur = self.images[cur];
        }
        len
    }

    /// Total defect `n - #cycles`; one label's contribution to the
    /// ramification degree.
    pub fn defect(&self) -> usize {
        self.degree() - self.cycles().len()
    }

    pub fn order(&self) -> usize {
        self.cycles()
            .iter()
            .map(|c| c.len())
            .fold(1, num_integer::lcm)
    }

    /// Relabels points by `rho`: the result sends `rho(x)` to `rho(self(x))`.
    pub fn relabel(&self, rho: &Perm) -> Perm {
        let n = self.degree();
        let mut images = vec![0; n];
        for x in 0..n {
            images[rho.apply(x)] = rho.apply(self.apply(x));
        }
        Perm { images }
    }

    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Perm {
        let mut images: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            images.swap(i, j);
        }
        Perm { images }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl fmt::Display for Perm {
    /// Disjoint cycle notation with 1-based entries; identity is `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "()");
        }
        for cycle in self.cycles() {
            if cycle.len() < 2 {
                continue;
            }
            write!(f, "(")?;
            for (k, v) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", v + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// All permutations of `0..n` in lexicographic one-line order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut images: Vec<usize> = (0..n).collect();
    loop {
        out.push(Perm {
            images: images.clone(),
        });
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| images[i] < images[i + 1])
        else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| images[j] > images[i]).unwrap();
        images.swap(i, j);
        images[i + 1..].reverse();
    }
    out
}

/// Whether the group generated by `perms` acts transitively on `0..n`.
/// Forward closure suffices: inverses are positive powers of the generators.
pub fn is_transitive(n: usize, perms: &[&Perm]) -> bool {
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for p in perms {
            let y = p.apply(x);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_type_examples() {
        assert_eq!(Perm::identity(3).cycle_type(), vec![1, 1, 1]);
        let t = Perm::from_cycles(2, &[vec![0, 1]]).unwrap();
        assert_eq!(t.cycle_type(), vec![2]);
        let c = Perm::from_cycles(6, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(c.cycle_type(), vec![3, 1, 1, 1]);
    }

    #[test]
    fn compose_is_left_to_right() {
        let p = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let q = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
        // p sends 0->1, then q sends 1->2
        assert_eq!(p.compose(&q).apply(0), 2);
    }

    #[test]
    fn inverse_roundtrip() {
        let p = Perm::from_cycles(5, &[vec![0, 3, 1], vec![2, 4]]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    #[test]
    fn all_perms_sorted_and_complete() {
        let ps = all_perms(3);
        assert_eq!(ps.len(), 6);
        assert!(ps[0].is_identity());
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn transitivity() {
        let t = Perm::from_cycles(3, &[vec![0, 1]]).unwrap();
        let c = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        assert!(is_transitive(3, &[&t, &c]));
        assert!(!is_transitive(3, &[&t]));
    }

    #[test]
    fn display_cycles() {
        let p = Perm::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(p.to_string(), "(1 2)(3 4)");
        assert_eq!(Perm::identity(4).to_string(), "()");
    }
}
