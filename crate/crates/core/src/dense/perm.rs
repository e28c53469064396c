use crate::error::{arg, Result};

/// Permutation of `0..n` built up from recorded transpositions.
///
/// `map[i]` is the original index that ended up in position `i`. For a
/// factorization this gives `A[perm_r.map[i], perm_c.map[j]] = (L U)[i, j]`.
/// Swaps are recorded in the order they were applied; identity swaps
/// (a step that kept its own row or column) are not recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
    swaps: Vec<(usize, usize)>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { map: (0..n).collect(), swaps: Vec::new() }
    }

    /// Replays `swaps` starting from the identity.
    pub fn from_swaps(n: usize, swaps: &[(usize, usize)]) -> Result<Self> {
        let mut p = Permutation::identity(n);
        for &(a, b) in swaps {
            if a >= n || b >= n {
                return arg(format!("swap ({a}, {b}) out of range for n = {n}"));
            }
            p.swap(a, b);
        }
        Ok(p)
    }

    /// Builds a permutation from an explicit map, with the recorded swaps of
    /// a selection-sort decomposition.
    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &m in &map {
            if m >= n || seen[m] {
                return arg("map is not a bijection");
            }
            seen[m] = true;
        }
        let mut p = Permutation::identity(n);
        let mut pos: Vec<usize> = (0..n).collect();
        for i in 0..n {
            if p.map[i] != map[i] {
                let j = pos[map[i]];
                let (a, b) = (p.map[i], p.map[j]);
                p.swap(i, j);
                pos[a] = j;
                pos[b] = i;
            }
        }
        Ok(p)
    }

    /// Exchanges positions `a` and `b`.
    pub fn swap(&mut self, a: usize, b: usize) {
        if a != b {
            self.map.swap(a, b);
            self.swaps.push((a, b));
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn swaps(&self) -> &[(usize, usize)] {
        &self.swaps
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i == m)
    }

    pub fn inverse_map(&self) -> Vec<usize> {
        let mut inv = vec![0; self.map.len()];
        for (i, &m) in self.map.iter().enumerate() {
            inv[m] = i;
        }
        inv
    }

    /// `out[i] = v[map[i]]`.
    pub fn gather<T: Copy>(&self, v: &[T]) -> Vec<T> {
        self.map.iter().map(|&m| v[m]).collect()
    }

    /// `out[map[i]] = v[i]`.
    pub fn scatter<T: Copy + Default>(&self, v: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); v.len()];
        for (i, &m) in self.map.iter().enumerate() {
            out[m] = v[i];
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn swaps_compose_in_order() {
        let p = Permutation::from_swaps(3, &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(p.map(), &[2, 0, 1]);
        assert_eq!(p.gather(&['a', 'b', 'c']), vec!['c', 'a', 'b']);
        assert_eq!(p.scatter(&p.gather(&[5, 6, 7])), vec![5, 6, 7]);
        assert!(Permutation::from_swaps(2, &[(0, 2)]).is_err());
    }

    #[test]
    fn identity_swaps_are_not_recorded() {
        let mut p = Permutation::identity(2);
        p.swap(1, 1);
        assert!(p.swaps().is_empty());
        assert!(p.is_identity());
    }

    proptest! {
        #[test]
        fn from_map_round_trips(perm in Just((0..12usize).collect::<Vec<_>>()).prop_shuffle()) {
            let p = Permutation::from_map(perm.clone()).unwrap();
            prop_assert_eq!(p.map(), &perm[..]);
            let replay = Permutation::from_swaps(perm.len(), p.swaps()).unwrap();
            prop_assert_eq!(replay.map(), &perm[..]);
            let inv = p.inverse_map();
            for (i, &m) in perm.iter().enumerate() {
                prop_assert_eq!(inv[m], i);
            }
        }
    }
}
