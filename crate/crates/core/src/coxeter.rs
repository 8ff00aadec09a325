//! Finite Coxeter groups as explicit multiplication-by-generator tables.
//!
//! Elements are numbered in ShortLex order of their canonical reduced words
//! (generator order = the order in which generators were supplied), so the
//! numeric order of [`Elt`] handles is the canonical total order.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Handle of an element of a [`CoxeterGroup`]; index 0 is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elt(pub u32);

impl Elt {
    pub const IDENTITY: Elt = Elt(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone)]
pub struct CoxeterGroup {
    rank: usize,
    words: Vec<Vec<u8>>,
    lengths: Vec<u32>,
    right: Vec<u32>,
    left: Vec<u32>,
    inverse: Vec<u32>,
}

impl CoxeterGroup {
    /// Enumerates the group generated by `rank` involutions acting on keys.
    ///
    /// `step(key, g)` must return the key of `key * s_g`. Enumeration is a
    /// breadth-first closure; processing each level in ShortLex order and
    /// appending generators in increasing order makes the first word found
    /// for each element its ShortLex-minimal reduced word.
    pub fn from_action<K, F>(rank: usize, identity: K, mut step: F, guard: usize) -> Result<Self>
    where
        K: Clone + Eq + Hash,
        F: FnMut(&K, usize) -> K,
    {
        let mut keys: Vec<K> = vec![identity.clone()];
        let mut index: HashMap<K, u32> = HashMap::new();
        index.insert(identity, 0);
        let mut words: Vec<Vec<u8>> = vec![Vec::new()];
        let mut lengths = vec![0u32];
        let mut right = Vec::new();

        let mut level_start = 0;
        while level_start < keys.len() {
            let level_end = keys.len();
            for e in level_start..level_end {
                for g in 0..rank {
                    let next = step(&keys[e], g);
                    let id = match index.get(&next) {
                        Some(&id) => id,
                        None => {
                            let id = keys.len() as u32;
                            if keys.len() >= guard {
                                return Err(Error::Guard(format!(
                                    "group order exceeds enumeration guard {guard}"
                                )));
                            }
                            let mut w = words[e].clone();
                            w.push(g as u8);
                            words.push(w);
                            lengths.push(lengths[e] + 1);
                            index.insert(next.clone(), id);
                            keys.push(next);
                            id
                        }
                    };
                    right.push(id);
                }
            }
            level_start = level_end;
        }

        let size = keys.len();
        let mut group = CoxeterGroup {
            rank,
            words,
            lengths,
            right,
            left: vec![0; size * rank],
            inverse: vec![0; size],
        };
        for w in 0..size {
            for g in 0..rank {
                let mut x = group.right[g];
                for &h in &group.words[w] {
                    x = group.right[x as usize * rank + h as usize];
                }
                group.left[w * rank + g] = x;
            }
            let mut x = Elt::IDENTITY;
            for &h in group.words[w].iter().rev() {
                x = group.rmul_gen(x, h as usize);
            }
            group.inverse[w] = x.0;
        }
        Ok(group)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.lengths.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> + '_ {
        (0..self.order() as u32).map(Elt)
    }

    pub fn generator(&self, g: usize) -> Elt {
        Elt(self.right[g])
    }

    pub fn length(&self, w: Elt) -> u32 {
        self.lengths[w.index()]
    }

    pub fn word(&self, w: Elt) -> &[u8] {
        &self.words[w.index()]
    }

    pub fn max_length(&self) -> u32 {
        self.lengths.last().copied().unwrap_or(0)
    }

    /// `w * s_g`.
    #[inline]
    pub fn rmul_gen(&self, w: Elt, g: usize) -> Elt {
        Elt(self.right[w.index() * self.rank + g])
    }

    /// `s_g * w`.
    #[inline]
    pub fn lmul_gen(&self, g: usize, w: Elt) -> Elt {
        Elt(self.left[w.index() * self.rank + g])
    }

    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        self.words[b.index()]
            .iter()
            .fold(a, |x, &g| self.rmul_gen(x, g as usize))
    }

    pub fn inv(&self, w: Elt) -> Elt {
        Elt(self.inverse[w.index()])
    }

    pub fn from_word(&self, word: &[usize]) -> Result<Elt> {
        let mut x = Elt::IDENTITY;
        for &g in word {
            if g >= self.rank {
                return Err(Error::InvalidInput(format!(
                    "generator {g} out of range for rank {}",
                    self.rank
                )));
            }
            x = self.rmul_gen(x, g);
        }
        Ok(x)
    }

    pub fn is_left_descent(&self, g: usize, w: Elt) -> bool {
        self.length(self.lmul_gen(g, w)) < self.length(w)
    }

    pub fn is_right_descent(&self, w: Elt, g: usize) -> bool {
        self.length(self.rmul_gen(w, g)) < self.length(w)
    }

    pub fn longest(&self) -> Elt {
        Elt(self.order() as u32 - 1)
    }

    /// Bruhat order via the lifting property: if `s` is a right descent of
    /// `w` then `y <= w` iff `min(y, ys) <= ws`.
    pub fn bruhat_leq(&self, y: Elt, w: Elt) -> bool {
        let (mut y, mut w) = (y, w);
        loop {
            if self.length(y) > self.length(w) {
                return false;
            }
            if w == Elt::IDENTITY {
                return y == Elt::IDENTITY;
            }
            let s = *self.word(w).last().unwrap() as usize;
            let ys = self.rmul_gen(y, s);
            if self.length(ys) < self.length(y) {
                y = ys;
            }
            w = self.rmul_gen(w, s);
        }
    }

    /// Word rendered with 1-based generator labels (`"e"` for the identity).
    pub fn word_string(&self, w: Elt) -> String {
        format_word(self.word(w), self.rank)
    }

    pub fn parse_word(&self, s: &str) -> Result<Elt> {
        let letters = parse_word(s, self.rank)?;
        self.from_word(&letters)
    }
}

/// A reflection subgroup of an ambient group, carrying its own Coxeter
/// structure (local handles) and the embedding into the ambient group.
#[derive(Debug, Clone)]
pub struct Subgroup {
    group: CoxeterGroup,
    to_ambient: Vec<Elt>,
    from_ambient: Vec<Option<Elt>>,
}

impl Subgroup {
    /// Subgroup generated by the involutions `gens` of `ambient`, with the
    /// Coxeter structure in which `gens` are the simple reflections.
    pub fn generated_by(ambient: &CoxeterGroup, gens: &[Elt]) -> Result<Self> {
        let group = CoxeterGroup::from_action(
            gens.len(),
            Elt::IDENTITY,
            |&x, g| ambient.mul(x, gens[g]),
            ambient.order() + 1,
        )?;
        let mut to_ambient = Vec::with_capacity(group.order());
        for w in group.elements() {
            to_ambient.push(
                group
                    .word(w)
                    .iter()
                    .fold(Elt::IDENTITY, |x, &g| ambient.mul(x, gens[g as usize])),
            );
        }
        let mut from_ambient = vec![None; ambient.order()];
        for (local, &amb) in to_ambient.iter().enumerate() {
            from_ambient[amb.index()] = Some(Elt(local as u32));
        }
        Ok(Subgroup {
            group,
            to_ambient,
            from_ambient,
        })
    }

    /// The whole group viewed as a subgroup of itself.
    pub fn whole(ambient: &CoxeterGroup) -> Self {
        Subgroup {
            group: ambient.clone(),
            to_ambient: ambient.elements().collect(),
            from_ambient: ambient.elements().map(Some).collect(),
        }
    }

    pub fn coxeter(&self) -> &CoxeterGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn to_ambient(&self, local: Elt) -> Elt {
        self.to_ambient[local.index()]
    }

    pub fn from_ambient(&self, w: Elt) -> Option<Elt> {
        self.from_ambient[w.index()]
    }

    pub fn contains(&self, w: Elt) -> bool {
        self.from_ambient[w.index()].is_some()
    }

    /// Ambient elements in local (ShortLex over the subgroup generators) order.
    pub fn ambient_elements(&self) -> &[Elt] {
        &self.to_ambient
    }
}

pub(crate) fn format_word(word: &[u8], rank: usize) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    if rank < 10 {
        word.iter().map(|&g| char::from(b'1' + g)).collect()
    } else {
        word.iter()
            .map(|&g| (g as usize + 1).to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

pub(crate) fn parse_word(s: &str, rank: usize) -> Result<Vec<usize>> {
    let s = s.trim();
    if s == "e" || s.is_empty() {
        return Ok(Vec::new());
    }
    let bad = || Error::InvalidInput(format!("cannot parse word {s:?}"));
    let parts: Vec<usize> = if s.contains('.') || rank >= 10 {
        s.split('.')
            .map(|p| p.parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?
    } else {
        s.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
            .collect::<Result<_>>()?
    };
    parts
        .into_iter()
        .map(|g| {
            if g == 0 || g > rank {
                Err(bad())
            } else {
                Ok(g - 1)
            }
        })
        .collect()
}

impl fmt::Display for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dihedral group of order 2m acting on Z/m x {±1}.
    fn dihedral(m: i64) -> CoxeterGroup {
        CoxeterGroup::from_action(
            2,
            (0i64, 1i64),
            |&(r, e), g| {
                // elements as x -> e*x + r on Z/m; s_0: x->-x, s_1: x->1-x
                let (a, b) = if g == 0 { (0, -1) } else { (1, -1) };
                // (x -> e x + r) composed with s_g applied first
                ((r + e * a).rem_euclid(m), e * b)
            },
            1000,
        )
        .unwrap()
    }

    #[test]
    fn dihedral_orders_and_longest() {
        for m in 2..8 {
            let g = dihedral(m);
            assert_eq!(g.order() as i64, 2 * m);
            assert_eq!(g.max_length() as i64, m);
            let w0 = g.longest();
            assert_eq!(g.inv(w0), w0);
        }
    }

    #[test]
    fn shortlex_words_are_canonical() {
        let g = dihedral(3);
        let words: Vec<String> = g.elements().map(|w| g.word_string(w)).collect();
        assert_eq!(words, vec!["e", "1", "2", "12", "21", "121"]);
    }

    #[test]
    fn bruhat_matches_subword_oracle() {
        let g = dihedral(4);
        for w in g.elements() {
            let word = g.word(w).to_vec();
            let mut below = std::collections::HashSet::new();
            for mask in 0u32..(1 << word.len()) {
                let sub: Vec<usize> = (0..word.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| word[i] as usize)
                    .collect();
                below.insert(g.from_word(&sub).unwrap());
            }
            for y in g.elements() {
                assert_eq!(g.bruhat_leq(y, w), below.contains(&y));
            }
        }
    }

    #[test]
    fn word_round_trip() {
        let g = dihedral(6);
        for w in g.elements() {
            assert_eq!(g.parse_word(&g.word_string(w)).unwrap(), w);
        }
        assert!(g.parse_word("13").is_err());
    }
}
