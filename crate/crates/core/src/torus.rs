//! Characters of the n-torsion of the torus, the W-action on them, and the
//! reflection subgroups W_λ attached to each character.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::coxeter::{Elt, Subgroup};
use crate::error::{Error, Result};
use crate::root_datum::dot;
use crate::weyl::{WeylElt, WeylGroup};

/// Default bound on n^ρ.
pub const CHAR_GUARD: usize = 1_000_000;

/// A character λ of T_n, in character-lattice coordinates mod n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusChar {
    pub n: u32,
    pub coords: Vec<u32>,
}

impl TorusChar {
    pub fn new(n: u32, coords: &[i64]) -> Self {
        TorusChar {
            n,
            coords: coords
                .iter()
                .map(|&c| c.rem_euclid(i64::from(n)) as u32)
                .collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        TorusChar {
            n: self.n,
            coords: self.coords.iter().map(|&c| (self.n - c) % self.n).collect(),
        }
    }

    /// ⟨λ, y⟩ mod n for y in Y-coordinates.
    pub fn pairing(&self, y: &[i64]) -> u32 {
        let c: Vec<i64> = self.coords.iter().map(|&c| i64::from(c)).collect();
        dot(&c, y).rem_euclid(i64::from(self.n)) as u32
    }
}

impl fmt::Display for TorusChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Handle of a character within a [`CharSpace`]; numeric order is the
/// lexicographic order of coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CharId(pub u32);

impl CharId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A universal basis index w·λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Idx {
    pub w: WeylElt,
    pub lambda: CharId,
}

impl Idx {
    pub fn new(w: WeylElt, lambda: CharId) -> Self {
        Idx { w, lambda }
    }
}

/// The data R_λ, W_λ and |·|_λ for a character λ.
#[derive(Debug)]
pub struct LambdaData {
    pub lambda: CharId,
    /// Root indices α with ⟨λ, α̌⟩ ≡ 0 mod n.
    pub roots: Vec<usize>,
    pub positive_roots: Vec<usize>,
    /// Simple system of R_λ⁺ (root indices).
    pub simple_roots: Vec<usize>,
    /// W_λ with its Coxeter structure over `simple_roots`.
    pub subgroup: Subgroup,
}

impl LambdaData {
    /// |w|_λ for w ∈ W_λ given as an ambient element.
    pub fn lambda_length(&self, w: WeylElt) -> Option<u32> {
        self.subgroup
            .from_ambient(w)
            .map(|local| self.subgroup.coxeter().length(local))
    }

    pub fn contains(&self, w: WeylElt) -> bool {
        self.subgroup.contains(w)
    }
}

/// The character group 𝔰_n of a root datum with its W-action.
pub struct CharSpace {
    weyl: Arc<WeylGroup>,
    n: u32,
    chars: Vec<TorusChar>,
    /// `act[w * N + λ]`.
    act: Vec<u32>,
    /// `gen_fixes[g * N + λ]`: s_g ∈ W_λ.
    gen_in_stab: Vec<bool>,
    lambda_data: Vec<OnceLock<Arc<LambdaData>>>,
}

impl fmt::Debug for CharSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CharSpace")
            .field("n", &self.n)
            .field("size", &self.chars.len())
            .finish()
    }
}

impl CharSpace {
    pub fn new(weyl: Arc<WeylGroup>, n: u32) -> Result<Arc<Self>> {
        Self::with_guard(weyl, n, CHAR_GUARD)
    }

    pub fn with_guard(weyl: Arc<WeylGroup>, n: u32, guard: usize) -> Result<Arc<Self>> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be positive".into()));
        }
        let rank = weyl.datum().rank();
        let total = (n as u128).checked_pow(rank as u32).unwrap_or(u128::MAX);
        if total > guard as u128 {
            return Err(Error::Guard(format!(
                "n^rank = {n}^{rank} exceeds character guard {guard}"
            )));
        }
        let total = total as usize;
        if total.saturating_mul(weyl.order()) > 50 * guard {
            return Err(Error::Guard(format!(
                "|W| * n^rank = {} * {total} is too large",
                weyl.order()
            )));
        }
        let chars: Vec<TorusChar> = (0..total)
            .map(|mut k| {
                let mut coords = vec![0u32; rank];
                for c in coords.iter_mut().rev() {
                    *c = (k % n as usize) as u32;
                    k /= n as usize;
                }
                TorusChar { n, coords }
            })
            .collect();
        let index_of = |c: &TorusChar| -> u32 {
            c.coords
                .iter()
                .fold(0u64, |acc, &x| acc * u64::from(n) + u64::from(x)) as u32
        };
        let mut act = Vec::with_capacity(weyl.order() * total);
        for w in weyl.all_elements() {
            for c in &chars {
                let x: Vec<i64> = c.coords.iter().map(|&v| i64::from(v)).collect();
                let image = TorusChar::new(n, &weyl.act_on_vector(w, &x));
                act.push(index_of(&image));
            }
        }
        let datum = weyl.datum();
        let mut gen_in_stab = Vec::with_capacity(datum.semisimple_rank() * total);
        for g in 0..datum.semisimple_rank() {
            for c in &chars {
                gen_in_stab.push(c.pairing(&datum.simple_coroots()[g]) == 0);
            }
        }
        Ok(Arc::new(CharSpace {
            weyl,
            n,
            lambda_data: (0..total).map(|_| OnceLock::new()).collect(),
            chars,
            act,
            gen_in_stab,
        }))
    }

    pub fn weyl(&self) -> &Arc<WeylGroup> {
        &self.weyl
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn all_chars(&self) -> impl Iterator<Item = CharId> {
        (0..self.chars.len() as u32).map(CharId)
    }

    pub fn get(&self, id: CharId) -> &TorusChar {
        &self.chars[id.index()]
    }

    pub fn id(&self, c: &TorusChar) -> Result<CharId> {
        if c.n != self.n {
            return Err(Error::ModulusMismatch(c.n, self.n));
        }
        if c.coords.len() != self.weyl.datum().rank() || c.coords.iter().any(|&x| x >= self.n) {
            return Err(Error::InvalidInput(format!("{c} is not a reduced character mod {}", self.n)));
        }
        Ok(CharId(
            c.coords
                .iter()
                .fold(0u64, |acc, &x| acc * u64::from(self.n) + u64::from(x)) as u32,
        ))
    }

    pub fn id_of_coords(&self, coords: &[i64]) -> Result<CharId> {
        if coords.len() != self.weyl.datum().rank() {
            return Err(Error::InvalidInput(format!(
                "character {coords:?} does not have rank {}",
                self.weyl.datum().rank()
            )));
        }
        self.id(&TorusChar::new(self.n, coords))
    }

    pub fn zero(&self) -> CharId {
        CharId(0)
    }

    /// w(λ).
    #[inline]
    pub fn act(&self, w: WeylElt, lambda: CharId) -> CharId {
        CharId(self.act[w.index() * self.chars.len() + lambda.index()])
    }

    pub fn inverse(&self, lambda: CharId) -> CharId {
        self.id(&self.get(lambda).inverse()).expect("inverse is reduced")
    }

    /// Whether the simple reflection s_g lies in W_λ.
    #[inline]
    pub fn gen_in_stabilizer(&self, g: usize, lambda: CharId) -> bool {
        self.gen_in_stab[g * self.chars.len() + lambda.index()]
    }

    /// Sorted W-orbit of λ.
    pub fn orbit(&self, lambda: CharId) -> Vec<CharId> {
        let mut o: Vec<CharId> = self
            .weyl
            .all_elements()
            .into_iter()
            .map(|w| self.act(w, lambda))
            .collect();
        o.sort_unstable();
        o.dedup();
        o
    }

    /// All W-orbits, ordered by their smallest element.
    pub fn orbits(&self) -> Vec<Vec<CharId>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for l in self.all_chars() {
            if seen[l.index()] {
                continue;
            }
            let o = self.orbit(l);
            for x in &o {
                seen[x.index()] = true;
            }
            out.push(o);
        }
        out
    }

    pub fn lambda_data(&self, lambda: CharId) -> Result<Arc<LambdaData>> {
        if let Some(d) = self.lambda_data[lambda.index()].get() {
            return Ok(d.clone());
        }
        let d = Arc::new(self.build_lambda_data(lambda)?);
        Ok(self.lambda_data[lambda.index()].get_or_init(|| d).clone())
    }

    fn build_lambda_data(&self, lambda: CharId) -> Result<LambdaData> {
        let datum = self.weyl.datum();
        let chi = self.get(lambda);
        let roots: Vec<usize> = (0..datum.roots().len())
            .filter(|&r| chi.pairing(&datum.roots()[r].coroot) == 0)
            .collect();
        let positive_roots: Vec<usize> = roots
            .iter()
            .copied()
            .filter(|&r| datum.roots()[r].positive)
            .collect();
        let simple_roots: Vec<usize> = positive_roots
            .iter()
            .copied()
            .filter(|&r| {
                let target = &datum.roots()[r].simple_coords;
                !positive_roots.iter().any(|&a| {
                    positive_roots.iter().any(|&b| {
                        let sa = &datum.roots()[a].simple_coords;
                        let sb = &datum.roots()[b].simple_coords;
                        sa.iter().zip(sb).map(|(x, y)| x + y).eq(target.iter().copied())
                    })
                })
            })
            .collect();
        let gens: Vec<Elt> = simple_roots.iter().map(|&r| self.weyl.reflection(r)).collect();
        let subgroup = Subgroup::generated_by(self.weyl.coxeter(), &gens)?;
        // the simple reflections generate all of W_λ
        for &r in &roots {
            if !subgroup.contains(self.weyl.reflection(r)) {
                return Err(Error::Invariant(format!(
                    "reflection of root {r} not in the group generated by the simple system"
                )));
            }
        }
        // Coxeter length over the simple system equals the inversion count in R_λ⁺
        let roots_all = datum.roots();
        for local in subgroup.coxeter().elements() {
            let w = subgroup.to_ambient(local);
            let inv = positive_roots
                .iter()
                .filter(|&&r| !roots_all[self.weyl.act_on_root_index(w, r)].positive)
                .count();
            if inv as u32 != subgroup.coxeter().length(local) {
                return Err(Error::Invariant("λ-length differs from Coxeter length".into()));
            }
            if self.act(w, lambda) != lambda {
                return Err(Error::Invariant("W_λ does not fix λ".into()));
            }
        }
        Ok(LambdaData {
            lambda,
            roots,
            positive_roots,
            simple_roots,
            subgroup,
        })
    }

    /// The unique element of minimal length in w W_λ.
    pub fn min_coset_rep(&self, w: WeylElt, lambda: CharId) -> Result<WeylElt> {
        let data = self.lambda_data(lambda)?;
        let grp = self.weyl.coxeter();
        let mut best: Option<(u32, WeylElt)> = None;
        let mut ties = 0;
        for &x in data.subgroup.ambient_elements() {
            let z = grp.mul(w, x);
            let l = grp.length(z);
            match best {
                Some((bl, _)) if l > bl => {}
                Some((bl, _)) if l == bl => ties += 1,
                _ => {
                    best = Some((l, z));
                    ties = 0;
                }
            }
        }
        if ties > 0 {
            return Err(Error::Invariant(format!(
                "coset of {} has {} minimal elements",
                grp.word_string(w),
                ties + 1
            )));
        }
        Ok(best.expect("coset is nonempty").1)
    }

    pub fn char_json(&self, lambda: CharId) -> Vec<u32> {
        self.get(lambda).coords.clone()
    }

    /// Whether every element of this space is fixed by λ ↦ λ scaled into `other`.
    pub fn divides(&self, other: &CharSpace) -> bool {
        other.n.is_multiple_of(self.n)
    }
}

/// The block I_𝔬 = W × 𝔬 of indices over one W-orbit, sorted by the total
/// order (w, λ).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub orbit: Vec<CharId>,
    pub indices: Vec<Idx>,
}

impl Block {
    pub fn new(space: &CharSpace, lambda: CharId) -> Self {
        Self::from_orbit(space, space.orbit(lambda))
    }

    pub fn from_orbit(space: &CharSpace, orbit: Vec<CharId>) -> Self {
        let mut indices = Vec::with_capacity(orbit.len() * space.weyl().order());
        for w in space.weyl().all_elements() {
            for &l in &orbit {
                indices.push(Idx::new(w, l));
            }
        }
        Block { orbit, indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains_char(&self, lambda: CharId) -> bool {
        self.orbit.binary_search(&lambda).is_ok()
    }

    /// Position of `i` in [`Self::indices`].
    pub fn position(&self, i: Idx) -> Option<usize> {
        self.indices.binary_search(&i).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::RootDatum;

    fn space(name: &str, n: u32) -> Arc<CharSpace> {
        let w = WeylGroup::new(RootDatum::preset(name).unwrap()).unwrap();
        CharSpace::new(w, n).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(space("A1-SL2", 1).len(), 1);
        assert_eq!(space("A1-SL2", 8).len(), 8);
        assert_eq!(space("A2", 2).len(), 4);
        let w = WeylGroup::new(RootDatum::preset("A2").unwrap()).unwrap();
        assert!(matches!(CharSpace::with_guard(w, 1001, 1_000_000), Err(Error::Guard(_))));
    }

    #[test]
    fn sl2_action_is_negation() {
        let s = space("A1-SL2", 8);
        let sigma = s.weyl().parse_word("1").unwrap();
        for l in s.all_chars() {
            let expected = (8 - s.get(l).coords[0]) % 8;
            assert_eq!(s.get(s.act(sigma, l)).coords[0], expected);
            assert_eq!(s.act(WeylElt::IDENTITY, l), l);
        }
        let four = s.id_of_coords(&[4]).unwrap();
        assert_eq!(s.act(sigma, four), four);
    }

    #[test]
    fn sl2_orbits() {
        let s = space("A1-SL2", 8);
        let two = s.id_of_coords(&[2]).unwrap();
        let orbit: Vec<u32> = s.orbit(two).iter().map(|&l| s.get(l).coords[0]).collect();
        assert_eq!(orbit, vec![2, 6]);
        assert_eq!(Block::new(&s, two).len(), 4);
        assert_eq!(Block::new(&s, s.zero()).len(), 2);
        let four = s.id_of_coords(&[4]).unwrap();
        assert_eq!(Block::new(&s, four).len(), 2);
    }

    #[test]
    fn sl2_lambda_data() {
        let s = space("A1-SL2", 8);
        let zero = s.lambda_data(s.zero()).unwrap();
        assert_eq!(zero.roots.len(), 2);
        assert_eq!(zero.subgroup.order(), 2);
        for c in [2, 4] {
            let d = s.lambda_data(s.id_of_coords(&[c]).unwrap()).unwrap();
            assert!(d.roots.is_empty());
            assert_eq!(d.subgroup.order(), 1);
        }
    }

    #[test]
    fn act_is_a_group_action_and_w_lambda_fixes_lambda() {
        for (name, n) in [("A2", 3), ("B2", 3), ("G2", 2), ("A1-SL2", 12), ("GL2", 3)] {
            let s = space(name, n);
            let wg = s.weyl().clone();
            for l in s.all_chars() {
                for a in wg.all_elements() {
                    for b in wg.all_elements() {
                        assert_eq!(s.act(wg.multiply(a, b), l), s.act(a, s.act(b, l)));
                    }
                }
                let d = s.lambda_data(l).unwrap();
                for &w in d.subgroup.ambient_elements() {
                    assert_eq!(s.act(w, l), l);
                }
                // W_λ = W_{λ^{-1}}
                let dinv = s.lambda_data(s.inverse(l)).unwrap();
                assert_eq!(d.subgroup.ambient_elements().len(), dinv.subgroup.ambient_elements().len());
                assert!(d.subgroup.ambient_elements().iter().all(|&w| dinv.contains(w)));
            }
        }
    }

    #[test]
    fn roots_transport_under_w() {
        // w(R_λ) = R_{w(λ)}
        let s = space("B2", 3);
        let wg = s.weyl().clone();
        for l in s.all_chars() {
            let d = s.lambda_data(l).unwrap();
            for w in wg.all_elements() {
                let d2 = s.lambda_data(s.act(w, l)).unwrap();
                let mut image: Vec<usize> = d.roots.iter().map(|&r| wg.act_on_root_index(w, r)).collect();
                image.sort_unstable();
                assert_eq!(image, d2.roots);
            }
        }
    }

    #[test]
    fn lambda_length_by_reduced_word_formula() {
        // |w|_λ = #{i : s_r..s_{i+1} s_i s_{i+1}..s_r ∈ W_λ}
        let s = space("G2", 2);
        let wg = s.weyl().clone();
        let grp = wg.coxeter();
        for l in s.all_chars() {
            let d = s.lambda_data(l).unwrap();
            for &w in d.subgroup.ambient_elements() {
                let word = grp.word(w).to_vec();
                let r = word.len();
                let count = (0..r)
                    .filter(|&i| {
                        let tail: Vec<usize> = word[i + 1..].iter().map(|&g| g as usize).collect();
                        let t = grp.from_word(&tail).unwrap();
                        let si = grp.generator(word[i] as usize);
                        let conj = grp.mul(grp.mul(grp.inv(t), si), t);
                        d.contains(conj)
                    })
                    .count();
                assert_eq!(Some(count as u32), d.lambda_length(w));
            }
        }
    }

    #[test]
    fn min_coset_rep_examples() {
        let s = space("A2", 3);
        let wg = s.weyl().clone();
        let w0 = wg.parse_word("121").unwrap();
        // λ = (1,1): no root pairs to 0 mod 3
        let l11 = s.id_of_coords(&[1, 1]).unwrap();
        assert_eq!(s.lambda_data(l11).unwrap().subgroup.order(), 1);
        assert_eq!(s.min_coset_rep(w0, l11).unwrap(), w0);
        // λ = (1,2): only the highest root pairs to 0, W_λ = {e, s1s2s1}
        let l12 = s.id_of_coords(&[1, 2]).unwrap();
        let d = s.lambda_data(l12).unwrap();
        assert_eq!(d.subgroup.order(), 2);
        assert!(d.contains(w0));
        assert_eq!(s.min_coset_rep(w0, l12).unwrap(), WeylElt::IDENTITY);
        // λ = 0: every coset is W
        for w in wg.all_elements() {
            assert_eq!(s.min_coset_rep(w, s.zero()).unwrap(), WeylElt::IDENTITY);
        }
    }

    #[test]
    fn min_coset_rep_matches_enumeration() {
        let s = space("B2", 3);
        let wg = s.weyl().clone();
        for l in s.all_chars() {
            let d = s.lambda_data(l).unwrap();
            for w in wg.all_elements() {
                let coset: Vec<WeylElt> =
                    d.subgroup.ambient_elements().iter().map(|&x| wg.multiply(w, x)).collect();
                let min_len = coset.iter().map(|&z| wg.length(z)).min().unwrap();
                let z = s.min_coset_rep(w, l).unwrap();
                assert_eq!(wg.length(z), min_len);
                assert!(coset.contains(&z));
            }
        }
    }
}
