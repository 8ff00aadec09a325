//! The Weyl group of a root datum, with its action on X and on the roots.

use std::sync::Arc;

use crate::coxeter::{CoxeterGroup, Elt};
use crate::error::{Error, Result};
use crate::root_datum::RootDatum;

pub type WeylElt = Elt;

/// Default bound on |W| for enumeration.
pub const WEYL_GUARD: usize = 100_000;

#[derive(Debug)]
pub struct WeylGroup {
    datum: RootDatum,
    group: CoxeterGroup,
    /// Row-major rank x rank matrices acting on X-coordinates.
    matrices: Vec<Vec<i64>>,
    /// `root_perm[w * |R| + r]` = index of w(root r).
    root_perm: Vec<u32>,
}

impl WeylGroup {
    pub fn new(datum: RootDatum) -> Result<Arc<Self>> {
        Self::with_guard(datum, WEYL_GUARD)
    }

    pub fn with_guard(datum: RootDatum, guard: usize) -> Result<Arc<Self>> {
        let r = datum.rank();
        let gens: Vec<Vec<i64>> = (0..datum.semisimple_rank())
            .map(|i| datum.reflection_matrix(i))
            .collect();
        let identity: Vec<i64> = (0..r * r).map(|k| i64::from(k / r == k % r)).collect();
        let mut matrices_by_key = Vec::new();
        let group = CoxeterGroup::from_action(
            gens.len(),
            identity.clone(),
            |m, g| mat_mul(m, &gens[g], r),
            guard,
        )?;
        // recover matrices in element order from the canonical words
        for w in group.elements() {
            let m = group
                .word(w)
                .iter()
                .fold(identity.clone(), |acc, &g| mat_mul(&acc, &gens[g as usize], r));
            matrices_by_key.push(m);
        }
        let nroots = datum.roots().len();
        let mut root_perm = Vec::with_capacity(group.order() * nroots);
        for m in &matrices_by_key {
            for root in datum.roots() {
                let image = mat_vec(m, &root.vector, r);
                let idx = datum.root_index(&image).ok_or_else(|| {
                    Error::Invariant(format!("w maps root {:?} outside R", root.vector))
                })?;
                root_perm.push(idx as u32);
            }
        }
        Ok(Arc::new(WeylGroup {
            datum,
            group,
            matrices: matrices_by_key,
            root_perm,
        }))
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn coxeter(&self) -> &CoxeterGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn all_elements(&self) -> Vec<WeylElt> {
        self.group.elements().collect()
    }

    pub fn multiply(&self, a: WeylElt, b: WeylElt) -> WeylElt {
        self.group.mul(a, b)
    }

    pub fn invert(&self, w: WeylElt) -> WeylElt {
        self.group.inv(w)
    }

    pub fn length(&self, w: WeylElt) -> u32 {
        self.group.length(w)
    }

    pub fn matrix(&self, w: WeylElt) -> &[i64] {
        &self.matrices[w.index()]
    }

    /// w(x) for x in X-coordinates.
    pub fn act_on_vector(&self, w: WeylElt, x: &[i64]) -> Vec<i64> {
        mat_vec(self.matrix(w), x, self.datum.rank())
    }

    pub fn act_on_root_index(&self, w: WeylElt, r: usize) -> usize {
        self.root_perm[w.index() * self.datum.roots().len() + r] as usize
    }

    pub fn act_on_root(&self, w: WeylElt, root: &[i64]) -> Result<Vec<i64>> {
        let r = self
            .datum
            .root_index(root)
            .ok_or_else(|| Error::InvalidInput(format!("{root:?} is not a root")))?;
        Ok(self.datum.roots()[self.act_on_root_index(w, r)].vector.clone())
    }

    /// Reflection s_alpha for the root with index `r`.
    pub fn reflection(&self, r: usize) -> WeylElt {
        // s_{w(a_i)} = w s_i w^-1: find w, i with w(alpha_i) = root r
        let l = self.datum.semisimple_rank();
        for w in self.group.elements() {
            for i in 0..l {
                if self.act_on_root_index(w, self.datum.simple_root_index(i)) == r {
                    let wi = self.group.rmul_gen(w, i);
                    return self.group.mul(wi, self.group.inv(w));
                }
            }
        }
        unreachable!("every root is W-conjugate to a simple root")
    }

    /// #{alpha > 0 : w(alpha) < 0}.
    pub fn inversion_count(&self, w: WeylElt) -> usize {
        let roots = self.datum.roots();
        (0..self.datum.num_positive())
            .filter(|&r| !roots[self.act_on_root_index(w, r)].positive)
            .count()
    }

    pub fn bruhat_leq(&self, y: WeylElt, w: WeylElt) -> bool {
        self.group.bruhat_leq(y, w)
    }

    pub fn word_string(&self, w: WeylElt) -> String {
        self.group.word_string(w)
    }

    pub fn parse_word(&self, s: &str) -> Result<WeylElt> {
        self.group.parse_word(s)
    }

    pub fn from_word(&self, word: &[usize]) -> Result<WeylElt> {
        self.group.from_word(word)
    }
}

fn mat_mul(a: &[i64], b: &[i64], r: usize) -> Vec<i64> {
    let mut out = vec![0; r * r];
    for i in 0..r {
        for k in 0..r {
            let aik = a[i * r + k];
            if aik == 0 {
                continue;
            }
            for j in 0..r {
                out[i * r + j] += aik * b[k * r + j];
            }
        }
    }
    out
}

fn mat_vec(m: &[i64], x: &[i64], r: usize) -> Vec<i64> {
    (0..r)
        .map(|i| (0..r).map(|j| m[i * r + j] * x[j]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weyl(name: &str) -> Arc<WeylGroup> {
        WeylGroup::new(RootDatum::preset(name).unwrap()).unwrap()
    }

    #[test]
    fn group_orders() {
        for (name, order, maxlen) in [
            ("A1-SL2", 2, 1),
            ("A1-PGL2", 2, 1),
            ("A2", 6, 3),
            ("B2", 8, 4),
            ("G2", 12, 6),
            ("A3", 24, 6),
            ("GL2", 2, 1),
        ] {
            let w = weyl(name);
            assert_eq!(w.order(), order, "{name}");
            assert_eq!(w.coxeter().max_length(), maxlen, "{name}");
        }
    }

    #[test]
    fn a2_braid_and_inverse() {
        let w = weyl("A2");
        let s12 = w.parse_word("12").unwrap();
        let s1 = w.parse_word("1").unwrap();
        let p = w.multiply(s12, s1);
        assert_eq!(w.word_string(p), "121");
        assert_eq!(p, w.parse_word("212").unwrap());
        assert_eq!(w.length(p), 3);
        assert_eq!(w.word_string(w.invert(s12)), "21");
        assert_eq!(w.multiply(s1, s1), WeylElt::IDENTITY);
    }

    #[test]
    fn root_action_examples() {
        let w = weyl("A2");
        let d = w.datum();
        let a1 = d.simple_roots()[0].clone();
        let a2 = d.simple_roots()[1].clone();
        let s1 = w.parse_word("1").unwrap();
        assert_eq!(w.act_on_root(WeylElt::IDENTITY, &a1).unwrap(), a1);
        let neg: Vec<i64> = a1.iter().map(|x| -x).collect();
        assert_eq!(w.act_on_root(s1, &a1).unwrap(), neg);
        let sum: Vec<i64> = a1.iter().zip(&a2).map(|(x, y)| x + y).collect();
        assert_eq!(w.act_on_root(s1, &a2).unwrap(), sum);
        assert!(w.act_on_root(s1, &[5, 5]).is_err());
    }

    #[test]
    fn length_is_inversion_count() {
        for name in ["A1-SL2", "A2", "B2", "G2", "A3", "GL2", "A1xA1"] {
            let w = weyl(name);
            for x in w.all_elements() {
                assert_eq!(w.length(x) as usize, w.inversion_count(x), "{name}");
                assert_eq!(w.length(w.invert(x)), w.length(x));
                assert_eq!(w.invert(w.invert(x)), x);
            }
        }
    }

    #[test]
    fn reflections_are_involutions_with_image_minus_root() {
        let w = weyl("G2");
        let d = w.datum();
        for (r, root) in d.roots().iter().enumerate() {
            let s = w.reflection(r);
            assert_eq!(w.multiply(s, s), WeylElt::IDENTITY);
            let neg: Vec<i64> = root.vector.iter().map(|x| -x).collect();
            assert_eq!(w.act_on_root(s, &root.vector).unwrap(), neg);
        }
    }
}
