//! The group algebra of W ⋉ T_n and its comparison with H_n at v = 1.
//!
//! T_n is identified with Y/nY, a character λ takes y to ζ_n^{⟨λ,y⟩}, and
//! W acts on Y contragrediently to its action on X.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_traits::ToPrimitive;

use crate::cells::PropertyCheck;
use crate::cyclotomic::{CycElt, CyclotomicRing};
use crate::error::{Error, Result};
use crate::hecke::HeckeAlgebra;
use crate::root_datum::dot;
use crate::torus::{CharId, Idx};
use crate::weyl::WeylElt;

/// A basis element w·t of ℚ[W T_n], t given by its index in Y/nY.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElt {
    pub w: WeylElt,
    pub t: u32,
}

/// W ⋉ (Y/nY).
#[derive(Debug, Clone)]
pub struct SemidirectGroup {
    n: u32,
    rank: usize,
    weyl_order: usize,
    /// y-coordinates of every torus element.
    points: Vec<Vec<i64>>,
    /// `act[w * |T| + t]` = w(t).
    act: Vec<u32>,
    mul_w: Vec<WeylElt>,
    inv_w: Vec<WeylElt>,
}

impl SemidirectGroup {
    pub fn new(alg: &HeckeAlgebra) -> Self {
        let weyl = alg.weyl();
        let n = alg.n();
        let rank = weyl.datum().rank();
        let size = (n as usize).pow(rank as u32);
        let points: Vec<Vec<i64>> = (0..size)
            .map(|mut k| {
                let mut y = vec![0i64; rank];
                for c in y.iter_mut().rev() {
                    *c = (k % n as usize) as i64;
                    k /= n as usize;
                }
                y
            })
            .collect();
        let encode = |y: &[i64]| -> u32 {
            y.iter().fold(0u64, |acc, &c| acc * u64::from(n) + c.rem_euclid(i64::from(n)) as u64) as u32
        };
        let elements = weyl.all_elements();
        let mut act = Vec::with_capacity(elements.len() * size);
        for &w in &elements {
            // w on Y is the transpose of w⁻¹ on X
            let m = weyl.matrix(weyl.invert(w));
            for y in &points {
                let image: Vec<i64> = (0..rank).map(|i| (0..rank).map(|j| m[j * rank + i] * y[j]).sum()).collect();
                act.push(encode(&image));
            }
        }
        let order = elements.len();
        let mul_w = (0..order * order)
            .map(|k| weyl.multiply(elements[k / order], elements[k % order]))
            .collect();
        let inv_w = elements.iter().map(|&w| weyl.invert(w)).collect();
        SemidirectGroup {
            n,
            rank,
            weyl_order: order,
            points,
            act,
            mul_w,
            inv_w,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn torus_len(&self) -> usize {
        self.points.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElt> + '_ {
        (0..self.weyl_order).flat_map(move |w| {
            (0..self.points.len() as u32).map(move |t| GroupElt { w: crate::coxeter::Elt(w as u32), t })
        })
    }

    pub fn point(&self, t: u32) -> &[i64] {
        &self.points[t as usize]
    }

    pub fn index_of(&self, y: &[i64]) -> u32 {
        let n = i64::from(self.n);
        y.iter().fold(0u64, |acc, &c| acc * self.n as u64 + c.rem_euclid(n) as u64) as u32
    }

    pub fn act(&self, w: WeylElt, t: u32) -> u32 {
        self.act[w.index() * self.points.len() + t as usize]
    }

    fn add_t(&self, a: u32, b: u32) -> u32 {
        let y: Vec<i64> = self.point(a).iter().zip(self.point(b)).map(|(x, y)| x + y).collect();
        self.index_of(&y)
    }

    /// (w t)(w' t') = w w' · w'⁻¹(t) t'.
    pub fn mul(&self, a: GroupElt, b: GroupElt) -> GroupElt {
        let w = self.mul_w[a.w.index() * self.weyl_order + b.w.index()];
        let t = self.add_t(self.act(self.inv_w[b.w.index()], a.t), b.t);
        GroupElt { w, t }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// Elements of H¹_n with coefficients in ℤ[ζ_m].
pub type CycHecke = BTreeMap<Idx, CycElt>;

fn add_to(out: &mut CycHecke, i: Idx, c: &CycElt) {
    let slot = out.entry(i).or_insert_with(|| c.scale(0));
    slot.add_assign(c);
    if slot.is_zero() {
        out.remove(&i);
    }
}

/// u_n(w t) = Σ_λ λ(t) T_w 1_λ, coefficients in ℤ[ζ_m] for a multiple m of n.
pub fn u_map(alg: &HeckeAlgebra, group: &SemidirectGroup, ring: &CyclotomicRing, g: GroupElt) -> CycHecke {
    let space = alg.space();
    let scale = i64::from(ring.order() / alg.n());
    let y = group.point(g.t);
    let mut out = CycHecke::new();
    for l in space.all_chars() {
        let x: Vec<i64> = space.get(l).coords.iter().map(|&c| i64::from(c)).collect();
        add_to(&mut out, Idx::new(g.w, l), &ring.zeta_pow(scale * dot(&x, y)));
    }
    out
}

fn specialized_product(alg: &HeckeAlgebra, a: Idx, b: Idx) -> Result<Vec<(Idx, i64)>> {
    let prod = alg.t_mul(&alg.basis(a), &alg.basis(b))?;
    alg.specialize_one(&prod)
        .into_iter()
        .map(|(i, c)| {
            c.to_i64()
                .map(|c| (i, c))
                .ok_or_else(|| Error::Invariant("coefficient overflow at v = 1".into()))
        })
        .collect()
}

/// Checks that u_n is a unital algebra isomorphism ℚ[W T_n] → H¹_n.
pub fn check_isomorphism(alg: &HeckeAlgebra) -> Result<Vec<PropertyCheck>> {
    let group = SemidirectGroup::new(alg);
    let ring = CyclotomicRing::new(alg.n());
    let space = alg.space();
    let images: HashMap<GroupElt, CycHecke> = group.elements().map(|g| (g, u_map(alg, &group, &ring, g))).collect();
    let mut products: HashMap<(Idx, Idx), Vec<(Idx, i64)>> = HashMap::new();

    let mut mult = PropertyCheck::new("u_n multiplicative");
    for a in group.elements() {
        for b in group.elements() {
            let mut lhs = CycHecke::new();
            for (&i, ci) in &images[&a] {
                for (&j, cj) in &images[&b] {
                    let c = ring.mul(ci, cj);
                    if let Entry::Vacant(e) = products.entry((i, j)) {
                        e.insert(specialized_product(alg, i, j)?);
                    }
                    for &(k, m) in &products[&(i, j)] {
                        add_to(&mut lhs, k, &c.scale(m));
                    }
                }
            }
            let rhs = &images[&group.mul(a, b)];
            mult.record(&lhs == rhs, || format!("pair {a:?}, {b:?}"));
        }
    }

    // Σ_t λ(t)⁻¹ u(w t) = |T| T_w 1_λ
    let mut bij = PropertyCheck::new("u_n bijective");
    let size = group.torus_len() as i64;
    for w in alg.weyl().all_elements() {
        for l in space.all_chars() {
            let x: Vec<i64> = space.get(l).coords.iter().map(|&c| i64::from(c)).collect();
            let mut acc = CycHecke::new();
            for t in 0..group.torus_len() as u32 {
                let coeff = ring.zeta_pow(-dot(&x, group.point(t)));
                for (&k, c) in &images[&GroupElt { w, t }] {
                    add_to(&mut acc, k, &ring.mul(&coeff, c));
                }
            }
            let expected: CycHecke = [(Idx::new(w, l), ring.from_int(size))].into_iter().collect();
            bij.record(acc == expected, || alg.idx_string(Idx::new(w, l)));
        }
    }

    let mut unit = PropertyCheck::new("u_n unital");
    let one: CycHecke = alg
        .specialize_one(&alg.unit())
        .into_iter()
        .map(|(i, c)| (i, ring.from_int(c.to_i64().unwrap_or(0))))
        .collect();
    unit.record(images[&GroupElt { w: WeylElt::IDENTITY, t: 0 }] == one, || "u_n(1) != 1".into());
    Ok(vec![mult, bij, unit])
}

/// k^ρ h_{n,n'}(w t) = Σ_{t'^k = t} w t' as an integer combination.
fn scaled_h(small: &SemidirectGroup, big: &SemidirectGroup, g: GroupElt) -> BTreeMap<GroupElt, i64> {
    let n = i64::from(small.n());
    let y = small.point(g.t);
    (0..big.torus_len() as u32)
        .filter(|&t| big.point(t).iter().zip(y).all(|(a, b)| (a - b).rem_euclid(n) == 0))
        .map(|t| (GroupElt { w: g.w, t }, 1))
        .collect()
}

/// Checks u_{n'} ∘ h_{n,n'} = j_{n,n'} ∘ u_n and that h_{n,n'} is multiplicative.
pub fn check_level_compatibility(small: &HeckeAlgebra, big: &HeckeAlgebra) -> Result<Vec<PropertyCheck>> {
    let (n, np) = (small.n(), big.n());
    if np % n != 0 {
        return Err(Error::InvalidInput(format!("{n} does not divide {np}")));
    }
    let gs = SemidirectGroup::new(small);
    let gb = SemidirectGroup::new(big);
    let ring = CyclotomicRing::new(np);
    let kr = i64::from(np / n).pow(gs.rank() as u32);

    let embed_idx: HashMap<CharId, CharId> = small
        .space()
        .all_chars()
        .map(|l| {
            let image = small.embed(big, &small.idempotent(l))?;
            let (i, _) = image.terms().next().expect("one term");
            Ok((l, i.lambda))
        })
        .collect::<Result<_>>()?;

    let mut compat = PropertyCheck::new("u_n' h = j u_n");
    for g in gs.elements() {
        let mut lhs = CycHecke::new();
        for (gp, c) in scaled_h(&gs, &gb, g) {
            for (k, v) in u_map(big, &gb, &ring, gp) {
                add_to(&mut lhs, k, &v.scale(c));
            }
        }
        let mut rhs = CycHecke::new();
        for (k, v) in u_map(small, &gs, &ring, g) {
            add_to(&mut rhs, Idx::new(k.w, embed_idx[&k.lambda]), &v.scale(kr));
        }
        compat.record(lhs == rhs, || format!("element {g:?}"));
    }

    let mut mult = PropertyCheck::new("h_n,n' multiplicative");
    let hs: HashMap<GroupElt, BTreeMap<GroupElt, i64>> = gs.elements().map(|g| (g, scaled_h(&gs, &gb, g))).collect();
    for a in gs.elements() {
        for b in gs.elements() {
            let mut lhs: BTreeMap<GroupElt, i64> = BTreeMap::new();
            for (&x, &cx) in &hs[&a] {
                for (&y, &cy) in &hs[&b] {
                    *lhs.entry(gb.mul(x, y)).or_insert(0) += cx * cy;
                }
            }
            lhs.retain(|_, c| *c != 0);
            let rhs: BTreeMap<GroupElt, i64> = hs[&gs.mul(a, b)].iter().map(|(&g, &c)| (g, c * kr)).collect();
            mult.record(lhs == rhs, || format!("pair {a:?}, {b:?}"));
        }
    }
    Ok(vec![compat, mult])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::RootDatum;
    use crate::torus::CharSpace;
    use crate::weyl::WeylGroup;

    fn alg(name: &str, n: u32) -> HeckeAlgebra {
        let w = WeylGroup::new(RootDatum::preset(name).unwrap()).unwrap();
        HeckeAlgebra::new(CharSpace::new(w, n).unwrap())
    }

    #[test]
    fn semidirect_product_law() {
        let a = alg("A1-SL2", 4);
        let g = SemidirectGroup::new(&a);
        let s = a.weyl().parse_word("1").unwrap();
        // σ acts on Y by y ↦ −y
        assert_eq!(g.act(s, 1), 3);
        let x = GroupElt { w: WeylElt::IDENTITY, t: 1 };
        let sg = GroupElt { w: s, t: 0 };
        // t σ = σ σ(t)
        assert_eq!(g.mul(x, sg), GroupElt { w: s, t: 3 });
        assert_eq!(g.mul(sg, x), GroupElt { w: s, t: 1 });
    }

    #[test]
    fn sl2_isomorphism() {
        for n in [1, 2, 3] {
            for check in check_isomorphism(&alg("A1-SL2", n)).unwrap() {
                assert!(check.passed, "n = {n}: {check}");
            }
        }
    }

    #[test]
    fn sl2_levels() {
        for check in check_level_compatibility(&alg("A1-SL2", 2), &alg("A1-SL2", 4)).unwrap() {
            assert!(check.passed, "{check}");
        }
        assert!(check_level_compatibility(&alg("A1-SL2", 2), &alg("A1-SL2", 3)).is_err());
    }
}
