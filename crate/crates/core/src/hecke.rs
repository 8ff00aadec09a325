//! The algebra H_n in the basis T_w 1_λ.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::torus::{CharId, CharSpace, Idx};
use crate::weyl::{WeylElt, WeylGroup};

/// A finite 𝒜-linear combination of basis elements T_w 1_λ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeElt {
    n: u32,
    terms: BTreeMap<Idx, LaurentPoly>,
}

impl HeckeElt {
    pub fn zero(n: u32) -> Self {
        HeckeElt {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Idx, &LaurentPoly)> + '_ {
        self.terms.iter().map(|(&i, p)| (i, p))
    }

    pub fn coeff(&self, i: Idx) -> LaurentPoly {
        self.terms.get(&i).cloned().unwrap_or_default()
    }

    pub fn get(&self, i: Idx) -> Option<&LaurentPoly> {
        self.terms.get(&i)
    }

    pub fn add_term(&mut self, i: Idx, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(i).or_default();
        *slot += p;
        if slot.is_zero() {
            self.terms.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &HeckeElt, f: &LaurentPoly) {
        for (&i, p) in &other.terms {
            self.add_term(i, &(p * f));
        }
    }

    pub fn add(&self, other: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        out.add_scaled(other, &LaurentPoly::one());
        out
    }

    pub fn sub(&self, other: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        out.add_scaled(other, &LaurentPoly::from(-1));
        out
    }

    pub fn scale(&self, f: &LaurentPoly) -> HeckeElt {
        let mut out = HeckeElt::zero(self.n);
        out.add_scaled(self, f);
        out
    }

    /// Applies `f` to every index, keeping coefficients.
    pub fn map_indices(&self, n: u32, mut f: impl FnMut(Idx) -> Idx) -> HeckeElt {
        let mut out = HeckeElt::zero(n);
        for (&i, p) in &self.terms {
            out.add_term(f(i), p);
        }
        out
    }
}

/// H_n for a fixed root datum and level n.
#[derive(Debug, Clone)]
pub struct HeckeAlgebra {
    space: Arc<CharSpace>,
}

impl HeckeAlgebra {
    pub fn new(space: Arc<CharSpace>) -> Self {
        HeckeAlgebra { space }
    }

    pub fn space(&self) -> &Arc<CharSpace> {
        &self.space
    }

    pub fn weyl(&self) -> &Arc<WeylGroup> {
        self.space.weyl()
    }

    pub fn n(&self) -> u32 {
        self.space.n()
    }

    pub fn zero(&self) -> HeckeElt {
        HeckeElt::zero(self.n())
    }

    /// T_w 1_λ.
    pub fn basis(&self, i: Idx) -> HeckeElt {
        let mut h = self.zero();
        h.add_term(i, &LaurentPoly::one());
        h
    }

    pub fn idempotent(&self, lambda: CharId) -> HeckeElt {
        self.basis(Idx::new(WeylElt::IDENTITY, lambda))
    }

    /// T_1 = Σ_λ 1_λ.
    pub fn unit(&self) -> HeckeElt {
        let mut h = self.zero();
        for l in self.space.all_chars() {
            h.add_term(Idx::new(WeylElt::IDENTITY, l), &LaurentPoly::one());
        }
        h
    }

    /// Unit of the block over `orbit`.
    pub fn block_unit(&self, orbit: &[CharId]) -> HeckeElt {
        let mut h = self.zero();
        for &l in orbit {
            h.add_term(Idx::new(WeylElt::IDENTITY, l), &LaurentPoly::one());
        }
        h
    }

    fn check(&self, h: &HeckeElt) -> Result<()> {
        if h.n != self.n() {
            return Err(Error::ModulusMismatch(h.n, self.n()));
        }
        Ok(())
    }

    /// T_σ h for the simple reflection σ = s_g.
    pub fn left_gen(&self, g: usize, h: &HeckeElt) -> HeckeElt {
        let grp = self.weyl().coxeter();
        let v2 = LaurentPoly::monomial(2, 1);
        let v2m1 = LaurentPoly::from_terms([(2, 1), (0, -1)]);
        let mut out = self.zero();
        for (&Idx { w, lambda }, f) in &h.terms {
            let sw = grp.lmul_gen(g, w);
            if grp.length(sw) > grp.length(w) {
                out.add_term(Idx::new(sw, lambda), f);
            } else {
                out.add_term(Idx::new(sw, lambda), &(f * &v2));
                if self.space.gen_in_stabilizer(g, self.space.act(w, lambda)) {
                    out.add_term(Idx::new(w, lambda), &(f * &v2m1));
                }
            }
        }
        out
    }

    /// T_σ⁻¹ h, using T_σ⁻¹ = v⁻²T_σ + (v⁻² − 1) Σ_{σ ∈ W_λ} 1_λ.
    pub fn left_gen_inv(&self, g: usize, h: &HeckeElt) -> HeckeElt {
        let vm2 = LaurentPoly::monomial(-2, 1);
        let vm2_minus_one = LaurentPoly::from_terms([(-2, 1), (0, -1)]);
        let mut out = self.left_gen(g, h).scale(&vm2);
        for (&Idx { w, lambda }, f) in &h.terms {
            if self.space.gen_in_stabilizer(g, self.space.act(w, lambda)) {
                out.add_term(Idx::new(w, lambda), &(f * &vm2_minus_one));
            }
        }
        out
    }

    /// T_w h.
    pub fn left_mul_tw(&self, w: WeylElt, h: &HeckeElt) -> HeckeElt {
        let word = self.weyl().coxeter().word(w);
        word.iter()
            .rev()
            .fold(h.clone(), |acc, &g| self.left_gen(g as usize, &acc))
    }

    /// The part of `h` lying in 1_λ H, i.e. terms T_w 1_μ with w(μ) = λ.
    pub fn restrict_left(&self, lambda: CharId, h: &HeckeElt) -> HeckeElt {
        let mut out = self.zero();
        for (&i, f) in &h.terms {
            if self.space.act(i.w, i.lambda) == lambda {
                out.add_term(i, f);
            }
        }
        out
    }

    pub fn t_mul(&self, a: &HeckeElt, b: &HeckeElt) -> Result<HeckeElt> {
        self.check(a)?;
        self.check(b)?;
        let mut out = self.zero();
        let mut restricted: BTreeMap<CharId, HeckeElt> = BTreeMap::new();
        for (&Idx { w, lambda }, f) in &a.terms {
            let part = restricted
                .entry(lambda)
                .or_insert_with(|| self.restrict_left(lambda, b));
            if part.is_zero() {
                continue;
            }
            out.add_scaled(&self.left_mul_tw(w, part), f);
        }
        Ok(out)
    }

    /// The bar involution: coefficients v ↦ v⁻¹ and T_w 1_λ ↦ T_{w⁻¹}⁻¹ 1_λ.
    pub fn bar(&self, h: &HeckeElt) -> HeckeElt {
        let grp = self.weyl().coxeter();
        let mut out = self.zero();
        for (&Idx { w, lambda }, f) in &h.terms {
            let mut x = self.idempotent(lambda);
            for &g in grp.word(w).iter().rev() {
                x = self.left_gen_inv(g as usize, &x);
            }
            out.add_scaled(&x, &f.bar());
        }
        out
    }

    /// T_w 1_λ ↦ T_w 1_{λ⁻¹}.
    pub fn tilde(&self, h: &HeckeElt) -> HeckeElt {
        h.map_indices(self.n(), |i| Idx::new(i.w, self.space.inverse(i.lambda)))
    }

    /// The antiautomorphism T_w 1_λ ↦ T_{w⁻¹} 1_{w(λ)}.
    pub fn flat(&self, h: &HeckeElt) -> HeckeElt {
        let weyl = self.weyl();
        h.map_indices(self.n(), |i| {
            Idx::new(weyl.invert(i.w), self.space.act(i.w, i.lambda))
        })
    }

    /// The level embedding H_n → H_{n'} scaling characters by n'/n.
    pub fn embed(&self, target: &HeckeAlgebra, h: &HeckeElt) -> Result<HeckeElt> {
        self.check(h)?;
        let (n, np) = (self.n(), target.n());
        if np % n != 0 {
            return Err(Error::InvalidInput(format!("{n} does not divide {np}")));
        }
        if self.weyl().datum().fingerprint() != target.weyl().datum().fingerprint() {
            return Err(Error::InvalidInput("embedding between different root data".into()));
        }
        let k = np / n;
        let mut out = target.zero();
        for (&Idx { w, lambda }, f) in &h.terms {
            let coords: Vec<i64> = self
                .space
                .get(lambda)
                .coords
                .iter()
                .map(|&c| i64::from(c * k))
                .collect();
            out.add_term(Idx::new(w, target.space.id_of_coords(&coords)?), f);
        }
        Ok(out)
    }

    /// Value at v = 1.
    pub fn specialize_one(&self, h: &HeckeElt) -> BTreeMap<Idx, BigInt> {
        h.terms
            .iter()
            .map(|(&i, p)| (i, p.eval_one()))
            .filter(|(_, c)| c != &BigInt::from(0))
            .collect()
    }

    pub fn idx_json(&self, i: Idx) -> Value {
        json!({
            "w": self.weyl().word_string(i.w),
            "lambda": self.space.char_json(i.lambda),
        })
    }

    pub fn idx_from_json(&self, v: &Value) -> Result<Idx> {
        let bad = || Error::InvalidInput(format!("malformed index {v}"));
        let w = self.weyl().parse_word(v.get("w").and_then(Value::as_str).ok_or_else(bad)?)?;
        let coords: Vec<i64> = v
            .get("lambda")
            .and_then(Value::as_array)
            .ok_or_else(bad)?
            .iter()
            .map(|c| c.as_i64().ok_or_else(bad))
            .collect::<Result<_>>()?;
        Ok(Idx::new(w, self.space.id_of_coords(&coords)?))
    }

    /// `[{"w": ..., "lambda": [...], "poly": {...}}, ...]` in index order.
    pub fn to_json(&self, h: &HeckeElt) -> Value {
        Value::Array(
            h.terms
                .iter()
                .map(|(&i, p)| {
                    let mut o = self.idx_json(i);
                    o["poly"] = p.to_json();
                    o
                })
                .collect(),
        )
    }

    pub fn from_json(&self, v: &Value) -> Result<HeckeElt> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::InvalidInput("Hecke element must be an array".into()))?;
        let mut h = self.zero();
        for item in arr {
            let i = self.idx_from_json(item)?;
            let p = LaurentPoly::from_json(
                item.get("poly")
                    .ok_or_else(|| Error::InvalidInput("missing poly".into()))?,
            )?;
            h.add_term(i, &p);
        }
        Ok(h)
    }

    pub fn idx_string(&self, i: Idx) -> String {
        format!("{}·{}", self.weyl().word_string(i.w), self.space.get(i.lambda))
    }
}
