//! The canonical basis c_{w·λ} of a block and the structure constants of
//! its multiplication.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElt};
use crate::kl::KLTable;
use crate::laurent::LaurentPoly;
use crate::torus::{Block, CharId, Idx, LambdaData};
use crate::weyl::WeylElt;

/// Default bound on |I_𝔬| for computing structure constants.
pub const BLOCK_GUARD: usize = 5000;

/// Position of an index inside its block.
pub type Pos = usize;

#[derive(Debug)]
pub struct CanonicalTable {
    algebra: HeckeAlgebra,
    block: Block,
    lambda: BTreeMap<CharId, (Arc<LambdaData>, Arc<KLTable>)>,
    c: Vec<HeckeElt>,
    /// Minimal coset representative z of w W_λ for each position.
    coset_min: Vec<WeylElt>,
    /// |z⁻¹ w|_λ for each position.
    lambda_len: Vec<u32>,
}

impl CanonicalTable {
    pub fn new(algebra: &HeckeAlgebra, block: Block) -> Result<Self> {
        let space = algebra.space().clone();
        let weyl = algebra.weyl().clone();
        let mut lambda = BTreeMap::new();
        for &l in &block.orbit {
            let data = space.lambda_data(l)?;
            let kl = Arc::new(KLTable::new(data.subgroup.coxeter()));
            lambda.insert(l, (data, kl));
        }
        let mut c = Vec::with_capacity(block.len());
        let mut coset_min = Vec::with_capacity(block.len());
        let mut lambda_len = Vec::with_capacity(block.len());
        for &Idx { w, lambda: l } in &block.indices {
            let (data, kl) = &lambda[&l];
            let z = space.min_coset_rep(w, l)?;
            let wp = weyl.multiply(weyl.invert(z), w);
            let wp_local = data
                .subgroup
                .from_ambient(wp)
                .ok_or_else(|| Error::Invariant("z⁻¹w outside W_λ".into()))?;
            let sub = data.subgroup.coxeter();
            let lw = sub.length(wp_local) as i32;
            let mut elt = algebra.zero();
            for yp_local in sub.elements() {
                let poly = kl.p(yp_local, wp_local);
                if poly.is_empty() {
                    continue;
                }
                let ly = sub.length(yp_local) as i32;
                let y = weyl.multiply(z, data.subgroup.to_ambient(yp_local));
                let coeff = LaurentPoly::from_poly_in_v2(poly)
                    .shift(-lw + ly - weyl.length(y) as i32);
                elt.add_term(Idx::new(y, l), &coeff);
            }
            if algebra.bar(&elt) != elt {
                return Err(Error::Invariant(format!(
                    "c_{} is not bar-invariant",
                    algebra.idx_string(Idx::new(w, l))
                )));
            }
            c.push(elt);
            coset_min.push(z);
            lambda_len.push(lw as u32);
        }
        Ok(CanonicalTable {
            algebra: algebra.clone(),
            block,
            lambda,
            c,
            coset_min,
            lambda_len,
        })
    }

    pub fn algebra(&self) -> &HeckeAlgebra {
        &self.algebra
    }

    pub fn block(&self) -> &Block {
        &self.block
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn position(&self, i: Idx) -> Result<Pos> {
        self.block.position(i).ok_or(Error::BlockMismatch)
    }

    pub fn idx(&self, p: Pos) -> Idx {
        self.block.indices[p]
    }

    /// c_i in the T-basis.
    pub fn c(&self, i: Idx) -> Result<&HeckeElt> {
        Ok(&self.c[self.position(i)?])
    }

    pub fn c_at(&self, p: Pos) -> &HeckeElt {
        &self.c[p]
    }

    pub fn lambda_data(&self, l: CharId) -> Option<&Arc<LambdaData>> {
        self.lambda.get(&l).map(|(d, _)| d)
    }

    pub fn kl_table(&self, l: CharId) -> Option<&Arc<KLTable>> {
        self.lambda.get(&l).map(|(_, k)| k)
    }

    pub fn coset_min(&self, p: Pos) -> WeylElt {
        self.coset_min[p]
    }

    /// p_{y·λ, w·λ}: the coefficient of v^{-|y|} T_y 1_λ in c_{w·λ}.
    pub fn p(&self, y: Idx, i: Idx) -> Result<LaurentPoly> {
        let c = self.c(i)?;
        Ok(c.coeff(y).shift(self.algebra.weyl().length(y.w) as i32))
    }

    /// Expresses a block element in the canonical basis.
    pub fn to_canonical(&self, h: &HeckeElt) -> Result<BTreeMap<Idx, LaurentPoly>> {
        let mut rest = h.clone();
        let mut out = BTreeMap::new();
        let weyl = self.algebra.weyl();
        while !rest.is_zero() {
            // c_{zw'·λ} involves only T_{zy'}1_λ with |y'|_λ ≤ |w'|_λ
            let mut lead: Option<(u32, Pos)> = None;
            for (i, _) in rest.terms() {
                let p = self.position(i)?;
                let key = self.lambda_len[p];
                if lead.is_none_or(|(k, _)| key > k) {
                    lead = Some((key, p));
                }
            }
            let (_, p) = lead.expect("nonzero element has a term");
            let i = self.idx(p);
            let f = rest.coeff(i).shift(weyl.length(i.w) as i32);
            rest.add_scaled(&self.c[p], &(-&f));
            out.insert(i, f);
        }
        Ok(out)
    }

    /// The structure constants h_{i,i',j} of the block.
    pub fn h_table(&self, guard: usize) -> Result<HTable> {
        if self.len() > guard {
            return Err(Error::Guard(format!(
                "block of size {} exceeds structure-constant guard {guard}",
                self.len()
            )));
        }
        let alg = &self.algebra;
        let weyl = alg.weyl();
        let grp = weyl.coxeter();
        let rows: Vec<Result<BTreeMap<u32, Vec<(u32, LaurentPoly)>>>> = (0..self.len())
            .into_par_iter()
            .map(|ip| {
                // T_y (1_λ c_{i'}) for each λ of the orbit and y ∈ W
                let mut cache: BTreeMap<CharId, Vec<HeckeElt>> = BTreeMap::new();
                for &l in &self.block.orbit {
                    let base = alg.restrict_left(l, &self.c[ip]);
                    let mut ty: Vec<HeckeElt> = Vec::with_capacity(weyl.order());
                    for w in grp.elements() {
                        let value = if w == WeylElt::IDENTITY {
                            base.clone()
                        } else {
                            let g = grp.word(w)[0] as usize;
                            alg.left_gen(g, &ty[grp.lmul_gen(g, w).index()])
                        };
                        ty.push(value);
                    }
                    cache.insert(l, ty);
                }
                let mut col = BTreeMap::new();
                for i in 0..self.len() {
                    let mut prod = alg.zero();
                    for (t, f) in self.c[i].terms() {
                        prod.add_scaled(&cache[&t.lambda][t.w.index()], f);
                    }
                    if prod.is_zero() {
                        continue;
                    }
                    let coeffs = self.to_canonical(&prod)?;
                    let entry: Vec<(u32, LaurentPoly)> = coeffs
                        .into_iter()
                        .map(|(j, poly)| Ok((self.position(j)? as u32, poly)))
                        .collect::<Result<_>>()?;
                    col.insert(i as u32, entry);
                }
                Ok(col)
            })
            .collect();
        // regroup column-major results into rows indexed by i
        let mut table: Vec<BTreeMap<u32, Vec<(u32, LaurentPoly)>>> = vec![BTreeMap::new(); self.len()];
        for (ip, col) in rows.into_iter().enumerate() {
            for (i, entry) in col? {
                table[i as usize].insert(ip as u32, entry);
            }
        }
        Ok(HTable {
            size: self.len(),
            rows: table,
        })
    }

    pub fn kl_json(&self) -> Value {
        let weyl = self.algebra.weyl();
        let space = self.algebra.space();
        let mut out = Vec::new();
        for (&l, (data, kl)) in &self.lambda {
            let sub = data.subgroup.coxeter();
            let mut entries = Vec::new();
            for w in sub.elements() {
                for y in sub.elements() {
                    let p = kl.p(y, w);
                    if p.is_empty() {
                        continue;
                    }
                    entries.push(json!({
                        "y": weyl.word_string(data.subgroup.to_ambient(y)),
                        "w": weyl.word_string(data.subgroup.to_ambient(w)),
                        "p": p,
                    }));
                }
            }
            out.push(json!({
                "lambda": space.char_json(l),
                "simple_roots": data
                    .simple_roots
                    .iter()
                    .map(|&r| weyl.datum().roots()[r].vector.clone())
                    .collect::<Vec<_>>(),
                "order": data.subgroup.order(),
                "entries": entries,
            }));
        }
        Value::Array(out)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.len())
                .map(|p| {
                    let mut o = self.algebra.idx_json(self.idx(p));
                    o["c"] = self.algebra.to_json(&self.c[p]);
                    o
                })
                .collect(),
        )
    }
}

/// Sparse table of h_{i,i',j} over block positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HTable {
    size: usize,
    rows: Vec<BTreeMap<u32, Vec<(u32, LaurentPoly)>>>,
}

impl HTable {
    pub fn size(&self) -> usize {
        self.size
    }

    /// The expansion of c_i c_{i'}; empty when the product vanishes.
    pub fn product(&self, i: Pos, ip: Pos) -> &[(u32, LaurentPoly)] {
        self.rows[i]
            .get(&(ip as u32))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn get(&self, i: Pos, ip: Pos, j: Pos) -> Option<&LaurentPoly> {
        self.product(i, ip)
            .iter()
            .find(|(k, _)| *k as usize == j)
            .map(|(_, p)| p)
    }

    /// Nonzero entries (i, i', j, h).
    pub fn entries(&self) -> impl Iterator<Item = (Pos, Pos, Pos, &LaurentPoly)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, row)| {
            row.iter().flat_map(move |(&ip, entry)| {
                entry
                    .iter()
                    .map(move |(j, p)| (i, ip as usize, *j as usize, p))
            })
        })
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter().map(move |(ip, entry)| {
                    json!({
                        "i": i,
                        "ip": ip,
                        "terms": entry
                            .iter()
                            .map(|(j, p)| json!([j, p.to_json()]))
                            .collect::<Vec<_>>(),
                    })
                })
            })
            .collect();
        json!({ "size": self.size, "entries": entries })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::InvalidInput("malformed structure-constant table".into());
        let size = v.get("size").and_then(Value::as_u64).ok_or_else(bad)? as usize;
        let mut rows = vec![BTreeMap::new(); size];
        for e in v.get("entries").and_then(Value::as_array).ok_or_else(bad)? {
            let i = e.get("i").and_then(Value::as_u64).ok_or_else(bad)? as usize;
            let ip = e.get("ip").and_then(Value::as_u64).ok_or_else(bad)? as u32;
            let mut terms = Vec::new();
            for t in e.get("terms").and_then(Value::as_array).ok_or_else(bad)? {
                let j = t.get(0).and_then(Value::as_u64).ok_or_else(bad)? as u32;
                let p = LaurentPoly::from_json(t.get(1).ok_or_else(bad)?)?;
                if j as usize >= size {
                    return Err(bad());
                }
                terms.push((j, p));
            }
            if i >= size || ip as usize >= size {
                return Err(bad());
            }
            rows[i].insert(ip, terms);
        }
        Ok(HTable { size, rows })
    }

    /// The largest −(lowest exponent) among all entries targeting j.
    pub fn depth_at(&self, j: Pos) -> i32 {
        self.entries()
            .filter(|&(_, _, k, _)| k == j)
            .filter_map(|(_, _, _, p)| p.min_exp())
            .map(|e| -e)
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of v^e in h_{i,i',j} as a machine integer.
    pub fn coeff_i64(&self, i: Pos, ip: Pos, j: Pos, e: i32) -> i64 {
        self.get(i, ip, j)
            .map(|p| p.coeff(e).to_i64().expect("coefficient fits in i64"))
            .unwrap_or(0)
    }
}
