//! Canonical bases and cell data for every block of H_n at once.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::canonical::{CanonicalTable, HTable, Pos, BLOCK_GUARD};
use crate::cells::{CellData, JElt, PropertyCheck};
use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElt};
use crate::torus::{Block, Idx};

/// A two-sided cell of I_n, named by its block and its number in that block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellRef {
    pub block: usize,
    pub cell: usize,
}

#[derive(Debug)]
pub struct BlockCells {
    pub canon: CanonicalTable,
    pub cells: CellData,
}

#[derive(Debug)]
pub struct Level {
    algebra: HeckeAlgebra,
    blocks: Vec<BlockCells>,
    /// Block number of each character.
    block_of_char: Vec<usize>,
}

impl Level {
    pub fn new(algebra: &HeckeAlgebra) -> Result<Self> {
        Self::with_tables(algebra, |canon| canon.h_table(BLOCK_GUARD))
    }

    /// Builds every block, obtaining structure constants through `tables`
    /// (a cache lookup, say).
    pub fn with_tables(
        algebra: &HeckeAlgebra,
        mut tables: impl FnMut(&CanonicalTable) -> Result<HTable>,
    ) -> Result<Self> {
        let space = algebra.space();
        let mut block_of_char = vec![usize::MAX; space.len()];
        let mut blocks = Vec::new();
        for orbit in space.orbits() {
            for l in &orbit {
                block_of_char[l.index()] = blocks.len();
            }
            let canon = CanonicalTable::new(algebra, Block::from_orbit(space, orbit))?;
            let h = tables(&canon)?;
            let cells = CellData::new(&canon, h)?;
            blocks.push(BlockCells { canon, cells });
        }
        Ok(Level {
            algebra: algebra.clone(),
            blocks,
            block_of_char,
        })
    }

    pub fn algebra(&self) -> &HeckeAlgebra {
        &self.algebra
    }

    pub fn blocks(&self) -> &[BlockCells] {
        &self.blocks
    }

    pub fn block_of(&self, i: Idx) -> usize {
        self.block_of_char[i.lambda.index()]
    }

    pub fn locate(&self, i: Idx) -> (usize, Pos) {
        let b = self.block_of(i);
        let p = self.blocks[b].cells.position(i).expect("every index lies in its block");
        (b, p)
    }

    pub fn cell_of(&self, i: Idx) -> CellRef {
        let (block, p) = self.locate(i);
        CellRef {
            block,
            cell: self.blocks[block].cells.cell_of(p),
        }
    }

    pub fn cells(&self) -> Vec<CellRef> {
        self.blocks
            .iter()
            .enumerate()
            .flat_map(|(block, b)| (0..b.cells.cells().len()).map(move |cell| CellRef { block, cell }))
            .collect()
    }

    pub fn members(&self, c: CellRef) -> Vec<Idx> {
        let data = &self.blocks[c.block].cells;
        data.cells()[c.cell].iter().map(|&p| data.idx(p)).collect()
    }

    pub fn a(&self, i: Idx) -> u32 {
        let (b, p) = self.locate(i);
        self.blocks[b].cells.a(p)
    }

    pub fn cell_a(&self, c: CellRef) -> u32 {
        let data = &self.blocks[c.block].cells;
        data.a(data.cells()[c.cell][0])
    }

    pub fn same_left_cell(&self, i: Idx, j: Idx) -> bool {
        let (b, p) = self.locate(i);
        let (b2, q) = self.locate(j);
        b == b2 && self.blocks[b].cells.same_left_cell(p, q)
    }

    /// i^!.
    pub fn shriek(&self, i: Idx) -> Idx {
        let (b, p) = self.locate(i);
        let data = &self.blocks[b].cells;
        data.idx(data.shriek(p))
    }

    /// Product t_{i_1} ⋯ t_{i_k}, zero as soon as two factors lie in different blocks.
    pub fn j_chain(&self, factors: &[Idx]) -> JElt {
        let Some(&first) = factors.first() else {
            return JElt::zero();
        };
        let b = self.block_of(first);
        if factors.iter().any(|&f| self.block_of(f) != b) {
            return JElt::zero();
        }
        let data = &self.blocks[b].cells;
        let pos: Vec<Pos> = factors.iter().map(|&f| data.position(f).unwrap()).collect();
        data.j_chain(&pos)
    }

    pub fn tau(&self, x: &JElt) -> i64 {
        x.terms()
            .filter(|&(i, _)| {
                let (b, p) = self.locate(i);
                self.blocks[b].cells.is_distinguished(p)
            })
            .map(|(_, c)| c)
            .sum()
    }

    /// Image of a cell under w·λ ↦ w·λ⁻¹, which must again be a cell with the same a-value.
    pub fn twist_cell_dual(&self, c: CellRef) -> Result<CellRef> {
        let space = self.algebra.space();
        let image: BTreeSet<Idx> = self
            .members(c)
            .into_iter()
            .map(|i| Idx::new(i.w, space.inverse(i.lambda)))
            .collect();
        let target = self.cell_of(*image.iter().next().expect("cells are nonempty"));
        let members: BTreeSet<Idx> = self.members(target).into_iter().collect();
        if members != image || self.cell_a(target) != self.cell_a(c) {
            return Err(Error::Invariant(format!("dual of cell {c:?} is not a cell")));
        }
        Ok(target)
    }

    /// Checks on every c_i of the level: bar invariance, unitriangularity with
    /// p ∈ v⁻¹ℕ[v⁻¹] off the diagonal and support below i in the Bruhat order of
    /// W_λ, and c̃_i = c_{i with λ⁻¹}, c_i♭ = c_{i^♭}.
    pub fn canonical_checks(&self) -> Vec<PropertyCheck> {
        let alg = &self.algebra;
        let weyl = alg.weyl();
        let space = alg.space();
        let mut bar = PropertyCheck::new("bar(c_i) = c_i");
        let mut tri = PropertyCheck::new("triangularity");
        let mut pos = PropertyCheck::new("p in N[v^-1]");
        let mut tilde = PropertyCheck::new("tilde(c_i) = c_(w.λ^-1)");
        let mut flat = PropertyCheck::new("flat(c_i) = c_(w^-1.w(λ))");
        for b in &self.blocks {
            let canon = &b.canon;
            for p in 0..canon.len() {
                let i = canon.idx(p);
                let c = canon.c_at(p);
                let name = || alg.idx_string(i);
                bar.record(&alg.bar(c) == c, name);
                let data = canon.lambda_data(i.lambda).expect("block character");
                let z = canon.coset_min(p);
                let sub = &data.subgroup;
                let local = |y: crate::weyl::WeylElt| {
                    sub.from_ambient(weyl.multiply(weyl.invert(z), y))
                };
                let w_local = local(i.w);
                let mut ok = canon.p(i, i).map(|f| f.is_one()).unwrap_or(false);
                let mut nonneg = true;
                for (y, _) in c.terms() {
                    let f = canon.p(y, i).expect("term in block");
                    nonneg &= f.all_nonnegative();
                    if y == i {
                        continue;
                    }
                    let below = match (local(y.w), w_local) {
                        (Some(yl), Some(wl)) => sub.coxeter().bruhat_leq(yl, wl),
                        _ => false,
                    };
                    ok &= y.lambda == i.lambda && below && f.max_exp().is_some_and(|e| e < 0);
                }
                tri.record(ok && w_local.is_some(), name);
                pos.record(nonneg, name);
                let dual = Idx::new(i.w, space.inverse(i.lambda));
                tilde.record(&alg.tilde(c) == self.c(dual), name);
                let fl = Idx::new(weyl.invert(i.w), space.act(i.w, i.lambda));
                flat.record(&alg.flat(c) == self.c(fl), name);
            }
        }
        vec![bar, tri, pos, tilde, flat]
    }

    /// c_i c_i' = 0 whenever i and i' lie in different blocks.
    pub fn block_closure_check(&self) -> Result<PropertyCheck> {
        let mut check = PropertyCheck::new("products vanish across blocks");
        for (b, x) in self.blocks.iter().enumerate() {
            for (b2, y) in self.blocks.iter().enumerate().filter(|&(b2, _)| b2 != b) {
                for p in 0..x.canon.len() {
                    for q in 0..y.canon.len() {
                        let prod = self.algebra.t_mul(x.canon.c_at(p), y.canon.c_at(q))?;
                        check.record(prod.is_zero(), || {
                            format!(
                                "blocks {b}, {b2}: {} {}",
                                self.algebra.idx_string(x.canon.idx(p)),
                                self.algebra.idx_string(y.canon.idx(q))
                            )
                        });
                    }
                }
            }
        }
        Ok(check)
    }

    /// c_i from whichever block holds i.
    pub fn c(&self, i: Idx) -> &HeckeElt {
        let (b, p) = self.locate(i);
        self.blocks[b].canon.c_at(p)
    }

    /// The cell property suite of every block, merged by property.
    pub fn q_suite(&self) -> Vec<PropertyCheck> {
        let mut merged: Vec<PropertyCheck> = Vec::new();
        for b in &self.blocks {
            for check in b.cells.q_suite() {
                match merged.iter_mut().find(|m| m.name == check.name) {
                    Some(m) => m.merge(&check),
                    None => merged.push(check),
                }
            }
        }
        merged
    }

    pub fn cell_json(&self, c: CellRef) -> Value {
        Value::Array(self.members(c).into_iter().map(|i| self.algebra.idx_json(i)).collect())
    }

    /// Cell partition of I_n as JSON, cells numbered across blocks.
    pub fn cells_json(&self) -> Value {
        let mut cells = Vec::new();
        let mut order = Vec::new();
        for b in &self.blocks {
            let (c, o) = b.cells.cells_json(cells.len());
            cells.extend(c);
            order.extend(o);
        }
        json!({ "cells": cells, "order": order })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::RootDatum;
    use crate::torus::CharSpace;
    use crate::weyl::WeylGroup;

    fn level(name: &str, n: u32) -> Level {
        let w = WeylGroup::new(RootDatum::preset(name).unwrap()).unwrap();
        let alg = HeckeAlgebra::new(CharSpace::new(w, n).unwrap());
        Level::new(&alg).unwrap()
    }

    #[test]
    fn sl2_n8_cells() {
        let lv = level("A1-SL2", 8);
        let mut sizes: Vec<usize> = lv.cells().into_iter().map(|c| lv.members(c).len()).collect();
        sizes.sort_unstable();
        // {1·0}, {σ·0}, 𝔠_{4}, and three cells of size 4 for λ ∈ {1,7},{2,6},{3,5}
        assert_eq!(sizes, vec![1, 1, 2, 4, 4, 4]);
        for c in lv.cells() {
            assert_eq!(lv.twist_cell_dual(c).unwrap(), c);
        }
    }

    #[test]
    fn chain_across_blocks_vanishes() {
        let lv = level("A1-SL2", 4);
        let space = lv.algebra().space();
        let e = crate::weyl::WeylElt::IDENTITY;
        let a = Idx::new(e, space.id_of_coords(&[0]).unwrap());
        let b = Idx::new(e, space.id_of_coords(&[1]).unwrap());
        assert!(lv.j_chain(&[a, b]).is_zero());
        assert_eq!(lv.j_chain(&[a, a]), JElt::basis(a));
        assert_eq!(lv.tau(&JElt::basis(a)), 1);
    }

    #[test]
    fn cells_json_shape() {
        let lv = level("A1-SL2", 2);
        let v = lv.cells_json();
        assert_eq!(v["cells"].as_array().unwrap().len(), 3);
        assert!(v["order"].is_array());
    }
}
