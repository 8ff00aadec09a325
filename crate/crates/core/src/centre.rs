//! Counting simple objects of the twisted centre of a cell: Hom-dimension
//! Gram matrices from τ-values in J, induction images, and exhaustive
//! nonnegative factorizations N = M Mᵀ.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::cells::{JElt, PropertyCheck};
use crate::error::{Error, Result};
use crate::level::{CellRef, Level};
use crate::torus::Idx;
use crate::twist::Twist;

/// Bounds for [`factorize_gram`].
#[derive(Debug, Clone, Copy)]
pub struct FactorBounds {
    pub max_diagonal: i64,
    pub max_dim: usize,
}

impl Default for FactorBounds {
    fn default() -> Self {
        FactorBounds {
            max_diagonal: 16,
            max_dim: 16,
        }
    }
}

/// N(i, i') for i, i' in 𝔠^s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    pub index: Vec<Idx>,
    pub entries: Vec<Vec<i64>>,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim()).all(|a| (0..a).all(|b| self.entries[a][b] == self.entries[b][a]))
    }

    pub fn row_is_zero(&self, a: usize) -> bool {
        self.entries[a].iter().all(|&x| x == 0)
    }
}

/// Nonnegative integer M with M Mᵀ = N; `columns[k][r]` is the entry at row r.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiplicityMatrix {
    pub columns: Vec<Vec<i64>>,
}

impl MultiplicityMatrix {
    pub fn gram(&self, dim: usize) -> Vec<Vec<i64>> {
        (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|b| self.columns.iter().map(|c| c[a] * c[b]).sum())
                    .collect()
            })
            .collect()
    }
}

fn check_twist(level: &Level, twist: &Twist) -> Result<()> {
    let (a, b) = (level.algebra().space(), twist.space());
    if a.n() != b.n() {
        return Err(Error::ModulusMismatch(b.n(), a.n()));
    }
    Ok(())
}

/// N(z·λ, z'·λ') = Σ_{u ∈ 𝔠} τ(t_{u^!} t_{z·λ} t_{ε^s(u)} t_{(z'·λ')^!}).
pub fn gram_matrix(level: &Level, twist: &Twist, cell: CellRef, s: i64) -> Result<GramMatrix> {
    check_twist(level, twist)?;
    let index = twist.cell_s(level, cell, s)?;
    let members = level.members(cell);
    let entries = index
        .iter()
        .map(|&i| {
            index
                .iter()
                .map(|&ip| {
                    let dual = level.shriek(ip);
                    members
                        .iter()
                        .map(|&u| {
                            let x = level.j_chain(&[level.shriek(u), i, twist.eps_on_idx(s, u), dual]);
                            level.tau(&x)
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    Ok(GramMatrix { index, entries })
}

/// Σ_{y ∈ 𝔠} t_{ε^{-s}(y)} t_i t_{y^!}.
pub fn induction_image(level: &Level, twist: &Twist, cell: CellRef, s: i64, i: Idx) -> Result<JElt> {
    check_twist(level, twist)?;
    let fixed = twist.cell_s(level, cell, s)?;
    if !fixed.contains(&i) {
        return Err(Error::Precondition(format!(
            "{} is not in the fixed part of the cell",
            level.algebra().idx_string(i)
        )));
    }
    let mut out = JElt::zero();
    for y in level.members(cell) {
        for (k, c) in level.j_chain(&[twist.eps_on_idx(-s, y), i, level.shriek(y)]).terms() {
            out.add_term(k, c);
        }
    }
    Ok(out)
}

/// z·λ and ε^s(z⁻¹)·λ lie in one left cell.
pub fn support_condition(level: &Level, twist: &Twist, s: i64, i: Idx) -> bool {
    let weyl = level.algebra().weyl();
    let other = Idx::new(twist.eps_weyl(s, weyl.invert(i.w)), i.lambda);
    level.same_left_cell(i, other)
}

struct Search<'a> {
    target: &'a [Vec<i64>],
    dim: usize,
    solutions: Vec<Vec<Vec<i64>>>,
}

impl Search<'_> {
    /// Columns are emitted in non-increasing lexicographic order.
    fn run(&mut self, residual: &mut Vec<Vec<i64>>, remaining: usize, upper: Option<&[i64]>, chosen: &mut Vec<Vec<i64>>) {
        let trace: i64 = (0..self.dim).map(|r| residual[r][r]).sum();
        if remaining == 0 {
            if residual.iter().flatten().all(|&x| x == 0) {
                self.solutions.push(chosen.clone());
            }
            return;
        }
        if trace < remaining as i64 {
            return;
        }
        let mut column = vec![0i64; self.dim];
        let upper = upper.map(<[i64]>::to_vec);
        self.columns(residual, 0, upper.as_deref(), true, &mut column, remaining, chosen);
    }

    #[allow(clippy::too_many_arguments)]
    fn columns(
        &mut self,
        residual: &mut Vec<Vec<i64>>,
        row: usize,
        upper: Option<&[i64]>,
        tight: bool,
        column: &mut Vec<i64>,
        remaining: usize,
        chosen: &mut Vec<Vec<i64>>,
    ) {
        if row == self.dim {
            if column.iter().all(|&c| c == 0) {
                return;
            }
            for a in 0..self.dim {
                for b in 0..self.dim {
                    residual[a][b] -= column[a] * column[b];
                }
            }
            chosen.push(column.clone());
            let col = column.clone();
            self.run(residual, remaining - 1, Some(&col), chosen);
            chosen.pop();
            for a in 0..self.dim {
                for b in 0..self.dim {
                    residual[a][b] += column[a] * column[b];
                }
            }
            return;
        }
        let mut max = (residual[row][row] as f64).sqrt() as i64;
        while max * max > residual[row][row] {
            max -= 1;
        }
        while (max + 1) * (max + 1) <= residual[row][row] {
            max += 1;
        }
        if tight {
            if let Some(u) = upper {
                max = max.min(u[row]);
            }
        }
        for c in (0..=max).rev() {
            if (0..row).any(|t| c * column[t] > residual[row][t]) {
                continue;
            }
            column[row] = c;
            let still_tight = tight && upper.is_some_and(|u| u[row] == c);
            self.columns(residual, row + 1, upper, still_tight, column, remaining, chosen);
        }
        column[row] = 0;
    }
}

/// Every minimal-width nonnegative integer M with M Mᵀ = N, up to column
/// order; columns sorted in decreasing lexicographic order.
pub fn factorize_gram(n: &[Vec<i64>], bounds: FactorBounds) -> Result<Vec<MultiplicityMatrix>> {
    let dim = n.len();
    if dim > bounds.max_dim {
        return Err(Error::Guard(format!("gram dimension {dim} exceeds {}", bounds.max_dim)));
    }
    for (a, row) in n.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::InvalidInput("gram matrix is not square".into()));
        }
        for (b, &x) in row.iter().enumerate() {
            if x < 0 || x != n[b][a] {
                return Err(Error::InvalidInput("gram matrix must be symmetric and nonnegative".into()));
            }
        }
        if row[a] > bounds.max_diagonal {
            return Err(Error::Guard(format!("diagonal entry {} exceeds {}", row[a], bounds.max_diagonal)));
        }
    }
    let live: Vec<usize> = (0..dim).filter(|&a| n[a].iter().any(|&x| x != 0)).collect();
    if live.is_empty() {
        return Ok(vec![MultiplicityMatrix { columns: Vec::new() }]);
    }
    let reduced: Vec<Vec<i64>> = live.iter().map(|&a| live.iter().map(|&b| n[a][b]).collect()).collect();
    let trace: i64 = (0..live.len()).map(|a| reduced[a][a]).sum();
    for width in 1..=trace as usize {
        let mut search = Search {
            target: &reduced,
            dim: live.len(),
            solutions: Vec::new(),
        };
        let mut residual = search.target.to_vec();
        search.run(&mut residual, width, None, &mut Vec::new());
        if !search.solutions.is_empty() {
            return Ok(search
                .solutions
                .into_iter()
                .map(|cols| MultiplicityMatrix {
                    columns: cols
                        .into_iter()
                        .map(|c| {
                            let mut full = vec![0i64; dim];
                            for (k, &a) in live.iter().enumerate() {
                                full[a] = c[k];
                            }
                            full
                        })
                        .collect(),
                })
                .collect());
        }
    }
    Err(Error::Invariant("gram matrix has no nonnegative factorization".into()))
}

/// Cases of the stable cells for SL2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Sl2Case {
    /// {1·λ, 1·λ⁻¹, σ·λ, σ·λ⁻¹}, λ² ≠ 1, ε^s fixing λ.
    I,
    /// As in I with ε^s(λ) = λ⁻¹.
    II,
    /// {1·λ₀, σ·λ₀} for λ₀ of order two.
    III,
    /// {σ·1}.
    IV,
    /// {1·1}.
    V,
}

impl fmt::Display for Sl2Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sl2Case::I => "i",
            Sl2Case::II => "ii",
            Sl2Case::III => "iii",
            Sl2Case::IV => "iv",
            Sl2Case::V => "v",
        })
    }
}

/// The case of a stable cell when the datum has rank one and |W| = 2.
pub fn classify_sl2(level: &Level, twist: &Twist, cell: CellRef, s: i64) -> Option<Sl2Case> {
    let alg = level.algebra();
    let space = alg.space();
    if space.weyl().order() != 2 || space.weyl().datum().rank() != 1 {
        return None;
    }
    let members = level.members(cell);
    let lambda = members[0].lambda;
    let zero = space.zero();
    let e = crate::weyl::WeylElt::IDENTITY;
    if lambda == zero {
        return Some(if members[0].w == e && members.len() == 1 { Sl2Case::V } else { Sl2Case::IV });
    }
    if space.inverse(lambda) == lambda {
        return Some(Sl2Case::III);
    }
    let image = twist.eps_char(s, lambda);
    if image == lambda {
        Some(Sl2Case::I)
    } else if image == space.inverse(lambda) {
        Some(Sl2Case::II)
    } else {
        None
    }
}

/// Simple-object count of the twisted centre of one stable cell.
#[derive(Debug, Clone)]
pub struct CentreReport {
    pub cell: Vec<Idx>,
    pub s: i64,
    pub gram: GramMatrix,
    pub solutions: Vec<MultiplicityMatrix>,
    pub induction: Vec<JElt>,
    pub sl2_case: Option<Sl2Case>,
    pub checks: Vec<PropertyCheck>,
}

impl CentreReport {
    pub fn simples(&self) -> usize {
        self.solutions.first().map_or(0, |m| m.columns.len())
    }

    pub fn ambiguous(&self) -> bool {
        self.solutions.len() > 1
    }

    /// Nonzero entries of each column of the first solution.
    pub fn decompositions(&self) -> Vec<Vec<(Idx, i64)>> {
        self.solutions
            .first()
            .map(|m| {
                m.columns
                    .iter()
                    .map(|c| {
                        c.iter()
                            .enumerate()
                            .filter(|(_, &x)| x != 0)
                            .map(|(r, &x)| (self.gram.index[r], x))
                            .collect()
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Whether a zero Gram row always comes with a failing support condition.
    pub fn support_converse(&self, level: &Level, twist: &Twist) -> bool {
        (0..self.gram.dim())
            .filter(|&a| self.gram.row_is_zero(a))
            .all(|a| !support_condition(level, twist, self.s, self.gram.index[a]))
    }

    pub fn to_json(&self, level: &Level) -> Value {
        let alg = level.algebra();
        let decomp = |m: &MultiplicityMatrix| -> Value {
            Value::Array(
                m.columns
                    .iter()
                    .map(|c| {
                        Value::Array(
                            c.iter()
                                .enumerate()
                                .filter(|(_, &x)| x != 0)
                                .map(|(r, &x)| json!({"idx": alg.idx_json(self.gram.index[r]), "mult": x}))
                                .collect(),
                        )
                    })
                    .collect(),
            )
        };
        json!({
            "cell": self.cell.iter().map(|&i| alg.idx_json(i)).collect::<Vec<_>>(),
            "s": self.s,
            "cell_s": self.gram.index.iter().map(|&i| alg.idx_json(i)).collect::<Vec<_>>(),
            "gram": self.gram.entries,
            "simples": self.simples(),
            "decompositions": self.solutions.first().map(decomp).unwrap_or(json!([])),
            "ambiguous": self.ambiguous(),
            "solutions": self.solutions.iter().map(decomp).collect::<Vec<_>>(),
            "case": self.sl2_case.map(|c| c.to_string()),
            "checks": self.checks.iter().map(PropertyCheck::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Gram symmetry and nonnegativity, parity vanishing, and the zero-row
/// implication of a failing support condition.
pub fn gram_invariants(level: &Level, twist: &Twist, s: i64, gram: &GramMatrix) -> Vec<PropertyCheck> {
    let alg = level.algebra();
    let weyl = alg.weyl();
    let name = |i: Idx| alg.idx_string(i);
    let dim = gram.dim();

    let mut sym = PropertyCheck::new("gram symmetric");
    let mut parity = PropertyCheck::new("gram parity vanishing");
    let mut nonneg = PropertyCheck::new("gram nonnegative");
    for a in 0..dim {
        for b in 0..dim {
            let x = gram.entries[a][b];
            sym.record(x == gram.entries[b][a], || format!("({}, {})", name(gram.index[a]), name(gram.index[b])));
            nonneg.record(x >= 0, || format!("({}, {})", name(gram.index[a]), name(gram.index[b])));
            let odd = (weyl.length(gram.index[a].w) + weyl.length(gram.index[b].w)) % 2 == 1;
            if odd {
                parity.record(x == 0, || format!("({}, {})", name(gram.index[a]), name(gram.index[b])));
            }
        }
    }

    let mut zero_row = PropertyCheck::new("failing support condition gives zero row");
    for a in 0..dim {
        if !support_condition(level, twist, s, gram.index[a]) {
            zero_row.record(gram.row_is_zero(a), || name(gram.index[a]));
        }
    }
    vec![sym, nonneg, parity, zero_row]
}

/// The Gram invariants plus agreement with induction images and M Mᵀ = N.
fn centre_checks(
    level: &Level,
    twist: &Twist,
    s: i64,
    gram: &GramMatrix,
    induction: &[JElt],
    solutions: &[MultiplicityMatrix],
) -> Vec<PropertyCheck> {
    let alg = level.algebra();
    let name = |i: Idx| alg.idx_string(i);
    let dim = gram.dim();
    let mut out = gram_invariants(level, twist, s, gram);

    let mut dual = PropertyCheck::new("induction image equals gram column");
    for (b, img) in induction.iter().enumerate() {
        for a in 0..dim {
            dual.record(img.coeff(gram.index[a]) == gram.entries[a][b], || {
                format!("({}, {})", name(gram.index[a]), name(gram.index[b]))
            });
        }
        let inside = img.support().all(|k| gram.index.contains(&k));
        dual.record(inside, || format!("image of {} leaves the fixed set", name(gram.index[b])));
    }

    let mut fact = PropertyCheck::new("factorization reproduces gram");
    for m in solutions {
        fact.record(m.gram(dim) == gram.entries, || "M Mᵀ != N".into());
        // the induction image of i is Σ over columns through i
        for (b, img) in induction.iter().enumerate() {
            for a in 0..dim {
                let through: i64 = m.columns.iter().map(|c| c[a] * c[b]).sum();
                fact.record(through == img.coeff(gram.index[a]), || {
                    format!("induction of {} at {}", name(gram.index[b]), name(gram.index[a]))
                });
            }
        }
    }
    out.extend([dual, fact]);
    out
}

pub fn simple_objects(level: &Level, twist: &Twist, cell: CellRef, s: i64, bounds: FactorBounds) -> Result<CentreReport> {
    let gram = gram_matrix(level, twist, cell, s)?;
    let induction = gram
        .index
        .iter()
        .map(|&i| induction_image(level, twist, cell, s, i))
        .collect::<Result<Vec<_>>>()?;
    let solutions = factorize_gram(&gram.entries, bounds)?;
    let checks = centre_checks(level, twist, s, &gram, &induction, &solutions);
    Ok(CentreReport {
        cell: level.members(cell),
        s,
        gram,
        solutions,
        induction,
        sl2_case: classify_sl2(level, twist, cell, s),
        checks,
    })
}

/// Reports for every ε^s-stable cell, in cell order.
pub fn centre_reports(level: &Level, twist: &Twist, s: i64, bounds: FactorBounds) -> Result<Vec<CentreReport>> {
    twist
        .stable_cells(level, s)?
        .into_iter()
        .map(|c| simple_objects(level, twist, c, s, bounds))
        .collect()
}

/// Multiset of columns, each column a map index → multiplicity.
pub fn decomposition_multiset(report: &CentreReport) -> Vec<BTreeMap<Idx, i64>> {
    let mut out: Vec<BTreeMap<Idx, i64>> = report
        .decompositions()
        .into_iter()
        .map(|c| c.into_iter().collect())
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::HeckeAlgebra;
    use crate::root_datum::RootDatum;
    use crate::torus::CharSpace;
    use crate::twist::TwistCase;
    use crate::weyl::WeylGroup;

    #[test]
    fn factorization_examples() {
        let b = FactorBounds::default();
        let one = factorize_gram(&[vec![1, 1], vec![1, 1]], b).unwrap();
        assert_eq!(one, vec![MultiplicityMatrix { columns: vec![vec![1, 1]] }]);
        let two = factorize_gram(&[vec![2, 0], vec![0, 2]], b).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].columns, vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![0, 1]]);
        assert_eq!(factorize_gram(&[vec![1]], b).unwrap()[0].columns, vec![vec![1]]);
        // 4 = 2² is narrower than 1+1+1+1
        assert_eq!(factorize_gram(&[vec![4]], b).unwrap()[0].columns, vec![vec![2]]);
        // zero rows are carried through
        let z = factorize_gram(&[vec![1, 0], vec![0, 0]], b).unwrap();
        assert_eq!(z[0].columns, vec![vec![1, 0]]);
    }

    #[test]
    fn factorization_errors() {
        let b = FactorBounds::default();
        assert!(matches!(factorize_gram(&[vec![1, 2], vec![1, 1]], b), Err(Error::InvalidInput(_))));
        assert!(matches!(factorize_gram(&[vec![17]], b), Err(Error::Guard(_))));
        // [[1,2],[2,1]] is not a Gram matrix of nonnegative vectors
        assert!(matches!(factorize_gram(&[vec![1, 2], vec![2, 1]], b), Err(Error::Invariant(_))));
    }

    #[test]
    fn ambiguous_factorizations_are_all_returned() {
        // columns (1,1,0),(0,0,1) vs ... : N = [[1,1,0],[1,1,0],[0,0,1]] is unique,
        // while [[2,1,1],[1,2,1],[1,1,2]] has several minimal forms
        let b = FactorBounds::default();
        let sols = factorize_gram(&[vec![2, 1, 1], vec![1, 2, 1], vec![1, 1, 2]], b).unwrap();
        for m in &sols {
            assert_eq!(m.gram(3), vec![vec![2, 1, 1], vec![1, 2, 1], vec![1, 1, 2]]);
            assert_eq!(m.columns.len(), sols[0].columns.len());
        }
        let mut dedup = sols.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), sols.len());
    }

    fn sl2(n: u32, q: u32) -> (Level, Twist) {
        let w = WeylGroup::new(RootDatum::preset("A1-SL2").unwrap()).unwrap();
        let space = CharSpace::new(w, n).unwrap();
        let level = Level::new(&HeckeAlgebra::new(space.clone())).unwrap();
        let twist = Twist::new(&space, vec![0], q, TwistCase::A).unwrap();
        (level, twist)
    }

    #[test]
    fn sl2_order_two_cell() {
        let (level, twist) = sl2(8, 3);
        let space = level.algebra().space().clone();
        let lam = space.id_of_coords(&[4]).unwrap();
        let cell = level.cell_of(Idx::new(crate::weyl::WeylElt::IDENTITY, lam));
        let g = gram_matrix(&level, &twist, cell, 1).unwrap();
        assert_eq!(g.entries, vec![vec![2, 0], vec![0, 2]]);
        let r = simple_objects(&level, &twist, cell, 1, FactorBounds::default()).unwrap();
        assert_eq!(r.simples(), 4);
        assert_eq!(r.sl2_case, Some(Sl2Case::III));
        assert!(r.checks.iter().all(|c| c.passed));
        let img = induction_image(&level, &twist, cell, 1, g.index[0]).unwrap();
        assert_eq!(img, JElt::from_terms([(g.index[0], 2)]));
    }

    #[test]
    fn sl2_unit_cell() {
        let (level, twist) = sl2(4, 3);
        let space = level.algebra().space().clone();
        let one = Idx::new(crate::weyl::WeylElt::IDENTITY, space.zero());
        let cell = level.cell_of(one);
        let r = simple_objects(&level, &twist, cell, 0, FactorBounds::default()).unwrap();
        assert_eq!(r.gram.entries, vec![vec![1]]);
        assert_eq!(r.sl2_case, Some(Sl2Case::V));
        assert!(support_condition(&level, &twist, 0, one));
    }
}
