//! The automorphism ε of (W, 𝔰_n) coming from a diagram symmetry and a
//! power q: its action on I, the sets I^s and the stable cells.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cells::PropertyCheck;
use crate::error::{Error, Result};
use crate::level::{CellRef, Level};
use crate::torus::{CharId, CharSpace, Idx, TorusChar};
use crate::weyl::WeylElt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwistCase {
    /// Frobenius type: ε(λ) = q⁻¹·π(λ).
    A,
    /// Finite-order symmetry: ε(λ) = π(λ).
    B,
}

impl FromStr for TwistCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(TwistCase::A),
            "B" | "b" => Ok(TwistCase::B),
            _ => Err(Error::InvalidInput(format!("unknown twist case {s:?}"))),
        }
    }
}

impl fmt::Display for TwistCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TwistCase::A => "A",
            TwistCase::B => "B",
        })
    }
}

/// ε on W_n and 𝔰_n, with tables for both directions.
#[derive(Debug, Clone)]
pub struct Twist {
    space: Arc<CharSpace>,
    pi: Vec<usize>,
    q: u32,
    case: TwistCase,
    /// Row-major rank x rank matrix of π on X.
    matrix: Vec<i64>,
    on_chars: Vec<CharId>,
    on_chars_inv: Vec<CharId>,
    on_weyl: Vec<WeylElt>,
    on_weyl_inv: Vec<WeylElt>,
    /// Order of ε as a permutation of I_n.
    order: usize,
}

/// Solves `m · x = b` over ℚ for square `m` (row-major), None if singular.
fn solve_rational(m: &[Vec<i64>], b: &[i64]) -> Option<Vec<Ratio<i64>>> {
    let r = m.len();
    let mut a: Vec<Vec<Ratio<i64>>> = m
        .iter()
        .zip(b)
        .map(|(row, &bi)| row.iter().chain([&bi]).map(|&x| Ratio::from_integer(x)).collect())
        .collect();
    for col in 0..r {
        let pivot = (col..r).find(|&k| a[k][col] != Ratio::from_integer(0))?;
        a.swap(col, pivot);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for k in 0..r {
            if k != col {
                let f = a[k][col];
                if f != Ratio::from_integer(0) {
                    let row = a[col].clone();
                    for (x, y) in a[k].iter_mut().zip(row) {
                        *x -= f * y;
                    }
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[r]).collect())
}

/// Integer matrix P on X with P α_i = α_{π(i)} and ⟨Px, α̌_{π(i)}⟩ = ⟨x, α̌_i⟩.
fn diagram_matrix(space: &CharSpace, pi: &[usize]) -> Result<Vec<i64>> {
    let datum = space.weyl().datum();
    let rank = datum.rank();
    let l = datum.semisimple_rank();
    if pi.iter().enumerate().all(|(i, &p)| i == p) {
        return Ok((0..rank * rank).map(|k| i64::from(k / rank == k % rank)).collect());
    }
    if l != rank {
        return Err(Error::Precondition(
            "a nontrivial diagram symmetry needs a semisimple datum".into(),
        ));
    }
    // rows of P: solve Aᵀ p_k = (row k of A_π) where A has columns α_i
    let roots = datum.simple_roots();
    let at: Vec<Vec<i64>> = (0..l).map(|i| roots[i].clone()).collect();
    let mut p = vec![0i64; rank * rank];
    for k in 0..rank {
        let rhs: Vec<i64> = (0..l).map(|i| roots[pi[i]][k]).collect();
        let row = solve_rational(&at, &rhs)
            .ok_or_else(|| Error::Invariant("simple roots are linearly dependent".into()))?;
        for (j, x) in row.into_iter().enumerate() {
            if !x.is_integer() {
                return Err(Error::Precondition(format!(
                    "diagram symmetry {pi:?} does not preserve the character lattice"
                )));
            }
            p[k * rank + j] = x.to_integer();
        }
    }
    let coroots = datum.simple_coroots();
    for i in 0..l {
        for j in 0..rank {
            let e: Vec<i64> = (0..rank).map(|k| i64::from(k == j)).collect();
            let pe: Vec<i64> = (0..rank).map(|k| p[k * rank + j]).collect();
            let lhs: i64 = pe.iter().zip(&coroots[pi[i]]).map(|(a, b)| a * b).sum();
            let rhs: i64 = e.iter().zip(&coroots[i]).map(|(a, b)| a * b).sum();
            if lhs != rhs {
                return Err(Error::Precondition(format!(
                    "diagram symmetry {pi:?} does not preserve the cocharacter lattice"
                )));
            }
        }
    }
    Ok(p)
}

fn permutation_order<T: Copy + Eq>(f: &[T], index: impl Fn(T) -> usize) -> usize {
    let mut order = 1usize;
    let mut seen = vec![false; f.len()];
    for start in 0..f.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = index(f[x]);
            len += 1;
        }
        order = order.lcm(&len);
    }
    order
}

impl Twist {
    pub fn new(space: &Arc<CharSpace>, pi: Vec<usize>, q: u32, case: TwistCase) -> Result<Self> {
        let weyl = space.weyl();
        let datum = weyl.datum();
        let l = datum.semisimple_rank();
        let n = space.n();
        let mut sorted = pi.clone();
        sorted.sort_unstable();
        if sorted != (0..l).collect::<Vec<_>>() {
            return Err(Error::InvalidInput(format!("{pi:?} is not a permutation of 0..{l}")));
        }
        let cartan = datum.cartan();
        for i in 0..l {
            for j in 0..l {
                if cartan[pi[i]][pi[j]] != cartan[i][j] {
                    return Err(Error::Precondition(format!(
                        "permutation {pi:?} does not preserve the Cartan matrix"
                    )));
                }
            }
        }
        let q = match case {
            TwistCase::A => q,
            TwistCase::B => 1,
        };
        if q == 0 || u64::from(q).gcd(&u64::from(n)) != 1 {
            return Err(Error::Precondition(format!("q = {q} is not invertible mod n = {n}")));
        }
        let q_inv = {
            let e = i64::from(q).extended_gcd(&i64::from(n));
            e.x.rem_euclid(i64::from(n))
        };
        let matrix = diagram_matrix(space, &pi)?;
        let rank = datum.rank();

        // P s_i = s_{π(i)} P on X
        for i in 0..l {
            let si = weyl.coxeter().generator(i);
            let spi = weyl.coxeter().generator(pi[i]);
            let lhs = mat_mul(&matrix, weyl.matrix(si), rank);
            let rhs = mat_mul(weyl.matrix(spi), &matrix, rank);
            if lhs != rhs {
                return Err(Error::Precondition(format!(
                    "diagram symmetry {pi:?} is not compatible with the Weyl group action"
                )));
            }
        }

        let on_chars: Vec<CharId> = space
            .all_chars()
            .map(|c| {
                let x: Vec<i64> = space.get(c).coords.iter().map(|&v| i64::from(v)).collect();
                let px: Vec<i64> = (0..rank)
                    .map(|k| (0..rank).map(|j| matrix[k * rank + j] * x[j]).sum::<i64>() * q_inv)
                    .collect();
                space.id(&TorusChar::new(n, &px)).expect("image is a character")
            })
            .collect();
        let mut on_chars_inv = vec![CharId(0); on_chars.len()];
        for (k, &c) in on_chars.iter().enumerate() {
            on_chars_inv[c.index()] = CharId(k as u32);
        }
        let on_weyl: Vec<WeylElt> = weyl
            .all_elements()
            .into_iter()
            .map(|w| {
                let word: Vec<usize> = weyl.coxeter().word(w).iter().map(|&g| pi[g as usize]).collect();
                weyl.from_word(&word).expect("valid generators")
            })
            .collect();
        let mut on_weyl_inv = vec![WeylElt::IDENTITY; on_weyl.len()];
        for (k, &w) in on_weyl.iter().enumerate() {
            on_weyl_inv[w.index()] = crate::coxeter::Elt(k as u32);
        }
        let order = permutation_order(&on_chars, CharId::index).lcm(&permutation_order(&on_weyl, WeylElt::index));

        let twist = Twist {
            space: space.clone(),
            pi,
            q,
            case,
            matrix,
            on_chars,
            on_chars_inv,
            on_weyl,
            on_weyl_inv,
            order,
        };
        for w in weyl.all_elements() {
            for c in space.all_chars() {
                let lhs = twist.eps_char(1, space.act(w, c));
                let rhs = space.act(twist.eps_weyl(1, w), twist.eps_char(1, c));
                if lhs != rhs {
                    return Err(Error::Invariant("ε is not compatible with the W-action".into()));
                }
            }
        }
        Ok(twist)
    }

    /// π = id, q = 1.
    pub fn trivial(space: &Arc<CharSpace>) -> Result<Self> {
        let l = space.weyl().datum().semisimple_rank();
        Self::new(space, (0..l).collect(), 1, TwistCase::A)
    }

    pub fn space(&self) -> &Arc<CharSpace> {
        &self.space
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn case(&self) -> TwistCase {
        self.case
    }

    pub fn matrix(&self) -> &[i64] {
        &self.matrix
    }

    /// Order of ε on I_n.
    pub fn order(&self) -> usize {
        self.order
    }

    fn steps(&self, s: i64) -> usize {
        s.rem_euclid(self.order as i64) as usize
    }

    pub fn eps_char(&self, s: i64, mut c: CharId) -> CharId {
        for _ in 0..self.steps(s) {
            c = self.on_chars[c.index()];
        }
        c
    }

    pub fn eps_weyl(&self, s: i64, mut w: WeylElt) -> WeylElt {
        for _ in 0..self.steps(s) {
            w = self.on_weyl[w.index()];
        }
        w
    }

    /// ε^{-1} on characters, without reducing through the order.
    pub fn eps_char_inverse(&self, c: CharId) -> CharId {
        self.on_chars_inv[c.index()]
    }

    pub fn eps_weyl_inverse(&self, w: WeylElt) -> WeylElt {
        self.on_weyl_inv[w.index()]
    }

    /// ε^s(w·λ) = ε^s(w)·ε^s(λ).
    pub fn eps_on_idx(&self, s: i64, i: Idx) -> Idx {
        Idx::new(self.eps_weyl(s, i.w), self.eps_char(s, i.lambda))
    }

    /// I^s = {w·λ : w(λ) = ε^{-s}(λ)}, in index order.
    pub fn i_s(&self, s: i64) -> Vec<Idx> {
        let space = &self.space;
        let mut out: Vec<Idx> = space
            .weyl()
            .all_elements()
            .into_iter()
            .flat_map(|w| {
                space
                    .all_chars()
                    .filter(move |&l| space.act(w, l) == self.eps_char(-s, l))
                    .map(move |l| Idx::new(w, l))
            })
            .collect();
        out.sort_unstable();
        out
    }

    fn check_level(&self, level: &Level) -> Result<()> {
        let other = level.algebra().space();
        if other.n() != self.space.n() {
            return Err(Error::ModulusMismatch(self.space.n(), other.n()));
        }
        if other.weyl().datum().fingerprint() != self.space.weyl().datum().fingerprint() {
            return Err(Error::Precondition("twist and cells come from different data".into()));
        }
        Ok(())
    }

    pub fn cell_image(&self, level: &Level, c: CellRef, s: i64) -> Result<CellRef> {
        self.check_level(level)?;
        let image: BTreeSet<Idx> = level.members(c).into_iter().map(|i| self.eps_on_idx(s, i)).collect();
        let target = level.cell_of(*image.iter().next().expect("nonempty cell"));
        let members: BTreeSet<Idx> = level.members(target).into_iter().collect();
        if members != image {
            return Err(Error::Invariant(format!("ε^{s} does not map cell {c:?} onto a cell")));
        }
        Ok(target)
    }

    pub fn is_stable(&self, level: &Level, c: CellRef, s: i64) -> Result<bool> {
        Ok(self.cell_image(level, c, s)? == c)
    }

    pub fn stable_cells(&self, level: &Level, s: i64) -> Result<Vec<CellRef>> {
        let mut out = Vec::new();
        for c in level.cells() {
            if self.is_stable(level, c, s)? {
                out.push(c);
            }
        }
        Ok(out)
    }

    /// Positive generator of {s : ε^s(𝔠) = 𝔠}.
    pub fn z_boc(&self, level: &Level, c: CellRef) -> Result<u32> {
        for s in 1..=self.order {
            if self.is_stable(level, c, s as i64)? {
                return Ok(s as u32);
            }
        }
        Err(Error::Invariant("ε has finite order".into()))
    }

    /// 𝔠^s = I^s ∩ 𝔠.
    pub fn cell_s(&self, level: &Level, c: CellRef, s: i64) -> Result<Vec<Idx>> {
        if !self.is_stable(level, c, s)? {
            return Err(Error::Precondition(format!("cell {c:?} is not ε^{s}-stable")));
        }
        let space = &self.space;
        let out: Vec<Idx> = level
            .members(c)
            .into_iter()
            .filter(|i| space.act(i.w, i.lambda) == self.eps_char(-s, i.lambda))
            .collect();
        if out.is_empty() {
            return Err(Error::Invariant(format!("stable cell {c:?} has empty 𝔠^s")));
        }
        Ok(out)
    }

    /// For every stable cell 𝔠, i ∈ 𝔠 and j: t_{i^!} t_j t_{ε^s(i)} ≠ 0 forces
    /// j ∈ 𝔠^s, and 𝔠^s is nonempty.
    pub fn check_fixed_points(&self, level: &Level, s: i64) -> Result<Vec<PropertyCheck>> {
        let mut forced = PropertyCheck::new("t_(i!) t_j t_eps(i) nonzero forces j in c^s");
        let mut nonempty = PropertyCheck::new("c^s nonempty");
        let alg = level.algebra();
        for c in self.stable_cells(level, s)? {
            let members = level.members(c);
            let fixed: BTreeSet<Idx> = members
                .iter()
                .copied()
                .filter(|i| self.space.act(i.w, i.lambda) == self.eps_char(-s, i.lambda))
                .collect();
            nonempty.record(!fixed.is_empty(), || format!("cell {c:?}"));
            let block = &level.blocks()[c.block].cells;
            for &i in &members {
                let left = level.shriek(i);
                let right = self.eps_on_idx(s, i);
                for p in 0..block.len() {
                    let j = block.idx(p);
                    if !level.j_chain(&[left, j, right]).is_zero() {
                        forced.record(fixed.contains(&j), || {
                            format!("i = {}, j = {}", alg.idx_string(i), alg.idx_string(j))
                        });
                    }
                }
            }
        }
        Ok(vec![forced, nonempty])
    }

    /// ε maps left cells and two-sided cells onto cells, commutes with the
    /// bar involution and sends c_i to c_{ε(i)}.
    pub fn check_compatibility(&self, level: &Level) -> Result<PropertyCheck> {
        self.check_level(level)?;
        let mut check = PropertyCheck::new("twist compatibility");
        let alg = level.algebra();
        let n = alg.n();
        for c in level.cells() {
            let ok = self.cell_image(level, c, 1).is_ok();
            check.record(ok, || format!("two-sided cell {c:?}"));
        }
        for (b, bc) in level.blocks().iter().enumerate() {
            let data = &bc.cells;
            for gamma in data.left_cells() {
                let image: BTreeSet<Idx> = gamma.iter().map(|&p| self.eps_on_idx(1, data.idx(p))).collect();
                let first = *image.iter().next().unwrap();
                let (tb, tp) = level.locate(first);
                let tdata = &level.blocks()[tb].cells;
                let target: BTreeSet<Idx> = tdata.left_cells()[tdata.left_cell_of(tp)]
                    .iter()
                    .map(|&p| tdata.idx(p))
                    .collect();
                check.record(image == target, || format!("left cell in block {b}"));
            }
            for p in 0..bc.canon.len() {
                let i = bc.canon.idx(p);
                let e = |h: &crate::hecke::HeckeElt| h.map_indices(n, |k| self.eps_on_idx(1, k));
                let ti = alg.basis(i);
                check.record(e(&alg.bar(&ti)) == alg.bar(&e(&ti)), || {
                    format!("bar at {}", alg.idx_string(i))
                });
                let ei = self.eps_on_idx(1, i);
                let (tb, tp) = level.locate(ei);
                let target = level.blocks()[tb].canon.c_at(tp);
                check.record(&e(bc.canon.c_at(p)) == target, || {
                    format!("canonical element at {}", alg.idx_string(i))
                });
            }
        }
        Ok(check)
    }

    pub fn to_json(&self) -> Value {
        json!({ "pi": self.pi, "q": self.q, "case": self.case.to_string() })
    }
}

fn mat_mul(a: &[i64], b: &[i64], r: usize) -> Vec<i64> {
    (0..r * r)
        .map(|k| {
            let (i, j) = (k / r, k % r);
            (0..r).map(|m| a[i * r + m] * b[m * r + j]).sum()
        })
        .collect()
}
