//! Cells, the a-function, distinguished involutions and the asymptotic ring J
//! of one block.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::canonical::{CanonicalTable, HTable, Pos, BLOCK_GUARD};
use crate::error::{Error, Result};
use crate::hecke::HeckeAlgebra;
use crate::laurent::LaurentPoly;
use crate::root_datum::{DatumSpec, RootDatum};
use crate::torus::{Block, CharSpace, Idx};
use crate::weyl::{WeylElt, WeylGroup};

/// An element of J: a finite ℤ-combination of basis elements t_i.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JElt {
    terms: BTreeMap<Idx, i64>,
}

impl JElt {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: Idx) -> Self {
        Self::from_terms([(i, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Idx, i64)>) -> Self {
        let mut x = Self::zero();
        for (i, c) in terms {
            x.add_term(i, c);
        }
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, i: Idx, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(i).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&i);
        }
    }

    pub fn coeff(&self, i: Idx) -> i64 {
        self.terms.get(&i).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Idx, i64)> + '_ {
        self.terms.iter().map(|(&i, &c)| (i, c))
    }

    pub fn support(&self) -> impl Iterator<Item = Idx> + '_ {
        self.terms.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// An element of 𝒜 ⊗ J.
pub type AJElt = BTreeMap<Idx, LaurentPoly>;

/// Outcome of one exhaustive property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyCheck {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub witness: Option<String>,
}

impl PropertyCheck {
    pub fn new(name: &str) -> Self {
        PropertyCheck {
            name: name.to_string(),
            passed: true,
            cases: 0,
            witness: None,
        }
    }

    /// Records one case; the first failure is kept as the witness.
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.passed {
            self.passed = false;
            self.witness = Some(witness());
        }
    }

    pub fn merge(&mut self, other: &PropertyCheck) {
        self.cases += other.cases;
        if !other.passed && self.passed {
            self.passed = false;
            self.witness = other.witness.clone();
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "witness": self.witness,
        })
    }
}

impl fmt::Display for PropertyCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} ({} cases)",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.cases
        )?;
        if let Some(w) = &self.witness {
            write!(f, ": {w}")?;
        }
        Ok(())
    }
}

/// Which equivalence the condition i' ∼ j in the definition of ψ uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiReading {
    TwoSided,
    Left,
}

/// Cells, a-function, h* and the ring J on one block.
#[derive(Debug)]
pub struct CellData {
    algebra: HeckeAlgebra,
    block: Block,
    h: HTable,
    left_reach: Vec<Vec<bool>>,
    two_reach: Vec<Vec<bool>>,
    left_cell_of: Vec<usize>,
    left_cells: Vec<Vec<Pos>>,
    cell_of: Vec<usize>,
    cells: Vec<Vec<Pos>>,
    a: Vec<u32>,
    shriek: Vec<Pos>,
    /// `jt[i][i']` = nonzero (j, [v^{-a(j)}] h_{i,i',j}).
    jt: Vec<BTreeMap<u32, Vec<(u32, i64)>>>,
    distinguished: Vec<bool>,
}

fn reachability(n: usize, edges: &[Vec<usize>]) -> Vec<Vec<bool>> {
    (0..n)
        .map(|start| {
            let mut seen = vec![false; n];
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in &edges[x] {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            seen
        })
        .collect()
}

fn classes(reach: &[Vec<bool>]) -> (Vec<usize>, Vec<Vec<Pos>>) {
    let n = reach.len();
    let mut of = vec![usize::MAX; n];
    let mut out: Vec<Vec<Pos>> = Vec::new();
    for i in 0..n {
        if of[i] != usize::MAX {
            continue;
        }
        let members: Vec<Pos> = (i..n).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &members {
            of[j] = out.len();
        }
        out.push(members);
    }
    (of, out)
}

impl CellData {
    /// Builds the block's canonical basis and structure constants first.
    pub fn compute(algebra: &HeckeAlgebra, block: Block) -> Result<(CanonicalTable, Self)> {
        let canon = CanonicalTable::new(algebra, block)?;
        let h = canon.h_table(BLOCK_GUARD)?;
        let cells = Self::new(&canon, h)?;
        Ok((canon, cells))
    }

    pub fn new(canon: &CanonicalTable, h: HTable) -> Result<Self> {
        let algebra = canon.algebra().clone();
        let block = canon.block().clone();
        let n = block.len();
        if h.size() != n {
            return Err(Error::BlockMismatch);
        }
        let mut left_edges = vec![Vec::new(); n];
        let mut two_edges = vec![Vec::new(); n];
        let mut a = vec![0u32; n];
        for (i, ip, j, p) in h.entries() {
            left_edges[ip].push(j);
            two_edges[ip].push(j);
            two_edges[i].push(j);
            if let Some(e) = p.min_exp() {
                a[j] = a[j].max((-e).max(0) as u32);
            }
        }
        let left_reach = reachability(n, &left_edges);
        let two_reach = reachability(n, &two_edges);
        let (left_cell_of, left_cells) = classes(&left_reach);
        let (cell_of, cells) = classes(&two_reach);

        let weyl = algebra.weyl();
        let space = algebra.space();
        let shriek: Vec<Pos> = block
            .indices
            .iter()
            .map(|&Idx { w, lambda }| {
                let k = Idx::new(weyl.invert(w), space.act(w, lambda));
                block.position(k).expect("i^! stays in the block")
            })
            .collect();

        let mut jt: Vec<BTreeMap<u32, Vec<(u32, i64)>>> = vec![BTreeMap::new(); n];
        for (i, ip, j, p) in h.entries() {
            let c = p
                .coeff(-(a[j] as i32))
                .to_i64()
                .ok_or_else(|| Error::Invariant("h* coefficient overflows i64".into()))?;
            if c != 0 {
                jt[i].entry(ip as u32).or_default().push((j as u32, c));
            }
        }

        let mut data = CellData {
            algebra,
            block,
            h,
            left_reach,
            two_reach,
            left_cell_of,
            left_cells,
            cell_of,
            cells,
            a,
            shriek,
            jt,
            distinguished: vec![false; n],
        };
        data.distinguished = data.scan_distinguished()?;
        data.cross_check_distinguished(canon)?;
        Ok(data)
    }

    /// For each left cell Γ, the j ∈ Γ with h*_{i^!,i,j} ≠ 0 for every i ∈ Γ.
    fn scan_distinguished(&self) -> Result<Vec<bool>> {
        let mut out = vec![false; self.len()];
        for gamma in &self.left_cells {
            let mut candidates: BTreeSet<Pos> = gamma.iter().copied().collect();
            for &i in gamma {
                candidates.retain(|&j| self.hstar(self.shriek[i], i, j) != 0);
            }
            if candidates.len() != 1 {
                return Err(Error::Invariant(format!(
                    "left cell {} has {} distinguished candidates",
                    self.fmt_positions(gamma),
                    candidates.len()
                )));
            }
            out[*candidates.iter().next().unwrap()] = true;
        }
        Ok(out)
    }

    /// Compares with the set of w·λ such that w is a distinguished involution
    /// of W_λ, i.e. a_λ(w) = |w|_λ − 2 deg P^λ_{1,w}.
    fn cross_check_distinguished(&self, canon: &CanonicalTable) -> Result<()> {
        let space = self.algebra.space();
        let datum = self.algebra.weyl().datum();
        let mut memo: HashMap<Vec<usize>, Vec<u32>> = HashMap::new();
        for (p, &Idx { w, lambda }) in self.block.indices.iter().enumerate() {
            let data = space.lambda_data(lambda)?;
            let expected = match data.subgroup.from_ambient(w) {
                None => false,
                Some(local) => {
                    let a_values = match memo.get(&data.simple_roots) {
                        Some(v) => v.clone(),
                        None => {
                            let v = classical_a_values(datum, &data.simple_roots, data.subgroup.coxeter())?;
                            memo.insert(data.simple_roots.clone(), v.clone());
                            v
                        }
                    };
                    let kl = canon.kl_table(lambda).expect("orbit character");
                    let deg = kl.degree(WeylElt::IDENTITY, local).expect("1 ≤ w") as u32;
                    let len = data.subgroup.coxeter().length(local);
                    a_values[local.index()] + 2 * deg == len
                }
            };
            if expected != self.distinguished[p] {
                return Err(Error::Invariant(format!(
                    "distinguished involutions disagree at {}",
                    self.algebra.idx_string(self.block.indices[p])
                )));
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &HeckeAlgebra {
        &self.algebra
    }

    pub fn block(&self) -> &Block {
        &self.block
    }

    pub fn h(&self) -> &HTable {
        &self.h
    }

    pub fn len(&self) -> usize {
        self.block.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block.is_empty()
    }

    pub fn idx(&self, p: Pos) -> Idx {
        self.block.indices[p]
    }

    pub fn position(&self, i: Idx) -> Result<Pos> {
        self.block.position(i).ok_or(Error::BlockMismatch)
    }

    pub fn a(&self, p: Pos) -> u32 {
        self.a[p]
    }

    pub fn shriek(&self, p: Pos) -> Pos {
        self.shriek[p]
    }

    pub fn is_distinguished(&self, p: Pos) -> bool {
        self.distinguished[p]
    }

    pub fn distinguished(&self) -> Vec<Pos> {
        (0..self.len()).filter(|&p| self.distinguished[p]).collect()
    }

    /// j ≼_L i.
    pub fn left_leq(&self, j: Pos, i: Pos) -> bool {
        self.left_reach[i][j]
    }

    /// j ≼ i.
    pub fn two_leq(&self, j: Pos, i: Pos) -> bool {
        self.two_reach[i][j]
    }

    pub fn same_left_cell(&self, i: Pos, j: Pos) -> bool {
        self.left_cell_of[i] == self.left_cell_of[j]
    }

    pub fn same_cell(&self, i: Pos, j: Pos) -> bool {
        self.cell_of[i] == self.cell_of[j]
    }

    pub fn left_cells(&self) -> &[Vec<Pos>] {
        &self.left_cells
    }

    pub fn cells(&self) -> &[Vec<Pos>] {
        &self.cells
    }

    pub fn cell_of(&self, p: Pos) -> usize {
        self.cell_of[p]
    }

    pub fn left_cell_of(&self, p: Pos) -> usize {
        self.left_cell_of[p]
    }

    /// Pairs (c, d) of distinct two-sided cells with d ≼ c.
    pub fn cell_order(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (c, cm) in self.cells.iter().enumerate() {
            for (d, dm) in self.cells.iter().enumerate() {
                if c != d && self.two_leq(dm[0], cm[0]) {
                    out.push((c, d));
                }
            }
        }
        out
    }

    /// [v^{-a(j)}] h_{i,i',j}, the structure constant of t_i t_{i'} at t_j.
    pub fn jconst(&self, i: Pos, ip: Pos, j: Pos) -> i64 {
        self.jrow(i, ip)
            .iter()
            .find(|(k, _)| *k as usize == j)
            .map(|&(_, c)| c)
            .unwrap_or(0)
    }

    fn jrow(&self, i: Pos, ip: Pos) -> &[(u32, i64)] {
        self.jt[i].get(&(ip as u32)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// h*_{i,i',j}.
    pub fn hstar(&self, i: Pos, ip: Pos, j: Pos) -> i64 {
        self.jconst(i, ip, self.shriek[j])
    }

    /// Nonzero h* entries (i, i', j, value).
    pub fn hstar_entries(&self) -> Vec<(Pos, Pos, Pos, i64)> {
        let mut out = Vec::new();
        for (i, row) in self.jt.iter().enumerate() {
            for (&ip, entry) in row {
                for &(j, c) in entry {
                    out.push((i, ip as usize, self.shriek[j as usize], c));
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn positions_of(&self, x: &JElt) -> Result<Vec<(Pos, i64)>> {
        x.terms().map(|(i, c)| Ok((self.position(i)?, c))).collect()
    }

    pub fn j_mul(&self, x: &JElt, y: &JElt) -> Result<JElt> {
        let xs = self.positions_of(x)?;
        let ys = self.positions_of(y)?;
        let mut acc: BTreeMap<Pos, i64> = BTreeMap::new();
        for &(i, a) in &xs {
            for &(ip, b) in &ys {
                for &(j, c) in self.jrow(i, ip) {
                    *acc.entry(j as usize).or_insert(0) += a * b * c;
                }
            }
        }
        Ok(JElt::from_terms(acc.into_iter().map(|(p, c)| (self.idx(p), c))))
    }

    /// Left-to-right product of basis elements, stopping early at zero.
    pub fn j_chain(&self, factors: &[Pos]) -> JElt {
        let mut acc: BTreeMap<Pos, i64> = BTreeMap::new();
        if let Some(&first) = factors.first() {
            acc.insert(first, 1);
        }
        for &f in &factors[1.min(factors.len())..] {
            let mut next: BTreeMap<Pos, i64> = BTreeMap::new();
            for (&i, &a) in &acc {
                for &(j, c) in self.jrow(i, f) {
                    *next.entry(j as usize).or_insert(0) += a * c;
                }
            }
            next.retain(|_, c| *c != 0);
            if next.is_empty() {
                return JElt::zero();
            }
            acc = next;
        }
        JElt::from_terms(acc.into_iter().map(|(p, c)| (self.idx(p), c)))
    }

    pub fn tau(&self, x: &JElt) -> Result<i64> {
        Ok(self
            .positions_of(x)?
            .into_iter()
            .filter(|&(p, _)| self.distinguished[p])
            .map(|(_, c)| c)
            .sum())
    }

    /// Σ_{d ∈ 𝔻} t_d.
    pub fn j_unit(&self) -> JElt {
        JElt::from_terms(self.distinguished().into_iter().map(|p| (self.idx(p), 1)))
    }

    fn psi_related(&self, reading: PsiReading, ip: Pos, j: Pos) -> bool {
        match reading {
            PsiReading::TwoSided => self.same_cell(ip, j),
            PsiReading::Left => self.same_left_cell(ip, j),
        }
    }

    /// ψ(c_i) = Σ_{i', j ∈ 𝔻, i' ∼ j} h_{i,j,i'} t_{i'}.
    pub fn psi(&self, i: Pos, reading: PsiReading) -> AJElt {
        let mut out = AJElt::new();
        for j in self.distinguished() {
            for (ip, p) in self.h.product(i, j) {
                let ip = *ip as usize;
                if self.psi_related(reading, ip, j) {
                    let slot = out.entry(self.idx(ip)).or_default();
                    *slot += p;
                }
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Product in 𝒜 ⊗ J.
    pub fn aj_mul(&self, x: &AJElt, y: &AJElt) -> Result<AJElt> {
        let mut out = AJElt::new();
        for (&i, f) in x {
            let pi = self.position(i)?;
            for (&ip, g) in y {
                let pip = self.position(ip)?;
                let fg = f * g;
                for &(j, c) in self.jrow(pi, pip) {
                    let slot = out.entry(self.idx(j as usize)).or_default();
                    *slot += &fg.scale(&c.into());
                }
            }
        }
        out.retain(|_, p| !p.is_zero());
        Ok(out)
    }

    /// Checks ψ(c_i c_{i'}) = ψ(c_i)ψ(c_{i'}) on all pairs and ψ(1) = 1.
    pub fn check_psi(&self, reading: PsiReading) -> Result<PropertyCheck> {
        let name = match reading {
            PsiReading::TwoSided => "psi homomorphism (two-sided reading)",
            PsiReading::Left => "psi homomorphism (left reading)",
        };
        let mut check = PropertyCheck::new(name);
        let images: Vec<AJElt> = (0..self.len()).map(|i| self.psi(i, reading)).collect();
        for i in 0..self.len() {
            for ip in 0..self.len() {
                let lhs = self.aj_mul(&images[i], &images[ip])?;
                let mut rhs = AJElt::new();
                for (k, p) in self.h.product(i, ip) {
                    for (&t, f) in &images[*k as usize] {
                        *rhs.entry(t).or_default() += &(p * f);
                    }
                }
                rhs.retain(|_, p| !p.is_zero());
                check.record(lhs == rhs, || {
                    format!("pair ({}, {})", self.name(i), self.name(ip))
                });
            }
        }
        let mut unit_image = AJElt::new();
        for &l in &self.block.orbit {
            let p = self.position(Idx::new(WeylElt::IDENTITY, l))?;
            for (t, f) in self.psi(p, reading) {
                *unit_image.entry(t).or_default() += &f;
            }
        }
        unit_image.retain(|_, p| !p.is_zero());
        let unit: AJElt = self
            .distinguished()
            .into_iter()
            .map(|p| (self.idx(p), LaurentPoly::one()))
            .collect();
        check.record(unit_image == unit, || "psi(1) is not the unit of J".into());
        Ok(check)
    }

    pub fn name(&self, p: Pos) -> String {
        self.algebra.idx_string(self.idx(p))
    }

    fn fmt_positions(&self, ps: &[Pos]) -> String {
        let names: Vec<String> = ps.iter().map(|&p| self.name(p)).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// Exhaustive checks of the cell, a-function and J-ring properties.
    pub fn q_suite(&self) -> Vec<PropertyCheck> {
        let n = self.len();
        let sh = &self.shriek;
        let d = &self.distinguished;
        let stars = self.hstar_entries();
        let mut out = Vec::new();

        let mut c = PropertyCheck::new("cells partition the block");
        let mut seen = vec![0usize; n];
        for cell in &self.cells {
            for &p in cell {
                seen[p] += 1;
            }
        }
        for p in 0..n {
            c.record(seen[p] == 1, || format!("{} in {} cells", self.name(p), seen[p]));
        }
        for (k, gamma) in self.left_cells.iter().enumerate() {
            let cell = self.cell_of[gamma[0]];
            c.record(gamma.iter().all(|&p| self.cell_of[p] == cell), || {
                format!("left cell {k} meets two two-sided cells")
            });
        }
        out.push(c);

        let mut c = PropertyCheck::new("h* is nonnegative");
        for &(i, ip, j, v) in &stars {
            c.record(v > 0, || format!("h*({},{},{}) = {v}", self.name(i), self.name(ip), self.name(j)));
        }
        out.push(c);

        let mut c = PropertyCheck::new("Q1");
        for &(i, ip, j, _) in &stars {
            if d[j] {
                c.record(ip == sh[i], || {
                    format!("h*({},{},{}) != 0", self.name(i), self.name(ip), self.name(j))
                });
            }
        }
        out.push(c);

        let mut c = PropertyCheck::new("Q2");
        for i in 0..n {
            let count = (0..n).filter(|&j| d[j] && self.hstar(sh[i], i, j) != 0).count();
            c.record(count == 1, || format!("{} has {count} partners in D", self.name(i)));
        }
        out.push(c);

        let mut c = PropertyCheck::new("Q3");
        for i in 0..n {
            for ip in 0..n {
                if self.two_leq(ip, i) {
                    c.record(self.a[ip] >= self.a[i], || {
                        format!("{} <= {} but a drops", self.name(ip), self.name(i))
                    });
                }
            }
        }
        out.push(c);

        let mut c = PropertyCheck::new("Q4");
        for i in 0..n {
            for j in 0..n {
                let v = self.hstar(sh[i], i, j);
                if d[j] && v != 0 {
                    c.record(v == 1, || format!("h*({}^!,{},{}) = {v}", self.name(i), self.name(i), self.name(j)));
                }
            }
        }
        out.push(c);

        let mut c = PropertyCheck::new("Q5");
        for &(i, j, k, v) in &stars {
            c.record(self.hstar(j, k, i) == v, || {
                format!("h*({},{},{})", self.name(i), self.name(j), self.name(k))
            });
        }
        out.push(c);

        let mut c = PropertyCheck::new("Q6");
        for &(i, j, k, _) in &stars {
            let ok = self.same_left_cell(i, sh[j])
                && self.same_left_cell(j, sh[k])
                && self.same_left_cell(k, sh[i]);
            c.record(ok, || format!("h*({},{},{})", self.name(i), self.name(j), self.name(k)));
        }
        out.push(c);

        let mut c7 = PropertyCheck::new("Q7");
        let mut c8 = PropertyCheck::new("Q8");
        for i in 0..n {
            for ip in 0..n {
                if self.a[ip] != self.a[i] {
                    continue;
                }
                if self.left_leq(ip, i) {
                    c7.record(self.same_left_cell(ip, i), || {
                        format!("{} <=_L {}", self.name(ip), self.name(i))
                    });
                }
                if self.two_leq(ip, i) {
                    c8.record(self.same_cell(ip, i), || {
                        format!("{} <= {}", self.name(ip), self.name(i))
                    });
                }
            }
        }
        out.push(c7);
        out.push(c8);

        let mut c = PropertyCheck::new("Q9");
        for gamma in &self.left_cells {
            let ds: Vec<Pos> = gamma.iter().copied().filter(|&p| d[p]).collect();
            c.record(ds.len() == 1, || format!("left cell {} has {} elements of D", self.fmt_positions(gamma), ds.len()));
            if let [dd] = ds[..] {
                for &i in gamma {
                    c.record(self.hstar(sh[i], i, dd) == 1, || {
                        format!("h*({}^!,{},{}) != 1", self.name(i), self.name(i), self.name(dd))
                    });
                }
            }
        }
        out.push(c);

        let mut c = PropertyCheck::new("Q10");
        for i in 0..n {
            c.record(self.same_cell(i, sh[i]), || format!("{} not ~ its shriek", self.name(i)));
        }
        out.push(c);

        let mut c = PropertyCheck::new("a constant on cells and a(i^!) = a(i)");
        for i in 0..n {
            c.record(self.a[sh[i]] == self.a[i], || format!("a at {}", self.name(i)));
            let first = self.cells[self.cell_of[i]][0];
            c.record(self.a[first] == self.a[i], || format!("a varies in the cell of {}", self.name(i)));
        }
        out.push(c);

        let mut c = PropertyCheck::new("tau(t_i t_j) = [j = i^!]");
        for i in 0..n {
            for j in 0..n {
                let t: i64 = self.jrow(i, j).iter().filter(|(k, _)| d[*k as usize]).map(|&(_, v)| v).sum();
                c.record(t == i64::from(j == sh[i]), || {
                    format!("tau(t_{} t_{}) = {t}", self.name(i), self.name(j))
                });
            }
        }
        out.push(c);

        let mut c = PropertyCheck::new("J associativity and unit");
        for i in 0..n {
            for j in 0..n {
                let ij = self.j_chain(&[i, j]);
                for k in 0..n {
                    let left = if ij.is_zero() {
                        JElt::zero()
                    } else {
                        self.j_mul(&ij, &JElt::basis(self.idx(k))).expect("block element")
                    };
                    let jk = self.j_chain(&[j, k]);
                    let right = self.j_mul(&JElt::basis(self.idx(i)), &jk).expect("block element");
                    c.record(left == right, || {
                        format!("({} {}) {}", self.name(i), self.name(j), self.name(k))
                    });
                }
            }
            let ti = JElt::basis(self.idx(i));
            let unit = self.j_unit();
            c.record(
                self.j_mul(&unit, &ti).ok() == Some(ti.clone())
                    && self.j_mul(&ti, &unit).ok() == Some(ti.clone()),
                || format!("unit fails at {}", self.name(i)),
            );
        }
        out.push(c);

        // supports of t_u t_i, t_i t_u, t_u t_i t_u' for all u, u'
        let left_supp: Vec<BTreeSet<Pos>> = (0..n)
            .map(|i| {
                (0..n)
                    .flat_map(|u| self.jrow(u, i).iter().map(|&(j, _)| j as usize))
                    .collect()
            })
            .collect();
        let right_supp: Vec<BTreeSet<Pos>> = (0..n)
            .map(|i| {
                (0..n)
                    .flat_map(|u| self.jrow(i, u).iter().map(|&(j, _)| j as usize))
                    .collect()
            })
            .collect();
        let mut ca = PropertyCheck::new("left cells spanned by left J-products");
        let mut cb = PropertyCheck::new("right cells spanned by right J-products");
        let mut cc = PropertyCheck::new("two-sided cells spanned by t_u t_i t_u'");
        let mut cd = PropertyCheck::new("t_i t_j t_i' nonzero for some j within a cell");
        for i in 0..n {
            let mut two_supp: BTreeSet<Pos> = BTreeSet::new();
            for u in 0..n {
                for up in 0..n {
                    two_supp.extend(self.j_chain(&[u, i, up]).support().map(|x| self.position(x).unwrap()));
                }
            }
            for ip in 0..n {
                if self.same_left_cell(i, ip) {
                    ca.record(left_supp[i].contains(&ip), || {
                        format!("({}, {})", self.name(i), self.name(ip))
                    });
                }
                if self.same_left_cell(sh[i], sh[ip]) {
                    cb.record(right_supp[i].contains(&ip), || {
                        format!("({}, {})", self.name(i), self.name(ip))
                    });
                }
                if self.same_cell(i, ip) {
                    cc.record(two_supp.contains(&ip), || {
                        format!("({}, {})", self.name(i), self.name(ip))
                    });
                    let found = (0..n).any(|j| !self.j_chain(&[i, j, ip]).is_zero());
                    cd.record(found, || format!("({}, {})", self.name(i), self.name(ip)));
                }
            }
        }
        out.extend([ca, cb, cc, cd]);
        out
    }

    /// Cells of the block as JSON, cell numbers offset by `offset`.
    pub fn cells_json(&self, offset: usize) -> (Vec<Value>, Vec<Value>) {
        let alg = &self.algebra;
        let cells = self
            .cells
            .iter()
            .map(|cell| {
                let lefts: Vec<Value> = self
                    .left_cells
                    .iter()
                    .filter(|g| self.cell_of[g[0]] == self.cell_of[cell[0]])
                    .map(|g| Value::Array(g.iter().map(|&p| alg.idx_json(self.idx(p))).collect()))
                    .collect();
                json!({
                    "a": self.a[cell[0]],
                    "members": cell.iter().map(|&p| alg.idx_json(self.idx(p))).collect::<Vec<_>>(),
                    "distinguished": cell
                        .iter()
                        .filter(|&&p| self.distinguished[p])
                        .map(|&p| alg.idx_json(self.idx(p)))
                        .collect::<Vec<_>>(),
                    "left_cells": lefts,
                })
            })
            .collect();
        let order = self
            .cell_order()
            .into_iter()
            .map(|(c, d)| json!([c + offset, d + offset]))
            .collect();
        (cells, order)
    }
}

/// a-values of the classical Hecke algebra of the reflection subgroup with
/// the given simple roots, indexed by the subgroup's elements.
fn classical_a_values(
    datum: &RootDatum,
    simple_roots: &[usize],
    expected: &crate::coxeter::CoxeterGroup,
) -> Result<Vec<u32>> {
    let roots = datum.roots();
    let spec = DatumSpec {
        rank: datum.rank(),
        simple_roots: simple_roots.iter().map(|&r| roots[r].vector.clone()).collect(),
        simple_coroots: simple_roots.iter().map(|&r| roots[r].coroot.clone()).collect(),
        cartan: None,
    };
    let weyl = WeylGroup::new(RootDatum::from_spec(&spec)?)?;
    if weyl.order() != expected.order()
        || weyl.coxeter().elements().any(|w| weyl.coxeter().word(w) != expected.word(w))
    {
        return Err(Error::Invariant("reflection subgroup numbering differs".into()));
    }
    let space = CharSpace::new(weyl, 1)?;
    let alg = HeckeAlgebra::new(space.clone());
    let canon = CanonicalTable::new(&alg, Block::new(&space, space.zero()))?;
    let h = canon.h_table(BLOCK_GUARD)?;
    Ok((0..canon.len()).map(|j| h.depth_at(j).max(0) as u32).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::WeylGroup;

    fn cells(name: &str, n: u32, coords: &[i64]) -> CellData {
        let w = WeylGroup::new(RootDatum::preset(name).unwrap()).unwrap();
        let space = CharSpace::new(w, n).unwrap();
        let alg = HeckeAlgebra::new(space.clone());
        let l = space.id_of_coords(coords).unwrap();
        CellData::compute(&alg, Block::new(&space, l)).unwrap().1
    }

    fn names(c: &CellData, ps: &[Pos]) -> Vec<String> {
        ps.iter().map(|&p| c.name(p)).collect()
    }

    #[test]
    fn sl2_unipotent_block() {
        let c = cells("A1-SL2", 8, &[0]);
        let parts: Vec<Vec<String>> = c.cells().iter().map(|x| names(&c, x)).collect();
        assert_eq!(parts, vec![vec!["e·(0)"], vec!["1·(0)"]]);
        assert_eq!(c.a(0), 0);
        assert_eq!(c.a(1), 1);
        assert_eq!(c.distinguished(), vec![0, 1]);
        let s = JElt::basis(c.idx(1));
        assert_eq!(c.j_mul(&s, &s).unwrap(), s);
    }

    #[test]
    fn sl2_order_two_block() {
        let c = cells("A1-SL2", 8, &[4]);
        assert_eq!(c.cells().len(), 1);
        assert!(c.a.iter().all(|&a| a == 0));
        let one = c.position(Idx::new(WeylElt::IDENTITY, c.idx(0).lambda)).unwrap();
        assert_eq!(c.distinguished(), vec![one]);
        let s = JElt::basis(c.idx(1 - one));
        assert_eq!(c.j_mul(&s, &s).unwrap(), JElt::basis(c.idx(one)));
        assert_eq!(c.tau(&JElt::basis(c.idx(one))).unwrap(), 1);
        assert_eq!(c.tau(&s).unwrap(), 0);
    }

    #[test]
    fn sl2_regular_block() {
        let c = cells("A1-SL2", 8, &[2]);
        assert_eq!(c.cells().len(), 1);
        assert_eq!(c.cells()[0].len(), 4);
        // t_{1·2} t_{σ·2} = 0 since 1_2 1_{σ(2)} = 0
        let alg = c.algebra();
        let l2 = alg.space().id_of_coords(&[2]).unwrap();
        let sigma = alg.weyl().parse_word("1").unwrap();
        let x = c.j_mul(&JElt::basis(Idx::new(WeylElt::IDENTITY, l2)), &JElt::basis(Idx::new(sigma, l2))).unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn a2_cells_and_distinguished() {
        let c = cells("A2", 1, &[0, 0]);
        let parts: Vec<Vec<String>> = c.cells().iter().map(|x| names(&c, x)).collect();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], vec!["e·(0,0)"]);
        assert_eq!(parts[1].len(), 4);
        let lefts: Vec<Vec<String>> = c.left_cells().iter().map(|x| names(&c, x)).collect();
        assert!(lefts.contains(&vec!["1·(0,0)".to_string(), "21·(0,0)".to_string()]));
        assert!(lefts.contains(&vec!["2·(0,0)".to_string(), "12·(0,0)".to_string()]));
        let ds = names(&c, &c.distinguished());
        assert_eq!(ds, vec!["e·(0,0)", "1·(0,0)", "2·(0,0)", "121·(0,0)"]);
    }

    #[test]
    fn q_suite_passes_on_small_blocks() {
        for (name, n, l) in [("A1-SL2", 8, vec![0]), ("A1-SL2", 8, vec![2]), ("A2", 1, vec![0, 0]), ("B2", 2, vec![1, 0])] {
            let c = cells(name, n, &l);
            for check in c.q_suite() {
                assert!(check.passed, "{name} {n}: {check}");
            }
            assert!(c.check_psi(PsiReading::TwoSided).unwrap().passed);
        }
    }
}
