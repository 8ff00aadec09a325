//! Root data: character lattice X, cocharacter lattice Y, simple roots in X
//! and simple coroots in Y, with the full root system generated from them.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bound on |R| when closing the simple roots under simple reflections.
const ROOT_GUARD: usize = 20_000;

/// A root together with its coroot, in several coordinate systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    /// Coordinates in the basis of X.
    pub vector: Vec<i64>,
    /// Coordinates of the coroot in the basis of Y.
    pub coroot: Vec<i64>,
    /// Coefficients with respect to the simple roots.
    pub simple_coords: Vec<i64>,
    pub positive: bool,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.simple_coords.iter().sum()
    }
}

/// The explicit JSON form `{rank, simple_roots, simple_coroots}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatumSpec {
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartan: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone)]
pub struct RootDatum {
    name: Option<String>,
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    roots: Vec<Root>,
    root_index: HashMap<Vec<i64>, usize>,
    num_positive: usize,
}

pub const PRESETS: &[&str] = &["A1-SL2", "A1-PGL2", "A2", "B2", "G2", "A3", "A1xA1", "GL2"];

/// Simply connected datum: X = weight lattice, simple coroots = standard basis of Y.
fn simply_connected(cartan: &[Vec<i64>]) -> DatumSpec {
    let l = cartan.len();
    DatumSpec {
        rank: l,
        simple_roots: cartan.to_vec(),
        simple_coroots: (0..l)
            .map(|i| (0..l).map(|j| i64::from(i == j)).collect())
            .collect(),
        cartan: None,
    }
}

impl RootDatum {
    pub fn preset(name: &str) -> Result<Self> {
        let spec = match name {
            "A1-SL2" => DatumSpec {
                rank: 1,
                simple_roots: vec![vec![2]],
                simple_coroots: vec![vec![1]],
                cartan: None,
            },
            "A1-PGL2" => DatumSpec {
                rank: 1,
                simple_roots: vec![vec![1]],
                simple_coroots: vec![vec![2]],
                cartan: None,
            },
            "GL2" => DatumSpec {
                rank: 2,
                simple_roots: vec![vec![1, -1]],
                simple_coroots: vec![vec![1, -1]],
                cartan: None,
            },
            "A1xA1" => simply_connected(&[vec![2, 0], vec![0, 2]]),
            "A2" => simply_connected(&[vec![2, -1], vec![-1, 2]]),
            // alpha_1 long, alpha_2 short
            "B2" => simply_connected(&[vec![2, -2], vec![-1, 2]]),
            // alpha_1 short, alpha_2 long
            "G2" => simply_connected(&[vec![2, -1], vec![-3, 2]]),
            "A3" => simply_connected(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]),
            _ => {
                return Err(Error::InvalidInput(format!(
                    "unknown preset {name:?}; known presets: {}",
                    PRESETS.join(", ")
                )))
            }
        };
        let mut datum = Self::from_spec(&spec)?;
        datum.name = Some(name.to_string());
        Ok(datum)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let spec: DatumSpec = serde_json::from_str(json)
            .map_err(|e| Error::InvalidInput(format!("datum JSON: {e}")))?;
        Self::from_spec(&spec)
    }

    pub fn from_spec(spec: &DatumSpec) -> Result<Self> {
        let rank = spec.rank;
        if rank == 0 {
            return Err(Error::InvalidInput("lattice rank must be positive".into()));
        }
        let l = spec.simple_roots.len();
        if spec.simple_coroots.len() != l {
            return Err(Error::InvalidInput(format!(
                "{l} simple roots but {} simple coroots",
                spec.simple_coroots.len()
            )));
        }
        if l > rank {
            return Err(Error::InvalidInput(format!(
                "{l} simple roots exceed lattice rank {rank}"
            )));
        }
        for v in spec.simple_roots.iter().chain(&spec.simple_coroots) {
            if v.len() != rank {
                return Err(Error::InvalidInput(format!(
                    "vector {v:?} does not have length {rank}"
                )));
            }
        }
        let cartan: Vec<Vec<i64>> = (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| dot(&spec.simple_roots[i], &spec.simple_coroots[j]))
                    .collect()
            })
            .collect();
        if let Some(given) = &spec.cartan {
            if *given != cartan {
                return Err(Error::PairingMismatch(format!(
                    "given cartan {given:?} differs from pairing {cartan:?}"
                )));
            }
        }
        for (i, row) in cartan.iter().enumerate() {
            if row[i] != 2 {
                return Err(Error::PairingMismatch(format!(
                    "<alpha_{i}, coroot_{i}> = {} (expected 2)",
                    row[i]
                )));
            }
        }
        check_finite_type(&cartan)?;

        let mut datum = RootDatum {
            name: None,
            rank,
            simple_roots: spec.simple_roots.clone(),
            simple_coroots: spec.simple_coroots.clone(),
            cartan,
            roots: Vec::new(),
            root_index: HashMap::new(),
            num_positive: 0,
        };
        datum.close_roots()?;
        Ok(datum)
    }

    fn close_roots(&mut self) -> Result<()> {
        let l = self.semisimple_rank();
        let c = &self.cartan;
        let unit = |i: usize| -> Vec<i64> { (0..l).map(|j| i64::from(i == j)).collect() };
        let mut seen: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..l {
            seen.insert(unit(i), unit(i));
            queue.push_back(unit(i));
        }
        while let Some(root) = queue.pop_front() {
            let coroot = seen[&root].clone();
            for i in 0..l {
                let pair_root: i64 = (0..l).map(|j| root[j] * c[j][i]).sum();
                let pair_coroot: i64 = (0..l).map(|j| c[i][j] * coroot[j]).sum();
                let mut r = root.clone();
                r[i] -= pair_root;
                let mut cr = coroot.clone();
                cr[i] -= pair_coroot;
                if !seen.contains_key(&r) {
                    if seen.len() >= ROOT_GUARD {
                        return Err(Error::NotFiniteType("root system does not close".into()));
                    }
                    seen.insert(r.clone(), cr);
                    queue.push_back(r);
                }
            }
        }
        let mut roots: Vec<Root> = Vec::with_capacity(seen.len());
        for (sc, cc) in seen {
            let positive = sc.iter().all(|&x| x >= 0);
            if !positive && !sc.iter().all(|&x| x <= 0) {
                return Err(Error::NotFiniteType(format!("root {sc:?} has mixed signs")));
            }
            let vector = combine(&sc, &self.simple_roots, self.rank);
            let coroot = combine(&cc, &self.simple_coroots, self.rank);
            roots.push(Root {
                vector,
                coroot,
                simple_coords: sc,
                positive,
            });
        }
        // positive roots first by height, then negatives by depth
        roots.sort_by(|a, b| {
            (!a.positive, a.height().abs(), &a.simple_coords)
                .cmp(&(!b.positive, b.height().abs(), &b.simple_coords))
        });
        self.num_positive = roots.iter().filter(|r| r.positive).count();
        self.root_index = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.vector.clone(), i))
            .collect();
        if self.root_index.len() != roots.len() {
            return Err(Error::InvalidInput(
                "distinct roots have equal character vectors".into(),
            ));
        }
        self.roots = roots;
        Ok(())
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Rank of the character lattice (dim T).
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of simple roots.
    pub fn semisimple_rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &[Vec<i64>] {
        &self.simple_coroots
    }

    /// `cartan[i][j] = <alpha_i, coroot_j>`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.roots[..self.num_positive]
    }

    pub fn num_positive(&self) -> usize {
        self.num_positive
    }

    pub fn root_index(&self, vector: &[i64]) -> Option<usize> {
        self.root_index.get(vector).copied()
    }

    /// Index of the i-th simple root in [`Self::roots`].
    pub fn simple_root_index(&self, i: usize) -> usize {
        self.root_index[&self.simple_roots[i]]
    }

    pub fn spec(&self) -> DatumSpec {
        DatumSpec {
            rank: self.rank,
            simple_roots: self.simple_roots.clone(),
            simple_coroots: self.simple_coroots.clone(),
            cartan: None,
        }
    }

    /// Stable identifier of the datum: its canonical JSON form.
    pub fn fingerprint(&self) -> String {
        serde_json::to_string(&self.spec()).expect("datum serializes")
    }

    /// The same datum with simple roots listed in the order `order`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        let l = self.semisimple_rank();
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..l).collect::<Vec<_>>() {
            return Err(Error::InvalidInput(format!(
                "{order:?} is not a permutation of 0..{l}"
            )));
        }
        let spec = DatumSpec {
            rank: self.rank,
            simple_roots: order.iter().map(|&i| self.simple_roots[i].clone()).collect(),
            simple_coroots: order.iter().map(|&i| self.simple_coroots[i].clone()).collect(),
            cartan: None,
        };
        let mut d = Self::from_spec(&spec)?;
        d.name = self.name.clone();
        Ok(d)
    }

    /// Matrix (row-major, acting on column vectors of X-coordinates) of the
    /// simple reflection `x -> x - <x, coroot_i> alpha_i`.
    pub fn reflection_matrix(&self, i: usize) -> Vec<i64> {
        let r = self.rank;
        let a = &self.simple_roots[i];
        let c = &self.simple_coroots[i];
        let mut m = vec![0i64; r * r];
        for row in 0..r {
            for col in 0..r {
                m[row * r + col] = i64::from(row == col) - a[row] * c[col];
            }
        }
        m
    }
}

pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn combine(coeffs: &[i64], basis: &[Vec<i64>], rank: usize) -> Vec<i64> {
    let mut out = vec![0i64; rank];
    for (c, v) in coeffs.iter().zip(basis) {
        for (o, x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    out
}

/// Finite type: off-diagonal entries nonpositive with symmetric zero
/// pattern, symmetrizable, and the symmetrization positive definite.
fn check_finite_type(c: &[Vec<i64>]) -> Result<()> {
    let l = c.len();
    for i in 0..l {
        for j in 0..l {
            if i != j && (c[i][j] > 0 || (c[i][j] == 0) != (c[j][i] == 0)) {
                return Err(Error::NotFiniteType(format!(
                    "entries ({i},{j}) and ({j},{i}) are {} and {}",
                    c[i][j], c[j][i]
                )));
            }
        }
    }
    // symmetrizer d with d_i c_ij = d_j c_ji, as fractions num/den
    let mut d: Vec<Option<(i64, i64)>> = vec![None; l];
    for start in 0..l {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some((1, 1));
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let (ni, di) = d[i].unwrap();
            for j in 0..l {
                if i == j || c[i][j] == 0 {
                    continue;
                }
                // d_j = d_i c_ij / c_ji
                let (mut nj, mut dj) = (ni * c[i][j], di * c[j][i]);
                if dj < 0 {
                    nj = -nj;
                    dj = -dj;
                }
                let g = num_integer::gcd(nj, dj).max(1);
                let cand = (nj / g, dj / g);
                match d[j] {
                    None => {
                        d[j] = Some(cand);
                        stack.push(j);
                    }
                    Some(existing) if existing != cand => {
                        return Err(Error::NotFiniteType("matrix is not symmetrizable".into()))
                    }
                    _ => {}
                }
            }
        }
    }
    let d: Vec<(i64, i64)> = d.into_iter().map(Option::unwrap).collect();
    let lcm = d.iter().fold(1i64, |acc, &(_, den)| num_integer::lcm(acc, den));
    let b: Vec<Vec<i128>> = (0..l)
        .map(|i| {
            (0..l)
                .map(|j| i128::from(d[i].0 * (lcm / d[i].1) * c[i][j]))
                .collect()
        })
        .collect();
    for k in 1..=l {
        if bareiss_det(&b, k) <= 0 {
            return Err(Error::NotFiniteType(format!(
                "leading principal minor of order {k} is not positive"
            )));
        }
    }
    Ok(())
}

/// Determinant of the leading k x k block by fraction-free elimination.
fn bareiss_det(m: &[Vec<i128>], k: usize) -> i128 {
    let mut a: Vec<Vec<i128>> = (0..k).map(|i| m[i][..k].to_vec()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for p in 0..k {
        if a[p][p] == 0 {
            match (p + 1..k).find(|&r| a[r][p] != 0) {
                Some(r) => {
                    a.swap(p, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in p + 1..k {
            for j in p + 1..k {
                a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) / prev;
            }
        }
        prev = a[p][p];
    }
    sign * a[k - 1][k - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_preset() {
        let d = RootDatum::preset("A1-SL2").unwrap();
        assert_eq!(d.rank(), 1);
        assert_eq!(d.simple_roots(), &[vec![2]]);
        assert_eq!(d.simple_coroots(), &[vec![1]]);
        assert_eq!(d.roots().len(), 2);
    }

    #[test]
    fn positive_root_counts() {
        for (name, pos) in [("A2", 3), ("B2", 4), ("G2", 6), ("A3", 6), ("A1xA1", 2), ("GL2", 1)] {
            let d = RootDatum::preset(name).unwrap();
            assert_eq!(d.num_positive(), pos, "{name}");
            assert_eq!(d.roots().len(), 2 * pos);
        }
    }

    #[test]
    fn cartan_is_the_pairing() {
        for name in PRESETS {
            let d = RootDatum::preset(name).unwrap();
            for i in 0..d.semisimple_rank() {
                for j in 0..d.semisimple_rank() {
                    assert_eq!(
                        d.cartan()[i][j],
                        dot(&d.simple_roots()[i], &d.simple_coroots()[j])
                    );
                }
            }
        }
    }

    #[test]
    fn rejects_affine_and_mismatched_data() {
        // affine A1: cartan [[2,-2],[-2,2]]
        let spec = DatumSpec {
            rank: 2,
            simple_roots: vec![vec![2, -2], vec![-2, 2]],
            simple_coroots: vec![vec![1, 0], vec![0, 1]],
            cartan: None,
        };
        assert!(matches!(RootDatum::from_spec(&spec), Err(Error::NotFiniteType(_))));
        let spec = DatumSpec {
            rank: 1,
            simple_roots: vec![vec![3]],
            simple_coroots: vec![vec![1]],
            cartan: None,
        };
        assert!(matches!(RootDatum::from_spec(&spec), Err(Error::PairingMismatch(_))));
        let spec = DatumSpec {
            rank: 1,
            simple_roots: vec![vec![2]],
            simple_coroots: vec![vec![1]],
            cartan: Some(vec![vec![3]]),
        };
        assert!(matches!(RootDatum::from_spec(&spec), Err(Error::PairingMismatch(_))));
    }

    #[test]
    fn json_form_round_trips() {
        let d = RootDatum::preset("B2").unwrap();
        let again = RootDatum::from_json(&d.fingerprint()).unwrap();
        assert_eq!(again.cartan(), d.cartan());
        assert!(RootDatum::from_json("{\"rank\": 1}").is_err());
    }
}
