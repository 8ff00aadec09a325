//! Kazhdan–Lusztig polynomials of a finite Coxeter group.

use crate::coxeter::{CoxeterGroup, Elt};

/// Ordinary polynomial in q, lowest degree first, no trailing zeros.
pub type Poly = Vec<i64>;

fn trim(p: &mut Poly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn add_shifted(acc: &mut Poly, p: &Poly, shift: usize, scale: i64) {
    if p.is_empty() || scale == 0 {
        return;
    }
    if acc.len() < p.len() + shift {
        acc.resize(p.len() + shift, 0);
    }
    for (k, &c) in p.iter().enumerate() {
        acc[k + shift] += scale * c;
    }
}

/// The table P_{y,w} for all y, w of a Coxeter group.
#[derive(Debug, Clone)]
pub struct KLTable {
    order: usize,
    /// Dense `p[w * order + y]`; empty means zero.
    p: Vec<Poly>,
    mu: Vec<i64>,
}

impl KLTable {
    pub fn new(group: &CoxeterGroup) -> Self {
        let order = group.order();
        let mut p: Vec<Poly> = vec![Vec::new(); order * order];
        let mut mu = vec![0i64; order * order];
        let leq: Vec<bool> = (0..order)
            .flat_map(|w| (0..order).map(move |y| (y, w)))
            .map(|(y, w)| group.bruhat_leq(Elt(y as u32), Elt(w as u32)))
            .collect();
        for w in group.elements() {
            let wi = w.index();
            if w == Elt::IDENTITY {
                p[0] = vec![1];
                continue;
            }
            let s = group.word(w)[0] as usize;
            let v = group.lmul_gen(s, w);
            let lw = group.length(w);
            // z < v with sz < z and μ(z, v) ≠ 0
            let correction: Vec<(Elt, i64)> = group
                .elements()
                .filter(|&z| {
                    z != v
                        && leq[v.index() * order + z.index()]
                        && group.is_left_descent(s, z)
                        && mu[v.index() * order + z.index()] != 0
                })
                .map(|z| (z, mu[v.index() * order + z.index()]))
                .collect();
            for x in group.elements() {
                if !leq[wi * order + x.index()] {
                    continue;
                }
                let sx = group.lmul_gen(s, x);
                let c = usize::from(group.is_left_descent(s, x));
                let mut acc: Poly = Vec::new();
                add_shifted(&mut acc, &p[v.index() * order + sx.index()], 1 - c, 1);
                add_shifted(&mut acc, &p[v.index() * order + x.index()], c, 1);
                for &(z, m) in &correction {
                    let shift = ((lw - group.length(z)) / 2) as usize;
                    add_shifted(&mut acc, &p[z.index() * order + x.index()], shift, -m);
                }
                trim(&mut acc);
                let d = lw - group.length(x);
                if d % 2 == 1 {
                    let k = ((d - 1) / 2) as usize;
                    mu[wi * order + x.index()] = acc.get(k).copied().unwrap_or(0);
                }
                p[wi * order + x.index()] = acc;
            }
        }
        KLTable { order, p, mu }
    }

    pub fn p(&self, y: Elt, w: Elt) -> &Poly {
        &self.p[w.index() * self.order + y.index()]
    }

    /// Coefficient of q^{(l(w)-l(y)-1)/2} in P_{y,w}.
    pub fn mu(&self, y: Elt, w: Elt) -> i64 {
        self.mu[w.index() * self.order + y.index()]
    }

    pub fn degree(&self, y: Elt, w: Elt) -> Option<usize> {
        let p = self.p(y, w);
        if p.is_empty() {
            None
        } else {
            Some(p.len() - 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::RootDatum;
    use crate::weyl::WeylGroup;

    fn group(name: &str) -> CoxeterGroup {
        WeylGroup::new(RootDatum::preset(name).unwrap())
            .unwrap()
            .coxeter()
            .clone()
    }

    #[test]
    fn rank_two_polynomials_are_one() {
        for name in ["A2", "B2", "G2"] {
            let g = group(name);
            let t = KLTable::new(&g);
            for w in g.elements() {
                for y in g.elements() {
                    let expected: Poly = if g.bruhat_leq(y, w) { vec![1] } else { vec![] };
                    assert_eq!(t.p(y, w), &expected, "{name}");
                }
            }
        }
    }

    #[test]
    fn a3_has_a_nontrivial_polynomial() {
        let g = group("A3");
        let t = KLTable::new(&g);
        let y = g.parse_word("2").unwrap();
        let w = g.parse_word("2132").unwrap();
        assert_eq!(t.p(y, w), &vec![1, 1]);
        assert_eq!(t.p(Elt::IDENTITY, w), &vec![1, 1]);
    }

    #[test]
    fn inverse_symmetry_and_degree_bound() {
        let g = group("A3");
        let t = KLTable::new(&g);
        for w in g.elements() {
            assert_eq!(t.p(w, w), &vec![1]);
            for y in g.elements() {
                assert_eq!(t.p(y, w), t.p(g.inv(y), g.inv(w)));
                if y != w {
                    if let Some(d) = t.degree(y, w) {
                        assert!((2 * d as u32) < g.length(w) - g.length(y));
                        assert_eq!(t.p(y, w)[0], 1);
                    }
                }
            }
        }
    }
}
