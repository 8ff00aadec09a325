//! Exact arithmetic in ℤ[ζ_m] = ℤ[x]/Φ_m(x).

use std::fmt;

/// The ring ℤ[ζ_m] with precomputed reductions of x^e, 0 ≤ e < m.
#[derive(Debug, Clone)]
pub struct CyclotomicRing {
    m: u32,
    /// Φ_m, lowest degree first.
    phi: Vec<i64>,
    powers: Vec<CycElt>,
}

/// An element of ℤ[ζ_m] as coefficients of 1, ζ, …, ζ^{φ(m)-1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycElt(Vec<i64>);

impl CycElt {
    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add_assign(&mut self, other: &CycElt) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    pub fn add_scaled(&mut self, other: &CycElt, k: i64) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += k * b;
        }
    }

    pub fn scale(&self, k: i64) -> CycElt {
        CycElt(self.0.iter().map(|c| c * k).collect())
    }
}

impl fmt::Display for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, c)| match e {
                0 => format!("{c}"),
                1 => format!("{c}z"),
                _ => format!("{c}z^{e}"),
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![0; num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd];
        q[k] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Φ_m via x^m − 1 = Π_{d | m} Φ_d.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    let mut den = vec![1i64];
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        den = poly_mul(&den, &cyclotomic_polynomial(d));
    }
    poly_div_exact(&num, &den)
}

impl CyclotomicRing {
    pub fn new(m: u32) -> Self {
        assert!(m > 0, "cyclotomic order must be positive");
        let phi = cyclotomic_polynomial(m);
        let deg = phi.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; deg];
        cur[0] = 1;
        for _ in 0..m {
            powers.push(CycElt(cur.clone()));
            // multiply by x and reduce with the monic Φ_m
            let top = cur[deg - 1];
            for k in (1..deg).rev() {
                cur[k] = cur[k - 1];
            }
            cur[0] = 0;
            for (k, c) in cur.iter_mut().enumerate() {
                *c -= top * phi[k];
            }
        }
        CyclotomicRing { m, phi, powers }
    }

    pub fn order(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    pub fn phi(&self) -> &[i64] {
        &self.phi
    }

    pub fn zero(&self) -> CycElt {
        CycElt(vec![0; self.degree()])
    }

    pub fn one(&self) -> CycElt {
        self.zeta_pow(0)
    }

    pub fn from_int(&self, k: i64) -> CycElt {
        self.one().scale(k)
    }

    /// ζ_m^e for any integer e.
    pub fn zeta_pow(&self, e: i64) -> CycElt {
        self.powers[e.rem_euclid(i64::from(self.m)) as usize].clone()
    }

    pub fn mul(&self, a: &CycElt, b: &CycElt) -> CycElt {
        let mut out = self.zero();
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                if y != 0 {
                    out.add_scaled(&self.powers[(i + j) % self.m as usize], x * y);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn prime_order_products_wrap() {
        let r = CyclotomicRing::new(7);
        let a = r.zeta_pow(5);
        assert_eq!(r.mul(&a, &a), r.zeta_pow(3));
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for m in [2u32, 3, 4, 6, 8, 12] {
            let r = CyclotomicRing::new(m);
            let mut s = r.zero();
            for e in 0..m {
                s.add_assign(&r.zeta_pow(e.into()));
            }
            assert!(s.is_zero(), "m = {m}");
            assert_eq!(r.mul(&r.zeta_pow(3), &r.zeta_pow(-3)), r.one());
            assert_eq!(r.zeta_pow(m.into()), r.one());
        }
    }

    #[test]
    fn multiplication_matches_exponents() {
        let r = CyclotomicRing::new(12);
        for a in 0..12 {
            for b in 0..12 {
                assert_eq!(r.mul(&r.zeta_pow(a), &r.zeta_pow(b)), r.zeta_pow(a + b));
            }
        }
    }
}
