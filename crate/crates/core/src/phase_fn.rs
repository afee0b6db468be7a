//! Integer phase-function algebra for diagonal gates.
//!
//! A diagonal gate with entries on the 2^m-th-root-of-unity grid is a
//! function φ: F_2^n → Z_{2^m} with φ(0) = 0 (global phase normalized
//! away). Conjugating X^x produces the discrete derivative
//! ψ_x(y) = φ(y⊕x) − φ(y) − φ(x), which drives a purely integer recursive
//! hierarchy-membership test: φ is level k iff every nonzero derivative is
//! level k−1, with closed forms at the Pauli and Clifford base cases.

use crate::error::{Error, Result};
use crate::matrix::DenseUnitary;
use ndarray::Array2;
use num::complex::Complex64;
use rand::Rng;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhaseFn {
    n: usize,
    log2m: u32,
    values: Vec<u64>,
}

impl PhaseFn {
    pub fn new(n: usize, log2m: u32, mut values: Vec<u64>) -> Result<Self> {
        if values.len() != 1 << n {
            return Err(Error::InvalidParameter(format!(
                "phase table needs {} entries",
                1 << n
            )));
        }
        if log2m == 0 || log2m > 32 {
            return Err(Error::InvalidParameter(format!("bad grid 2^{log2m}")));
        }
        let m = 1u64 << log2m;
        let offset = values[0] % m;
        for v in values.iter_mut() {
            *v = (*v % m + m - offset) % m;
        }
        Ok(PhaseFn { n, log2m, values })
    }

    pub fn zero(n: usize, log2m: u32) -> Self {
        PhaseFn {
            n,
            log2m,
            values: vec![0; 1 << n],
        }
    }

    pub fn qubits(&self) -> usize {
        self.n
    }
    pub fn grid_log2(&self) -> u32 {
        self.log2m
    }
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    fn modulus(&self) -> u64 {
        1u64 << self.log2m
    }

    /// Extract the phase function of a diagonal unitary on the 2^k grid.
    /// Returns the function plus the largest angular residual (radians).
    pub fn from_diagonal(u: &DenseUnitary, k: u32) -> Result<(PhaseFn, f64)> {
        if !u.is_diagonal() {
            return Err(Error::InvalidParameter("matrix is not diagonal".into()));
        }
        let n = u.qubits();
        let m = 1u64 << k;
        let d0 = u.entry(0, 0);
        let mut values = Vec::with_capacity(1 << n);
        let mut max_residual = 0.0f64;
        let tau = 2.0 * std::f64::consts::PI;
        for y in 0..1usize << n {
            let ratio = u.entry(y, y) / d0;
            let ang = ratio.arg().rem_euclid(tau);
            let exp = ((ang * m as f64 / tau).round() as i64).rem_euclid(m as i64) as u64;
            let dist = (ang - exp as f64 * tau / m as f64).abs();
            let res = dist.min(tau - dist);
            max_residual = max_residual.max(res);
            values.push(exp);
        }
        Ok((PhaseFn::new(n, k, values)?, max_residual))
    }

    pub fn to_matrix(&self) -> DenseUnitary {
        let dim = 1usize << self.n;
        let m = self.modulus() as f64;
        let tau = 2.0 * std::f64::consts::PI;
        let mut arr = Array2::zeros((dim, dim));
        for y in 0..dim {
            arr[(y, y)] = Complex64::from_polar(1.0, tau * self.values[y] as f64 / m);
        }
        DenseUnitary::from_array_unchecked(self.n, arr)
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        let m = self.modulus() as f64;
        let tau = 2.0 * std::f64::consts::PI;
        self.values
            .iter()
            .map(|&v| Complex64::from_polar(1.0, tau * v as f64 / m))
            .collect()
    }

    /// Pointwise sum = composition of the diagonal gates.
    pub fn add(&self, other: &PhaseFn) -> Result<PhaseFn> {
        if self.n != other.n || self.log2m != other.log2m {
            return Err(Error::DimensionMismatch {
                left: self.values.len(),
                right: other.values.len(),
            });
        }
        let m = self.modulus();
        let values = self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (a + b) % m)
            .collect();
        PhaseFn::new(self.n, self.log2m, values)
    }

    pub fn negate(&self) -> PhaseFn {
        let m = self.modulus();
        PhaseFn {
            n: self.n,
            log2m: self.log2m,
            values: self.values.iter().map(|&v| (m - v) % m).collect(),
        }
    }

    /// ψ_x(y) = φ(y⊕x) − φ(y) − φ(x), normalized to ψ_x(0) = 0.
    pub fn derivative(&self, x: usize) -> PhaseFn {
        let m = self.modulus();
        let fx = self.values[x];
        let values = (0..self.values.len())
            .map(|y| (self.values[y ^ x] + 2 * m - self.values[y] - fx) % m)
            .collect();
        PhaseFn {
            n: self.n,
            log2m: self.log2m,
            values,
        }
    }

    /// Pack into a single key when it fits (used for memoization).
    pub fn key(&self) -> Option<u128> {
        let bits = self.log2m as usize * self.values.len();
        if bits > 120 {
            return None;
        }
        let mut k: u128 = 0;
        for &v in &self.values {
            k = (k << self.log2m) | v as u128;
        }
        Some(k | (1u128 << bits)) // length marker
    }

    /// Pauli test: φ(y) = (m/2)·(a·y) for some a ∈ F_2^n.
    fn is_linear_pauli(&self) -> bool {
        let half = self.modulus() / 2;
        let mut a = 0usize;
        for b in 0..self.n {
            let v = self.values[1 << b];
            if v == half {
                a |= 1 << b;
            } else if v != 0 {
                return false;
            }
        }
        self.values
            .iter()
            .enumerate()
            .all(|(y, &v)| v == half * ((y & a).count_ones() as u64 % 2))
    }

    /// Diagonal-Clifford test: φ(y) = Σ a_i y_i + Σ b_ij y_i y_j with the
    /// a_i on the quarter grid and the b_ij on the half grid.
    fn is_clifford_diagonal(&self) -> bool {
        let m = self.modulus();
        let quarter = std::cmp::max(m / 4, 1);
        let half = m / 2;
        let dim = self.values.len();
        let mut a = vec![0u64; self.n];
        for b in 0..self.n {
            let v = self.values[1 << b];
            if v % quarter != 0 {
                return false;
            }
            a[b] = v;
        }
        let mut bcoef = vec![vec![0u64; self.n]; self.n];
        for i in 0..self.n {
            for j in i + 1..self.n {
                let y = (1usize << i) | (1usize << j);
                let v = (self.values[y] + 2 * m - a[i] - a[j]) % m;
                if v != 0 && v != half {
                    return false;
                }
                bcoef[i][j] = v;
            }
        }
        for y in 0..dim {
            let mut pred = 0u64;
            for i in 0..self.n {
                if y >> i & 1 == 1 {
                    pred += a[i];
                    for j in i + 1..self.n {
                        if y >> j & 1 == 1 {
                            pred += bcoef[i][j];
                        }
                    }
                }
            }
            if pred % m != self.values[y] {
                return false;
            }
        }
        true
    }

    /// Hierarchy membership for the diagonal gate this function encodes.
    pub fn in_level(&self, k: u32) -> bool {
        let mut memo = HashMap::new();
        self.in_level_memo(k, &mut memo)
    }

    fn in_level_memo(&self, k: u32, memo: &mut HashMap<(u128, u32), bool>) -> bool {
        match k {
            0 => false,
            1 => self.is_linear_pauli(),
            2 => self.is_clifford_diagonal(),
            _ => {
                let key = self.key().map(|kk| (kk, k));
                if let Some(kk) = key {
                    if let Some(&v) = memo.get(&kk) {
                        return v;
                    }
                }
                let ok = (1..self.values.len())
                    .all(|x| self.derivative(x).in_level_memo(k - 1, memo));
                if let Some(kk) = key {
                    memo.insert(kk, ok);
                }
                ok
            }
        }
    }

    /// Smallest k ≤ k_max with membership, if any.
    pub fn level(&self, k_max: u32) -> Option<u32> {
        (1..=k_max).find(|&k| self.in_level(k))
    }

    /// Random member of the level-≤k diagonal group: a phase polynomial
    /// Σ_S 2^{|S|-1} c_S ∏_{i∈S} y_i with c_S ∈ Z_{2^{k-|S|+1}}.
    pub fn random_ck<R: Rng>(n: usize, k: u32, rng: &mut R) -> PhaseFn {
        let m = 1u64 << k;
        let dim = 1usize << n;
        let mut values = vec![0u64; dim];
        for subset in 1..dim {
            let d = subset.count_ones();
            if d > k {
                continue;
            }
            let weight = 1u64 << (d - 1);
            let range = 1u64 << (k + 1 - d);
            let c = rng.gen_range(0..range);
            let contrib = weight * c % m;
            if contrib == 0 {
                continue;
            }
            for y in 0..dim {
                if y & subset == subset {
                    values[y] = (values[y] + contrib) % m;
                }
            }
        }
        PhaseFn {
            n,
            log2m: k,
            values,
        }
    }
}

/// Key packing for the n=3, grid-8 scan: 7 octal digits.
pub fn key24(values: &[u64]) -> u32 {
    let mut k = 0u32;
    for &v in &values[1..] {
        k = (k << 3) | v as u32;
    }
    k
}

pub fn unkey24(key: u32) -> Vec<u64> {
    let mut values = vec![0u64; 8];
    for i in 0..7 {
        values[7 - i] = (key >> (3 * i) & 0b111) as u64;
    }
    values
}

/// Exhaustive scan of all 8^7 three-qubit diagonal gates with 8th-root
/// entries and A_11 = 1: returns the sorted keys accepted by the level-3
/// membership test.
pub fn scan_c3_n3() -> Vec<u32> {
    use rayon::prelude::*;
    let total: u32 = 1 << 21; // 8^7
    let mut accepted: Vec<u32> = (0..total)
        .into_par_iter()
        .filter(|&key| {
            let values = unkey24(key);
            let pf = PhaseFn {
                n: 3,
                log2m: 3,
                values,
            };
            (1..8).all(|x| pf.derivative(x).is_clifford_diagonal())
        })
        .collect();
    accepted.sort_unstable();
    accepted
}

/// Breadth-first closure of the seven diagonal C_3 generators
/// (T_0, T_1, T_2, CS_01, CS_02, CS_12, CCZ) under composition, as keys.
pub fn generated_c3_n3() -> Vec<u32> {
    let mut gens: Vec<PhaseFn> = Vec::new();
    // T on each qubit: φ = y_i (grid 8). Index masks: qubit j ↔ bit (2-j).
    for q in 0..3usize {
        let bit = 1usize << (2 - q);
        let mut values = vec![0u64; 8];
        for y in 0..8 {
            if y & bit != 0 {
                values[y] = 1;
            }
        }
        gens.push(PhaseFn {
            n: 3,
            log2m: 3,
            values,
        });
    }
    // CS on each pair: φ = 2·y_i y_j.
    for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let (ba, bb) = (1usize << (2 - a), 1usize << (2 - b));
        let mut values = vec![0u64; 8];
        for y in 0..8 {
            if y & ba != 0 && y & bb != 0 {
                values[y] = 2;
            }
        }
        gens.push(PhaseFn {
            n: 3,
            log2m: 3,
            values,
        });
    }
    // CCZ: φ = 4·y_0 y_1 y_2.
    let mut values = vec![0u64; 8];
    values[7] = 4;
    gens.push(PhaseFn {
        n: 3,
        log2m: 3,
        values,
    });

    let mut seen = std::collections::HashSet::new();
    let zero = PhaseFn::zero(3, 3);
    seen.insert(key24(zero.values()));
    let mut frontier = vec![zero];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for g in &gens {
                let h = f.add(g).expect("same grid");
                let k = key24(h.values());
                if seen.insert(k) {
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    let mut keys: Vec<u32> = seen.into_iter().collect();
    keys.sort_unstable();
    keys
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pf(n: usize, k: u32, values: Vec<u64>) -> PhaseFn {
        PhaseFn::new(n, k, values).unwrap()
    }

    #[test]
    fn pauli_and_clifford_base_cases() {
        // Z on one qubit, grid 4: values {0, 2}.
        let z = pf(1, 2, vec![0, 2]);
        assert!(z.in_level(1));
        // S: values {0, 1} on grid 4: Clifford but not Pauli.
        let s = pf(1, 2, vec![0, 1]);
        assert!(!s.in_level(1));
        assert!(s.in_level(2));
        // T: {0, 1} on grid 8: level 3.
        let t = pf(1, 3, vec![0, 1]);
        assert!(!t.in_level(2));
        assert!(t.in_level(3));
        assert_eq!(t.level(6), Some(3));
        // CZ: quadratic with half-grid coefficient.
        let cz = pf(2, 3, vec![0, 0, 0, 4]);
        assert!(cz.in_level(2));
        // CS: quadratic quarter coefficient: level 3.
        let cs = pf(2, 3, vec![0, 0, 0, 2]);
        assert_eq!(cs.level(6), Some(3));
        // CCZ: cubic: level 3.
        let ccz = pf(3, 3, vec![0, 0, 0, 0, 0, 0, 0, 4]);
        assert_eq!(ccz.level(6), Some(3));
    }

    #[test]
    fn closed_form_c2_matches_recursive_route_exhaustively_n2() {
        // All 8^3 two-qubit grid-8 diagonals: closed-form Clifford test vs
        // "every derivative is linear-Pauli".
        for key in 0..512u32 {
            let values = vec![
                0,
                (key & 7) as u64,
                (key >> 3 & 7) as u64,
                (key >> 6 & 7) as u64,
            ];
            let f = pf(2, 3, values);
            let closed = f.is_clifford_diagonal();
            let recursive = (1..4).all(|x| f.derivative(x).is_linear_pauli());
            assert_eq!(closed, recursive, "key={key}");
        }
    }

    #[test]
    fn levels_match_matrix_recursion_on_random_diagonals() {
        use rand::prelude::*;
        let hier = crate::hierarchy::Hierarchy::new();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..40 {
            let n = rng.gen_range(1..=2usize);
            let k = rng.gen_range(1..=4u32);
            let f = PhaseFn::random_ck(n, k, &mut rng);
            let m = f.to_matrix();
            let fast = f.level(6).expect("hierarchy member");
            let slow = hier.level(&m, 6).unwrap();
            assert_eq!(slow.exact(), Some(fast), "phase fn {:?}", f.values());
        }
    }

    #[test]
    fn derivative_matches_matrix_conjugation() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..20 {
            let f = PhaseFn::random_ck(2, 3, &mut rng);
            let u = f.to_matrix();
            for xmask in 1..4usize {
                // Build X^x with the same index-mask convention.
                let mut xq = 0u32;
                for b in 0..2 {
                    if xmask >> (1 - b) & 1 == 1 {
                        xq |= 1 << b;
                    }
                }
                let p = crate::pauli::PauliOp::new(2, xq, 0, 0).unwrap();
                let conj = u.conjugate(&p.to_matrix()).unwrap();
                let deriv_gate = conj.compose(&p.to_matrix().dagger()).unwrap();
                let (g, res) = PhaseFn::from_diagonal(&deriv_gate, 3).unwrap();
                assert!(res < 1e-9);
                assert_eq!(g.values(), f.derivative(xmask).negate().values());
            }
        }
    }

    #[test]
    fn key_pack_roundtrip() {
        let f = pf(3, 3, vec![0, 1, 2, 3, 4, 5, 6, 7]);
        let k = key24(f.values());
        assert_eq!(unkey24(k), f.values());
    }
}
