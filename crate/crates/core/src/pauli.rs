//! Exact n-qubit Pauli group arithmetic in binary-symplectic form.
//!
//! A Pauli operator is stored as two qubit bitmasks plus a phase exponent
//! mod 4: `P = i^phase · X^x Z^z`. Qubit 0 is the leftmost (most
//! significant) tensor factor. All algebra in this module is exact integer
//! arithmetic; matrices built from it have entries in `{0, ±1, ±i}`.

use crate::error::{Error, Result};
use crate::matrix::DenseUnitary;
use ndarray::Array2;
use num::complex::Complex64;

pub const MAX_QUBITS: usize = 6;

/// Maximum qubit count for exhaustive subgroup enumeration.
pub const MAX_SUBGROUP_QUBITS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliOp {
    n: usize,
    x: u32,
    z: u32,
    phase: u8,
}

impl PauliOp {
    pub fn new(n: usize, x: u32, z: u32, phase: u8) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::CapabilityExceeded {
                what: "PauliOp qubit count",
                limit: MAX_QUBITS,
                requested: n,
            });
        }
        let mask = (1u32 << n) - 1;
        if x & !mask != 0 || z & !mask != 0 {
            return Err(Error::InvalidParameter(format!(
                "x/z masks out of range for n={n}"
            )));
        }
        Ok(PauliOp {
            n,
            x,
            z,
            phase: phase % 4,
        })
    }

    pub fn identity(n: usize) -> Self {
        PauliOp::new(n, 0, 0, 0).expect("identity within capability")
    }

    /// Single-qubit X/Y/Z placed on `qubit` of an `n`-qubit register.
    /// Y is represented exactly as `i·XZ`.
    pub fn single(n: usize, qubit: usize, kind: char) -> Result<Self> {
        if qubit >= n {
            return Err(Error::InvalidParameter(format!(
                "qubit {qubit} out of range for n={n}"
            )));
        }
        let bit = 1u32 << qubit;
        match kind {
            'X' => PauliOp::new(n, bit, 0, 0),
            'Z' => PauliOp::new(n, 0, bit, 0),
            'Y' => PauliOp::new(n, bit, bit, 1),
            'I' => Ok(PauliOp::identity(n)),
            _ => Err(Error::InvalidParameter(format!("unknown Pauli '{kind}'"))),
        }
    }

    /// Parse a label like `"XZI"` (qubit 0 first). Y carries its `i` factor.
    pub fn from_label(label: &str) -> Result<Self> {
        let n = label.len();
        let mut p = PauliOp::identity(if n == 0 { 1 } else { n });
        if n == 0 {
            return Ok(p);
        }
        p = PauliOp::new(n, 0, 0, 0)?;
        for (j, ch) in label.chars().enumerate() {
            let s = PauliOp::single(n, j, ch)?;
            p = p.mul(&s)?;
        }
        Ok(p)
    }

    pub fn qubits(&self) -> usize {
        self.n
    }
    pub fn x_bits(&self) -> u32 {
        self.x
    }
    pub fn z_bits(&self) -> u32 {
        self.z
    }
    pub fn phase_exponent(&self) -> u8 {
        self.phase
    }
    pub fn is_identity_class(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Symplectic vector (x | z) as a 2n-bit integer, x in the high bits.
    pub fn symplectic_bits(&self) -> u64 {
        ((self.x as u64) << self.n) | self.z as u64
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        PauliOp {
            phase: phase % 4,
            ..*self
        }
    }

    /// Exact product: `to_matrix(self) · to_matrix(other)`.
    pub fn mul(&self, other: &PauliOp) -> Result<PauliOp> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        // Z^z1 X^x2 = (-1)^{z1·x2} X^x2 Z^z1
        let anti = (self.z & other.x).count_ones() as u8;
        Ok(PauliOp {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + 2 * (anti & 1)) % 4,
        })
    }

    pub fn dagger(&self) -> PauliOp {
        // (i^m X^x Z^z)† = (-i)^m Z^z X^x = (-i)^m (-1)^{x·z} X^x Z^z
        let overlap = (self.x & self.z).count_ones() as u8;
        PauliOp {
            phase: (4 - self.phase + 2 * (overlap & 1)) % 4,
            ..*self
        }
    }

    pub fn commutes_with(&self, other: &PauliOp) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let form =
            (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        Ok(form % 2 == 0)
    }

    /// Phase exponent of the Hermitian representative of this (x, z) class:
    /// `i^{x·z} X^x Z^z` is Hermitian.
    pub fn hermitian_phase(x: u32, z: u32) -> u8 {
        ((x & z).count_ones() % 4) as u8
    }

    /// The Hermitian representative of the (x, z) class.
    pub fn hermitian(n: usize, x: u32, z: u32) -> Result<PauliOp> {
        PauliOp::new(n, x, z, PauliOp::hermitian_phase(x, z))
    }

    /// Map a qubit mask (bit j = qubit j) to a basis-index mask
    /// (qubit 0 occupies the most significant index bit).
    fn index_mask(&self, m: u32) -> usize {
        let mut out = 0usize;
        for j in 0..self.n {
            if m & (1 << j) != 0 {
                out |= 1 << (self.n - 1 - j);
            }
        }
        out
    }

    /// Exact dense matrix, entries in `{0, ±1, ±i}`.
    pub fn to_matrix(&self) -> DenseUnitary {
        let dim = 1usize << self.n;
        let xm = self.index_mask(self.x);
        let zm = self.index_mask(self.z);
        let phase = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, -1.0),
        ][self.phase as usize];
        let mut m = Array2::zeros((dim, dim));
        for col in 0..dim {
            let sign = if ((zm & col).count_ones()) % 2 == 0 {
                1.0
            } else {
                -1.0
            };
            m[(col ^ xm, col)] = phase * sign;
        }
        DenseUnitary::from_array_unchecked(self.n, m)
    }

    /// Label like `+XZI` / `-iY..` naming the operator including phase.
    pub fn label(&self) -> String {
        // Factor out Y's internal i: count overlap.
        let overlap = (self.x & self.z).count_ones() as u8;
        let lead = (self.phase + 4 - overlap % 4) % 4;
        let mut s = String::from(match lead {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        });
        for j in 0..self.n {
            let xb = self.x >> j & 1;
            let zb = self.z >> j & 1;
            s.push(match (xb, zb) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (0, 1) => 'Z',
                _ => 'Y',
            });
        }
        s
    }
}

impl std::fmt::Display for PauliOp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// All 4^n phase-free Pauli classes (phase exponent 0).
pub fn enumerate_mod_phase(n: usize) -> impl Iterator<Item = PauliOp> {
    let dim = 1u32 << n;
    (0..dim).flat_map(move |x| {
        (0..dim).map(move |z| PauliOp {
            n,
            x,
            z,
            phase: 0,
        })
    })
}

/// Recognize a matrix proportional to a Pauli operator.
///
/// Returns `(P, c)` with `M = c · to_matrix(P)` entry-wise within the
/// matrix tolerance, `|c| = 1`; the phase exponent of `P` absorbs any
/// factor of `i^s` so the residual `c` is near 1 whenever `M` is an exact
/// phase multiple of a Pauli.
pub fn from_matrix(m: &DenseUnitary) -> Option<(PauliOp, Complex64)> {
    let n = m.qubits();
    let dim = 1usize << n;
    let tol = m.tol();
    let a = m.raw();

    // Column 0 determines the X part.
    let mut xm_idx = 0usize;
    let mut best = 0.0f64;
    for r in 0..dim {
        let v = a[(r, 0)].norm();
        if v > best {
            best = v;
            xm_idx = r;
        }
    }
    if best < 0.5 {
        return None;
    }
    let c0 = a[(xm_idx, 0)];

    // Z part from single-qubit columns.
    let mut zm_idx = 0usize;
    for j in 0..n {
        let col = 1usize << (n - 1 - j);
        let e = a[(col ^ xm_idx, col)];
        let ratio = e / c0;
        if (ratio - 1.0).norm() <= 0.5 {
            // z_j = 0
        } else if (ratio + 1.0).norm() <= 0.5 {
            zm_idx |= col;
        } else {
            return None;
        }
    }

    // Verify every entry.
    for col in 0..dim {
        let sign = if (zm_idx & col).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        for row in 0..dim {
            let expect = if row == col ^ xm_idx {
                c0 * sign
            } else {
                Complex64::new(0.0, 0.0)
            };
            if (a[(row, col)] - expect).norm() > tol {
                return None;
            }
        }
    }

    // Back from index masks to qubit masks.
    let mut x = 0u32;
    let mut z = 0u32;
    for j in 0..n {
        let bit = 1usize << (n - 1 - j);
        if xm_idx & bit != 0 {
            x |= 1 << j;
        }
        if zm_idx & bit != 0 {
            z |= 1 << j;
        }
    }

    // Snap the scalar onto i^s when it is one.
    let i = Complex64::new(0.0, 1.0);
    for s in 0u8..4 {
        let isval = i.powu(s as u32);
        if (c0 - isval).norm() <= tol {
            let p = PauliOp { n, x, z, phase: s };
            return Some((p, c0 / isval));
        }
    }
    Some((PauliOp { n, x, z, phase: 0 }, c0))
}

/// Express a matrix as `sign · i^{x·z} X^x Z^z` (a signed Hermitian Pauli).
pub fn as_signed_hermitian(m: &DenseUnitary) -> Option<(u32, u32, i8)> {
    let (p, c) = from_matrix(m)?;
    let herm = PauliOp::hermitian_phase(p.x, p.z);
    let i = Complex64::new(0.0, 1.0);
    let tau = c * i.powu((4 + p.phase - herm) as u32 % 4);
    if (tau - 1.0).norm() <= 100.0 * m.tol() {
        Some((p.x, p.z, 1))
    } else if (tau + 1.0).norm() <= 100.0 * m.tol() {
        Some((p.x, p.z, -1))
    } else {
        None
    }
}

/// A subgroup of the Pauli group mod phase, given by independent generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliSubgroup {
    n: usize,
    gens: Vec<PauliOp>,
}

impl PauliSubgroup {
    pub fn new(n: usize, gens: Vec<PauliOp>) -> Result<Self> {
        for g in &gens {
            if g.qubits() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: g.qubits(),
                });
            }
        }
        let vecs: Vec<u64> = gens.iter().map(|g| g.symplectic_bits()).collect();
        let rank = gf2_rank(&vecs);
        if rank != gens.len() {
            return Err(Error::RankMismatch {
                expected: gens.len(),
                got: rank,
            });
        }
        let gens = gens.into_iter().map(|g| g.with_phase(0)).collect();
        Ok(PauliSubgroup { n, gens })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }
    pub fn generators(&self) -> &[PauliOp] {
        &self.gens
    }
    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn is_abelian(&self) -> bool {
        for (i, a) in self.gens.iter().enumerate() {
            for b in self.gens.iter().skip(i + 1) {
                if !a.commutes_with(b).unwrap_or(false) {
                    return false;
                }
            }
        }
        true
    }

    pub fn check_abelian(&self) -> Result<()> {
        for (i, a) in self.gens.iter().enumerate() {
            for (dj, b) in self.gens.iter().enumerate().skip(i + 1) {
                if !a.commutes_with(b)? {
                    return Err(Error::NonAbelian { i, j: dj });
                }
            }
        }
        Ok(())
    }

    /// The standard Z subgroup ⟨Z_0 .. Z_{n-1}⟩.
    pub fn z_subgroup(n: usize) -> Self {
        let gens = (0..n)
            .map(|q| PauliOp::single(n, q, 'Z').expect("in range"))
            .collect();
        PauliSubgroup { n, gens }
    }

    /// The standard X subgroup ⟨X_0 .. X_{n-1}⟩.
    pub fn x_subgroup(n: usize) -> Self {
        let gens = (0..n)
            .map(|q| PauliOp::single(n, q, 'X').expect("in range"))
            .collect();
        PauliSubgroup { n, gens }
    }

    /// All 2^rank elements mod phase (phase-0 representatives).
    pub fn elements(&self) -> Vec<PauliOp> {
        let r = self.gens.len();
        (0..(1usize << r))
            .map(|word| {
                let mut x = 0u32;
                let mut z = 0u32;
                for (i, g) in self.gens.iter().enumerate() {
                    if word >> i & 1 == 1 {
                        x ^= g.x_bits();
                        z ^= g.z_bits();
                    }
                }
                PauliOp {
                    n: self.n,
                    x,
                    z,
                    phase: 0,
                }
            })
            .collect()
    }

    /// Canonical GF(2) reduced-row-echelon basis, rows sorted descending.
    pub fn canonical_basis(&self) -> Vec<u64> {
        let vecs: Vec<u64> = self.gens.iter().map(|g| g.symplectic_bits()).collect();
        gf2_rref(&vecs)
    }

    /// Two subgroups are the same subgroup iff their row spans coincide.
    pub fn same_span(&self, other: &PauliSubgroup) -> bool {
        self.n == other.n && self.canonical_basis() == other.canonical_basis()
    }
}

fn gf2_rank(vecs: &[u64]) -> usize {
    gf2_rref(vecs).len()
}

/// Reduced row echelon form over GF(2); returns pivot rows sorted descending.
pub(crate) fn gf2_rref(vecs: &[u64]) -> Vec<u64> {
    let mut rows: Vec<u64> = Vec::new();
    for &v in vecs {
        let mut v = v;
        for &r in &rows {
            let lead = 63 - r.leading_zeros() as usize;
            if v >> lead & 1 == 1 {
                v ^= r;
            }
        }
        if v != 0 {
            // Back-substitute to keep reduced form.
            let lead = 63 - v.leading_zeros() as usize;
            for r in rows.iter_mut() {
                if *r >> lead & 1 == 1 {
                    *r ^= v;
                }
            }
            rows.push(v);
        }
    }
    rows.sort_unstable_by(|a, b| b.cmp(a));
    rows
}

fn symplectic_orthogonal(n: usize, a: u64, b: u64) -> bool {
    let ax = a >> n;
    let az = a & ((1 << n) - 1);
    let bx = b >> n;
    let bz = b & ((1 << n) - 1);
    ((ax & bz).count_ones() + (az & bx).count_ones()) % 2 == 0
}

/// All maximal abelian subgroups of the n-qubit Pauli group mod phase,
/// i.e. all rank-n isotropic subspaces of GF(2)^{2n}. Deterministic order
/// with ⟨Z_0..Z_{n-1}⟩ first.
pub fn maximal_abelian_subgroups(n: usize) -> Result<Vec<PauliSubgroup>> {
    if n == 0 || n > MAX_SUBGROUP_QUBITS {
        return Err(Error::CapabilityExceeded {
            what: "maximal abelian subgroup enumeration",
            limit: MAX_SUBGROUP_QUBITS,
            requested: n,
        });
    }
    let total = 1u64 << (2 * n);
    let mut seen: std::collections::HashSet<Vec<u64>> = std::collections::HashSet::new();
    let mut out: Vec<(Vec<u64>, PauliSubgroup)> = Vec::new();

    // Grow isotropic independent sets one vector at a time.
    fn extend(
        n: usize,
        total: u64,
        chosen: &mut Vec<u64>,
        seen: &mut std::collections::HashSet<Vec<u64>>,
        out: &mut Vec<(Vec<u64>, PauliSubgroup)>,
    ) {
        if chosen.len() == n {
            let basis = gf2_rref(chosen);
            if seen.insert(basis.clone()) {
                let gens = basis
                    .iter()
                    .map(|&v| {
                        let x = (v >> n) as u32;
                        let z = (v & ((1 << n) - 1)) as u32;
                        PauliOp::new(n, x, z, 0).expect("mask in range")
                    })
                    .collect();
                let sg = PauliSubgroup { n, gens };
                out.push((basis, sg));
            }
            return;
        }
        let start = chosen.last().map_or(1, |&v| v + 1);
        for v in start..total {
            if chosen
                .iter()
                .all(|&c| symplectic_orthogonal(n, c, v))
                && gf2_rank(
                    &chosen
                        .iter()
                        .copied()
                        .chain(std::iter::once(v))
                        .collect::<Vec<_>>(),
                ) == chosen.len() + 1
            {
                chosen.push(v);
                extend(n, total, chosen, seen, out);
                chosen.pop();
            }
        }
    }
    let mut chosen = Vec::new();
    extend(n, total, &mut chosen, &mut seen, &mut out);
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out.into_iter().map(|(_, sg)| sg).collect())
}
