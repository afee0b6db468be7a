//! Small dense complex unitaries with phase-insensitive comparison and
//! stable fingerprinting for memoization.

use crate::error::{Error, Result};
use ndarray::Array2;
use num::complex::Complex64;

/// Default entry-wise comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default quantization grid for fingerprinting.
pub const DEFAULT_FP_GRID: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct DenseUnitary {
    n: usize,
    m: Array2<Complex64>,
    tol: f64,
}

/// Opaque phase-insensitive hash key (128-bit FNV-1a over the quantized,
/// phase-normalized entry lattice).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint(pub u128);

impl DenseUnitary {
    /// Validating constructor: checks the dimension is 2^n and U·U† = I
    /// entry-wise within `tol`.
    pub fn from_array(n: usize, m: Array2<Complex64>, tol: f64) -> Result<Self> {
        let dim = 1usize << n;
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: m.nrows(),
            });
        }
        let u = DenseUnitary { n, m, tol };
        let dev = u.unitarity_deviation();
        if dev > tol {
            return Err(Error::NotUnitary {
                tol,
                deviation: dev,
            });
        }
        Ok(u)
    }

    pub fn from_array_default_tol(n: usize, m: Array2<Complex64>) -> Result<Self> {
        DenseUnitary::from_array(n, m, DEFAULT_TOL)
    }

    /// For exact constructors whose unitarity is structural.
    pub(crate) fn from_array_unchecked(n: usize, m: Array2<Complex64>) -> Self {
        DenseUnitary {
            n,
            m,
            tol: DEFAULT_TOL,
        }
    }

    pub fn identity(n: usize) -> Self {
        DenseUnitary::from_array_unchecked(n, Array2::eye(1 << n))
    }

    pub fn qubits(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        1 << self.n
    }
    pub fn tol(&self) -> f64 {
        self.tol
    }
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
    pub fn raw(&self) -> &Array2<Complex64> {
        &self.m
    }
    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.m[(r, c)]
    }

    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim();
        let prod = self.m.dot(&self.m.t().mapv(|v| v.conj()));
        let mut dev: f64 = 0.0;
        for r in 0..d {
            for c in 0..d {
                let expect = if r == c { 1.0 } else { 0.0 };
                dev = dev.max((prod[(r, c)] - expect).norm());
            }
        }
        dev
    }

    /// Matrix product `self · other` (other acts first).
    pub fn compose(&self, other: &DenseUnitary) -> Result<DenseUnitary> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(DenseUnitary {
            n: self.n,
            m: self.m.dot(&other.m),
            tol: self.tol.max(other.tol),
        })
    }

    /// Kronecker product; `self` occupies the more significant qubits.
    pub fn tensor(&self, other: &DenseUnitary) -> DenseUnitary {
        DenseUnitary {
            n: self.n + other.n,
            m: ndarray::linalg::kron(&self.m, &other.m),
            tol: self.tol.max(other.tol),
        }
    }

    pub fn dagger(&self) -> DenseUnitary {
        DenseUnitary {
            n: self.n,
            m: self.m.t().mapv(|v| v.conj()),
            tol: self.tol,
        }
    }

    /// `self · m · self†`.
    pub fn conjugate(&self, m: &DenseUnitary) -> Result<DenseUnitary> {
        self.compose(m)?.compose(&self.dagger())
    }

    pub fn scale(&self, c: Complex64) -> DenseUnitary {
        DenseUnitary {
            n: self.n,
            m: self.m.mapv(|v| v * c),
            tol: self.tol,
        }
    }

    pub fn approx_eq(&self, other: &DenseUnitary, tol: f64) -> bool {
        self.n == other.n
            && self
                .m
                .iter()
                .zip(other.m.iter())
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// True iff `self = c · other` for some unit-modulus `c`, entry-wise
    /// within tolerance. `c` is read off the largest-modulus entry of `other`.
    pub fn equal_up_to_global_phase(&self, other: &DenseUnitary) -> bool {
        if self.n != other.n {
            return false;
        }
        let tol = self.tol.max(other.tol);
        let d = self.dim();
        let mut best = 0.0;
        let mut at = (0usize, 0usize);
        for r in 0..d {
            for c in 0..d {
                let v = other.m[(r, c)].norm();
                if v > best {
                    best = v;
                    at = (r, c);
                }
            }
        }
        if best < tol {
            return false;
        }
        let c = self.m[at] / other.m[at];
        if (c.norm() - 1.0).abs() > 100.0 * tol {
            return false;
        }
        self.m
            .iter()
            .zip(other.m.iter())
            .all(|(a, b)| (a - b * c).norm() <= 100.0 * tol)
    }

    pub fn is_diagonal(&self) -> bool {
        let d = self.dim();
        for r in 0..d {
            for c in 0..d {
                if r != c && self.m[(r, c)].norm() > self.tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.m[(i, i)]).collect()
    }

    /// Monomial test: every row and column holds exactly one entry of
    /// modulus ≥ 1 − tol. Returns `(perm, diag)` with `perm[c]` the row of
    /// column `c`'s entry, so that `self = P† · V` where `P†[perm[c], c] = 1`
    /// and `V = diag(d)` with `d[c] = entry(perm[c], c)`.
    pub fn is_monomial(&self) -> Option<(Vec<usize>, Vec<Complex64>)> {
        let d = self.dim();
        let thresh = 1.0 - 1e-6;
        let mut perm = vec![usize::MAX; d];
        let mut diag = vec![Complex64::new(0.0, 0.0); d];
        let mut row_used = vec![false; d];
        for c in 0..d {
            let mut count = 0;
            for r in 0..d {
                let v = self.m[(r, c)].norm();
                if v >= thresh {
                    count += 1;
                    perm[c] = r;
                    diag[c] = self.m[(r, c)];
                } else if v > self.tol {
                    return None;
                }
            }
            if count != 1 || row_used[perm[c]] {
                return None;
            }
            row_used[perm[c]] = true;
        }
        Some((perm, diag))
    }

    /// Phase-normalize: divide by the phase of the largest-modulus entry
    /// (ties broken by lowest row-major index within the fingerprint grid).
    fn phase_normalized(&self, grid: f64) -> Array2<Complex64> {
        let d = self.dim();
        let mut maxmod = 0.0f64;
        for v in self.m.iter() {
            maxmod = maxmod.max(v.norm());
        }
        let mut reference = Complex64::new(1.0, 0.0);
        'outer: for r in 0..d {
            for c in 0..d {
                let v = self.m[(r, c)];
                if v.norm() >= maxmod - grid {
                    reference = v / v.norm();
                    break 'outer;
                }
            }
        }
        self.m.mapv(|v| v / reference)
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.fingerprint_with_grid(DEFAULT_FP_GRID)
    }

    /// Quantize the phase-normalized entries onto `grid` and hash. Matrices
    /// equal up to global phase (entries away from grid boundaries) collide.
    pub fn fingerprint_with_grid(&self, grid: f64) -> Fingerprint {
        let norm = self.phase_normalized(grid);
        let mut h = Fnv128::new();
        h.write_u64(self.n as u64);
        for v in norm.iter() {
            h.write_u64((v.re / grid).round() as i64 as u64);
            h.write_u64((v.im / grid).round() as i64 as u64);
        }
        Fingerprint(h.finish())
    }

    /// Secondary fingerprint with independent mixing, for collision audits.
    pub fn fingerprint_secondary(&self, grid: f64) -> u64 {
        let norm = self.phase_normalized(grid);
        let mut h: u64 = 0xcbf29ce484222325;
        for v in norm.iter() {
            for w in [
                (v.re / grid).round() as i64 as u64,
                (v.im / grid).round() as i64 as u64,
            ] {
                h ^= w.rotate_left(17);
                h = h.wrapping_mul(0x100000001b3).rotate_left(31) ^ 0x9e3779b97f4a7c15;
            }
        }
        h
    }

    /// Raw fingerprint without phase normalization (distinguishes global
    /// phases; used to count exact matrices in group closures).
    pub fn fingerprint_raw(&self, grid: f64) -> u128 {
        let mut h = Fnv128::new();
        h.write_u64(self.n as u64);
        for v in self.m.iter() {
            h.write_u64((v.re / grid).round() as i64 as u64);
            h.write_u64((v.im / grid).round() as i64 as u64);
        }
        h.finish()
    }

    /// Embed a gate acting on `targets` (distinct qubit indices of an
    /// n-qubit register, qubit 0 most significant) into the full register.
    pub fn embed(&self, targets: &[usize], n: usize) -> Result<DenseUnitary> {
        if targets.len() != self.n {
            return Err(Error::DimensionMismatch {
                left: targets.len(),
                right: self.n,
            });
        }
        let mut seen = 0u32;
        for &t in targets {
            if t >= n || seen & (1 << t) != 0 {
                return Err(Error::InvalidParameter(format!(
                    "bad embed target list {targets:?} for n={n}"
                )));
            }
            seen |= 1 << t;
        }
        let dim = 1usize << n;
        let sub = self.n;
        let subdim = 1usize << sub;
        // Position of qubit q in a basis index: bit (n-1-q).
        let extract = |v: usize| -> usize {
            let mut s = 0usize;
            for (j, &q) in targets.iter().enumerate() {
                if v >> (n - 1 - q) & 1 == 1 {
                    s |= 1 << (sub - 1 - j);
                }
            }
            s
        };
        let insert = |v: usize, s: usize| -> usize {
            let mut v = v;
            for (j, &q) in targets.iter().enumerate() {
                let bit = 1usize << (n - 1 - q);
                if s >> (sub - 1 - j) & 1 == 1 {
                    v |= bit;
                } else {
                    v &= !bit;
                }
            }
            v
        };
        let mut m = Array2::zeros((dim, dim));
        for col in 0..dim {
            let sc = extract(col);
            for sr in 0..subdim {
                let row = insert(col, sr);
                m[(row, col)] = self.m[(sr, sc)];
            }
        }
        Ok(DenseUnitary {
            n,
            m,
            tol: self.tol,
        })
    }
}

/// 128-bit FNV-1a, fixed constants, platform-independent.
struct Fnv128 {
    state: u128,
}

impl Fnv128 {
    fn new() -> Self {
        Fnv128 {
            state: 0x6c62272e07bb014262b821756295c58d,
        }
    }
    fn write_u64(&mut self, v: u64) {
        for b in v.to_le_bytes() {
            self.state ^= b as u128;
            self.state = self.state.wrapping_mul(0x0000000001000000000000000000013b);
        }
    }
    fn finish(&self) -> u128 {
        self.state
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::pauli::PauliOp;

    #[test]
    fn conjugate_h_z_gives_x() {
        let h = gates::h();
        let z = PauliOp::from_label("Z").unwrap().to_matrix();
        let x = PauliOp::from_label("X").unwrap().to_matrix();
        assert!(h.conjugate(&z).unwrap().approx_eq(&x, 1e-12));
    }

    #[test]
    fn conjugate_identity_fixed() {
        let u = gates::t();
        let i = DenseUnitary::identity(1);
        assert!(u.conjugate(&i).unwrap().approx_eq(&i, 1e-12));
    }

    #[test]
    fn tensor_matches_pauli_masks() {
        let x = PauliOp::from_label("X").unwrap().to_matrix();
        let z = PauliOp::from_label("Z").unwrap().to_matrix();
        let xz = x.tensor(&z);
        let p = PauliOp::new(2, 0b01, 0b10, 0).unwrap(); // X on qubit 0, Z on qubit 1
        assert!(xz.approx_eq(&p.to_matrix(), 1e-12));
    }

    #[test]
    fn equal_up_to_phase_examples() {
        let h = gates::h();
        let phased = h.scale(Complex64::from_polar(1.0, std::f64::consts::PI / 5.0));
        assert!(phased.equal_up_to_global_phase(&h));
        let x = PauliOp::from_label("X").unwrap().to_matrix();
        let z = PauliOp::from_label("Z").unwrap().to_matrix();
        assert!(!x.equal_up_to_global_phase(&z));
        let s3 = gates::s_k(3).unwrap();
        assert!(s3.scale(Complex64::new(-1.0, 0.0)).equal_up_to_global_phase(&s3));
    }

    #[test]
    fn diagonal_and_monomial_tests() {
        assert!(gates::ccz().is_diagonal());
        let (perm, diag) = gates::toffoli().is_monomial().unwrap();
        // Toffoli swaps |110⟩ and |111⟩ (indices 6, 7).
        let mut expect: Vec<usize> = (0..8).collect();
        expect.swap(6, 7);
        assert_eq!(perm, expect);
        assert!(diag.iter().all(|d| (d - 1.0).norm() < 1e-12));
        assert!(gates::h().is_monomial().is_none());
        assert!(!gates::h().is_diagonal());
    }

    #[test]
    fn monomial_factorization_reconstructs() {
        let u = gates::toffoli().compose(&gates::ccz()).unwrap();
        let (perm, diag) = u.is_monomial().unwrap();
        let d = u.dim();
        let mut m = Array2::zeros((d, d));
        for c in 0..d {
            m[(perm[c], c)] = diag[c];
        }
        assert!(u.approx_eq(&DenseUnitary::from_array_unchecked(3, m), 1e-12));
    }

    #[test]
    fn fingerprint_phase_invariance() {
        let u = gates::w_k(3).unwrap();
        for theta in [0.1, 1.0, 2.5, -0.7] {
            let v = u.scale(Complex64::from_polar(1.0, theta));
            assert_eq!(u.fingerprint(), v.fingerprint());
        }
        let x = PauliOp::from_label("X").unwrap().to_matrix();
        let z = PauliOp::from_label("Z").unwrap().to_matrix();
        assert_ne!(x.fingerprint(), z.fingerprint());
    }

    #[test]
    fn conjugation_is_homomorphism() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let u = crate::sampling::random_clifford(2, &mut rng);
            let m = crate::sampling::random_clifford(2, &mut rng);
            let nmat = crate::sampling::random_clifford(2, &mut rng);
            let lhs = u.conjugate(&m.compose(&nmat).unwrap()).unwrap();
            let rhs = u
                .conjugate(&m)
                .unwrap()
                .compose(&u.conjugate(&nmat).unwrap())
                .unwrap();
            assert!(lhs.approx_eq(&rhs, 100.0 * DEFAULT_TOL));
        }
    }

    #[test]
    fn dagger_commutes_with_conjugation() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let u = crate::sampling::random_clifford(2, &mut rng);
            let m = crate::sampling::random_clifford(2, &mut rng);
            let lhs = u.conjugate(&m).unwrap().dagger();
            let rhs = u.conjugate(&m.dagger()).unwrap();
            assert!(lhs.approx_eq(&rhs, DEFAULT_TOL));
        }
    }

    #[test]
    fn embed_places_gate_on_chosen_qubit() {
        let s = gates::s();
        let embedded = s.embed(&[2], 3).unwrap();
        let expect = DenseUnitary::identity(1)
            .tensor(&DenseUnitary::identity(1))
            .tensor(&s);
        assert!(embedded.approx_eq(&expect, 1e-12));
        // Two-qubit embed with reversed targets = swapped tensor order.
        let cnot = gates::cnot();
        let on_01 = cnot.embed(&[0, 1], 2).unwrap();
        assert!(on_01.approx_eq(&cnot, 1e-12));
        let on_10 = cnot.embed(&[1, 0], 2).unwrap();
        let swap = gates::swap();
        let expect = swap.compose(&cnot).unwrap().compose(&swap).unwrap();
        assert!(on_10.approx_eq(&expect, 1e-12));
    }

    #[test]
    fn non_unitary_rejected() {
        let mut m = Array2::<Complex64>::eye(2);
        m[(0, 0)] = Complex64::new(2.0, 0.0);
        assert!(matches!(
            DenseUnitary::from_array(1, m, DEFAULT_TOL),
            Err(Error::NotUnitary { .. })
        ));
    }
}
