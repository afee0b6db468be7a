//! Constructors for the gate zoo: standard gates, the diagonal rotation
//! families, the Γ families and their eigenvector unitaries, the three-qubit
//! counterexample gates, the Toffoli cascades, and the QFT.
//!
//! All parameterized constructors evaluate angles as exact rational
//! multiples of π before a single trig call, keeping entries far from
//! comparison tolerances.

use crate::error::{Error, Result};
use crate::matrix::DenseUnitary;
use ndarray::{array, Array2};
use num::complex::Complex64;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn x() -> DenseUnitary {
    DenseUnitary::from_array_unchecked(1, array![[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]])
}

pub fn y() -> DenseUnitary {
    DenseUnitary::from_array_unchecked(1, array![[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]])
}

pub fn z() -> DenseUnitary {
    DenseUnitary::from_array_unchecked(1, array![[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]])
}

pub fn h() -> DenseUnitary {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    DenseUnitary::from_array_unchecked(1, array![[c(r, 0.), c(r, 0.)], [c(r, 0.), c(-r, 0.)]])
}

pub fn s() -> DenseUnitary {
    DenseUnitary::from_array_unchecked(1, array![[c(1., 0.), c(0., 0.)], [c(0., 0.), c(0., 1.)]])
}

pub fn sdg() -> DenseUnitary {
    s().dagger()
}

pub fn t() -> DenseUnitary {
    s_k(3).expect("k=3 in range")
}

/// `S_k = diag(1, e^{2πi/2^k})`; `S_1 = Z`, `S_2 = S`, `S_3 = T`.
pub fn s_k(k: u32) -> Result<DenseUnitary> {
    if k == 0 || k > 24 {
        return Err(Error::InvalidParameter(format!("s_k: k={k} out of range")));
    }
    let theta = 2.0 * PI / f64::from(1u32 << k.min(31)) as f64;
    let theta = if k <= 31 { theta } else { 0.0 };
    Ok(DenseUnitary::from_array_unchecked(
        1,
        array![[c(1., 0.), c(0., 0.)], [c(0., 0.), cis(theta)]],
    ))
}

/// QFT rotation naming for the same family: `R_k = diag(1, e^{2πi/2^k})`.
pub fn r_k(k: u32) -> Result<DenseUnitary> {
    s_k(k)
}

/// `Γ_1(φ) = [[0, 1], [e^{iφ}, 0]]`.
pub fn gamma1(phi: f64) -> DenseUnitary {
    DenseUnitary::from_array_unchecked(1, array![[c(0., 0.), c(1., 0.)], [cis(phi), c(0., 0.)]])
}

/// `Γ_2(φ, ξ)`: the traceless Hermitian unitary
/// `[[cos φ, sin φ e^{iξ}], [sin φ e^{-iξ}, -cos φ]]`.
pub fn gamma2(phi: f64, xi: f64) -> DenseUnitary {
    let (sp, cp) = phi.sin_cos();
    DenseUnitary::from_array_unchecked(
        1,
        array![
            [c(cp, 0.), sp * cis(xi)],
            [sp * cis(-xi), c(-cp, 0.)]
        ],
    )
}

/// `V_k = Γ_1(2π/2^k)`; satisfies `S_k · X = V_k`.
pub fn v_k(k: u32) -> Result<DenseUnitary> {
    if k == 0 || k > 24 {
        return Err(Error::InvalidParameter(format!("v_k: k={k} out of range")));
    }
    Ok(gamma1(2.0 * PI / f64::from(1u32 << k) as f64))
}

/// Eigenvector unitary of Γ_1(φ) with a phase `e^{iα}` on the first column.
pub fn u_phi_alpha(phi: f64, alpha: f64) -> DenseUnitary {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let ea = cis(alpha);
    let eh = cis(phi / 2.0);
    DenseUnitary::from_array_unchecked(
        1,
        array![[r * ea, c(r, 0.)], [r * ea * eh, -r * eh]],
    )
}

/// Eigenvector unitary of Γ_2(φ, ξ) with a phase `e^{iβ}` on the first
/// column. Columns are the normalized eigenvectors, so no extra prefactor.
pub fn u_phi_xi_beta(phi: f64, xi: f64, beta: f64) -> DenseUnitary {
    let (sh, ch) = (phi / 2.0).sin_cos();
    let eb = cis(beta);
    DenseUnitary::from_array_unchecked(
        1,
        array![
            [eb * ch, sh * cis(xi)],
            [eb * sh * cis(-xi), c(-ch, 0.)]
        ],
    )
}

pub fn cnot() -> DenseUnitary {
    let mut m = Array2::zeros((4, 4));
    for (r, col) in [(0, 0), (1, 1), (3, 2), (2, 3)] {
        m[(r, col)] = c(1., 0.);
    }
    DenseUnitary::from_array_unchecked(2, m)
}

pub fn cz() -> DenseUnitary {
    let mut m = Array2::eye(4);
    m[(3, 3)] = c(-1., 0.);
    DenseUnitary::from_array_unchecked(2, m)
}

/// Controlled-phase `Λ_1(S) = diag(1, 1, 1, i)`.
pub fn cs() -> DenseUnitary {
    let mut m = Array2::eye(4);
    m[(3, 3)] = c(0., 1.);
    DenseUnitary::from_array_unchecked(2, m)
}

pub fn swap() -> DenseUnitary {
    let mut m = Array2::zeros((4, 4));
    for (r, col) in [(0, 0), (2, 1), (1, 2), (3, 3)] {
        m[(r, col)] = c(1., 0.);
    }
    DenseUnitary::from_array_unchecked(2, m)
}

pub fn ccz() -> DenseUnitary {
    let mut m = Array2::eye(8);
    m[(7, 7)] = c(-1., 0.);
    DenseUnitary::from_array_unchecked(3, m)
}

/// Toffoli with controls on qubits 0, 1 and target on qubit 2.
pub fn toffoli() -> DenseUnitary {
    toffoli_on(0, 1, 2, 3).expect("canonical wiring")
}

/// Toffoli on an n-qubit register with explicit control/target wiring.
pub fn toffoli_on(c1: usize, c2: usize, target: usize, n: usize) -> Result<DenseUnitary> {
    if c1 == c2 || c1 == target || c2 == target || c1 >= n || c2 >= n || target >= n {
        return Err(Error::InvalidParameter(format!(
            "toffoli wiring ({c1},{c2}->{target}) invalid for n={n}"
        )));
    }
    let dim = 1usize << n;
    let b1 = 1usize << (n - 1 - c1);
    let b2 = 1usize << (n - 1 - c2);
    let bt = 1usize << (n - 1 - target);
    let mut m = Array2::zeros((dim, dim));
    for col in 0..dim {
        let row = if col & b1 != 0 && col & b2 != 0 {
            col ^ bt
        } else {
            col
        };
        m[(row, col)] = c(1., 0.);
    }
    Ok(DenseUnitary::from_array_unchecked(n, m))
}

/// `Λ_m(U)`: apply `U` to the trailing qubits iff the first `m` qubits are
/// all `|1⟩`.
pub fn lambda_controlled(m: usize, u: &DenseUnitary) -> Result<DenseUnitary> {
    let q = u.qubits();
    let n = m + q;
    if n > crate::pauli::MAX_QUBITS {
        return Err(Error::CapabilityExceeded {
            what: "controlled-gate qubit count",
            limit: crate::pauli::MAX_QUBITS,
            requested: n,
        });
    }
    let dim = 1usize << n;
    let subdim = 1usize << q;
    let ctrl_mask = ((1usize << m) - 1) << q;
    let mut out = Array2::zeros((dim, dim));
    for col in 0..dim {
        if col & ctrl_mask == ctrl_mask {
            let sc = col & (subdim - 1);
            for sr in 0..subdim {
                out[((col & !(subdim - 1)) | sr, col)] = u.raw()[(sr, sc)];
            }
        } else {
            out[(col, col)] = c(1., 0.);
        }
    }
    Ok(DenseUnitary::from_array_unchecked(n, out))
}

/// `W_k`: Toffoli followed by `V_{3,k} = diag(1, e^{iπ/2^{k-1}})` on the
/// target qubit. As a matrix, `W_k = V̂_{3,k} · Toffoli`.
pub fn w_k(k: u32) -> Result<DenseUnitary> {
    if k < 2 || k > 24 {
        return Err(Error::InvalidParameter(format!("w_k: k={k} out of range")));
    }
    let v = s_k(k)?; // diag(1, e^{2πi/2^k}) = diag(1, e^{iπ/2^{k-1}})
    let v3 = v.embed(&[2], 3)?;
    v3.compose(&toffoli())
}

/// `W_k` with the opposite composition order (Toffoli after the rotation).
pub fn w_k_reversed(k: u32) -> Result<DenseUnitary> {
    let v = s_k(k)?;
    let v3 = v.embed(&[2], 3)?;
    toffoli().compose(&v3)
}

/// Three Toffoli gates in series with targets rotating across the qubits:
/// first (1,2 → 0), then (0,2 → 1), then (0,1 → 2). Conjugating X_0
/// through the cascade peels off a Clifford times the two-Toffoli suffix.
pub fn r_c3() -> DenseUnitary {
    let first = toffoli_on(1, 2, 0, 3).unwrap();
    let second = toffoli_on(0, 2, 1, 3).unwrap();
    let third = toffoli_on(0, 1, 2, 3).unwrap();
    third.compose(&second).unwrap().compose(&first).unwrap()
}

/// The trailing two-Toffoli cascade of the `R_c3` series: first (0,2 → 1),
/// then (0,1 → 2).
pub fn r_c2() -> DenseUnitary {
    let second = toffoli_on(0, 2, 1, 3).unwrap();
    let third = toffoli_on(0, 1, 2, 3).unwrap();
    third.compose(&second).unwrap()
}

/// Exact n-qubit quantum Fourier transform matrix
/// `F[v, y] = ω^{v·y} / √2^n`, `ω = e^{2πi/2^n}`.
pub fn qft(n: usize) -> Result<DenseUnitary> {
    if n == 0 || n > crate::pauli::MAX_QUBITS {
        return Err(Error::CapabilityExceeded {
            what: "qft qubit count",
            limit: crate::pauli::MAX_QUBITS,
            requested: n,
        });
    }
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    let mut m = Array2::zeros((dim, dim));
    for r in 0..dim {
        for col in 0..dim {
            let e = (r * col) % dim;
            m[(r, col)] = cis(2.0 * PI * e as f64 / dim as f64) * scale;
        }
    }
    Ok(DenseUnitary::from_array_unchecked(n, m))
}

/// The j-th block of the QFT circuit (1-based, j = 1..n): Hadamard on the
/// block's first qubit followed by controlled rotations R_2..R_{n-j+1} from
/// each later qubit. Acts on n-j+1 qubits.
pub fn qft_block(n: usize, j: usize) -> Result<DenseUnitary> {
    if j == 0 || j > n {
        return Err(Error::InvalidParameter(format!(
            "qft block {j} out of range for n={n}"
        )));
    }
    let q = n - j + 1;
    let mut u = h().embed(&[0], q)?;
    for (offset, k) in (2..=q as u32).enumerate() {
        let rot = lambda_controlled(1, &r_k(k)?)?; // diag two-qubit gate
        let ctrl = offset + 1;
        let emb = rot.embed(&[ctrl, 0], q)?;
        u = emb.compose(&u)?;
    }
    Ok(u)
}

/// Bit-reversal permutation on n qubits (the final swap network of the
/// textbook QFT circuit).
pub fn bit_reversal(n: usize) -> DenseUnitary {
    let dim = 1usize << n;
    let mut m = Array2::zeros((dim, dim));
    for col in 0..dim {
        let mut r = 0usize;
        for b in 0..n {
            if col >> b & 1 == 1 {
                r |= 1 << (n - 1 - b);
            }
        }
        m[(r, col)] = c(1., 0.);
    }
    DenseUnitary::from_array_unchecked(n, m)
}

/// Search the 24 single-qubit Clifford classes for a decomposition
/// `U ≈ L_1 · S_k · L_2` up to global phase, minimal k first (k ≥ 2).
/// Returns `(l1_index, k, l2_index)` into `clifford::single_qubit_classes`.
pub fn classify_single_qubit(u: &DenseUnitary, k_max: u32) -> Option<(usize, u32, usize)> {
    if u.qubits() != 1 {
        return None;
    }
    let classes = crate::clifford::single_qubit_classes();
    for k in 2..=k_max {
        let sk = s_k(k).ok()?;
        for (i, l1) in classes.iter().enumerate() {
            let left = l1.compose(&sk).ok()?;
            for (j, l2) in classes.iter().enumerate() {
                let cand = left.compose(l2).ok()?;
                if cand.equal_up_to_global_phase(u) {
                    return Some((i, k, j));
                }
            }
        }
    }
    None
}

/// Recognized traceless-unitary normal forms (up to global phase).
#[derive(Debug, Clone, PartialEq)]
pub enum GammaForm {
    Gamma1 { phi: f64 },
    Gamma2 { phi: f64, xi: f64 },
}

/// Match a single-qubit unitary with eigenvalues ±1 (up to an overall
/// phase) against the Γ_1 / Γ_2 normal forms.
pub fn match_gamma(u: &DenseUnitary) -> Option<GammaForm> {
    if u.qubits() != 1 {
        return None;
    }
    let tol = 1e-7;
    let a = u.raw();
    let (d00, d01, d10, d11) = (a[(0, 0)], a[(0, 1)], a[(1, 0)], a[(1, 1)]);
    if d00.norm() < tol && d11.norm() < tol {
        // Anti-diagonal: normalize the top-right entry to 1.
        let phi = (d10 / d01).arg();
        let cand = gamma1(phi);
        if u.equal_up_to_global_phase(&cand) {
            return Some(GammaForm::Gamma1 { phi });
        }
        return None;
    }
    // Γ_2 form: diag entries are ±cos φ with opposite signs; fix the global
    // phase so the top-left entry is real non-negative.
    let phase = if d00.norm() > tol { d00 / d00.norm() } else { return None };
    let b00 = d00 / phase;
    let b01 = d01 / phase;
    let cp = b00.re.clamp(-1.0, 1.0);
    let sp = b01.norm();
    let phi = sp.atan2(cp);
    let xi = b01.arg();
    let cand = gamma2(phi, xi);
    if u.equal_up_to_global_phase(&cand) {
        return Some(GammaForm::Gamma2 { phi, xi });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DEFAULT_TOL;

    #[test]
    fn s_k_specializations() {
        assert!(s_k(2).unwrap().approx_eq(&s(), 1e-15));
        assert!(s_k(3).unwrap().approx_eq(&t(), 1e-15));
        assert!(s_k(1).unwrap().approx_eq(&z(), 1e-12));
    }

    #[test]
    fn v_k_is_s_k_times_x() {
        for k in 1..=6 {
            let lhs = v_k(k).unwrap().compose(&x().dagger()).unwrap();
            assert!(lhs.approx_eq(&s_k(k).unwrap(), 1e-12), "k={k}");
        }
    }

    #[test]
    fn qft_one_qubit_is_hadamard() {
        assert!(qft(1).unwrap().approx_eq(&h(), 1e-12));
    }

    #[test]
    fn qft_is_blocks_times_bit_reversal() {
        for n in 2..=4 {
            let mut u = DenseUnitary::identity(n);
            for j in 1..=n {
                let block = qft_block(n, j).unwrap();
                let targets: Vec<usize> = (j - 1..n).collect();
                let emb = block.embed(&targets, n).unwrap();
                u = emb.compose(&u).unwrap();
            }
            let full = bit_reversal(n).compose(&qft(n).unwrap()).unwrap();
            assert!(u.equal_up_to_global_phase(&full), "n={n}");
        }
    }

    #[test]
    fn lambda_of_r2_is_cs() {
        let built = lambda_controlled(1, &r_k(2).unwrap()).unwrap();
        assert!(built.approx_eq(&cs(), 1e-15));
    }

    #[test]
    fn gamma2_pi4_is_hadamard_and_has_pm1_eigenvalues() {
        let g = gamma2(PI / 4.0, 0.0);
        assert!(g.approx_eq(&h(), 1e-12));
        // Hermitian traceless unitary: eigenvalues are exactly ±1.
        let m = g.raw();
        let tr = m[(0, 0)] + m[(1, 1)];
        assert!(tr.norm() < 1e-12);
        assert!(g.approx_eq(&g.dagger(), 1e-12));
    }

    #[test]
    fn u_phi_alpha_identity() {
        for phi in [PI / 3.0, PI / 7.0, 1.2345] {
            let lhs = u_phi_alpha(phi, 0.0).compose(&h()).unwrap().compose(&x()).unwrap();
            assert!(lhs.approx_eq(&gamma1(phi / 2.0), 1e-12), "phi={phi}");
        }
    }

    #[test]
    fn u_matrices_diagonalize_their_gammas() {
        for (phi, xi, alpha) in [(0.3, 0.0, 0.0), (1.1, 0.4, 0.9), (PI / 8.0, 1.3, 2.0)] {
            // Columns of U are the ± eigenvectors, so U Z U† is the
            // spectral difference: Γ_1 up to phase, Γ_2 exactly.
            let u = u_phi_alpha(phi, alpha);
            let g = u.conjugate(&z()).unwrap();
            assert!(g.equal_up_to_global_phase(&gamma1(phi)));
            let u2 = u_phi_xi_beta(phi, xi, alpha);
            let g2 = u2.conjugate(&z()).unwrap();
            assert!(g2.approx_eq(&gamma2(phi, xi), 1e-12));
        }
    }

    #[test]
    fn gamma2_phase_sandwich_recovers_s_k() {
        // S† · Γ_2(φ, 0) · S† = exp(-iφX), so the Hadamard sandwich turns
        // the Γ_2 family into the diagonal rotation family:
        // H · S† · Γ_2(π/2^k, 0) · S† · H ~ S_k.
        for k in 2..=6u32 {
            let g = gamma2(PI / f64::from(1u32 << k), 0.0);
            let m = h()
                .compose(&sdg())
                .unwrap()
                .compose(&g)
                .unwrap()
                .compose(&sdg())
                .unwrap()
                .compose(&h())
                .unwrap();
            assert!(m.equal_up_to_global_phase(&s_k(k).unwrap()), "k={k}");
            // Entry-wise agreement after dividing out the global phase.
            let sk = s_k(k).unwrap();
            let c = m.entry(0, 0) / sk.entry(0, 0);
            assert!(m.approx_eq(&sk.scale(c), 1e-9), "k={k}");
        }
    }

    #[test]
    fn w_k_structure() {
        let w2 = w_k(2).unwrap();
        let expect = s().embed(&[2], 3).unwrap().compose(&toffoli()).unwrap();
        assert!(w2.approx_eq(&expect, 1e-12));
        for k in [3u32, 4] {
            let w = w_k(k).unwrap();
            assert!(w.unitarity_deviation() < DEFAULT_TOL);
        }
    }

    #[test]
    fn r_c3_is_a_permutation_with_pinned_action() {
        let r = r_c3();
        let (perm, diag) = r.is_monomial().expect("classical reversible");
        assert!(diag.iter().all(|d| (d - 1.0).norm() < 1e-12));
        let expect = permutation_oracle();
        assert_eq!(perm, expect);
    }

    /// Independent oracle for the three-Toffoli cascade: apply the bit
    /// updates in circuit order (target 0 first, then 1, then 2) to each
    /// basis state.
    fn permutation_oracle() -> Vec<usize> {
        let mut perm = vec![0usize; 8];
        for v in 0..8usize {
            let (mut b0, mut b1, mut b2) = (v >> 2 & 1, v >> 1 & 1, v & 1);
            b0 ^= b1 & b2;
            b1 ^= b0 & b2;
            b2 ^= b0 & b1;
            perm[v] = b0 << 2 | b1 << 1 | b2;
        }
        perm
    }

    #[test]
    fn classify_single_qubit_examples() {
        let (l1, k, l2) = classify_single_qubit(&t(), 6).unwrap();
        assert_eq!((l1, k, l2), (0, 3, 0));
        let (_, k, _) = classify_single_qubit(&v_k(4).unwrap(), 6).unwrap();
        assert_eq!(k, 4);
        let odd = DenseUnitary::from_array_unchecked(
            1,
            array![[c(1., 0.), c(0., 0.)], [c(0., 0.), cis(PI / 5.0)]],
        );
        assert!(classify_single_qubit(&odd, 10).is_none());
    }

    #[test]
    fn match_gamma_recovers_parameters() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            // Random traceless Hermitian unitary: n̂·σ.
            let zc: f64 = rng.gen_range(-1.0..1.0);
            let theta: f64 = rng.gen_range(0.0..2.0 * PI);
            let sp = (1.0 - zc * zc).sqrt();
            let m = array![
                [c(zc, 0.), sp * cis(theta)],
                [sp * cis(-theta), c(-zc, 0.)]
            ];
            let u = DenseUnitary::from_array(1, m, DEFAULT_TOL).unwrap();
            match match_gamma(&u) {
                Some(GammaForm::Gamma2 { phi, xi }) => {
                    assert!(u.equal_up_to_global_phase(&gamma2(phi, xi)));
                }
                Some(GammaForm::Gamma1 { phi }) => {
                    assert!(u.equal_up_to_global_phase(&gamma1(phi)));
                }
                None => panic!("traceless Hermitian unitary must match a Γ form"),
            }
        }
        // Γ_1 instances match the Γ_1 arm.
        for phi in [0.3, 1.7, PI / 2.0] {
            assert!(matches!(
                match_gamma(&gamma1(phi)),
                Some(GammaForm::Gamma1 { .. })
            ));
        }
    }
}
