//! Hierarchy classification and the semi-Clifford machinery.
//!
//! The level test is the recursive definition itself: U is level k iff every
//! conjugated Pauli lands one level lower, with Pauli/Clifford closed forms
//! at the bottom. Generators do not suffice for k ≥ 3 (the hierarchy is not
//! a group there), so the recursion runs over all 4^n phase-free Paulis and
//! memoizes on phase-normalized fingerprints.

use crate::clifford::{self, CliffordSynthesis, SignedPauli};
use crate::error::{Error, Result};
use crate::matrix::{DenseUnitary, DEFAULT_FP_GRID, DEFAULT_TOL};
use crate::pauli::{self, PauliOp, PauliSubgroup};
use crate::phase_fn::PhaseFn;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::Serialize;
use std::collections::HashMap;
use std::sync::OnceLock;
use std::sync::RwLock;

pub const MAX_LEVEL_QUBITS: usize = 3;
pub const MAX_KMAX: u32 = 10;

/// Outcome of level classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HierarchyLevel {
    Exact(u32),
    Beyond(u32),
}

impl HierarchyLevel {
    pub fn exact(&self) -> Option<u32> {
        match self {
            HierarchyLevel::Exact(k) => Some(*k),
            HierarchyLevel::Beyond(_) => None,
        }
    }
    pub fn is_beyond(&self) -> bool {
        matches!(self, HierarchyLevel::Beyond(_))
    }
}

impl std::fmt::Display for HierarchyLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HierarchyLevel::Exact(k) => write!(f, "{k}"),
            HierarchyLevel::Beyond(k) => write!(f, "beyond({k})"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum MemoEntry {
    Exact(u32),
    Above(u32),
}

/// Shared classifier with a fingerprint-keyed memo table.
pub struct Hierarchy {
    tol: f64,
    grid: f64,
    memo: RwLock<HashMap<u128, MemoEntry>>,
}

impl Default for Hierarchy {
    fn default() -> Self {
        Self::new()
    }
}

fn pauli_matrices(n: usize) -> &'static [(PauliOp, DenseUnitary)] {
    static CACHE: OnceLock<Vec<Vec<(PauliOp, DenseUnitary)>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        (1..=MAX_LEVEL_QUBITS)
            .map(|n| {
                pauli::enumerate_mod_phase(n)
                    .map(|p| {
                        let m = p.to_matrix();
                        (p, m)
                    })
                    .collect()
            })
            .collect()
    });
    &all[n - 1]
}

fn subgroups(n: usize) -> &'static [PauliSubgroup] {
    static CACHE: OnceLock<Vec<Vec<PauliSubgroup>>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        (1..=MAX_LEVEL_QUBITS)
            .map(|n| pauli::maximal_abelian_subgroups(n).expect("n in range"))
            .collect()
    });
    &all[n - 1]
}

impl Hierarchy {
    pub fn new() -> Self {
        Hierarchy {
            tol: DEFAULT_TOL,
            grid: DEFAULT_FP_GRID,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_settings(tol: f64, grid: f64) -> Self {
        Hierarchy {
            tol,
            grid,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().expect("memo lock").len()
    }

    fn check_input(&self, u: &DenseUnitary) -> Result<()> {
        if u.qubits() > MAX_LEVEL_QUBITS {
            return Err(Error::CapabilityExceeded {
                what: "hierarchy classification",
                limit: MAX_LEVEL_QUBITS,
                requested: u.qubits(),
            });
        }
        Ok(())
    }

    /// Minimal k ≤ k_max with U ∈ C_k, or Beyond(k_max).
    pub fn level(&self, u: &DenseUnitary, k_max: u32) -> Result<HierarchyLevel> {
        self.check_input(u)?;
        if !(2..=MAX_KMAX).contains(&k_max) {
            return Err(Error::InvalidParameter(format!(
                "k_max {k_max} outside 2..={MAX_KMAX}"
            )));
        }
        Ok(match self.level_capped(u, k_max) {
            Some(k) => HierarchyLevel::Exact(k),
            None => HierarchyLevel::Beyond(k_max),
        })
    }

    /// Boolean C_k membership.
    pub fn is_in_ck(&self, u: &DenseUnitary, k: u32) -> Result<bool> {
        self.check_input(u)?;
        Ok(self.level_capped(u, k).is_some())
    }

    fn level_capped(&self, u: &DenseUnitary, cap: u32) -> Option<u32> {
        let fp = u.fingerprint_with_grid(self.grid).0;
        {
            let memo = self.memo.read().expect("memo lock");
            match memo.get(&fp) {
                Some(MemoEntry::Exact(k)) => return (*k <= cap).then_some(*k),
                Some(MemoEntry::Above(c)) if *c >= cap => return None,
                _ => {}
            }
        }
        let result = self.level_compute(u, cap);
        let mut memo = self.memo.write().expect("memo lock");
        match result {
            Some(k) => {
                memo.insert(fp, MemoEntry::Exact(k));
            }
            None => match memo.get(&fp) {
                Some(MemoEntry::Exact(_)) => {}
                Some(MemoEntry::Above(c)) if *c >= cap => {}
                _ => {
                    memo.insert(fp, MemoEntry::Above(cap));
                }
            },
        }
        result
    }

    fn level_compute(&self, u: &DenseUnitary, cap: u32) -> Option<u32> {
        if pauli::from_matrix(u).is_some() {
            return (cap >= 1).then_some(1);
        }
        if cap < 2 {
            return None;
        }
        if clifford::is_clifford(u).is_some() {
            return Some(2);
        }
        if cap == 2 {
            return None;
        }
        let n = u.qubits();
        let mut deepest = 2u32;
        for (p, pm) in pauli_matrices(n) {
            if p.is_identity_class() {
                continue;
            }
            let child = u.conjugate(pm).expect("same register");
            let child_level = self.level_capped(&child, cap - 1)?;
            deepest = deepest.max(child_level);
        }
        Some(deepest + 1)
    }

    /// Search for a maximal abelian subgroup sent to Pauli operators.
    ///
    /// Computes B = {phase-free P : U P U† is proportional to a Pauli} and
    /// looks for a maximal abelian subgroup whose full 2^n-element closure
    /// lies in B with abelian independent images.
    pub fn is_semi_clifford(&self, u: &DenseUnitary) -> Result<Option<SemiCliffordWitness>> {
        self.check_input(u)?;
        let n = u.qubits();
        let mut image: HashMap<(u32, u32), SignedPauli> = HashMap::new();
        for p in pauli::enumerate_mod_phase(n) {
            let herm = PauliOp::hermitian(n, p.x_bits(), p.z_bits()).expect("valid");
            let conj = u.conjugate(&herm.to_matrix()).expect("same register");
            if let Some((x, z, sign)) = pauli::as_signed_hermitian(&conj) {
                image.insert((p.x_bits(), p.z_bits()), SignedPauli::new(x, z, sign));
            }
        }
        'outer: for sg in subgroups(n) {
            for e in sg.elements() {
                if !image.contains_key(&(e.x_bits(), e.z_bits())) {
                    continue 'outer;
                }
            }
            let images: Vec<SignedPauli> = sg
                .generators()
                .iter()
                .map(|g| image[&(g.x_bits(), g.z_bits())])
                .collect();
            // Conjugation preserves independence and commutation; verify.
            let vecs: Vec<u64> = images.iter().map(|s| s.symplectic_bits(n)).collect();
            if pauli::gf2_rref(&vecs).len() != n {
                continue;
            }
            let img_group = PauliSubgroup::new(
                n,
                images.iter().map(|s| s.to_pauli(n).with_phase(0)).collect(),
            );
            match img_group {
                Ok(g) if g.is_abelian() => {
                    return Ok(Some(SemiCliffordWitness {
                        source: sg.clone(),
                        image: g,
                        images,
                    }))
                }
                _ => continue,
            }
        }
        Ok(None)
    }

    /// Build the Clifford sandwich that diagonalizes a semi-Clifford gate:
    /// L_2 maps ⟨Z_i⟩ onto the witness subgroup, L_1 maps the observed
    /// images back onto ⟨Z_i⟩, and V = L_1 · U · L_2 commutes with every
    /// Z_i, hence is diagonal.
    pub fn semi_clifford_diagonalize(
        &self,
        u: &DenseUnitary,
        witness: &SemiCliffordWitness,
    ) -> Result<Diagonalization> {
        let n = u.qubits();
        // Validate the witness against U.
        for (g, expect) in witness.source.generators().iter().zip(&witness.images) {
            let herm = PauliOp::hermitian(n, g.x_bits(), g.z_bits())?;
            let conj = u.conjugate(&herm.to_matrix())?;
            match pauli::as_signed_hermitian(&conj) {
                Some((x, z, sign))
                    if x == expect.x && z == expect.z && sign == expect.sign => {}
                _ => {
                    return Err(Error::InconsistentWitness(format!(
                        "image of {} does not match witness",
                        g.label()
                    )))
                }
            }
        }
        let z_basis: Vec<SignedPauli> =
            (0..n).map(|q| SignedPauli::new(0, 1 << q, 1)).collect();
        let src_plus: Vec<SignedPauli> = witness
            .source
            .generators()
            .iter()
            .map(|g| SignedPauli::new(g.x_bits(), g.z_bits(), 1))
            .collect();
        let l2 = clifford::clifford_mapping(n, &z_basis, &src_plus)?;
        let l1 = clifford::clifford_mapping(n, &witness.images, &z_basis)?;
        let v = l1.unitary.compose(u)?.compose(&l2.unitary)?;
        if !v.is_diagonal() {
            return Err(Error::InconsistentWitness(
                "sandwich did not diagonalize".into(),
            ));
        }
        Ok(Diagonalization { l1, v, l2 })
    }

    /// Generalized semi-Clifford test: for each maximal abelian subgroup,
    /// build its common eigenbasis, push it through U, and collect the
    /// Paulis diagonal in the image basis; succeed when they contain a
    /// maximal abelian subgroup.
    pub fn is_generalized_semi_clifford(
        &self,
        u: &DenseUnitary,
    ) -> Result<Option<GeneralizedWitness>> {
        self.check_input(u)?;
        let n = u.qubits();
        let dim = 1usize << n;
        for sg in subgroups(n) {
            // Common eigenbasis via projector products.
            let mut states: Vec<Vec<num::complex::Complex64>> = Vec::with_capacity(dim);
            let mut ok = true;
            for pattern in 0..dim {
                let mut proj = ndarray::Array2::<num::complex::Complex64>::eye(dim);
                for (i, g) in sg.generators().iter().enumerate() {
                    let herm = PauliOp::hermitian(n, g.x_bits(), g.z_bits())
                        .expect("valid masks");
                    let gm = herm
                        .to_matrix()
                        .raw()
                        .mapv(|v| {
                            if pattern >> i & 1 == 1 {
                                -v
                            } else {
                                v
                            }
                        });
                    let half = (ndarray::Array2::eye(dim) + gm) / 2.0;
                    proj = proj.dot(&half);
                }
                // Rank-1 projector: take its largest column.
                let mut best = (0usize, 0.0f64);
                for c in 0..dim {
                    let norm: f64 = (0..dim).map(|r| proj[(r, c)].norm_sqr()).sum();
                    if norm > best.1 {
                        best = (c, norm);
                    }
                }
                if best.1 < 1e-6 {
                    ok = false;
                    break;
                }
                let scale = best.1.sqrt();
                states.push((0..dim).map(|r| proj[(r, best.0)] / scale).collect());
            }
            if !ok {
                continue;
            }
            // Push through U.
            let imgs: Vec<Vec<num::complex::Complex64>> = states
                .iter()
                .map(|s| {
                    (0..dim)
                        .map(|r| (0..dim).map(|c| u.entry(r, c) * s[c]).sum())
                        .collect()
                })
                .collect();
            // Paulis diagonal in the image basis.
            let mut diag_set: std::collections::HashSet<(u32, u32)> =
                std::collections::HashSet::new();
            for (p, pm) in pauli_matrices(n) {
                let mut diagonal = true;
                'pairs: for a in 0..dim {
                    let qa: Vec<num::complex::Complex64> = (0..dim)
                        .map(|r| (0..dim).map(|c| pm.entry(r, c) * imgs[a][c]).sum())
                        .collect();
                    for b in 0..dim {
                        if a == b {
                            continue;
                        }
                        let inner: num::complex::Complex64 = (0..dim)
                            .map(|r| imgs[b][r].conj() * qa[r])
                            .sum();
                        if inner.norm() > 1e-7 {
                            diagonal = false;
                            break 'pairs;
                        }
                    }
                }
                if diagonal {
                    diag_set.insert((p.x_bits(), p.z_bits()));
                }
            }
            for img_sg in subgroups(n) {
                if img_sg
                    .elements()
                    .iter()
                    .all(|e| diag_set.contains(&(e.x_bits(), e.z_bits())))
                {
                    return Ok(Some(self.build_generalized_witness(u, sg, img_sg)?));
                }
            }
        }
        Ok(None)
    }

    fn build_generalized_witness(
        &self,
        u: &DenseUnitary,
        source: &PauliSubgroup,
        image: &PauliSubgroup,
    ) -> Result<GeneralizedWitness> {
        let n = u.qubits();
        let z_basis: Vec<SignedPauli> =
            (0..n).map(|q| SignedPauli::new(0, 1 << q, 1)).collect();
        let plus = |sg: &PauliSubgroup| -> Vec<SignedPauli> {
            sg.generators()
                .iter()
                .map(|g| SignedPauli::new(g.x_bits(), g.z_bits(), 1))
                .collect()
        };
        let l2 = clifford::clifford_mapping(n, &z_basis, &plus(source))?;
        let l1 = clifford::clifford_mapping(n, &plus(image), &z_basis)?;
        let m = l1.unitary.compose(u)?.compose(&l2.unitary)?;
        let (permutation, diag) = m.is_monomial().ok_or_else(|| {
            Error::InconsistentWitness("sandwich is not monomial".into())
        })?;
        let dim = 1usize << n;
        let mut v = ndarray::Array2::zeros((dim, dim));
        for (c, &d) in diag.iter().enumerate() {
            v[(c, c)] = d;
        }
        Ok(GeneralizedWitness {
            source: source.clone(),
            image: image.clone(),
            l1,
            l2,
            permutation,
            diagonal: DenseUnitary::from_array_unchecked(n, v),
        })
    }

    /// Fast+slow check that a diagonal gate sits at level ≤ k: grid
    /// residuals below tolerance, the integer phase-function recursion
    /// accepts, and the matrix recursion confirms.
    pub fn diagonal_level(&self, u: &DenseUnitary, k: u32) -> Result<bool> {
        let (pf, residual) = PhaseFn::from_diagonal(u, k)?;
        if residual > self.tol {
            return Ok(false);
        }
        if !pf.in_level(k) {
            return Ok(false);
        }
        self.is_in_ck(u, k)
    }

    /// Nearest exponents on the 2^k grid with residuals.
    pub fn diagonal_phase_profile(
        &self,
        u: &DenseUnitary,
        k: u32,
    ) -> Result<Vec<PhaseProfileEntry>> {
        let n = u.qubits();
        if !u.is_diagonal() {
            return Err(Error::InvalidParameter("matrix is not diagonal".into()));
        }
        let (pf, _) = PhaseFn::from_diagonal(u, k)?;
        let tau = 2.0 * std::f64::consts::PI;
        let m = (1u64 << k) as f64;
        let d0 = u.entry(0, 0);
        Ok((0..1usize << n)
            .map(|y| {
                let ang = (u.entry(y, y) / d0).arg().rem_euclid(tau);
                let exp = pf.values()[y];
                let dist = (ang - exp as f64 * tau / m).abs();
                PhaseProfileEntry {
                    index: y,
                    exponent: exp,
                    residual: dist.min(tau - dist),
                }
            })
            .collect())
    }

    /// Exhaustive scan of the 8^7 grid-8 diagonal gates at n = 3 against
    /// the closure of {T_i, CS_ij, CCZ}, in both integer and matrix land.
    pub fn enumerate_diagonal_c3(&self) -> DiagonalC3Report {
        let accepted = crate::phase_fn::scan_c3_n3();
        let generated = crate::phase_fn::generated_c3_n3();
        let keys_equal = accepted == generated;

        // Matrix-land closure over the actual gate matrices.
        let t_gates: Vec<DenseUnitary> = (0..3)
            .map(|q| crate::gates::t().embed(&[q], 3).expect("embed"))
            .collect();
        let cs_gates: Vec<DenseUnitary> = [(0usize, 1usize), (0, 2), (1, 2)]
            .iter()
            .map(|&(a, b)| crate::gates::cs().embed(&[a, b], 3).expect("embed"))
            .collect();
        let mut gens: Vec<Vec<num::complex::Complex64>> = Vec::new();
        for g in t_gates.iter().chain(cs_gates.iter()) {
            gens.push(g.diagonal());
        }
        gens.push(crate::gates::ccz().diagonal());

        let norm_key = |d: &[num::complex::Complex64]| -> DenseUnitary {
            let mut m = ndarray::Array2::zeros((8, 8));
            for (i, &v) in d.iter().enumerate() {
                m[(i, i)] = v / d[0];
            }
            DenseUnitary::from_array_unchecked(3, m)
        };
        let mut seen: std::collections::HashSet<crate::matrix::Fingerprint> =
            std::collections::HashSet::new();
        let identity: Vec<num::complex::Complex64> =
            vec![num::complex::Complex64::new(1.0, 0.0); 8];
        seen.insert(norm_key(&identity).fingerprint());
        let mut frontier = vec![identity];
        let mut max_grid_residual = 0.0f64;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for d in &frontier {
                for g in &gens {
                    let prod: Vec<num::complex::Complex64> =
                        d.iter().zip(g.iter()).map(|(a, b)| a * b).collect();
                    let mat = norm_key(&prod);
                    if seen.insert(mat.fingerprint()) {
                        let (_, res) = PhaseFn::from_diagonal(&mat, 3).expect("diagonal");
                        max_grid_residual = max_grid_residual.max(res);
                        next.push(prod);
                    }
                }
            }
            frontier = next;
        }
        let scan_fingerprints: std::collections::HashSet<crate::matrix::Fingerprint> =
            accepted
                .iter()
                .map(|&key| {
                    let values = crate::phase_fn::unkey24(key);
                    PhaseFn::new(3, 3, values).expect("valid").to_matrix().fingerprint()
                })
                .collect();
        let fingerprints_equal = scan_fingerprints == seen;

        DiagonalC3Report {
            scan_count: accepted.len(),
            generated_count: generated.len(),
            matrix_closure_count: seen.len(),
            keys_equal,
            fingerprints_equal,
            max_grid_residual,
        }
    }

    /// Level preservation under random Clifford sandwiches. Sandwiching
    /// preserves C_k membership both ways for k ≥ 2, so gates at level ≥ 3
    /// keep their exact level; gates at level ≤ 2 stay within the Clifford
    /// group (a Pauli can rise to a generic Clifford).
    pub fn check_sandwich_invariance(
        &self,
        u: &DenseUnitary,
        k_max: u32,
        trials: usize,
        seed: u64,
    ) -> Result<bool> {
        let base = self.level(u, k_max)?;
        let n = u.qubits();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let l1 = crate::sampling::random_clifford(n, &mut rng);
            let l2 = crate::sampling::random_clifford(n, &mut rng);
            let sandwich = l1.compose(u)?.compose(&l2)?;
            let got = self.level(&sandwich, k_max)?;
            let ok = match base {
                HierarchyLevel::Exact(k) if k <= 2 => {
                    matches!(got, HierarchyLevel::Exact(j) if j <= 2)
                }
                other => got == other,
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Falsification search for "all C_3 gates are semi-Clifford": sample
    /// level-3 gates (Clifford sandwiches of diagonal C_3 gates, products,
    /// and the W_2 variant at n = 3) and run the semi-Clifford test.
    pub fn falsify_conjecture_1(
        &self,
        n: usize,
        sample_budget: usize,
        seed: u64,
    ) -> Result<ConjectureReport> {
        self.check_input(&DenseUnitary::identity(n))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tested = 0usize;
        let mut level3 = 0usize;
        let mut counterexamples = Vec::new();
        while tested < sample_budget {
            let pick = tested % 4;
            let candidate = match pick {
                0 | 1 => {
                    let d = crate::sampling::random_diagonal_ck(n, 3, &mut rng);
                    let l1 = crate::sampling::random_clifford(n, &mut rng);
                    let l2 = crate::sampling::random_clifford(n, &mut rng);
                    l1.compose(&d)?.compose(&l2)?
                }
                2 => {
                    let a = crate::sampling::random_diagonal_ck(n, 3, &mut rng);
                    let l = crate::sampling::random_clifford(n, &mut rng);
                    let b = l.conjugate(&a)?;
                    let c = crate::sampling::random_diagonal_ck(n, 2, &mut rng);
                    b.compose(&c)?
                }
                _ if n == 3 => {
                    let l1 = crate::sampling::random_clifford(n, &mut rng);
                    let l2 = crate::sampling::random_clifford(n, &mut rng);
                    l1.compose(&crate::gates::w_k(2)?)?.compose(&l2)?
                }
                _ => {
                    let d = crate::sampling::random_diagonal_ck(n, 3, &mut rng);
                    let l1 = crate::sampling::random_clifford(n, &mut rng);
                    l1.conjugate(&d)?
                }
            };
            tested += 1;
            if self.level(&candidate, 4)? != HierarchyLevel::Exact(3) {
                continue;
            }
            level3 += 1;
            if self.is_semi_clifford(&candidate)?.is_none() {
                counterexamples.push(format!(
                    "sample #{tested} (fingerprint {:032x}) is level 3 but has no semi-Clifford witness",
                    candidate.fingerprint().0
                ));
            }
        }
        Ok(ConjectureReport {
            qubits: n,
            tested,
            level3,
            counterexamples,
        })
    }
}

/// A maximal abelian subgroup mapped to Paulis by conjugation.
#[derive(Debug, Clone)]
pub struct SemiCliffordWitness {
    pub source: PauliSubgroup,
    pub image: PauliSubgroup,
    /// Signed images of the source generators, in generator order.
    pub images: Vec<SignedPauli>,
}

/// L_1 · U · L_2 = V with V diagonal.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub l1: CliffordSynthesis,
    pub v: DenseUnitary,
    pub l2: CliffordSynthesis,
}

/// P · L_1 · U · L_2 = V with P a permutation and V diagonal.
#[derive(Debug, Clone)]
pub struct GeneralizedWitness {
    pub source: PauliSubgroup,
    pub image: PauliSubgroup,
    pub l1: CliffordSynthesis,
    pub l2: CliffordSynthesis,
    pub permutation: Vec<usize>,
    pub diagonal: DenseUnitary,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseProfileEntry {
    pub index: usize,
    pub exponent: u64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagonalC3Report {
    pub scan_count: usize,
    pub generated_count: usize,
    pub matrix_closure_count: usize,
    pub keys_equal: bool,
    pub fingerprints_equal: bool,
    pub max_grid_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub qubits: usize,
    pub tested: usize,
    pub level3: usize,
    pub counterexamples: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;

    fn hier() -> Hierarchy {
        Hierarchy::new()
    }

    #[test]
    fn level_of_standard_gates() {
        let h = hier();
        assert_eq!(h.level(&gates::s(), 6).unwrap(), HierarchyLevel::Exact(2));
        assert_eq!(h.level(&gates::t(), 6).unwrap(), HierarchyLevel::Exact(3));
        assert_eq!(
            h.level(&gates::toffoli(), 6).unwrap(),
            HierarchyLevel::Exact(3)
        );
        assert_eq!(h.level(&gates::ccz(), 6).unwrap(), HierarchyLevel::Exact(3));
        assert_eq!(
            h.level(&DenseUnitary::identity(2), 6).unwrap(),
            HierarchyLevel::Exact(1)
        );
    }

    #[test]
    fn level_of_s_k_family() {
        let h = hier();
        for k in 1..=6u32 {
            assert_eq!(
                h.level(&gates::s_k(k).unwrap(), 8).unwrap(),
                HierarchyLevel::Exact(k),
                "s_k({k})"
            );
        }
    }

    #[test]
    fn level_of_controlled_rotations() {
        let h = hier();
        let cs = gates::lambda_controlled(1, &gates::r_k(2).unwrap()).unwrap();
        assert_eq!(h.level(&cs, 6).unwrap(), HierarchyLevel::Exact(3));
        let ccs = gates::lambda_controlled(2, &gates::r_k(2).unwrap()).unwrap();
        assert_eq!(h.level(&ccs, 6).unwrap(), HierarchyLevel::Exact(4));
    }

    #[test]
    fn level_of_w_family() {
        let h = hier();
        for k in [2u32, 3, 4] {
            assert_eq!(
                h.level(&gates::w_k(k).unwrap(), 8).unwrap(),
                HierarchyLevel::Exact(k + 1),
                "w_k({k})"
            );
            // Reversed build order classifies identically.
            assert_eq!(
                h.level(&gates::w_k_reversed(k).unwrap(), 8).unwrap(),
                HierarchyLevel::Exact(k + 1),
                "w_k_reversed({k})"
            );
        }
    }

    #[test]
    fn non_dyadic_diagonal_is_beyond() {
        let pf = PhaseFn::new(1, 3, vec![0, 1]).unwrap();
        let _ = pf;
        let odd = DenseUnitary::from_array_unchecked(
            1,
            ndarray::array![
                [num::complex::Complex64::new(1., 0.), num::complex::Complex64::new(0., 0.)],
                [
                    num::complex::Complex64::new(0., 0.),
                    num::complex::Complex64::from_polar(1.0, std::f64::consts::PI / 5.0)
                ]
            ],
        );
        let h = hier();
        assert_eq!(h.level(&odd, 10).unwrap(), HierarchyLevel::Beyond(10));
        assert!(!h.diagonal_level(&odd, 10).unwrap());
    }

    #[test]
    fn monotone_nesting_on_classified_gates() {
        let h = hier();
        for (u, k) in [
            (gates::t(), 3u32),
            (gates::s(), 2),
            (gates::w_k(3).unwrap(), 4),
        ] {
            for j in 2..=6 {
                assert_eq!(h.is_in_ck(&u, j).unwrap(), j >= k, "level {k} vs test {j}");
            }
        }
    }

    #[test]
    fn semi_clifford_examples() {
        let h = hier();
        // Controlled-Hadamard is semi-Clifford.
        let ch = gates::lambda_controlled(1, &gates::h()).unwrap();
        let w = h.is_semi_clifford(&ch).unwrap().expect("witness");
        let diag = h.semi_clifford_diagonalize(&ch, &w).unwrap();
        assert!(diag.v.is_diagonal());
        assert_eq!(h.level(&diag.v, 6).unwrap(), HierarchyLevel::Exact(3));

        // W_3 is not semi-Clifford but is generalized semi-Clifford.
        let w3 = gates::w_k(3).unwrap();
        assert!(h.is_semi_clifford(&w3).unwrap().is_none());
        let g = h
            .is_generalized_semi_clifford(&w3)
            .unwrap()
            .expect("generalized witness");
        assert!(g.diagonal.is_diagonal());

        // Any diagonal gate: the Z subgroup is the first witness.
        let d = gates::ccz();
        let w = h.is_semi_clifford(&d).unwrap().expect("diagonal witness");
        assert!(w.source.same_span(&PauliSubgroup::z_subgroup(3)));
        let diag = h.semi_clifford_diagonalize(&d, &w).unwrap();
        assert!(diag.v.is_diagonal());
    }

    #[test]
    fn controlled_h_preserved_subgroup_matches_z1_y2() {
        // Λ_1(H) fixes Z_0 and sends Y_1 to Z_0 ⊗ (H Y H) = Z_0 Y_1 up to
        // the control split; the preserved subgroup is ⟨Z_0, Y_1⟩.
        let ch = gates::lambda_controlled(1, &gates::h()).unwrap();
        let z0 = PauliOp::single(2, 0, 'Z').unwrap();
        let img = ch.conjugate(&z0.to_matrix()).unwrap();
        assert!(img.approx_eq(&z0.to_matrix(), 1e-9));
        let y1 = PauliOp::single(2, 1, 'Y').unwrap();
        let img = ch.conjugate(&y1.to_matrix()).unwrap();
        let z0y1 = z0.mul(&y1).unwrap().to_matrix();
        assert!(img.approx_eq(&z0y1, 1e-9));
        // The witness search finds that subgroup (or another valid one).
        let h = hier();
        let w = h.is_semi_clifford(&ch).unwrap().expect("witness");
        assert!(w.source.is_abelian());
    }

    #[test]
    fn t_sandwich_recovers_diagonal_level3() {
        let h = hier();
        let u = gates::h().compose(&gates::t()).unwrap().compose(&gates::h()).unwrap();
        let w = h.is_semi_clifford(&u).unwrap().expect("semi-Clifford");
        let diag = h.semi_clifford_diagonalize(&u, &w).unwrap();
        assert!(diag.v.is_diagonal());
        assert_eq!(h.level(&diag.v, 6).unwrap(), HierarchyLevel::Exact(3));
    }

    #[test]
    fn haar_random_two_qubit_fails_generalized_test() {
        let h = hier();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let u = crate::sampling::random_haar_unitary(2, &mut rng);
        assert!(h.is_generalized_semi_clifford(&u).unwrap().is_none());
    }

    #[test]
    fn semi_implies_generalized_on_samples() {
        let h = hier();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let d = crate::sampling::random_diagonal_ck(2, 3, &mut rng);
            let l1 = crate::sampling::random_clifford(2, &mut rng);
            let l2 = crate::sampling::random_clifford(2, &mut rng);
            let u = l1.compose(&d).unwrap().compose(&l2).unwrap();
            if h.is_semi_clifford(&u).unwrap().is_some() {
                assert!(h.is_generalized_semi_clifford(&u).unwrap().is_some());
            }
        }
    }

    #[test]
    fn diagonal_profiles() {
        let h = hier();
        let profile = h.diagonal_phase_profile(&gates::ccz(), 3).unwrap();
        for e in &profile {
            assert!(e.residual < 1e-12);
            assert!(e.exponent == 0 || e.exponent == 4);
        }
        assert!(h.diagonal_level(&gates::ccz(), 3).unwrap());
        let profile = h.diagonal_phase_profile(&gates::t(), 3).unwrap();
        assert_eq!(profile[1].exponent, 1);
        assert!(h.diagonal_level(&gates::t(), 3).unwrap());
        assert!(!h.diagonal_level(&gates::t(), 2).unwrap());
    }

    #[test]
    fn sandwich_invariance_spot_checks() {
        let h = hier();
        assert!(h
            .check_sandwich_invariance(&gates::t(), 6, 25, 99)
            .unwrap());
        assert!(h
            .check_sandwich_invariance(&DenseUnitary::identity(1), 6, 10, 100)
            .unwrap());
    }

    #[test]
    fn conjecture_sampler_finds_no_counterexample_small() {
        let h = hier();
        let rep = h.falsify_conjecture_1(2, 30, 7).unwrap();
        assert!(rep.counterexamples.is_empty());
        assert!(rep.level3 > 0);
    }

    #[test]
    fn fk_group_closure_sampled() {
        let h = hier();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..15 {
            let a = crate::sampling::random_diagonal_ck(2, 3, &mut rng);
            let b = crate::sampling::random_diagonal_ck(2, 3, &mut rng);
            let prod = a.compose(&b).unwrap();
            assert!(h.is_in_ck(&prod, 3).unwrap());
            assert!(h.is_in_ck(&a.dagger(), 3).unwrap());
        }
    }
}
