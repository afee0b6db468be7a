//! Clifford-group machinery: detection via Pauli images, tableau
//! representation, circuit synthesis from a tableau by symplectic sweeping,
//! Clifford construction mapping one signed stabilizer set onto another,
//! and exhaustive enumeration mod global phase for n ≤ 2.

use crate::error::{Error, Result};
use crate::matrix::{DenseUnitary, Fingerprint};
use crate::pauli::{self, PauliOp};
use std::collections::HashMap;
use std::sync::OnceLock;

/// Named generator-level Clifford gates; qubit indices are 0-based with
/// qubit 0 the most significant tensor factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Z(usize),
    Cnot(usize, usize),
    Swap(usize, usize),
}

impl CliffordGate {
    pub fn dagger(&self) -> CliffordGate {
        match *self {
            CliffordGate::S(q) => CliffordGate::Sdg(q),
            CliffordGate::Sdg(q) => CliffordGate::S(q),
            g => g,
        }
    }

    /// Exact conjugation `g · P · g†` in symplectic form.
    pub fn conjugate_pauli(&self, p: &PauliOp) -> PauliOp {
        let n = p.qubits();
        let mut x = p.x_bits();
        let mut z = p.z_bits();
        let mut phase = p.phase_exponent();
        match *self {
            CliffordGate::H(q) => {
                let (xb, zb) = (x >> q & 1, z >> q & 1);
                if xb & zb == 1 {
                    phase = (phase + 2) % 4;
                }
                x = x & !(1 << q) | zb << q;
                z = z & !(1 << q) | xb << q;
            }
            CliffordGate::S(q) => {
                if x >> q & 1 == 1 {
                    z ^= 1 << q;
                    phase = (phase + 1) % 4;
                }
            }
            CliffordGate::Sdg(q) => {
                if x >> q & 1 == 1 {
                    z ^= 1 << q;
                    phase = (phase + 3) % 4;
                }
            }
            CliffordGate::X(q) => {
                if z >> q & 1 == 1 {
                    phase = (phase + 2) % 4;
                }
            }
            CliffordGate::Z(q) => {
                if x >> q & 1 == 1 {
                    phase = (phase + 2) % 4;
                }
            }
            CliffordGate::Cnot(cq, tq) => {
                let (xc, zc) = (x >> cq & 1, z >> cq & 1);
                let (xt, zt) = (x >> tq & 1, z >> tq & 1);
                // Sign rule holds for the Hermitian representative; translate
                // to the i^m X^x Z^z phase by tracking the x·z overlap shift.
                let ov_before = (x & z).count_ones() as i32;
                if xc & zt & (xt ^ zc ^ 1) == 1 {
                    phase = (phase + 2) % 4;
                }
                x ^= xc << tq;
                z ^= zt << cq;
                let ov_after = (x & z).count_ones() as i32;
                phase = (phase as i32 + ov_after - ov_before).rem_euclid(4) as u8;
            }
            CliffordGate::Swap(a, b) => {
                let (xa, za) = (x >> a & 1, z >> a & 1);
                let (xb, zb) = (x >> b & 1, z >> b & 1);
                x = x & !(1 << a) & !(1 << b) | xb << a | xa << b;
                z = z & !(1 << a) & !(1 << b) | zb << a | za << b;
            }
        }
        PauliOp::new(n, x, z, phase).expect("conjugation preserves masks")
    }

    pub fn matrix(&self, n: usize) -> DenseUnitary {
        match *self {
            CliffordGate::H(q) => crate::gates::h().embed(&[q], n).unwrap(),
            CliffordGate::S(q) => crate::gates::s().embed(&[q], n).unwrap(),
            CliffordGate::Sdg(q) => crate::gates::sdg().embed(&[q], n).unwrap(),
            CliffordGate::X(q) => crate::gates::x().embed(&[q], n).unwrap(),
            CliffordGate::Z(q) => crate::gates::z().embed(&[q], n).unwrap(),
            CliffordGate::Cnot(c, t) => crate::gates::cnot().embed(&[c, t], n).unwrap(),
            CliffordGate::Swap(a, b) => crate::gates::swap().embed(&[a, b], n).unwrap(),
        }
    }
}

/// Compose a gate word in circuit order (first gate applied first).
pub fn word_to_matrix(word: &[CliffordGate], n: usize) -> DenseUnitary {
    let mut u = DenseUnitary::identity(n);
    for g in word {
        u = g.matrix(n).compose(&u).expect("same register");
    }
    u
}

/// A signed Hermitian Pauli: `sign · i^{x·z} X^x Z^z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedPauli {
    pub x: u32,
    pub z: u32,
    pub sign: i8,
}

impl SignedPauli {
    pub fn new(x: u32, z: u32, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1);
        SignedPauli { x, z, sign }
    }

    pub fn from_pauli(p: &PauliOp) -> Result<Self> {
        let herm = PauliOp::hermitian_phase(p.x_bits(), p.z_bits());
        let delta = (4 + p.phase_exponent() - herm) % 4;
        let sign = match delta {
            0 => 1,
            2 => -1,
            _ => {
                return Err(Error::InvalidTableau(
                    "image is not a Hermitian Pauli".into(),
                ))
            }
        };
        Ok(SignedPauli {
            x: p.x_bits(),
            z: p.z_bits(),
            sign,
        })
    }

    pub fn to_pauli(&self, n: usize) -> PauliOp {
        let herm = PauliOp::hermitian_phase(self.x, self.z);
        let phase = (herm + if self.sign < 0 { 2 } else { 0 }) % 4;
        PauliOp::new(n, self.x, self.z, phase).expect("valid masks")
    }

    pub fn to_matrix(&self, n: usize) -> DenseUnitary {
        self.to_pauli(n).to_matrix()
    }

    pub fn symplectic_bits(&self, n: usize) -> u64 {
        ((self.x as u64) << n) | self.z as u64
    }

    pub fn label(&self, n: usize) -> String {
        self.to_pauli(n).label()
    }
}

/// Images of the X_i / Z_i generators under conjugation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordTableau {
    n: usize,
    pub image_x: Vec<SignedPauli>,
    pub image_z: Vec<SignedPauli>,
}

impl CliffordTableau {
    pub fn new(n: usize, image_x: Vec<SignedPauli>, image_z: Vec<SignedPauli>) -> Result<Self> {
        let t = CliffordTableau { n, image_x, image_z };
        t.validate()?;
        Ok(t)
    }

    pub fn identity(n: usize) -> Self {
        CliffordTableau {
            n,
            image_x: (0..n).map(|q| SignedPauli::new(1 << q, 0, 1)).collect(),
            image_z: (0..n).map(|q| SignedPauli::new(0, 1 << q, 1)).collect(),
        }
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    /// Symplectic-basis conditions: image_x[i] anticommutes with
    /// image_z[i] and commutes with every other image.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.image_x.len() != n || self.image_z.len() != n {
            return Err(Error::InvalidTableau("wrong generator count".into()));
        }
        let all: Vec<(usize, &SignedPauli)> = self
            .image_x
            .iter()
            .chain(self.image_z.iter())
            .enumerate()
            .collect();
        // independence over GF(2)
        let vecs: Vec<u64> = all.iter().map(|(_, s)| s.symplectic_bits(n)).collect();
        if crate::pauli::gf2_rref(&vecs).len() != 2 * n {
            return Err(Error::InvalidTableau("images not independent".into()));
        }
        for (i, a) in &all {
            for (j, b) in &all {
                if j <= i {
                    continue;
                }
                let form = ((a.x & b.z).count_ones() + (a.z & b.x).count_ones()) % 2;
                let want_anti = *j == *i + n; // X_i with its Z_i partner
                if (form == 1) != want_anti {
                    return Err(Error::InvalidTableau(format!(
                        "commutation relation broken between images {i} and {j}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Test Clifford membership by conjugating the 2n Pauli generators; the
/// generator check suffices because conjugation is multiplicative and the
/// Pauli group is closed under products.
pub fn is_clifford(u: &DenseUnitary) -> Option<CliffordTableau> {
    let n = u.qubits();
    let mut image_x = Vec::with_capacity(n);
    let mut image_z = Vec::with_capacity(n);
    for q in 0..n {
        for (kind, bucket) in [('X', &mut image_x), ('Z', &mut image_z)] {
            let g = PauliOp::single(n, q, kind).ok()?.to_matrix();
            let img = u.conjugate(&g).ok()?;
            let (x, z, sign) = pauli::as_signed_hermitian(&img)?;
            bucket.push(SignedPauli::new(x, z, sign));
        }
    }
    let t = CliffordTableau { n, image_x, image_z };
    t.validate().ok()?;
    Some(t)
}

/// Result of tableau synthesis: the circuit word (circuit order), its
/// matrix, and the tableau it realizes.
#[derive(Debug, Clone)]
pub struct CliffordSynthesis {
    pub tableau: CliffordTableau,
    pub word: Vec<CliffordGate>,
    pub unitary: DenseUnitary,
}

/// Build a unitary realizing the tableau, signs included, via symplectic
/// Gaussian elimination over {H, S, CNOT, SWAP} plus a Pauli sign fix.
pub fn unitary_from_tableau(t: &CliffordTableau) -> Result<CliffordSynthesis> {
    t.validate()?;
    let n = t.qubits();
    let mut imgs: Vec<PauliOp> = t
        .image_x
        .iter()
        .chain(t.image_z.iter())
        .map(|s| s.to_pauli(n))
        .collect();
    let mut applied: Vec<CliffordGate> = Vec::new();

    fn apply(g: CliffordGate, imgs: &mut [PauliOp], applied: &mut Vec<CliffordGate>) {
        for p in imgs.iter_mut() {
            *p = g.conjugate_pauli(p);
        }
        applied.push(g);
    }

    for i in 0..n {
        // Bring the X_i image to ±X_i.
        if imgs[i].x_bits() >> i == 0 {
            let p = imgs[i];
            let j = (i..n)
                .find(|&j| p.z_bits() >> j & 1 == 1)
                .ok_or_else(|| Error::InvalidTableau("degenerate X image".into()))?;
            apply(CliffordGate::H(j), &mut imgs, &mut applied);
        }
        let j0 = {
            let p = imgs[i];
            (i..n)
                .find(|&j| p.x_bits() >> j & 1 == 1)
                .ok_or_else(|| Error::InvalidTableau("no X pivot".into()))?
        };
        if j0 != i {
            apply(CliffordGate::Swap(i, j0), &mut imgs, &mut applied);
        }
        for j in i + 1..n {
            if imgs[i].x_bits() >> j & 1 == 1 {
                apply(CliffordGate::Cnot(i, j), &mut imgs, &mut applied);
            }
        }
        for j in i + 1..n {
            if imgs[i].z_bits() >> j & 1 == 1 {
                // CZ(i, j) = H_j · CNOT(i, j) · H_j
                apply(CliffordGate::H(j), &mut imgs, &mut applied);
                apply(CliffordGate::Cnot(i, j), &mut imgs, &mut applied);
                apply(CliffordGate::H(j), &mut imgs, &mut applied);
            }
        }
        if imgs[i].z_bits() >> i & 1 == 1 {
            apply(CliffordGate::S(i), &mut imgs, &mut applied);
        }

        // Bring the Z_i image to ±Z_i without disturbing X_i.
        for j in i + 1..n {
            if imgs[n + i].x_bits() >> j & 1 == 1 && imgs[n + i].z_bits() >> j & 1 == 1 {
                apply(CliffordGate::S(j), &mut imgs, &mut applied);
            }
            if imgs[n + i].x_bits() >> j & 1 == 1 {
                apply(CliffordGate::H(j), &mut imgs, &mut applied);
            }
            if imgs[n + i].z_bits() >> j & 1 == 1 {
                apply(CliffordGate::Cnot(j, i), &mut imgs, &mut applied);
            }
        }
        if imgs[n + i].x_bits() >> i & 1 == 1 {
            // √X-type fix: maps Y_i to ±Z_i while fixing X_i.
            apply(CliffordGate::H(i), &mut imgs, &mut applied);
            apply(CliffordGate::S(i), &mut imgs, &mut applied);
            apply(CliffordGate::H(i), &mut imgs, &mut applied);
        }
    }

    // Sign fix with Pauli gates.
    for i in 0..n {
        if imgs[i].phase_exponent() == 2 {
            apply(CliffordGate::Z(i), &mut imgs, &mut applied);
        }
        if imgs[n + i].phase_exponent() == 2 {
            apply(CliffordGate::X(i), &mut imgs, &mut applied);
        }
    }

    for i in 0..n {
        let want_x = PauliOp::single(n, i, 'X').unwrap();
        let want_z = PauliOp::single(n, i, 'Z').unwrap();
        if imgs[i] != want_x || imgs[n + i] != want_z {
            return Err(Error::InvalidTableau("sweep failed to normalize".into()));
        }
    }

    let word: Vec<CliffordGate> = applied.iter().rev().map(|g| g.dagger()).collect();
    let unitary = word_to_matrix(&word, n);
    Ok(CliffordSynthesis {
        tableau: t.clone(),
        word,
        unitary,
    })
}

/// Symplectic inner product on (x | z) encoded vectors.
fn sympl(n: usize, a: u64, b: u64) -> u32 {
    let mask = (1u64 << n) - 1;
    (((a >> n) & (b & mask)).count_ones() + ((a & mask) & (b >> n)).count_ones()) % 2
}

/// Solve `rows[i] · w = rhs[i]` over GF(2); returns one solution.
fn gf2_solve(rows: &[u64], rhs: &[bool], nbits: usize) -> Option<u64> {
    let mut aug: Vec<u64> = rows
        .iter()
        .zip(rhs)
        .map(|(&r, &b)| r << 1 | u64::from(b))
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, bit)
    let mut rank = 0usize;
    for bit in (1..=nbits).rev() {
        if let Some(r) = (rank..aug.len()).find(|&r| aug[r] >> bit & 1 == 1) {
            aug.swap(rank, r);
            for rr in 0..aug.len() {
                if rr != rank && aug[rr] >> bit & 1 == 1 {
                    aug[rr] ^= aug[rank];
                }
            }
            pivots.push((rank, bit));
            rank += 1;
        }
    }
    if aug[rank..].iter().any(|&r| r & 1 == 1) {
        return None; // inconsistent
    }
    let mut w = 0u64;
    for &(r, bit) in &pivots {
        if aug[r] & 1 == 1 {
            w |= 1 << (bit - 1);
        }
    }
    Some(w)
}

/// Complete an isotropic independent set `v` to a symplectic basis:
/// returns `u` with ⟨u_i, v_j⟩ = δ_ij and ⟨u_i, u_j⟩ = 0.
fn symplectic_completion(n: usize, v: &[u64]) -> Result<Vec<u64>> {
    let mut u: Vec<u64> = Vec::with_capacity(v.len());
    for i in 0..v.len() {
        // Constraint rows are symplectic-dual vectors J(v_j), J(u_j).
        let jmap = |w: u64| -> u64 {
            let mask = (1u64 << n) - 1;
            ((w & mask) << n) | (w >> n)
        };
        let mut rows: Vec<u64> = Vec::new();
        let mut rhs: Vec<bool> = Vec::new();
        for (j, &vj) in v.iter().enumerate() {
            rows.push(jmap(vj));
            rhs.push(j == i);
        }
        for &uj in &u {
            rows.push(jmap(uj));
            rhs.push(false);
        }
        let w = gf2_solve(&rows, &rhs, 2 * n)
            .ok_or_else(|| Error::InvalidTableau("symplectic completion failed".into()))?;
        debug_assert!(v.iter().enumerate().all(|(j, &vj)| {
            sympl(n, w, vj) == u32::from(j == i)
        }));
        u.push(w);
    }
    Ok(u)
}

/// Construct a Clifford sending `src[i]` to `dst[i]` including signs.
/// Both sides must be independent, pairwise-commuting signed Paulis.
pub fn clifford_mapping(n: usize, src: &[SignedPauli], dst: &[SignedPauli]) -> Result<CliffordSynthesis> {
    if src.len() != dst.len() {
        return Err(Error::RankMismatch {
            expected: src.len(),
            got: dst.len(),
        });
    }
    let check = |side: &[SignedPauli]| -> Result<Vec<u64>> {
        let vecs: Vec<u64> = side.iter().map(|s| s.symplectic_bits(n)).collect();
        if crate::pauli::gf2_rref(&vecs).len() != vecs.len() {
            return Err(Error::RankMismatch {
                expected: vecs.len(),
                got: crate::pauli::gf2_rref(&vecs).len(),
            });
        }
        for i in 0..vecs.len() {
            for j in i + 1..vecs.len() {
                if sympl(n, vecs[i], vecs[j]) == 1 {
                    return Err(Error::NonAbelian { i, j });
                }
            }
        }
        Ok(vecs)
    };
    let vsrc = check(src)?;
    let vdst = check(dst)?;

    let build = |vecs: &[u64], signed: &[SignedPauli]| -> Result<CliffordSynthesis> {
        let completion = symplectic_completion(n, vecs)?;
        let mask = (1u64 << n) - 1;
        let image_x: Vec<SignedPauli> = completion
            .iter()
            .map(|&u| SignedPauli::new((u >> n) as u32, (u & mask) as u32, 1))
            .collect();
        let image_z: Vec<SignedPauli> = signed
            .iter()
            .map(|s| SignedPauli::new(s.x, s.z, s.sign))
            .collect();
        unitary_from_tableau(&CliffordTableau::new(n, image_x, image_z)?)
    };

    // When src has fewer than n generators, extend both isotropic sets to
    // rank n first so the tableau is full.
    let (vsrc, src_signs, vdst, dst_signs) = if src.len() < n {
        let ext_s = extend_isotropic(n, &vsrc)?;
        let ext_d = extend_isotropic(n, &vdst)?;
        let mask = (1u64 << n) - 1;
        let mk = |vs: &[u64], base: &[SignedPauli]| -> Vec<SignedPauli> {
            vs.iter()
                .enumerate()
                .map(|(i, &v)| {
                    if i < base.len() {
                        base[i]
                    } else {
                        SignedPauli::new((v >> n) as u32, (v & mask) as u32, 1)
                    }
                })
                .collect()
        };
        let ss = mk(&ext_s, src);
        let ds = mk(&ext_d, dst);
        (ext_s, ss, ext_d, ds)
    } else {
        (vsrc, src.to_vec(), vdst, dst.to_vec())
    };

    let a = build(&vsrc, &src_signs)?;
    let b = build(&vdst, &dst_signs)?;
    let unitary = b.unitary.compose(&a.unitary.dagger())?;
    let tableau = is_clifford(&unitary)
        .ok_or_else(|| Error::InvalidTableau("mapping did not synthesize a Clifford".into()))?;
    let mut word = a.word.iter().rev().map(|g| g.dagger()).collect::<Vec<_>>();
    word.extend(b.word.iter().copied());
    Ok(CliffordSynthesis {
        tableau,
        word,
        unitary,
    })
}

/// Extend an isotropic independent set to rank n (still isotropic).
fn extend_isotropic(n: usize, v: &[u64]) -> Result<Vec<u64>> {
    let mut out = v.to_vec();
    let total = 1u64 << (2 * n);
    while out.len() < n {
        let mut found = false;
        for cand in 1..total {
            if out.iter().all(|&w| sympl(n, w, cand) == 0) {
                let mut trial = out.clone();
                trial.push(cand);
                if crate::pauli::gf2_rref(&trial).len() == trial.len() {
                    out.push(cand);
                    found = true;
                    break;
                }
            }
        }
        if !found {
            return Err(Error::InvalidTableau("cannot extend isotropic set".into()));
        }
    }
    Ok(out)
}

/// Exhaustive Clifford enumeration for n ≤ 2 via breadth-first closure over
/// {H_i, S_i, CNOT_ij} with fingerprint deduplication.
pub struct CliffordEnumeration {
    pub classes: Vec<DenseUnitary>,
    /// Count of exact matrices in the closure (global phases included).
    pub raw_matrix_count: u64,
}

impl CliffordEnumeration {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
    pub fn iter(&self) -> impl Iterator<Item = &DenseUnitary> {
        self.classes.iter()
    }
}

pub fn enumerate_mod_phase(n: usize) -> Result<CliffordEnumeration> {
    if n == 0 || n > 2 {
        return Err(Error::CapabilityExceeded {
            what: "Clifford enumeration",
            limit: 2,
            requested: n,
        });
    }
    let mut gens: Vec<CliffordGate> = Vec::new();
    for q in 0..n {
        gens.push(CliffordGate::H(q));
        gens.push(CliffordGate::S(q));
    }
    for cq in 0..n {
        for tq in 0..n {
            if cq != tq {
                gens.push(CliffordGate::Cnot(cq, tq));
            }
        }
    }
    let gen_mats: Vec<DenseUnitary> = gens.iter().map(|g| g.matrix(n)).collect();

    // Mod-phase closure.
    let mut seen: HashMap<Fingerprint, usize> = HashMap::new();
    let mut classes: Vec<DenseUnitary> = Vec::new();
    let identity = DenseUnitary::identity(n);
    seen.insert(identity.fingerprint(), 0);
    classes.push(identity.clone());
    let mut frontier = vec![identity.clone()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for u in &frontier {
            for g in &gen_mats {
                let v = g.compose(u).expect("same register");
                let fp = v.fingerprint();
                if !seen.contains_key(&fp) {
                    seen.insert(fp, classes.len());
                    classes.push(v.clone());
                    next.push(v);
                }
            }
        }
        frontier = next;
    }

    // Raw closure (phases distinguished) counted with raw fingerprints.
    let mut raw_seen: std::collections::HashSet<u128> = std::collections::HashSet::new();
    raw_seen.insert(identity.fingerprint_raw(crate::matrix::DEFAULT_FP_GRID));
    let mut raw_frontier = vec![identity];
    while !raw_frontier.is_empty() {
        let mut next = Vec::new();
        for u in &raw_frontier {
            for g in &gen_mats {
                let v = g.compose(u).expect("same register");
                let fp = v.fingerprint_raw(crate::matrix::DEFAULT_FP_GRID);
                if raw_seen.insert(fp) {
                    next.push(v);
                }
            }
        }
        raw_frontier = next;
    }

    Ok(CliffordEnumeration {
        classes,
        raw_matrix_count: raw_seen.len() as u64,
    })
}

/// The 24 single-qubit Clifford classes mod phase; index 0 is the identity.
pub fn single_qubit_classes() -> &'static [DenseUnitary] {
    static CLASSES: OnceLock<Vec<DenseUnitary>> = OnceLock::new();
    CLASSES.get_or_init(|| enumerate_mod_phase(1).expect("n=1 in range").classes)
}
