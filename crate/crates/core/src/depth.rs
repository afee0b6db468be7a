//! Teleportation-depth engine.
//!
//! The random conjugation map sends a gate A to {A·P·A†} with P drawn
//! uniformly from the scheme's correction set (all Paulis for two-bit
//! teleportation, one maximal abelian subgroup for one-bit). A trajectory
//! terminates at the first Clifford. Expected depths are solved exactly on
//! the reachable class graph (rational backward pass on DAGs, rational
//! elimination when cycles appear) and cross-checked by Monte Carlo.

use crate::clifford;
use crate::error::{Error, Result};
use crate::hierarchy::Hierarchy;
use crate::matrix::{DenseUnitary, Fingerprint};
use crate::pauli::{self, PauliOp, PauliSubgroup};
use num::bigint::BigInt;
use num::rational::Ratio;
use num::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;

pub type Rational = Ratio<BigInt>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SchemeKind {
    OneBit,
    TwoBit,
}

impl SchemeKind {
    pub fn label(&self) -> &'static str {
        match self {
            SchemeKind::OneBit => "one-bit",
            SchemeKind::TwoBit => "two-bit",
        }
    }
}

/// A correction set: the Paulis conjugated through the gate at each step,
/// uniform probability each.
#[derive(Debug, Clone)]
pub struct TeleportScheme {
    kind: SchemeKind,
    n: usize,
    corrections: Vec<PauliOp>,
}

impl TeleportScheme {
    /// Standard two-bit scheme: all 4^n phase-free Paulis.
    pub fn two_bit(n: usize) -> Self {
        TeleportScheme {
            kind: SchemeKind::TwoBit,
            n,
            corrections: pauli::enumerate_mod_phase(n).collect(),
        }
    }

    /// One-bit scheme over an explicit maximal abelian subgroup.
    pub fn one_bit(subgroup: &PauliSubgroup) -> Result<Self> {
        subgroup.check_abelian()?;
        if subgroup.rank() != subgroup.qubits() {
            return Err(Error::RankMismatch {
                expected: subgroup.qubits(),
                got: subgroup.rank(),
            });
        }
        Ok(TeleportScheme {
            kind: SchemeKind::OneBit,
            n: subgroup.qubits(),
            corrections: subgroup.elements(),
        })
    }

    /// One-bit scheme for a semi-Clifford gate: X-type corrections pushed
    /// through the diagonal form, i.e. the subgroup L_2⟨X_i⟩L_2† from the
    /// gate's diagonalizing sandwich.
    pub fn one_bit_for_gate(h: &Hierarchy, u: &DenseUnitary) -> Result<Self> {
        let witness = h
            .is_semi_clifford(u)?
            .ok_or(Error::SchemeInapplicable)?;
        let diag = h.semi_clifford_diagonalize(u, &witness)?;
        let n = u.qubits();
        let mut corrections = Vec::with_capacity(1 << n);
        for a in 0..(1u32 << n) {
            let mut p = PauliOp::new(n, a, 0, 0)?;
            for g in &diag.l2.word {
                p = g.conjugate_pauli(&p);
            }
            corrections.push(p.with_phase(0));
        }
        let sg = PauliSubgroup::new(
            n,
            (0..n)
                .map(|i| corrections[1usize << i])
                .collect::<Vec<_>>(),
        )?;
        sg.check_abelian()?;
        Ok(TeleportScheme {
            kind: SchemeKind::OneBit,
            n,
            corrections,
        })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }
    pub fn qubits(&self) -> usize {
        self.n
    }
    pub fn corrections(&self) -> &[PauliOp] {
        &self.corrections
    }
}

/// One application of the teleportation map: conjugates of A by every
/// correction, grouped by fingerprint class with summed probabilities.
pub fn teleport_step(
    a: &DenseUnitary,
    scheme: &TeleportScheme,
) -> Result<Vec<(DenseUnitary, Rational)>> {
    if a.qubits() != scheme.n {
        return Err(Error::DimensionMismatch {
            left: a.qubits(),
            right: scheme.n,
        });
    }
    let total = BigInt::from(scheme.corrections.len());
    let unit = Rational::new(BigInt::one(), total);
    let mut order: Vec<DenseUnitary> = Vec::new();
    let mut index: HashMap<Fingerprint, usize> = HashMap::new();
    let mut probs: Vec<Rational> = Vec::new();
    for p in &scheme.corrections {
        let child = a.conjugate(&p.to_matrix())?;
        let fp = child.fingerprint();
        match index.get(&fp) {
            Some(&i) => probs[i] += unit.clone(),
            None => {
                index.insert(fp, order.len());
                order.push(child);
                probs.push(unit.clone());
            }
        }
    }
    Ok(order.into_iter().zip(probs).collect())
}

struct ChainGraph {
    /// Class representatives in discovery order; index 0 is the start.
    reps: Vec<DenseUnitary>,
    absorbing: Vec<bool>,
    /// edges[i] = (target index, multiplicity); probabilities are
    /// multiplicity / corrections.
    edges: Vec<Vec<(usize, u64)>>,
    corrections: u64,
    depth_layers: usize,
}

fn build_chain(
    a: &DenseUnitary,
    scheme: &TeleportScheme,
    state_cap: usize,
    depth_cap: usize,
) -> Result<ChainGraph> {
    let mut reps: Vec<DenseUnitary> = vec![a.clone()];
    let mut absorbing = vec![clifford::is_clifford(a).is_some()];
    let mut edges: Vec<Vec<(usize, u64)>> = vec![Vec::new()];
    let mut index: HashMap<Fingerprint, usize> = HashMap::new();
    index.insert(a.fingerprint(), 0);

    let mut frontier: Vec<usize> = if absorbing[0] { vec![] } else { vec![0] };
    let mut layers = 0usize;
    while !frontier.is_empty() {
        layers += 1;
        if layers > depth_cap {
            return Err(Error::StateCapExceeded {
                cap: state_cap,
                seen: reps.len(),
            });
        }
        let mut next = Vec::new();
        for &s in &frontier {
            let mut bucket: HashMap<usize, u64> = HashMap::new();
            let mut local_order: Vec<usize> = Vec::new();
            for p in &scheme.corrections {
                let child = reps[s].conjugate(&p.to_matrix())?;
                let fp = child.fingerprint();
                let idx = match index.get(&fp) {
                    Some(&i) => i,
                    None => {
                        let i = reps.len();
                        if i >= state_cap {
                            return Err(Error::StateCapExceeded {
                                cap: state_cap,
                                seen: i,
                            });
                        }
                        index.insert(fp, i);
                        let absorbed = clifford::is_clifford(&child).is_some();
                        reps.push(child);
                        absorbing.push(absorbed);
                        edges.push(Vec::new());
                        if !absorbed {
                            next.push(i);
                        }
                        i
                    }
                };
                if !bucket.contains_key(&idx) {
                    local_order.push(idx);
                }
                *bucket.entry(idx).or_insert(0) += 1;
            }
            edges[s] = local_order
                .into_iter()
                .map(|i| (i, bucket[&i]))
                .collect();
        }
        frontier = next;
    }
    Ok(ChainGraph {
        reps,
        absorbing,
        edges,
        corrections: scheme.corrections.len() as u64,
        depth_layers: layers,
    })
}

impl ChainGraph {
    /// Every transient state must reach an absorbing state for the
    /// expectation to be finite.
    fn all_reach_absorption(&self) -> bool {
        let m = self.reps.len();
        let mut reach = self.absorbing.clone();
        loop {
            let mut changed = false;
            for s in 0..m {
                if !reach[s] && self.edges[s].iter().any(|&(t, _)| reach[t]) {
                    reach[s] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        reach.iter().all(|&r| r)
    }

    fn transient_indices(&self) -> Vec<usize> {
        (0..self.reps.len()).filter(|&i| !self.absorbing[i]).collect()
    }

    fn is_dag(&self, transient: &[usize]) -> bool {
        // Colors: 0 unvisited, 1 on stack, 2 done.
        let m = self.reps.len();
        let mut color = vec![0u8; m];
        for &start in transient {
            if color[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            color[start] = 1;
            while let Some(&mut (s, ref mut ei)) = stack.last_mut() {
                if *ei < self.edges[s].len() {
                    let (t, _) = self.edges[s][*ei];
                    *ei += 1;
                    if self.absorbing[t] {
                        continue;
                    }
                    match color[t] {
                        0 => {
                            color[t] = 1;
                            stack.push((t, 0));
                        }
                        1 => return false,
                        _ => {}
                    }
                } else {
                    color[s] = 2;
                    stack.pop();
                }
            }
        }
        true
    }

    /// Exact expectation by backward accumulation (valid on DAGs).
    fn solve_dag(&self) -> Rational {
        let m = self.reps.len();
        let mut memo: Vec<Option<Rational>> = vec![None; m];
        let total = BigInt::from(self.corrections);
        // Iterative post-order from state 0.
        let mut stack = vec![(0usize, false)];
        while let Some((s, processed)) = stack.pop() {
            if memo[s].is_some() {
                continue;
            }
            if self.absorbing[s] {
                memo[s] = Some(Rational::zero());
                continue;
            }
            if processed {
                let mut e = Rational::one();
                for &(t, cnt) in &self.edges[s] {
                    let p = Rational::new(BigInt::from(cnt), total.clone());
                    e += p * memo[t].clone().expect("post-order");
                }
                memo[s] = Some(e);
            } else {
                stack.push((s, true));
                for &(t, _) in &self.edges[s] {
                    if memo[t].is_none() {
                        stack.push((t, false));
                    }
                }
            }
        }
        memo[0].clone().expect("start state solved")
    }

    /// Exact expectation by rational Gaussian elimination on
    /// (I − T)·E = 1 over the transient states.
    fn solve_elimination(&self, transient: &[usize]) -> Option<Rational> {
        let k = transient.len();
        let pos: HashMap<usize, usize> =
            transient.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let total = BigInt::from(self.corrections);
        let mut mat: Vec<Vec<Rational>> = vec![vec![Rational::zero(); k + 1]; k];
        for (row, &s) in transient.iter().enumerate() {
            mat[row][row] = Rational::one();
            mat[row][k] = Rational::one();
            for &(t, cnt) in &self.edges[s] {
                if let Some(&col) = pos.get(&t) {
                    let p = Rational::new(BigInt::from(cnt), total.clone());
                    mat[row][col] -= p;
                }
            }
        }
        // Elimination with partial pivoting by nonzero.
        for col in 0..k {
            let pivot = (col..k).find(|&r| !mat[r][col].is_zero())?;
            mat.swap(col, pivot);
            let inv = mat[col][col].clone();
            for c in col..=k {
                mat[col][c] = mat[col][c].clone() / inv.clone();
            }
            for r in 0..k {
                if r != col && !mat[r][col].is_zero() {
                    let f = mat[r][col].clone();
                    for c in col..=k {
                        let sub = f.clone() * mat[col][c].clone();
                        mat[r][c] = mat[r][c].clone() - sub;
                    }
                }
            }
        }
        let start_row = pos[&0];
        Some(mat[start_row][k].clone())
    }

    /// f64 elimination fallback for large cyclic systems.
    fn solve_float(&self, transient: &[usize]) -> Option<f64> {
        let k = transient.len();
        let pos: HashMap<usize, usize> =
            transient.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let total = self.corrections as f64;
        let mut mat = vec![vec![0.0f64; k + 1]; k];
        for (row, &s) in transient.iter().enumerate() {
            mat[row][row] = 1.0;
            mat[row][k] = 1.0;
            for &(t, cnt) in &self.edges[s] {
                if let Some(&col) = pos.get(&t) {
                    mat[row][col] -= cnt as f64 / total;
                }
            }
        }
        for col in 0..k {
            let pivot = (col..k).max_by(|&a, &b| {
                mat[a][col].abs().partial_cmp(&mat[b][col].abs()).unwrap()
            })?;
            if mat[pivot][col].abs() < 1e-12 {
                return None;
            }
            mat.swap(col, pivot);
            let inv = mat[col][col];
            for c in col..=k {
                mat[col][c] /= inv;
            }
            for r in 0..k {
                if r != col && mat[r][col].abs() > 0.0 {
                    let f = mat[r][col];
                    for c in col..=k {
                        mat[r][c] -= f * mat[col][c];
                    }
                }
            }
        }
        Some(mat[pos[&0]][k])
    }
}

/// Exact expected depth outcome.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind")]
pub enum ExactOutcome {
    Exact {
        rational: Option<String>,
        value: f64,
    },
    Divergent {
        reason: String,
    },
}

impl ExactOutcome {
    pub fn rational(&self) -> Option<Rational> {
        match self {
            ExactOutcome::Exact {
                rational: Some(s), ..
            } => {
                let mut parts = s.splitn(2, '/');
                let num: BigInt = parts.next()?.parse().ok()?;
                let den: BigInt = parts.next().unwrap_or("1").parse().ok()?;
                Some(Rational::new(num, den))
            }
            _ => None,
        }
    }
    pub fn value(&self) -> Option<f64> {
        match self {
            ExactOutcome::Exact { value, .. } => Some(*value),
            ExactOutcome::Divergent { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactDepthReport {
    pub outcome: ExactOutcome,
    pub states: usize,
    pub transient_states: usize,
    pub chain_depth: usize,
    pub solver: &'static str,
}

/// Threshold below which cyclic systems are solved in exact rationals.
pub const EXACT_SOLVE_STATE_LIMIT: usize = 512;

pub fn exact_expected_depth(
    a: &DenseUnitary,
    scheme: &TeleportScheme,
    state_cap: usize,
    depth_cap: usize,
) -> Result<ExactDepthReport> {
    let graph = build_chain(a, scheme, state_cap, depth_cap)?;
    let transient = graph.transient_indices();
    if graph.absorbing[0] {
        return Ok(ExactDepthReport {
            outcome: ExactOutcome::Exact {
                rational: Some("0".into()),
                value: 0.0,
            },
            states: graph.reps.len(),
            transient_states: transient.len(),
            chain_depth: 0,
            solver: "absorbing-start",
        });
    }
    if !graph.all_reach_absorption() {
        return Ok(ExactDepthReport {
            outcome: ExactOutcome::Divergent {
                reason: "a reachable state cannot reach any Clifford: absorption probability < 1"
                    .into(),
            },
            states: graph.reps.len(),
            transient_states: transient.len(),
            chain_depth: graph.depth_layers,
            solver: "reachability",
        });
    }
    let (rat, solver): (Option<Rational>, &'static str) = if graph.is_dag(&transient) {
        (Some(graph.solve_dag()), "rational-dag")
    } else if transient.len() <= EXACT_SOLVE_STATE_LIMIT {
        (graph.solve_elimination(&transient), "rational-elimination")
    } else {
        (None, "float-elimination")
    };
    let outcome = match (rat, solver) {
        (Some(r), _) => {
            let value = r.to_f64().unwrap_or(f64::NAN);
            let rational = if r.denom().is_one() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            };
            ExactOutcome::Exact {
                rational: Some(rational),
                value,
            }
        }
        (None, "float-elimination") => match graph.solve_float(&transient) {
            Some(v) => ExactOutcome::Exact {
                rational: None,
                value: v,
            },
            None => ExactOutcome::Divergent {
                reason: "transient system is numerically singular".into(),
            },
        },
        (None, _) => ExactOutcome::Divergent {
            reason: "transient system is singular".into(),
        },
    };
    Ok(ExactDepthReport {
        outcome,
        states: graph.reps.len(),
        transient_states: transient.len(),
        chain_depth: graph.depth_layers,
        solver,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct McDepth {
    pub trials: u64,
    pub seed: u64,
    pub mean: f64,
    pub stderr: f64,
    pub max_steps: u32,
    pub censored: u64,
    pub histogram: Vec<(u32, u64)>,
}

/// Simulate trajectories with per-trial deterministic ChaCha streams.
pub fn monte_carlo_depth(
    a: &DenseUnitary,
    scheme: &TeleportScheme,
    trials: u64,
    seed: u64,
    step_cap: u32,
) -> Result<McDepth> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be ≥ 1".into()));
    }
    if a.qubits() != scheme.n {
        return Err(Error::DimensionMismatch {
            left: a.qubits(),
            right: scheme.n,
        });
    }
    let correction_mats: Vec<DenseUnitary> =
        scheme.corrections.iter().map(|p| p.to_matrix()).collect();
    let mut absorb_cache: HashMap<Fingerprint, bool> = HashMap::new();
    let mut state_cache: HashMap<Fingerprint, DenseUnitary> = HashMap::new();
    let start_fp = a.fingerprint();
    absorb_cache.insert(start_fp, clifford::is_clifford(a).is_some());
    state_cache.insert(start_fp, a.clone());

    let mut counts: HashMap<u32, u64> = HashMap::new();
    let mut censored = 0u64;
    let mut sum = 0f64;
    let mut sumsq = 0f64;
    let mut max_steps = 0u32;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial + 1);
        let mut fp = start_fp;
        let mut steps = 0u32;
        while !absorb_cache[&fp] {
            if steps >= step_cap {
                censored += 1;
                break;
            }
            let pick = rng.gen_range(0..correction_mats.len());
            let current = state_cache[&fp].clone();
            let child = current.conjugate(&correction_mats[pick])?;
            steps += 1;
            let child_fp = child.fingerprint();
            if !absorb_cache.contains_key(&child_fp) {
                absorb_cache.insert(child_fp, clifford::is_clifford(&child).is_some());
                state_cache.insert(child_fp, child);
            }
            fp = child_fp;
        }
        sum += f64::from(steps);
        sumsq += f64::from(steps) * f64::from(steps);
        max_steps = max_steps.max(steps);
        *counts.entry(steps).or_insert(0) += 1;
    }
    let tf = trials as f64;
    let mean = sum / tf;
    let var = if trials > 1 {
        ((sumsq - sum * sum / tf) / (tf - 1.0)).max(0.0)
    } else {
        0.0
    };
    let stderr = (var / tf).sqrt();
    let mut histogram: Vec<(u32, u64)> = counts.into_iter().collect();
    histogram.sort_unstable();
    Ok(McDepth {
        trials,
        seed,
        mean,
        stderr,
        max_steps,
        censored,
        histogram,
    })
}

/// `T_1(n,k) = 2^n (1 − (1 − 2^{-n})^{k-2})`.
pub fn t1_closed_form(n: u32, k: u32) -> f64 {
    censored_geometric_closed(1.0 / f64::from(1u32 << n).max(1.0), k)
}

/// `T_2(n,k) = 4^n (1 − (1 − 4^{-n})^{k-2})`.
pub fn t2_closed_form(n: u32, k: u32) -> f64 {
    censored_geometric_closed(4f64.powi(-(n as i32)), k)
}

fn censored_geometric_closed(p: f64, k: u32) -> f64 {
    if k <= 2 {
        return 0.0;
    }
    (1.0 - (1.0 - p).powi(k as i32 - 2)) / p
}

/// The two-term summation form of the same expectation:
/// p·Σ_{s=1}^{k-3} s(1-p)^{s-1} + (k-2)(1-p)^{k-3}.
pub fn censored_geometric_summation(p: f64, k: u32) -> f64 {
    if k <= 2 {
        return 0.0;
    }
    let q = 1.0 - p;
    let mut sum = 0.0;
    for s in 1..=(k - 3) as i64 {
        sum += s as f64 * q.powi(s as i32 - 1);
    }
    p * sum + f64::from(k - 2) * q.powi(k as i32 - 3)
}

pub fn t1_summation_form(n: u32, k: u32) -> f64 {
    censored_geometric_summation(1.0 / f64::from(1u32 << n), k)
}

pub fn t2_summation_form(n: u32, k: u32) -> f64 {
    censored_geometric_summation(4f64.powi(-(n as i32)), k)
}

#[derive(Debug, Clone, Serialize)]
pub struct QftDepthBound {
    pub qubits: u32,
    /// (block size j, T_1(j, j+1)) for j = 2..n.
    pub per_block: Vec<(u32, f64)>,
    pub total: f64,
    pub reference: f64,
}

/// Block-teleportation bound for the n-qubit QFT: each block of size j is a
/// semi-Clifford C_{j+1} gate teleported by the one-bit scheme.
pub fn qft_depth_bound(n: u32) -> Result<QftDepthBound> {
    if n < 2 {
        return Err(Error::InvalidParameter("qft bound needs n ≥ 2".into()));
    }
    let per_block: Vec<(u32, f64)> = (2..=n).map(|j| (j, t1_closed_form(j, j + 1))).collect();
    let total = per_block.iter().map(|(_, v)| v).sum();
    Ok(QftDepthBound {
        qubits: n,
        per_block,
        total,
        reference: f64::from(n * (n - 1)) / 2.0 - 1.0,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct UcrDepthBound {
    pub qubits: u32,
    pub k: u32,
    /// Direct one-bit teleportation bound T_1(n, k).
    pub bound: f64,
    /// Generic large-k cap 2^n.
    pub generic_cap: f64,
    /// Bound at k = c·n scales linearly in n for fixed c.
    pub linear_when_k_proportional: bool,
}

pub fn ucr_depth_bound(n: u32, k: u32) -> UcrDepthBound {
    UcrDepthBound {
        qubits: n,
        k,
        bound: t1_closed_form(n, k),
        generic_cap: f64::from(1u32 << n),
        linear_when_k_proportional: true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WFamily {
    WK,
    WKDagger,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossoverRow {
    pub k: u32,
    pub direct_two_bit: f64,
    pub direct_rational: Option<String>,
    pub separate_one_bit: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossoverReport {
    pub family: WFamily,
    pub rows: Vec<CrossoverRow>,
    /// Smallest scanned k at which teleporting the pieces separately beats
    /// direct two-bit teleportation.
    pub crossover_k: Option<u32>,
}

/// Direct two-bit teleportation of W_k (or its dagger) versus teleporting
/// the Toffoli and the target rotation separately with the one-bit scheme.
pub fn compare_schemes(
    h: &Hierarchy,
    family: WFamily,
    ks: impl IntoIterator<Item = u32>,
) -> Result<CrossoverReport> {
    let toffoli = crate::gates::toffoli();
    let tof_scheme = TeleportScheme::one_bit_for_gate(h, &toffoli)?;
    let tof_exact = exact_expected_depth(&toffoli, &tof_scheme, 4096, 64)?;
    let tof_value = tof_exact
        .outcome
        .value()
        .ok_or_else(|| Error::InvalidParameter("Toffoli chain diverged".into()))?;

    let mut rows = Vec::new();
    let mut crossover = None;
    for k in ks {
        let gate = match family {
            WFamily::WK => crate::gates::w_k(k)?,
            WFamily::WKDagger => crate::gates::w_k(k)?.dagger(),
        };
        let direct = exact_expected_depth(&gate, &TeleportScheme::two_bit(3), 4096, 64)?;
        let direct_value = direct
            .outcome
            .value()
            .ok_or_else(|| Error::InvalidParameter("W_k chain diverged".into()))?;
        let v = crate::gates::s_k(k)?;
        let v_scheme = TeleportScheme::one_bit_for_gate(h, &v)?;
        let v_exact = exact_expected_depth(&v, &v_scheme, 4096, 64)?;
        let separate = tof_value
            + v_exact
                .outcome
                .value()
                .ok_or_else(|| Error::InvalidParameter("rotation chain diverged".into()))?;
        if crossover.is_none() && separate < direct_value {
            crossover = Some(k);
        }
        rows.push(CrossoverRow {
            k,
            direct_two_bit: direct_value,
            direct_rational: match &direct.outcome {
                ExactOutcome::Exact { rational, .. } => rational.clone(),
                ExactOutcome::Divergent { .. } => None,
            },
            separate_one_bit: separate,
        });
    }
    Ok(CrossoverReport {
        family,
        rows,
        crossover_k: crossover,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DepthReport {
    pub gate: String,
    pub scheme: SchemeKind,
    pub qubits: usize,
    pub level: Option<crate::hierarchy::HierarchyLevel>,
    pub analytic_bound: Option<f64>,
    pub exact: ExactDepthReport,
    pub mc: Option<McDepth>,
}

/// Assemble the full report for one gate: closed-form bound at its level,
/// exact chain solve, and optional Monte Carlo statistics.
#[allow(clippy::too_many_arguments)]
pub fn depth_report(
    h: &Hierarchy,
    gate_name: &str,
    u: &DenseUnitary,
    kind: SchemeKind,
    k_max: u32,
    trials: u64,
    seed: u64,
    state_cap: usize,
    step_cap: u32,
) -> Result<DepthReport> {
    let scheme = match kind {
        SchemeKind::TwoBit => TeleportScheme::two_bit(u.qubits()),
        SchemeKind::OneBit => TeleportScheme::one_bit_for_gate(h, u)?,
    };
    let level = h.level(u, k_max).ok();
    let analytic_bound = level.and_then(|l| l.exact()).map(|k| match kind {
        SchemeKind::OneBit => t1_closed_form(u.qubits() as u32, k),
        SchemeKind::TwoBit => t2_closed_form(u.qubits() as u32, k),
    });
    let exact = exact_expected_depth(u, &scheme, state_cap, 64)?;
    let mc = if trials > 0 {
        Some(monte_carlo_depth(u, &scheme, trials, seed, step_cap)?)
    } else {
        None
    };
    Ok(DepthReport {
        gate: gate_name.to_string(),
        scheme: kind,
        qubits: u.qubits(),
        level,
        analytic_bound,
        exact,
        mc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;

    fn ratio(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn closed_form_matches_summation_form() {
        for n in 1..=4u32 {
            for k in 2..=12u32 {
                let a = t1_closed_form(n, k);
                let b = t1_summation_form(n, k);
                assert!((a - b).abs() < 1e-10, "t1 n={n} k={k}: {a} vs {b}");
                let a = t2_closed_form(n, k);
                let b = t2_summation_form(n, k);
                assert!((a - b).abs() < 1e-10, "t2 n={n} k={k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn closed_form_values() {
        for k in 3..=10u32 {
            let expect = 4.0 * (1.0 - (0.75f64).powi(k as i32 - 2));
            assert!((t1_closed_form(2, k) - expect).abs() < 1e-12);
        }
        for n in 1..=4 {
            assert_eq!(t1_closed_form(n, 2), 0.0);
            assert_eq!(t2_closed_form(n, 2), 0.0);
        }
        // Limits 2^n and 4^n.
        assert!((t1_closed_form(1, 60) - 2.0).abs() < 1e-6);
        assert!((t2_closed_form(1, 200) - 4.0).abs() < 1e-2);
        // Stochastic dominance t1 ≤ t2.
        for n in 1..=4 {
            for k in 2..=12 {
                assert!(t1_closed_form(n, k) <= t2_closed_form(n, k) + 1e-12);
            }
        }
    }

    #[test]
    fn teleport_step_of_clifford_terminates_everywhere() {
        let scheme = TeleportScheme::two_bit(1);
        let outcomes = teleport_step(&gates::s(), &scheme).unwrap();
        for (child, _) in &outcomes {
            assert!(clifford::is_clifford(child).is_some());
        }
    }

    #[test]
    fn teleport_step_of_t_all_clifford_two_pauli() {
        // T is level 3, so every conjugate is Clifford by definition; the
        // images of I and Z are Pauli while the X-type images are the
        // SX-class Cliffords.
        let scheme = TeleportScheme::two_bit(1);
        let outcomes = teleport_step(&gates::t(), &scheme).unwrap();
        let total: Rational = outcomes.iter().map(|(_, p)| p.clone()).sum();
        assert_eq!(total, Rational::one());
        let mut clifford_mass = Rational::zero();
        let mut pauli_mass = Rational::zero();
        for (child, p) in &outcomes {
            if clifford::is_clifford(child).is_some() {
                clifford_mass += p.clone();
            }
            if pauli::from_matrix(child).is_some() {
                pauli_mass += p.clone();
            }
        }
        assert_eq!(clifford_mass, Rational::one());
        assert_eq!(pauli_mass, ratio(1, 2));
    }

    #[test]
    fn exact_depth_of_clifford_is_zero_and_t_is_one() {
        let scheme = TeleportScheme::two_bit(1);
        let rep = exact_expected_depth(&gates::h(), &scheme, 1024, 64).unwrap();
        assert_eq!(rep.outcome.value(), Some(0.0));
        let rep = exact_expected_depth(&gates::t(), &scheme, 1024, 64).unwrap();
        assert_eq!(rep.outcome.rational().unwrap(), ratio(1, 1));
    }

    #[test]
    fn one_bit_scheme_matches_closed_form_for_s_k() {
        let h = Hierarchy::new();
        for k in 3..=8u32 {
            let gate = gates::s_k(k).unwrap();
            let scheme = TeleportScheme::one_bit_for_gate(&h, &gate).unwrap();
            assert_eq!(scheme.corrections().len(), 2);
            let rep = exact_expected_depth(&gate, &scheme, 1024, 64).unwrap();
            let expect = 2.0 * (1.0 - 0.5f64.powi(k as i32 - 2));
            assert!(
                (rep.outcome.value().unwrap() - expect).abs() < 1e-12,
                "k={k}"
            );
        }
    }

    #[test]
    fn one_bit_requires_semi_clifford() {
        let h = Hierarchy::new();
        let w3 = gates::w_k(3).unwrap();
        assert!(matches!(
            TeleportScheme::one_bit_for_gate(&h, &w3),
            Err(Error::SchemeInapplicable)
        ));
    }

    #[test]
    fn toffoli_one_bit_depth_is_one() {
        let h = Hierarchy::new();
        let tof = gates::toffoli();
        let scheme = TeleportScheme::one_bit_for_gate(&h, &tof).unwrap();
        let rep = exact_expected_depth(&tof, &scheme, 4096, 64).unwrap();
        assert_eq!(rep.outcome.rational().unwrap(), ratio(1, 1));
    }

    #[test]
    fn chain_probabilities_sum_to_one() {
        let scheme = TeleportScheme::two_bit(3);
        let outcomes = teleport_step(&gates::w_k(3).unwrap(), &scheme).unwrap();
        let total: Rational = outcomes.iter().map(|(_, p)| p.clone()).sum();
        assert_eq!(total, Rational::one());
    }

    #[test]
    fn monte_carlo_matches_exact_for_t() {
        let scheme = TeleportScheme::two_bit(1);
        let mc = monte_carlo_depth(&gates::t(), &scheme, 2000, 42, 16).unwrap();
        assert_eq!(mc.censored, 0);
        assert_eq!(mc.mean, 1.0);
        assert_eq!(mc.max_steps, 1);
        let mc2 = monte_carlo_depth(&gates::t(), &scheme, 2000, 42, 16).unwrap();
        assert_eq!(mc.mean, mc2.mean);
    }

    #[test]
    fn trajectories_bounded_by_level_minus_two() {
        let scheme = TeleportScheme::two_bit(3);
        let w4 = gates::w_k(4).unwrap(); // level 5
        let mc = monte_carlo_depth(&w4, &scheme, 500, 7, 32).unwrap();
        assert_eq!(mc.censored, 0);
        assert!(mc.max_steps <= 3, "level-5 gate exceeded 3 steps");
    }

    #[test]
    fn chain_levels_decrease_strictly() {
        let h = Hierarchy::new();
        let scheme = TeleportScheme::two_bit(3);
        let w3 = gates::w_k(3).unwrap(); // level 4
        for (child, _) in teleport_step(&w3, &scheme).unwrap() {
            let lvl = h.level(&child, 6).unwrap().exact().unwrap();
            assert!(lvl <= 3);
        }
    }

    #[test]
    fn qft_bound_examples() {
        let b = qft_depth_bound(2).unwrap();
        assert!((b.total - 1.0).abs() < 1e-12);
        let b = qft_depth_bound(8).unwrap();
        assert!((b.total - b.reference).abs() <= 1.0);
    }

    #[test]
    fn ucr_bound_behavior() {
        assert_eq!(ucr_depth_bound(3, 2).bound, 0.0);
        let b = ucr_depth_bound(4, 400);
        assert!((b.bound - 16.0).abs() < 1e-3);
        assert_eq!(b.generic_cap, 16.0);
        let b = ucr_depth_bound(4, 12);
        assert!((b.bound - t1_closed_form(4, 12)).abs() < 1e-12);
    }
}
