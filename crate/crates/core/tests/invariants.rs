//! Cross-module invariants: the conjugation-cascade identities for the
//! Toffoli-series gates, the single-qubit closure harness, fingerprint
//! collision audits, and closed-form cross-checks.

use chl::clifford;
use chl::depth;
use chl::gates;
use chl::hierarchy::{Hierarchy, HierarchyLevel};
use chl::matrix::{DenseUnitary, DEFAULT_FP_GRID};
use chl::pauli::PauliOp;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[test]
fn rc3_x0_conjugate_factors_as_clifford_times_rc2() {
    let rc3 = gates::r_c3();
    let x0 = PauliOp::single(3, 0, 'X').unwrap().to_matrix();
    let image = rc3.conjugate(&x0).unwrap();
    assert!(clifford::is_clifford(&image).is_none());
    // image = L · r_c2 with L Clifford.
    let l = image.compose(&gates::r_c2().dagger()).unwrap();
    assert!(clifford::is_clifford(&l).is_some());
}

#[test]
fn rc2_dagger_conjugation_gives_back_rc2() {
    let rc2 = gates::r_c2();
    let x0 = PauliOp::single(3, 0, 'X').unwrap().to_matrix();
    // Conjugating X_0 by r_c2† gives back the r_c2 class (a Clifford on
    // the right), so conjugation never leaves the non-Clifford coset and
    // the cascade sits outside the hierarchy.
    let image = rc2.dagger().conjugate(&x0).unwrap();
    assert!(clifford::is_clifford(&image).is_none());
    let l = rc2.dagger().compose(&image).unwrap();
    assert!(clifford::is_clifford(&l).is_some());
    // Conjugating by r_c2 itself reproduces the class as well.
    let image = rc2.conjugate(&x0).unwrap();
    let l = image.compose(&rc2.dagger()).unwrap();
    assert!(clifford::is_clifford(&l).is_some());
}

#[test]
fn rc_gates_sit_outside_the_hierarchy() {
    let h = Hierarchy::new();
    assert_eq!(
        h.level(&gates::r_c3(), 6).unwrap(),
        HierarchyLevel::Beyond(6)
    );
    assert_eq!(
        h.level(&gates::r_c2(), 6).unwrap(),
        HierarchyLevel::Beyond(6)
    );
}

#[test]
fn single_qubit_hierarchy_closure_matches_prop7() {
    // Every Clifford sandwich of S_k for k = 3..5 sits at level exactly k
    // and stays semi-Clifford; for k = 2 the sandwich stays Clifford.
    let h = Hierarchy::new();
    let classes = clifford::single_qubit_classes();
    for k in 2..=5u32 {
        let sk = gates::s_k(k).unwrap();
        for l1 in classes.iter() {
            for l2 in classes.iter() {
                let u = l1.compose(&sk).unwrap().compose(l2).unwrap();
                let lvl = h.level(&u, 6).unwrap().exact().expect("in hierarchy");
                if k >= 3 {
                    assert_eq!(lvl, k);
                } else {
                    assert!(lvl <= 2);
                }
                assert!(h.is_semi_clifford(&u).unwrap().is_some());
            }
        }
    }
}

#[test]
fn classify_single_qubit_agrees_with_recursive_level() {
    let h = Hierarchy::new();
    let classes = clifford::single_qubit_classes();
    let mut rng = ChaCha8Rng::seed_from_u64(314159);
    for _ in 0..1000 {
        let k = rng.gen_range(2..=5u32);
        let l1 = &classes[rng.gen_range(0..classes.len())];
        let l2 = &classes[rng.gen_range(0..classes.len())];
        let u = l1
            .compose(&gates::s_k(k).unwrap())
            .unwrap()
            .compose(l2)
            .unwrap();
        let lvl = h.level(&u, 6).unwrap().exact().unwrap();
        let (_, ck, _) = gates::classify_single_qubit(&u, 6).expect("hierarchy gate");
        if lvl >= 3 {
            assert_eq!(ck, lvl);
        } else {
            assert_eq!(ck, 2);
            assert!(lvl <= 2);
        }
    }
}

#[test]
fn fingerprint_collision_audit_on_zoo_products() {
    // 10^6 random products of three-qubit zoo gates: equal keys must come
    // from phase-equal matrices. A secondary independently-mixed hash of
    // the same quantized lattice catches any primary-key collision.
    let zoo: Vec<DenseUnitary> = vec![
        gates::h().embed(&[0], 3).unwrap(),
        gates::h().embed(&[2], 3).unwrap(),
        gates::s().embed(&[1], 3).unwrap(),
        gates::t().embed(&[0], 3).unwrap(),
        gates::cnot().embed(&[0, 1], 3).unwrap(),
        gates::cnot().embed(&[2, 1], 3).unwrap(),
        gates::cs().embed(&[1, 2], 3).unwrap(),
        gates::toffoli(),
        gates::ccz(),
        gates::w_k(3).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let mut seen: std::collections::HashMap<u128, u64> = std::collections::HashMap::new();
    let mut current = DenseUnitary::identity(3);
    let mut collisions = 0u64;
    for _ in 0..1_000_000u64 {
        current = current
            .compose(&zoo[rng.gen_range(0..zoo.len())])
            .unwrap();
        let fp = current.fingerprint().0;
        let second = current.fingerprint_secondary(DEFAULT_FP_GRID);
        match seen.get(&fp) {
            Some(&s2) if s2 != second => collisions += 1,
            Some(_) => {}
            None => {
                seen.insert(fp, second);
            }
        }
        // Keep the walk numerically clean.
        if seen.len() % 65536 == 0 {
            current = current.clone().with_tol(1e-9);
        }
    }
    assert_eq!(collisions, 0, "fingerprint collision detected");
}

#[test]
fn t1_two_forms_agree_and_qft_blocks_are_semi_clifford() {
    for n in 1..=4u32 {
        for k in 2..=12u32 {
            let closed = depth::t1_closed_form(n, k);
            let summed = depth::t1_summation_form(n, k);
            assert!((closed - summed).abs() < 1e-10);
        }
    }
    // The two-qubit QFT block (H + controlled-R_2) is semi-Clifford.
    let h = Hierarchy::new();
    let block = gates::qft_block(4, 3).unwrap();
    assert_eq!(block.qubits(), 2);
    assert!(h.is_semi_clifford(&block).unwrap().is_some());
    assert_eq!(h.level(&block, 6).unwrap(), HierarchyLevel::Exact(3));
    // Block sizes and levels match the n-j+1 / n-j+2 pattern (the level
    // classifier covers blocks up to three qubits).
    for (j, expect_level) in [(2usize, 4u32), (3, 3), (4, 2)] {
        let b = gates::qft_block(4, j).unwrap();
        assert_eq!(b.qubits(), 4 - j + 1);
        assert_eq!(
            h.level(&b, 6).unwrap(),
            HierarchyLevel::Exact(expect_level),
            "block {j}"
        );
    }
    assert_eq!(gates::qft_block(4, 1).unwrap().qubits(), 4);
}

#[test]
fn w4_is_level_five_and_excluded_from_c3_sampling() {
    let h = Hierarchy::new();
    let w4 = gates::w_k(4).unwrap();
    assert_eq!(h.level(&w4, 6).unwrap(), HierarchyLevel::Exact(5));
    assert!(!h.is_in_ck(&w4, 3).unwrap());
}

#[test]
fn theorem3_witnesses_levels_and_verdicts() {
    let h = Hierarchy::new();
    for k in [3u32, 4, 5] {
        let w = gates::w_k(k).unwrap();
        assert_eq!(
            h.level(&w, 8).unwrap(),
            HierarchyLevel::Exact(k + 1),
            "w_k({k})"
        );
        assert!(h.is_semi_clifford(&w).unwrap().is_none(), "w_k({k})");
        assert!(
            h.is_generalized_semi_clifford(&w).unwrap().is_some(),
            "w_k({k})"
        );
    }
}

#[test]
fn prop5_equivalence_on_witnessed_gates() {
    // Wherever the subgroup search succeeds, the constructive sandwich
    // diagonalizes; where it fails, no sandwich may exist (checked on the
    // W-family counterexamples above).
    let h = Hierarchy::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    for _ in 0..25 {
        let n = rng.gen_range(1..=2usize);
        let d = chl::sampling::random_diagonal_ck(n, 3, &mut rng);
        let l1 = chl::sampling::random_clifford(n, &mut rng);
        let l2 = chl::sampling::random_clifford(n, &mut rng);
        let u = l1.compose(&d).unwrap().compose(&l2).unwrap();
        let w = h.is_semi_clifford(&u).unwrap().expect("sandwich of diagonal");
        let diag = h.semi_clifford_diagonalize(&u, &w).unwrap();
        assert!(diag.v.is_diagonal());
        // The sandwich factors are genuine Cliffords.
        assert!(clifford::is_clifford(&diag.l1.unitary).is_some());
        assert!(clifford::is_clifford(&diag.l2.unitary).is_some());
    }
}

#[test]
fn lambda_rotation_levels_match_m_plus_n_minus_1() {
    let h = Hierarchy::new();
    for (m_ctrl, m_rot, expect) in [
        (1usize, 2u32, 3u32),
        (2, 2, 4),
        (1, 3, 4),
        (2, 3, 5),
    ] {
        let g = gates::lambda_controlled(m_ctrl, &gates::r_k(m_rot).unwrap()).unwrap();
        assert_eq!(
            h.level(&g, 8).unwrap(),
            HierarchyLevel::Exact(expect),
            "Λ_{m_ctrl}(R_{m_rot})"
        );
    }
}

#[test]
fn mc_consistency_with_exact_solver() {
    let h = Hierarchy::new();
    let _ = &h;
    let scheme = depth::TeleportScheme::two_bit(3);
    let w3 = gates::w_k(3).unwrap();
    let exact = depth::exact_expected_depth(&w3, &scheme, 8192, 64).unwrap();
    let mc = depth::monte_carlo_depth(&w3, &scheme, 20_000, 99, 16).unwrap();
    let e = exact.outcome.value().unwrap();
    assert!((mc.mean - e).abs() <= 4.0 * mc.stderr.max(1e-9));
    assert_eq!(mc.censored, 0);
}

#[test]
fn one_bit_depth_report_for_semi_clifford_gate() {
    let h = Hierarchy::new();
    let report = depth::depth_report(
        &h,
        "toffoli",
        &gates::toffoli(),
        depth::SchemeKind::OneBit,
        6,
        5_000,
        12345,
        4096,
        16,
    )
    .unwrap();
    assert_eq!(report.exact.outcome.value(), Some(1.0));
    let mc = report.mc.unwrap();
    assert_eq!(mc.mean, 1.0);
    // Analytic bound at (n=3, k=3): T_1(3,3) = 1.
    assert!((report.analytic_bound.unwrap() - 1.0).abs() < 1e-12);
}
