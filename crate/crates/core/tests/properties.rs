//! Property-based checks of the algebraic and numerical invariants.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{SMatrix, SymmetricEigen};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cbit_recovery::bloch::{pauli, sample_uniform_sphere};
use cbit_recovery::eigen::{hermitian_eigenvalues_4, symmetric_eigenvalues};
use cbit_recovery::fidelity::cap_coefficients;
use cbit_recovery::numerics::golden_section_max;
use cbit_recovery::optimizer::best_recovery_at;
use cbit_recovery::{
    amplitude_damping_channel, apply, average_fidelity_closed_form, bloch_to_density,
    check_necessary_conditions, choi_matrix, compose, contracts_ball, density_to_bloch,
    fidelity_pure_vs_mixed, is_completely_positive, max_output_norm, optimal_k_cap,
    optimize_at_alpha, AffineQubitChannel, BlochVector, Cap, CapPartition, DiagonalChannelParams,
    Pole, SchemeConfig, PSD_TOLERANCE,
};

fn unit_vector() -> impl Strategy<Value = BlochVector> {
    (-1.0..=1.0_f64, 0.0..(2.0 * PI)).prop_map(|(z, phi)| {
        let rho = (1.0 - z * z).max(0.0).sqrt();
        BlochVector::new(rho * phi.cos(), rho * phi.sin(), z)
    })
}

fn ball_vector() -> impl Strategy<Value = BlochVector> {
    (unit_vector(), 0.0..=1.0_f64).prop_map(|(n, s)| n * s)
}

fn affine_channel() -> impl Strategy<Value = AffineQubitChannel> {
    (prop::array::uniform3(prop::array::uniform3(-1.0..1.0_f64)), prop::array::uniform3(-1.0..1.0_f64))
        .prop_map(|(m, b)| AffineQubitChannel::new(m, b))
}

fn pole() -> impl Strategy<Value = Pole> {
    prop_oneof![Just(Pole::North), Just(Pole::South)]
}

/// Rotation matrix about unit `axis` by `angle` (Rodrigues).
fn rotation(axis: BlochVector, angle: f64) -> [[f64; 3]; 3] {
    let [x, y, z] = axis.to_array();
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
        [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
        [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
    ]
}

fn rotate(m: &[[f64; 3]; 3], v: BlochVector) -> BlochVector {
    AffineQubitChannel::new(*m, [0.0; 3]).map_point(v)
}

fn close(a: BlochVector, b: BlochVector, tol: f64) -> bool {
    (a - b).norm() <= tol
}

proptest! {
    #[test]
    fn density_round_trip(r in ball_vector()) {
        let back = density_to_bloch(&bloch_to_density(r).unwrap()).unwrap();
        prop_assert!(close(back, r, 1e-12));
    }

    #[test]
    fn fidelity_matches_matrix_expression(n in unit_vector(), r in ball_vector()) {
        let rho = bloch_to_density(r).unwrap();
        let target = bloch_to_density(n).unwrap();
        let mut overlap = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                overlap += target.entries()[i][j] * rho.entries()[j][i];
            }
        }
        let f = fidelity_pure_vs_mixed(n, r).unwrap();
        prop_assert!((f - overlap.re).abs() <= 1e-12);
        prop_assert!(overlap.im.abs() <= 1e-12);
        prop_assert!((-1e-15..=1.0 + 1e-15).contains(&f));
    }

    #[test]
    fn fidelity_is_rotation_invariant(
        n in unit_vector(),
        r in ball_vector(),
        axis in unit_vector(),
        angle in 0.0..(2.0 * PI),
    ) {
        let rot = rotation(axis, angle);
        let before = fidelity_pure_vs_mixed(n, r).unwrap();
        let rn = rotate(&rot, n).normalized();
        let rr = rotate(&rot, r);
        let after = fidelity_pure_vs_mixed(rn, rr * (1.0 / rr.norm().max(1.0))).unwrap();
        prop_assert!((before - after).abs() <= 1e-12);
    }

    #[test]
    fn compose_is_associative(a in affine_channel(), b in affine_channel(), c in affine_channel()) {
        let left = compose(&compose(&a, &b), &c);
        let right = compose(&a, &compose(&b, &c));
        for i in 0..3 {
            prop_assert!((left.shift[i] - right.shift[i]).abs() <= 1e-12);
            for j in 0..3 {
                prop_assert!((left.matrix[i][j] - right.matrix[i][j]).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn compose_matches_sequential_application(
        k1 in 0.0..=1.0_f64,
        k2 in 0.0..=1.0_f64,
        p1 in pole(),
        p2 in pole(),
        r in ball_vector(),
    ) {
        let first = amplitude_damping_channel(k1, p1).unwrap();
        let second = amplitude_damping_channel(k2, p2).unwrap();
        let stepwise = apply(&second, apply(&first, r).unwrap()).unwrap();
        let joint = apply(&compose(&second, &first), r).unwrap();
        prop_assert!(close(stepwise, joint, 1e-12));
    }

    #[test]
    fn choi_matrix_is_linear_in_mixtures(
        a in affine_channel(),
        b in affine_channel(),
        lambda in 0.0..=1.0_f64,
    ) {
        let mixed = choi_matrix(&a.mix(&b, lambda));
        let (ca, cb) = (choi_matrix(&a), choi_matrix(&b));
        for i in 0..4 {
            for j in 0..4 {
                let expected = ca[i][j] * lambda + cb[i][j] * (1.0 - lambda);
                prop_assert!((mixed[i][j] - expected).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn choi_matrix_has_trace_two_and_hermitian(ch in affine_channel()) {
        let c = choi_matrix(&ch);
        let trace: Complex64 = (0..4).map(|i| c[i][i]).sum();
        prop_assert!((trace - Complex64::new(2.0, 0.0)).norm() <= 1e-12);
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((c[i][j] - c[j][i].conj()).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn necessary_condition_failures_are_not_cp(
        gamma in 0.0..=1.2_f64,
        delta in 0.0..=1.2_f64,
        k in 0.0..=1.2_f64,
        pole in pole(),
    ) {
        let p = DiagonalChannelParams { gamma, delta, k, pole };
        if p.condition_violation() > 1e-9 {
            prop_assert!(!check_necessary_conditions(&p));
            prop_assert!(!is_completely_positive(&p.to_channel(), PSD_TOLERANCE));
        }
    }

    #[test]
    fn saturating_family_is_cp(k in 0.0..=1.0_f64, pole in pole()) {
        let ch = amplitude_damping_channel(k, pole).unwrap();
        prop_assert!(is_completely_positive(&ch, PSD_TOLERANCE));
        prop_assert!(max_output_norm(&ch) <= 1.0 + 1e-9);
    }

    #[test]
    fn closed_form_symmetric_at_hemisphere_split(
        alpha in 0.0..=1.0_f64,
        k in 0.0..=1.0_f64,
        kp in 0.0..=1.0_f64,
    ) {
        let f = average_fidelity_closed_form(&SchemeConfig::new(alpha, FRAC_PI_2, k, kp).unwrap());
        let g = average_fidelity_closed_form(&SchemeConfig::new(alpha, FRAC_PI_2, kp, k).unwrap());
        prop_assert!((f - g).abs() <= 1e-14);
    }

    #[test]
    fn closed_form_in_unit_interval(
        alpha in 0.0..=1.0_f64,
        beta in 0.0..=FRAC_PI_2,
        k in 0.0..=1.0_f64,
        kp in 0.0..=1.0_f64,
    ) {
        let f = average_fidelity_closed_form(&SchemeConfig::new(alpha, beta, k, kp).unwrap());
        prop_assert!((0.0..=1.0 + 1e-15).contains(&f));
    }

    #[test]
    fn inner_optimum_beats_any_recovery(
        alpha in 0.0..=1.0_f64,
        beta in 0.0..=FRAC_PI_2,
        k in 0.0..=1.0_f64,
        kp in 0.0..=1.0_f64,
    ) {
        let (_, _, best) = best_recovery_at(alpha, beta);
        let f = average_fidelity_closed_form(&SchemeConfig::new(alpha, beta, k, kp).unwrap());
        prop_assert!(best >= f - 1e-12);
    }

    #[test]
    fn optimal_k_agrees_with_golden_section(alpha in 0.0..=1.0_f64, beta in 0.0..=FRAC_PI_2) {
        let (north, south) = cap_coefficients(beta);
        for cap in [north, south] {
            let k = optimal_k_cap(alpha, cap.p, cap.q, cap.r).unwrap();
            let (_, f_golden) = golden_section_max(|k| cap.gain(alpha, k), 0.0, 1.0, 1e-12);
            prop_assert!(cap.gain(alpha, k) >= f_golden - 1e-12);
        }
    }

    #[test]
    fn reported_recoveries_are_cp(alpha in 0.0..=1.0_f64) {
        let r = optimize_at_alpha(alpha, 401).unwrap();
        let cfg = r.config();
        for cap in [Cap::North, Cap::South] {
            let ch = cfg.recovery(cap);
            prop_assert!(is_completely_positive(&ch, PSD_TOLERANCE));
            prop_assert!(contracts_ball(&ch));
        }
        prop_assert!((average_fidelity_closed_form(&cfg) - r.f_bar).abs() <= 1e-12);
    }

    #[test]
    fn jacobi_matches_nalgebra(entries in prop::array::uniform8(prop::array::uniform8(-5.0..5.0_f64))) {
        let mut sym = [[0.0; 8]; 8];
        for i in 0..8 {
            for j in 0..8 {
                sym[i][j] = 0.5 * (entries[i][j] + entries[j][i]);
            }
        }
        let ours = symmetric_eigenvalues(sym);
        let m = SMatrix::<f64, 8, 8>::from_fn(|i, j| sym[i][j]);
        let mut theirs: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.iter().zip(&theirs) {
            prop_assert!((a - b).abs() <= 1e-10, "{ours:?} vs {theirs:?}");
        }
    }

    #[test]
    fn hermitian_eigenvalues_match_nalgebra(ch in affine_channel()) {
        let c = choi_matrix(&ch);
        let ours = hermitian_eigenvalues_4(&c);
        let m = nalgebra::Matrix4::from_fn(|i, j| nalgebra::Complex::new(c[i][j].re, c[i][j].im));
        let mut theirs: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (a, b) in ours.iter().zip(&theirs) {
            prop_assert!((a - b).abs() <= 1e-10, "{ours:?} vs {theirs:?}");
        }
    }
}

#[test]
fn cp_channels_contract_sampled_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let step = 1.0 / 9.0;
    let mut checked = 0;
    for a in 0..10 {
        for b in 0..10 {
            for c in 0..10 {
                let p = DiagonalChannelParams {
                    gamma: a as f64 * step,
                    delta: b as f64 * step,
                    k: c as f64 * step,
                    pole: Pole::North,
                };
                let ch = p.to_channel();
                if !is_completely_positive(&ch, PSD_TOLERANCE) {
                    continue;
                }
                checked += 1;
                for _ in 0..100 {
                    let out = ch.map_point(sample_uniform_sphere(&mut rng));
                    assert!(out.norm() <= 1.0 + 1e-12, "{p:?} maps outside the ball");
                }
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn closed_form_nondecreasing_in_alpha() {
    for bi in 0..50 {
        let beta = FRAC_PI_2 * bi as f64 / 49.0;
        for ki in 0..50 {
            let k = ki as f64 / 49.0;
            let kp = 1.0 - k;
            let mut prev = f64::NEG_INFINITY;
            for ai in 0..=20 {
                let alpha = ai as f64 / 20.0;
                let f = average_fidelity_closed_form(&SchemeConfig::new(alpha, beta, k, kp).unwrap());
                assert!(f >= prev - 1e-15, "beta={beta} k={k} alpha={alpha}");
                prev = f;
            }
        }
    }
}

#[test]
fn cap_classification_matches_overlap_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..100_000 {
        let beta = FRAC_PI_2 * (i % 1000) as f64 / 999.0;
        let part = CapPartition::new(beta).unwrap();
        let n = if i % 2 == 0 {
            sample_uniform_sphere(&mut rng)
        } else {
            // Points just off the cap boundary on either side.
            let offset = if i % 4 == 1 { 1e-9 } else { -1e-9 };
            let z = (beta.cos() + offset).clamp(-1.0, 1.0);
            let phi = i as f64;
            let rho = (1.0 - z * z).sqrt();
            BlochVector::new(rho * phi.cos(), rho * phi.sin(), z)
        };
        let overlap = 0.5 * (1.0 + n.z);
        let threshold = (0.5 * beta).cos().powi(2);
        if (overlap - threshold).abs() < 1e-12 {
            continue;
        }
        let expected = if overlap >= threshold { Cap::North } else { Cap::South };
        assert_eq!(part.classify(n), expected, "beta={beta} n={n:?}");
    }
}

#[test]
fn pauli_matrices_anticommute() {
    let p = pauli();
    for a in 0..3 {
        for b in 0..3 {
            for i in 0..2 {
                for j in 0..2 {
                    let mut s = Complex64::new(0.0, 0.0);
                    for m in 0..2 {
                        s += p[a][i][m] * p[b][m][j] + p[b][i][m] * p[a][m][j];
                    }
                    let expected = if a == b && i == j { 2.0 } else { 0.0 };
                    assert!((s - Complex64::new(expected, 0.0)).norm() < 1e-15);
                }
            }
        }
    }
}
