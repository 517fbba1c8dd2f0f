use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::*;
use crate::analytic::{laplacian_circle, steklov_disk, AnalyticDomain};
use crate::fem::FemProblem;
use crate::mesh::{generate, DomainShape};

const DISK: AnalyticDomain = AnalyticDomain::Disk { radius: 1.0 };
const ANNULUS: AnalyticDomain = AnalyticDomain::Annulus {
    r_inner: 0.5,
    r_outer: 1.0,
};
const L: f64 = 2.0 * PI;

fn disk() -> SpectraBundle {
    SpectraBundle::analytic(DISK, 60).unwrap()
}

fn disk_topo() -> DomainTopology {
    DomainTopology::simply_connected()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

#[test]
fn thm1_examples() {
    let b = disk();
    let t = disk_topo();
    let tp = TheoremParams::new(1, 1, 1, 1.0, 2.0).unwrap();
    let r = eval_thm1(&b.steklov, &b.steklov, &b.laplacian, &tp, &t).unwrap();
    assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
    assert!(r.pass && r.sharp);
    assert_eq!(r.params.q_star, Some(2.0));

    let zero = tp.clone().with_weights(vec![0.0], vec![1.0]).unwrap();
    let r = eval_thm1(&b.steklov, &b.steklov, &b.laplacian, &zero, &t).unwrap();
    assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    assert!(r.pass);
}

#[test]
fn thm1_cor1_weights_are_sharp_on_disk() {
    // a_{2i-1} = a_{2i} = (2iπ/L)^{-3}, c = 1, p = 1, q = 2, m = 2n
    let b = disk();
    for n in 1..=6 {
        let a: Vec<f64> = (1..=2 * n).map(|j: usize| (2.0 * PI * j.div_ceil(2) as f64 / L).powi(-3)).collect();
        let tp = TheoremParams::new(1, 1, 2 * n, 1.0, 2.0)
            .unwrap()
            .with_weights(a, vec![1.0; 2 * n])
            .unwrap();
        let r = eval_thm1(&b.steklov, &b.steklov, &b.laplacian, &tp, &disk_topo()).unwrap();
        assert!(r.sharp, "n = {n}: {r:?}");
    }
}

#[test]
fn thm1_parameter_checks() {
    let b = disk();
    let t = disk_topo();
    for (p, q) in [(0.5, 2.0), (2.0, 1.5), (1.0, 1.0)] {
        let tp = TheoremParams::new(1, 1, 1, p, q).unwrap();
        let e = eval_thm1(&b.steklov, &b.steklov, &b.laplacian, &tp, &t).unwrap_err();
        assert!(matches!(e, Error::Parameter(_)), "{p} {q}");
    }
    let ascending = TheoremParams::new(1, 1, 2, 1.0, 2.0).unwrap().with_weights(vec![1.0, 2.0], vec![1.0, 1.0]);
    assert!(ascending.is_err());
    let long = TheoremParams::new(1, 1, 100, 1.0, 2.0).unwrap();
    let e = eval_thm1(&b.steklov, &b.steklov, &b.laplacian, &long, &t).unwrap_err();
    assert!(matches!(e, Error::Index { .. }));
}

#[test]
fn thm1_reduces_to_yy_bitwise_at_p_one() {
    for domain in [DISK, ANNULUS] {
        let b = SpectraBundle::analytic(domain, 40).unwrap();
        let t = domain.topology();
        for r in 1..=4 {
            for s in 1..=4 {
                for q in [1.5, 2.0, 3.7, 10.0] {
                    let tp = TheoremParams::new(r, s, 1, 1.0, q).unwrap();
                    let a = eval_thm1(&b.steklov, &b.steklov, &b.laplacian, &tp, &t).unwrap();
                    let y = eval_yy(&b.steklov, &b.steklov, &b.laplacian, r, s, &t).unwrap();
                    assert_eq!(a.lhs.to_bits(), y.lhs.to_bits());
                    assert_eq!(a.rhs.to_bits(), y.rhs.to_bits());
                }
            }
        }
    }
}

#[test]
fn thm1_at_m_one_is_yy_to_the_power_one_over_p() {
    let b = SpectraBundle::analytic(ANNULUS, 40).unwrap();
    let t = ANNULUS.topology();
    for (p, q) in [(1.5, 2.0), (2.0, 2.0), (3.0, 7.0)] {
        let tp = TheoremParams::new(2, 3, 1, p, q).unwrap();
        let a = eval_thm1(&b.steklov, &b.steklov, &b.laplacian, &tp, &t).unwrap();
        let y = eval_yy(&b.steklov, &b.steklov, &b.laplacian, 2, 3, &t).unwrap();
        assert!(close(a.lhs.powf(p), y.lhs, 1e-13));
        assert!(close(a.rhs.powf(p), y.rhs, 1e-13));
    }
}

#[test]
fn thm2_disk_example_and_power_q() {
    let b = disk();
    let t = disk_topo();
    let tp = TheoremParams::new(1, 1, 2, 1.0, 2.0).unwrap().with_k_mu(2, 0.5);
    let r = eval_thm2(&b.steklov, &b.steklov, &b.laplacian, &tp, &t).unwrap();
    assert!(close(r.lhs, 2.0, 1e-15) && close(r.rhs, 2.0, 1e-15), "{r:?}");
    assert!(r.sharp);
    assert!(close(thm2_constant(2, 1.0, 2.0, 0.5), 2.0, 1e-15));

    for q in [1.0, 2.0, 3.0, 4.5] {
        for (r_, s, m) in [(1, 1, 2), (2, 1, 3), (1, 3, 4)] {
            let tp = TheoremParams::new(r_, s, m, q, q).unwrap();
            let a = eval_thm2(&b.steklov, &b.steklov, &b.laplacian, &tp, &t).unwrap();
            let c = eval_power_q(&b.steklov, &b.steklov, &b.laplacian, q, (r_, s, m), &t, PowerQReading::SBased).unwrap();
            assert_eq!(a.lhs.to_bits(), c.lhs.to_bits());
            assert!(close(a.rhs, c.rhs, 1e-14), "{} {}", a.rhs, c.rhs);
        }
    }
}

#[test]
fn power_q_disk_example_and_readings() {
    let b = disk();
    let t = disk_topo();
    let r = eval_power_q(&b.steklov, &b.steklov, &b.laplacian, 2.0, (1, 1, 2), &t, PowerQReading::SBased).unwrap();
    assert_eq!((r.lhs, r.rhs), (4.0, 4.0));
    assert!(r.sharp);
    // σ_3, σ_4 = 1, 2 in the second sum
    let r = eval_power_q(&b.steklov, &b.steklov, &b.laplacian, 2.0, (1, 1, 2), &t, PowerQReading::RBased).unwrap();
    assert_eq!(r.lhs, 3.25);
    assert!(!r.pass);
    let e = eval_power_q(&b.steklov, &b.steklov, &b.laplacian, 2.0, (1, 1, 80), &t, PowerQReading::SBased).unwrap_err();
    assert!(matches!(e, Error::Index { .. }));
}

#[test]
fn thm2_subset_cap() {
    let b = disk();
    let t = disk_topo();
    let tp = TheoremParams::new(1, 1, 12, 1.0, 2.0).unwrap().with_k_mu(6, 1.0);
    let r = eval_thm2(&b.steklov, &b.steklov, &b.laplacian, &tp, &t).unwrap();
    assert!(r.pass);
    let big = SpectraBundle::analytic(DISK, 120).unwrap();
    let tp = TheoremParams::new(1, 1, 40, 1.0, 2.0).unwrap().with_k_mu(20, 1.0);
    let e = eval_thm2(&big.steklov, &big.steklov, &big.laplacian, &tp, &t).unwrap_err();
    assert!(matches!(e, Error::Size(_)));
}

#[test]
fn thm2_rhs_increases_with_mu_and_never_fails_on_disk() {
    let b = disk();
    let t = disk_topo();
    let mut previous = 0.0;
    for j in -40..=40 {
        let mu = 10f64.powf(j as f64 / 10.0);
        let tp = TheoremParams::new(1, 1, 4, 1.0, 2.0).unwrap().with_k_mu(2, mu);
        let r = eval_thm2(&b.steklov, &b.steklov, &b.laplacian, &tp, &t).unwrap();
        assert!(r.pass, "μ = {mu}");
        assert!(r.rhs > previous);
        previous = r.rhs;
    }
}

#[test]
fn yy_examples() {
    let b = disk();
    let t = disk_topo();
    for (p, q) in [(1, 1), (1, 2)] {
        let r = eval_yy(&b.steklov, &b.steklov, &b.laplacian, p, q, &t).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
        assert!(r.sharp);
    }
}

#[test]
fn hps_family() {
    let s = steklov_disk(1.0, 20).unwrap();
    let r = eval_hps(&s, L, 1, 1).unwrap();
    assert!(close(r.lhs, 4.0 * PI * PI, 1e-15) && r.sharp);
    let r = eval_hps(&s, L, 1, 2).unwrap();
    assert!(close(r.rhs, 4.0 * PI * PI, 1e-15) && r.sharp);
    // σ_3² L² = 4π² against 16π²: holds, not sharp
    let r = eval_hps(&s, L, 2, 2).unwrap();
    assert!(r.pass && !r.sharp);

    for p in 0..8 {
        for q in 0..8 {
            let gp = eval_gp(&s, L, 0, 1, p, q).unwrap();
            let k = eval_k(&s, L, 0, 1, p, q).unwrap();
            let hps = eval_hps(&s, L, p, q).unwrap();
            assert_eq!(gp.rhs, hps.rhs);
            if (p + q) % 2 == 0 {
                assert_eq!(k.rhs, gp.rhs);
            } else {
                assert!(k.rhs > gp.rhs);
            }
        }
    }
    // sharper than the genus/boundary factor once (γ+k-1)(p+q-3) >= 2
    for g in 0..4usize {
        for k in 1..4usize {
            for sum in 2..12usize {
                let gp = eval_gp(&s, L, g, k, 1, sum - 1).unwrap().rhs;
                let kk = eval_k(&s, L, g, k, 1, sum - 1).unwrap().rhs;
                let expected = sum % 2 == 0 || (g + k - 1) * sum.saturating_sub(3) >= 2;
                assert_eq!(kk <= gp, expected, "γ={g} k={k} p+q={sum}");
            }
        }
    }
    assert!(matches!(eval_gp(&s, L, 0, 0, 1, 1), Err(Error::Parameter(_))));
    assert!(matches!(eval_hps(&s, -1.0, 1, 1), Err(Error::Parameter(_))));
}

#[test]
fn trace_examples() {
    let s = steklov_disk(1.0, 30).unwrap();
    let r = eval_hps_trace(&s, L, 2).unwrap();
    assert!(close(r.lhs, 3.0, 1e-15) && close(r.rhs, 3.0, 1e-15) && r.sharp);
    let r = eval_hps_trace(&s, L, 1).unwrap();
    assert!(close(r.lhs, 2.0, 1e-15) && r.sharp);
    let r = eval_inverse_trace_2(&s, L, 1).unwrap();
    assert!(close(r.lhs, 2.0, 1e-15) && close(r.rhs, 2.0, 1e-15) && r.sharp);
    let r = eval_inverse_trace_2(&s, L, 2).unwrap();
    assert!(close(r.lhs, 2.5, 1e-15) && close(r.rhs, 2.5, 1e-15) && r.sharp);
    assert!(matches!(eval_hps_trace(&s, L, 0), Err(Error::Parameter(_))));
    assert!(matches!(eval_hps_trace(&s, L, 15), Err(Error::Index { .. })));
}

#[test]
fn majorized_form() {
    let s = steklov_disk(1.0, 30).unwrap();
    let v = eval_majorized_form(&s, L, 3).unwrap();
    assert_eq!(v.relation, crate::ineq::Relation::Majorized);
    for (x, y) in v.partial_sums_x.iter().zip(&v.partial_sums_y) {
        assert!(close(*x, *y, 1e-15));
    }
    // a longer boundary for the same spectrum only loosens weak majorization
    let v = eval_majorized_form(&s, 5.0, 3).unwrap();
    assert_eq!(v.relation, crate::ineq::Relation::WeaklyMajorized);
    let one = eval_majorized_report(&s, 5.0, 1).unwrap();
    let trace = eval_hps_trace(&s, 5.0, 1).unwrap();
    assert_eq!((one.lhs, one.rhs), (trace.rhs, trace.lhs));
}

#[test]
fn cor1_disk_equality() {
    let s = steklov_disk(1.0, 50).unwrap();
    let r = eval_cor1(&s, L, 1, false).unwrap();
    assert!(close(r.lhs, 2.0, 1e-15) && close(r.rhs, 2.0, 1e-15));
    for n in 1..=20 {
        let r = eval_cor1(&s, L, n, false).unwrap();
        assert!(r.relative_slack.abs() <= 1e-12, "n = {n}: {}", r.relative_slack);
        let lim = eval_cor1(&s, L, n, true).unwrap();
        assert!(close(lim.lhs, PI * PI / 3.0, 1e-12), "{}", lim.lhs);
        assert!(lim.relative_slack.abs() <= 1e-9 && lim.sharp);
        assert!(close(lim.tolerance, ANALYTIC_TOLERANCE, 1e-6));
    }
}

fn fem_like(values: Vec<f64>) -> Spectrum {
    let source = SpectrumSource::Fem {
        mesh_id: "x".into(),
        refinement: None,
        boundary_loops: 1,
    };
    Spectrum::new(values, SpectrumKind::Steklov, source, 0.02).unwrap()
}

#[test]
fn cor1_limit_widens_tolerance_for_approximate_spectra() {
    let s = fem_like(core::iter::once(0.0).chain((1..=20).flat_map(|i| [i as f64 * 1.01; 2])).collect());
    let r = eval_cor1(&s, L, 5, true).unwrap();
    assert!(r.tolerance > 0.02);
}

#[test]
fn cor2_disk() {
    let s = steklov_disk(1.0, 30).unwrap();
    let r = eval_cor2(&s, L, 1).unwrap();
    assert!(close(r.lhs, 2.0, 1e-15) && close(r.rhs, 2.0, 1e-15) && r.sharp);
    for n in 2..=5 {
        let r = eval_cor2(&s, L, n).unwrap();
        assert!(r.pass && !r.sharp && r.slack > 0.0);
    }
    // n = 2: 1/4 + (1/4)(2 + 2/16) against 1/2
    let r = eval_cor2(&s, L, 2).unwrap();
    assert!(close(r.lhs, 0.25 + 0.25 * 2.125, 1e-15) && close(r.rhs, 0.5, 1e-15));
}

#[test]
fn cor2_is_thm2_instance() {
    let b = disk();
    for n in 1..=4 {
        let q = 2.0 * n as f64;
        let tp = TheoremParams::new(1, 1, 2 * n, 1.0, q).unwrap().with_k_mu(2 * n, 1.0 / q);
        let a = eval_thm2(&b.steklov, &b.steklov, &b.laplacian, &tp, &disk_topo()).unwrap();
        let c = eval_cor2(&b.steklov, L, n).unwrap();
        assert!(close(a.lhs, c.lhs, 1e-12) && close(a.rhs, c.rhs, 1e-12), "n = {n}");
    }
}

#[test]
fn probe_readings() {
    let s = steklov_disk(1.0, 30).unwrap();
    let r = probe_open_question(&s, L, 1, ProbeReading::Literal).unwrap();
    assert!(close(r.lhs, 1.0, 1e-15) && close(r.rhs, 1.0, 1e-15) && r.informational);
    let r = probe_open_question(&s, L, 2, ProbeReading::Literal).unwrap();
    assert!(close(r.lhs, 1.75, 1e-15) && close(r.rhs, 1.25, 1e-15) && r.pass);
    for n in 1..=10 {
        let r = probe_open_question(&s, L, n, ProbeReading::Paired).unwrap();
        assert!(r.sharp, "paired reading is an equality on the disk");
    }
}

#[test]
fn report_orientation_and_tolerance() {
    let s = steklov_disk(1.0, 10).unwrap();
    let r = eval_hps_trace(&s, 7.0, 1).unwrap();
    assert_eq!(r.relation, Direction::GreaterEq);
    assert!(!r.pass && r.slack < 0.0);
    assert_eq!(r.inputs.len(), 1);
    let fem = fem_like(s.values().to_vec());
    let r = eval_hps_trace(&fem, 2.0 * PI * 1.01, 1).unwrap();
    assert_eq!((r.tolerance, r.sharpness_tolerance), (0.02, 0.06));
    assert!(r.pass && r.sharp);
}

#[test]
fn run_all_disk_default_grid() {
    let b = disk();
    let t = disk_topo();
    let grid = default_grid(&t).unwrap();
    let reports = run_all(&b, &grid, &t).unwrap();
    assert_eq!(reports.len(), grid.len());
    let summary = Summary::of(&reports);
    assert!(summary.all_pass(), "{:?}", reports.iter().filter(|r| !r.pass).collect::<Vec<_>>());
    let sharp = |name: &str| reports.iter().filter(|r| r.name == name).all(|r| r.sharp);
    assert!(sharp("hps-trace") && sharp("inverse-trace-2") && sharp("cor1") && sharp("majorized"));
    assert!(run_all(&b, &[], &t).unwrap().is_empty());
    assert_eq!(run_all(&b, &grid, &t).unwrap(), reports);
}

#[test]
fn run_all_annulus_default_grid() {
    let b = SpectraBundle::analytic(ANNULUS, 60).unwrap();
    let t = ANNULUS.topology();
    let grid = default_grid(&t).unwrap();
    assert!(grid.iter().all(|g| !matches!(g, GridEntry::Hps { .. } | GridEntry::Cor1 { .. })));
    let reports = run_all(&b, &grid, &t).unwrap();
    assert!(Summary::of(&reports).all_pass());
}

#[test]
fn run_all_configuration_errors() {
    let b = disk();
    let annulus = ANNULUS.topology();
    assert!(matches!(run_all(&b, &[], &annulus), Err(Error::Configuration(_))));
    let mut t = disk_topo();
    t.dimension = 3;
    assert!(matches!(run_all(&b, &[], &t), Err(Error::Configuration(_))));
    let mixed = SpectraBundle {
        laplacian: laplacian_circle(3.0, 20).unwrap(),
        ..disk()
    };
    assert!(matches!(run_all(&mixed, &[], &disk_topo()), Err(Error::Configuration(_))));
    let swapped = SpectraBundle {
        steklov: b.laplacian.clone(),
        ..disk()
    };
    assert!(matches!(run_all(&swapped, &[], &disk_topo()), Err(Error::Configuration(_))));
}

#[test]
fn grid_serde_round_trip() {
    let grid = default_grid(&disk_topo()).unwrap();
    let json = serde_json::to_string(&grid).unwrap();
    let back: Vec<GridEntry> = serde_json::from_str(&json).unwrap();
    assert_eq!(back, grid);
    let entry: GridEntry = serde_json::from_str(r#"{"inequality":"cor1","n":2}"#).unwrap();
    assert_eq!(entry, GridEntry::Cor1 { n: 2, limit: false });
}

#[test]
fn fem_disk_bundle() {
    let mesh = generate(&DomainShape::Disk { radius: 1.0 }, 3).unwrap();
    let problem = FemProblem::new(&mesh).unwrap();
    let b = SpectraBundle::fem(&problem, 30).unwrap();
    let t = disk_topo();
    let reports = run_all(&b, &default_grid(&t).unwrap(), &t).unwrap();
    let failed: Vec<_> = reports.iter().filter(|r| !r.pass && !r.informational).collect();
    assert!(failed.is_empty(), "{failed:?}");
}
