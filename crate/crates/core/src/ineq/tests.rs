use super::fuzz::{self, LemmaKind};
use super::*;
use crate::SpdMatrix;
use alloc::vec;

fn m2(a: f64, b: f64, c: f64) -> SpdMatrix {
    SpdMatrix::new(2, vec![a, b, b, c]).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * 1f64.max(a.abs()).max(b.abs())
}

#[test]
fn weight_vector_validation() {
    assert!(WeightVector::new(vec![3.0, 2.0, 2.0, 0.0], Order::Descending, Positivity::NonNegative).is_ok());
    assert!(WeightVector::new(vec![1.0, 2.0], Order::Descending, Positivity::NonNegative).is_err());
    assert!(WeightVector::new(vec![0.0, 2.0], Order::Ascending, Positivity::StrictlyPositive).is_err());
    assert!(WeightVector::new(vec![-1.0], Order::Ascending, Positivity::NonNegative).is_err());
    assert!(WeightVector::new(vec![], Order::Ascending, Positivity::NonNegative).is_err());
}

#[test]
fn majorization_textbook_cases() {
    assert_eq!(weak_majorize(&[1.0, 1.0], &[2.0, 0.0]).unwrap().relation, Relation::Majorized);
    let v = weak_majorize(&[2.0, 0.0], &[1.0, 1.0]).unwrap();
    assert_eq!(v.relation, Relation::Neither);
    assert_eq!(v.first_violation_index, Some(1));
    assert_eq!(weak_majorize(&[1.0, 0.5], &[2.0, 0.0]).unwrap().relation, Relation::WeaklyMajorized);
    assert!(matches!(weak_majorize(&[1.0], &[1.0, 2.0]), Err(Error::Parameter(_))));
}

#[test]
fn disk_inverse_trace_majorization_is_tight() {
    // (L/π)(1, 1/2, 1/3) with L = 2π against 1/σ_{2i} + 1/σ_{2i+1} = 2/i
    let x = [2.0, 1.0, 2.0 / 3.0];
    let y = [2.0, 1.0, 2.0 / 3.0];
    let v = weak_majorize(&x, &y).unwrap();
    assert_eq!(v.relation, Relation::Majorized);
    assert_eq!(v.partial_sums_x, v.partial_sums_y);
    // f(t) = t² keeps the equality case
    let f = majorization_principle_check(&x, &y, ConvexFn::Square).unwrap();
    assert_eq!(f.relation, Relation::Majorized);
}

#[test]
fn principle_catalog_and_preconditions() {
    let x = [0.2, 0.5, 1.0];
    for f in [
        ConvexFn::Square,
        ConvexFn::Abs,
        ConvexFn::Exp,
        ConvexFn::Hinge { c: 0.4 },
        ConvexFn::Power { p: 2.5 },
        ConvexFn::NegPower { p: 0.5 },
    ] {
        let v = majorization_principle_check(&x, &x, f).unwrap();
        assert!(v.relation.is_weak(), "{f:?}");
    }
    // weakly majorized only: needs an increasing f
    let (x, y) = ([0.5, 0.5], [1.0, 0.5]);
    assert!(majorization_principle_check(&x, &y, ConvexFn::Exp).unwrap().relation.is_weak());
    assert!(matches!(
        majorization_principle_check(&x, &y, ConvexFn::NegPower { p: 0.5 }),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        majorization_principle_check(&[2.0, 0.0], &[1.0, 1.0], ConvexFn::Exp),
        Err(Error::Precondition(_))
    ));
    assert!(majorization_principle_check(&x, &y, ConvexFn::Power { p: 0.5 }).is_err());
}

/// Robin-Hood transfers move mass from a larger to a smaller entry without
/// crossing them, so the result is majorized by the start.
#[test]
fn robin_hood_pairs_survive_exp() {
    use rand::Rng;
    for trial in 0..1000u64 {
        let mut rng = fuzz::trial_rng(7, trial);
        let n = rng.gen_range(2..=8);
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let mut x = y.clone();
        for _ in 0..rng.gen_range(1..6) {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let (hi, lo) = if x[i] >= x[j] { (i, j) } else { (j, i) };
            let t = rng.gen_range(0.0..=0.5) * (x[hi] - x[lo]);
            x[hi] -= t;
            x[lo] += t;
        }
        assert!(weak_majorize(&x, &y).unwrap().relation == Relation::Majorized, "trial {trial}");
        let v = majorization_principle_check(&x, &y, ConvexFn::Exp).unwrap();
        assert!(v.relation.is_weak(), "trial {trial}: {v:?}");
    }
}

#[test]
fn part1_examples() {
    let ones = WeightVector::ones(3, Order::Descending).unwrap();
    let r = lemma_matrix_part1(&SpdMatrix::identity(3), &ones, 1.0).unwrap();
    assert!(close(r.lhs, 3.0) && close(r.rhs, 3.0) && r.pass);

    let a = WeightVector::new(vec![2.0, 1.0], Order::Descending, Positivity::NonNegative).unwrap();
    let r = lemma_matrix_part1(&SpdMatrix::diagonal(&[1.0, 2.0]).unwrap(), &a, 1.0).unwrap();
    assert!(close(r.lhs, 4.0) && close(r.rhs, 4.0));
    let r = lemma_matrix_part1(&SpdMatrix::diagonal(&[2.0, 1.0]).unwrap(), &a, 1.0).unwrap();
    assert!(close(r.lhs, 4.0) && close(r.rhs, 5.0) && r.pass);

    let ones = WeightVector::ones(2, Order::Descending).unwrap();
    let r = lemma_matrix_part1(&m2(2.0, 1.0, 2.0), &ones, 0.5).unwrap();
    assert!(close(r.lhs, 1.0 + 3f64.sqrt()) && close(r.rhs, 2.0 * 2f64.sqrt()) && r.pass);

    assert!(matches!(lemma_matrix_part1(&m2(2.0, 1.0, 2.0), &ones, 1.5), Err(Error::Parameter(_))));
    assert!(matches!(lemma_matrix_part1(&m2(1.0, 2.0, 1.0), &ones, 0.5), Err(Error::Input(_))));
}

#[test]
fn part2_examples() {
    let ones = WeightVector::ones(2, Order::Ascending).unwrap();
    let a = WeightVector::new(vec![0.5, 3.0], Order::Ascending, Positivity::StrictlyPositive).unwrap();
    for p in [-2.0, 0.0, 1.0, 3.0] {
        let r = lemma_matrix_part2(&SpdMatrix::identity(2), &a, p).unwrap();
        assert!(close(r.lhs, r.rhs), "p = {p}");
    }
    let r = lemma_matrix_part2(&m2(2.0, 1.0, 2.0), &ones, 2.0).unwrap();
    assert!(close(r.lhs, 10.0) && close(r.rhs, 8.0) && r.pass);
    let r = lemma_matrix_part2(&m2(2.0, 1.0, 2.0), &ones, -1.0).unwrap();
    assert!(close(r.lhs, 4.0 / 3.0) && close(r.rhs, 1.0) && r.pass);
    assert!(matches!(lemma_matrix_part2(&m2(2.0, 1.0, 2.0), &ones, 0.5), Err(Error::Parameter(_))));
}

#[test]
fn trace_identity_at_p_one() {
    let a = fuzz::random_spd(&mut fuzz::trial_rng(3, 0), 6);
    let r1 = lemma_matrix_part1(&a, &WeightVector::ones(6, Order::Descending).unwrap(), 1.0).unwrap();
    let r2 = lemma_matrix_part2(&a, &WeightVector::ones(6, Order::Ascending).unwrap(), 1.0).unwrap();
    assert!(r1.pass && r2.pass);
    assert!((r1.lhs - r1.rhs).abs() <= 1e-12 * r1.rhs);
    assert_eq!(r1.lhs, r2.lhs);
}

#[test]
fn compound_examples() {
    let a = m2(2.0, 1.0, 2.0);
    let c = compound_matrix(&a, 2).unwrap();
    assert_eq!(c.order(), 1);
    assert!(close(c.get(0, 0), 3.0));
    assert_eq!(compound_matrix(&a, 1).unwrap(), a);
    assert!(matches!(compound_matrix(&a, 3), Err(Error::Parameter(_))));
    assert!(matches!(compound_matrix(&a, 0), Err(Error::Parameter(_))));
    assert!(matches!(compound_matrix_capped(&SpdMatrix::identity(6), 3, 10), Err(Error::Size(_))));

    let a = fuzz::random_spd(&mut fuzz::trial_rng(11, 4), 4);
    let (err, ok) = fuzz::compound_spectrum_error(&a, 2).unwrap();
    assert!(ok, "{err}");
    // lexicographic subset order: (0,1), (0,2), (0,3), (1,2), ...
    let c = compound_matrix(&a, 2).unwrap();
    let minor = a.get(0, 1) * a.get(1, 2) - a.get(0, 2) * a.get(1, 1);
    assert!(close(c.get(0, 3), minor));
}

#[test]
fn part3_examples() {
    let r = lemma_matrix_part3(&SpdMatrix::identity(5), -0.7, 2).unwrap();
    assert!(close(r.lhs, 10.0) && close(r.rhs, 10.0));
    let r = lemma_matrix_part3(&m2(2.0, 1.0, 2.0), -1.0, 2).unwrap();
    assert!(close(r.lhs, 1.0 / 3.0) && close(r.rhs, 0.25) && r.pass);
    assert!(lemma_matrix_part3(&m2(2.0, 1.0, 2.0), 0.5, 1).is_err());
    let f = fuzz::run(LemmaKind::Part3, 5, 1000).unwrap();
    assert!(f.pass(), "{f:?}");
}

#[test]
fn hadamard_examples() {
    let r = hadamard_check(&SpdMatrix::identity(4), &[0, 2, 3]).unwrap();
    assert!(close(r.lhs, 1.0) && close(r.rhs, 1.0));
    let r = hadamard_check(&m2(2.0, 1.0, 2.0), &[0, 1]).unwrap();
    assert!(close(r.lhs, 3.0) && close(r.rhs, 4.0) && r.pass);
    assert!(matches!(hadamard_check(&m2(2.0, 1.0, 2.0), &[1, 1]), Err(Error::Parameter(_))));
    assert!(matches!(hadamard_check(&m2(2.0, 1.0, 2.0), &[2]), Err(Error::Index { .. })));
}

#[test]
fn schur_examples() {
    let v = schur_check(&SpdMatrix::identity(3)).unwrap();
    assert_eq!(v.relation, Relation::Majorized);
    let v = schur_check(&m2(2.0, 1.0, 2.0)).unwrap();
    assert_eq!(v.relation, Relation::Majorized);
    assert!(close(v.partial_sums_x[0], 2.0) && close(v.partial_sums_y[0], 3.0));
    // indefinite symmetric input is accepted
    assert_eq!(schur_check(&m2(0.0, 2.0, 0.0)).unwrap().relation, Relation::Majorized);
}

#[test]
fn young_examples() {
    let r = young_product_bound(&[3.7], &[2.2]).unwrap();
    assert!(close(r.check.lhs, r.check.rhs) && close(r.p_effective, 2.2));
    let r = young_product_bound(&[1.0, 1.0], &[2.0, 2.0]).unwrap();
    assert!(close(r.check.lhs, 2.0) && close(r.check.rhs, 2.0) && close(r.p_effective, 1.0));
    assert!(young_product_bound(&[1.0, -1.0], &[2.0, 2.0]).is_err());
    assert!(young_product_bound(&[1.0], &[0.0]).is_err());
    // far outside f64 range both sides are still compared
    let r = young_product_bound(&[1e200, 1e200], &[3.0, 3.0]).unwrap();
    assert!(!r.check.lhs.is_finite() && r.check.pass);
}

/// Equality in the weighted AM-GM step holds when every `x_i^{p_i}` equals
/// `C / q_i` with `q_i = p_i / p`.
#[test]
fn young_equality_cases() {
    use rand::Rng;
    for trial in 0..200u64 {
        let mut rng = fuzz::trial_rng(21, trial);
        let m = rng.gen_range(1..=6);
        let p: Vec<f64> = (0..m).map(|_| rng.gen_range(0.3..4.0)).collect();
        let p_eff = 1.0 / p.iter().map(|v| 1.0 / v).sum::<f64>();
        let c = rng.gen_range(0.1..10.0);
        let x: Vec<f64> = p.iter().map(|&pi| (c * p_eff / pi).powf(1.0 / pi)).collect();
        let r = young_product_bound(&x, &p).unwrap();
        assert!(r.check.lhs - r.check.rhs <= 1e-10 * r.check.lhs.max(1.0), "trial {trial}: {r:?}");
        assert!(r.check.pass);
    }
}

#[test]
fn fuzz_is_deterministic_and_clean() {
    for kind in LemmaKind::ALL {
        let a = fuzz::run(kind, 42, 200).unwrap();
        let b = fuzz::run(kind, 42, 200).unwrap();
        assert_eq!(a, b);
        assert!(a.pass(), "{a:?}");
    }
    // a trial does not depend on which other trials ran
    let one = fuzz::run_trial(LemmaKind::Part1, 42, 150).unwrap();
    assert_eq!(one, fuzz::run_trial(LemmaKind::Part1, 42, 150).unwrap());
}
