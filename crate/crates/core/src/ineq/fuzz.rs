//! Seeded random instances for the lemma checks. Trial `t` of seed `s` draws
//! from ChaCha8 seeded with `s` on stream `t`, so every trial is reproducible
//! on its own and results do not depend on how trials are scheduled.

#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;
use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    compound_matrix, hadamard_check, lemma_matrix_part1, lemma_matrix_part2, lemma_matrix_part3,
    schur_check, young_product_bound, CheckReport, Order, Positivity, Relation, WeightVector,
};
use crate::linalg::jacobi;
use crate::{Result, SpdMatrix};

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 8;
/// Relative agreement required between compound eigenvalues and products.
pub const COMPOUND_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaKind {
    Part1,
    Part2,
    Part3,
    Young,
    Hadamard,
    Schur,
    Compound,
}

impl LemmaKind {
    pub const ALL: [LemmaKind; 7] = [
        LemmaKind::Part1,
        LemmaKind::Part2,
        LemmaKind::Part3,
        LemmaKind::Young,
        LemmaKind::Hadamard,
        LemmaKind::Schur,
        LemmaKind::Compound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaKind::Part1 => "lemma-matrix-1",
            LemmaKind::Part2 => "lemma-matrix-2",
            LemmaKind::Part3 => "lemma-matrix-3",
            LemmaKind::Young => "young",
            LemmaKind::Hadamard => "hadamard",
            LemmaKind::Schur => "schur",
            LemmaKind::Compound => "compound",
        }
    }
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// `GᵀG + 10⁻³ I` with `G` uniform in `[-1, 1]`.
pub fn random_spd<R: Rng>(rng: &mut R, m: usize) -> SpdMatrix {
    let g: Vec<f64> = (0..m * m).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let mut data = alloc::vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let mut s: f64 = (0..m).map(|k| g[k * m + i] * g[k * m + j]).sum();
            if i == j {
                s += 1e-3;
            }
            data[i * m + j] = s;
            data[j * m + i] = s;
        }
    }
    SpdMatrix::new(m, data).expect("Gram matrix is symmetric")
}

/// Symmetric with entries uniform in `[-1, 1]`.
pub fn random_symmetric<R: Rng>(rng: &mut R, m: usize) -> SpdMatrix {
    let mut data = alloc::vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let v = rng.gen_range(-1.0..=1.0);
            data[i * m + j] = v;
            data[j * m + i] = v;
        }
    }
    SpdMatrix::new(m, data).expect("constructed symmetric")
}

fn random_weights<R: Rng>(rng: &mut R, m: usize, order: Order, positivity: Positivity) -> WeightVector {
    let mut w: Vec<f64> = (0..m)
        .map(|_| match positivity {
            // occasional exact zeros exercise the boundary of the hypothesis
            Positivity::NonNegative if rng.gen_bool(0.1) => 0.0,
            Positivity::NonNegative => rng.gen_range(0.0..2.0),
            Positivity::StrictlyPositive => rng.gen_range(0.05..2.0),
        })
        .collect();
    match order {
        Order::Descending => w.sort_by(|a, b| b.total_cmp(a)),
        Order::Ascending => w.sort_by(f64::total_cmp),
    }
    WeightVector::new(w, order, positivity).expect("sorted weights are valid")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub kind: LemmaKind,
    pub trial: u64,
    pub order: usize,
    /// Exponent `p` or subset size, depending on the lemma; 0 when unused.
    pub param: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl TrialOutcome {
    fn from_check(kind: LemmaKind, trial: u64, order: usize, param: f64, c: &CheckReport) -> Self {
        TrialOutcome { kind, trial, order, param, lhs: c.lhs, rhs: c.rhs, pass: c.pass }
    }
}

/// Runs trial `trial` of `kind` under `seed`.
pub fn run_trial(kind: LemmaKind, seed: u64, trial: u64) -> Result<TrialOutcome> {
    let mut rng = trial_rng(seed, trial);
    let m = rng.gen_range(MIN_ORDER..=MAX_ORDER);
    let out = match kind {
        LemmaKind::Part1 => {
            let a = random_spd(&mut rng, m);
            let w = random_weights(&mut rng, m, Order::Descending, Positivity::NonNegative);
            let p = rng.gen_range(0.0..=1.0);
            TrialOutcome::from_check(kind, trial, m, p, &lemma_matrix_part1(&a, &w, p)?)
        }
        LemmaKind::Part2 => {
            let a = random_spd(&mut rng, m);
            let w = random_weights(&mut rng, m, Order::Ascending, Positivity::StrictlyPositive);
            let p = if rng.gen_bool(0.5) { rng.gen_range(1.0..4.0) } else { rng.gen_range(-3.0..=0.0) };
            TrialOutcome::from_check(kind, trial, m, p, &lemma_matrix_part2(&a, &w, p)?)
        }
        LemmaKind::Part3 => {
            let a = random_spd(&mut rng, m);
            let k = rng.gen_range(1..=m);
            let p = rng.gen_range(-3.0..=0.0);
            TrialOutcome::from_check(kind, trial, m, p, &lemma_matrix_part3(&a, p, k)?)
        }
        LemmaKind::Young => {
            let n = rng.gen_range(1..=6);
            let x: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.gen_range(-2.0..2.0))).collect();
            let p: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..5.0)).collect();
            let r = young_product_bound(&x, &p)?;
            TrialOutcome::from_check(kind, trial, n, r.p_effective, &r.check)
        }
        LemmaKind::Hadamard => {
            let a = random_spd(&mut rng, m);
            let mut subset: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.6)).collect();
            if subset.is_empty() {
                subset.push(rng.gen_range(0..m));
            }
            TrialOutcome::from_check(kind, trial, m, subset.len() as f64, &hadamard_check(&a, &subset)?)
        }
        LemmaKind::Schur => {
            let a = random_symmetric(&mut rng, m);
            let v = schur_check(&a)?;
            TrialOutcome {
                kind,
                trial,
                order: m,
                param: 0.0,
                lhs: *v.partial_sums_x.last().unwrap_or(&0.0),
                rhs: *v.partial_sums_y.last().unwrap_or(&0.0),
                pass: v.relation == Relation::Majorized,
            }
        }
        LemmaKind::Compound => {
            let a = random_spd(&mut rng, m);
            let k = rng.gen_range(1..=m);
            let (worst, pass) = compound_spectrum_error(&a, k)?;
            TrialOutcome { kind, trial, order: m, param: k as f64, lhs: worst, rhs: COMPOUND_TOLERANCE, pass }
        }
    };
    Ok(out)
}

/// Largest relative deviation between the spectrum of the `k`-th compound of
/// `a` and the sorted `k`-fold products of eigenvalues of `a`, each product
/// measured against its own magnitude; and whether it is within
/// [`COMPOUND_TOLERANCE`].
pub fn compound_spectrum_error(a: &SpdMatrix, k: usize) -> Result<(f64, bool)> {
    let c = compound_matrix(a, k)?;
    let got = c.eigenvalues();
    let eig = jacobi::eigenvalues(a.order(), a.as_slice());
    let mut expected: Vec<f64> = crate::linalg::Combinations::new(a.order(), k)
        .map(|s| s.iter().map(|&i| eig[i]).product())
        .collect();
    expected.sort_by(f64::total_cmp);
    let worst = got
        .iter()
        .zip(&expected)
        .map(|(g, e)| (g - e).abs() / e.abs())
        .fold(0.0f64, f64::max);
    Ok((worst, worst <= COMPOUND_TOLERANCE))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub kind: LemmaKind,
    pub seed: u64,
    pub trials: u64,
    pub violations: u64,
    /// Up to ten failing trials, in trial order.
    pub failures: Vec<TrialOutcome>,
}

impl FuzzSummary {
    /// Folds outcomes (in any order) into a summary ordered by trial.
    pub fn from_outcomes(kind: LemmaKind, seed: u64, mut outcomes: Vec<TrialOutcome>) -> Self {
        outcomes.sort_by_key(|o| o.trial);
        let trials = outcomes.len() as u64;
        let failing: Vec<TrialOutcome> = outcomes.into_iter().filter(|o| !o.pass).collect();
        FuzzSummary {
            kind,
            seed,
            trials,
            violations: failing.len() as u64,
            failures: failing.into_iter().take(10).collect(),
        }
    }

    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// Sequential driver: trials `0..trials`.
pub fn run(kind: LemmaKind, seed: u64, trials: u64) -> Result<FuzzSummary> {
    let outcomes = (0..trials).map(|t| run_trial(kind, seed, t)).collect::<Result<Vec<_>>>()?;
    Ok(FuzzSummary::from_outcomes(kind, seed, outcomes))
}
