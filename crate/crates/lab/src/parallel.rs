//! Parallel drivers. Results are assembled in input order, so output does not
//! depend on scheduling.

use rayon::prelude::*;
use steklov_core::ineq::fuzz::{run_trial, FuzzSummary, LemmaKind};
use steklov_core::suite::{GridEntry, InequalityReport, SpectraBundle};
use steklov_core::DomainTopology;

use crate::LabResult;

/// [`steklov_core::suite::run_all`] with grid points evaluated in parallel.
pub fn run_grid(bundle: &SpectraBundle, grid: &[GridEntry], topo: &DomainTopology) -> LabResult<Vec<InequalityReport>> {
    bundle.check(topo)?;
    Ok(grid
        .par_iter()
        .map(|e| e.evaluate(bundle, topo))
        .collect::<Result<Vec<_>, _>>()?)
}

/// [`steklov_core::ineq::fuzz::run`] with trials spread over threads.
pub fn fuzz(kind: LemmaKind, seed: u64, trials: u64) -> LabResult<FuzzSummary> {
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(kind, seed, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FuzzSummary::from_outcomes(kind, seed, outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use steklov_core::analytic::AnalyticDomain;
    use steklov_core::suite::{default_grid, run_all};

    #[test]
    fn parallel_fuzz_matches_sequential() {
        for kind in LemmaKind::ALL {
            let seq = steklov_core::ineq::fuzz::run(kind, 9, 300).unwrap();
            assert_eq!(fuzz(kind, 9, 300).unwrap(), seq);
        }
    }

    #[test]
    fn parallel_grid_matches_sequential() {
        let d = AnalyticDomain::Disk { radius: 1.0 };
        let b = SpectraBundle::analytic(d, 80).unwrap();
        let t = d.topology();
        let grid = default_grid(&t).unwrap();
        assert_eq!(run_grid(&b, &grid, &t).unwrap(), run_all(&b, &grid, &t).unwrap());
    }
}
