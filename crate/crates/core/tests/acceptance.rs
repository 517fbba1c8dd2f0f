//! End-to-end acceptance criteria. Each criterion prints one `PASS`/`FAIL`
//! line; the test fails if any criterion does.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steklov_core::analytic::AnalyticDomain;
use steklov_core::fem::FemProblem;
use steklov_core::ineq::fuzz::{self, LemmaKind};
use steklov_core::mesh::{generate, DomainShape};
use steklov_core::spectrum::FEM_TOLERANCE;
use steklov_core::suite::{
    default_grid, eval_cor1, eval_cor2, eval_hps, eval_hps_trace, eval_inverse_trace_2, eval_thm1, eval_thm2,
    eval_yy, probe_open_question, GridEntry, InequalityReport, ProbeReading, SpectraBundle, TheoremParams,
};
use steklov_core::{DomainTopology, Spectrum};

const DISK: AnalyticDomain = AnalyticDomain::Disk { radius: 1.0 };
const ANNULUS: AnalyticDomain = AnalyticDomain::Annulus {
    r_inner: 0.5,
    r_outer: 1.0,
};
const L: f64 = 2.0 * PI;
const LEVELS: [u32; 3] = [3, 4, 5];
const DEFAULT_REFINEMENT: u32 = 4;

type Outcome = Result<String, String>;
/// Per level: (level, vertices, worst Steklov error, worst Laplacian error).
type Levels = (Vec<(u32, usize, f64, f64)>, Duration);

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn ulps(a: f64, b: f64) -> u64 {
    (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn disk_bundle() -> Result<SpectraBundle, String> {
    SpectraBundle::analytic(DISK, 400).map_err(err)
}

/// Relative errors of `values[first..]` against `reference`.
fn errors(spectrum: &Spectrum, first: usize, reference: &[f64]) -> Result<Vec<f64>, String> {
    reference
        .iter()
        .enumerate()
        .map(|(i, r)| spectrum.get(first + i).map(|v| rel(v, *r)).map_err(err))
        .collect()
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

/// Largest errors per level for the Steklov and boundary-Laplacian references.
fn disk_levels() -> Result<Levels, String> {
    let start = Instant::now();
    let mut rows = Vec::new();
    for level in LEVELS {
        let mesh = generate(&DomainShape::Disk { radius: 1.0 }, level).map_err(err)?;
        let p = FemProblem::new(&mesh).map_err(err)?.with_refinement(level);
        let sigma = p.steklov_spectrum(8).map_err(err)?;
        let lambda = p.boundary_laplacian_spectrum(6).map_err(err)?;
        let s = max(&errors(&sigma, 2, &[1.0, 1.0, 2.0, 2.0, 3.0, 3.0])?);
        let l = max(&errors(&lambda, 2, &[1.0, 1.0, 4.0, 4.0])?);
        rows.push((level, mesh.vertex_count(), s, l));
    }
    Ok((rows, start.elapsed()))
}

fn list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", items.join(", "))
}

fn decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn criterion_1(levels: &Levels) -> Outcome {
    let (rows, elapsed) = levels;
    let errs: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let (_, vertices, finest, _) = *rows.last().unwrap();
    let detail = format!(
        "max rel err per level {}, finest {vertices} vertices, {:.1} s",
        list(&errs),
        elapsed.as_secs_f64()
    );
    if finest <= 0.01 && vertices <= 5000 && decreasing(&errs) && elapsed.as_secs_f64() <= 60.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_2(levels: &Levels) -> Outcome {
    let errs: Vec<f64> = levels.0.iter().map(|r| r.3).collect();
    let detail = format!("max rel err of λ₂..λ₅ per level {}", list(&errs));
    if *errs.last().unwrap() <= 0.01 && decreasing(&errs) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_3() -> Outcome {
    let b = disk_bundle()?;
    let mut worst: f64 = 0.0;
    for n in 1..=20 {
        let r = eval_cor1(&b.steklov, L, n, false).map_err(err)?;
        if !r.pass {
            return Err(format!("n = {n} fails: {r:?}"));
        }
        worst = worst.max(r.relative_slack.abs());
    }
    let limit = eval_cor1(&b.steklov, L, 20, true).map_err(err)?;
    let limit_dev = rel(limit.lhs, limit.rhs);
    let detail = format!("worst relative slack {worst:.2e} over n = 1..20, limit form {limit_dev:.2e}");
    if worst <= 1e-12 && limit_dev <= 1e-9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_4() -> Outcome {
    let b = disk_bundle()?;
    let first = eval_cor2(&b.steklov, L, 1).map_err(err)?;
    let mut detail = format!("n = 1 relative slack {:.2e}", first.relative_slack);
    let mut ok = first.pass && first.relative_slack.abs() <= 1e-12;
    for n in 2..=5 {
        let r = eval_cor2(&b.steklov, L, n).map_err(err)?;
        detail.push_str(&format!(", n = {n} {:.3e}", r.relative_slack));
        ok &= r.pass && r.slack > 0.0 && !r.sharp;
    }
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let bundles = [
        (SpectraBundle::analytic(DISK, 60).map_err(err)?, DISK.topology()),
        (SpectraBundle::analytic(ANNULUS, 60).map_err(err)?, ANNULUS.topology()),
    ];
    let mut worst = 0;
    for trial in 0..100 {
        let (b, t) = &bundles[trial % 2];
        let (r, s) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let q = 1.0 + rng.gen_range(0.0..9.0f64).max(1e-3);
        let tp = TheoremParams::new(r, s, 1, 1.0, q).map_err(err)?;
        let a = eval_thm1(&b.steklov, &b.steklov, &b.laplacian, &tp, t).map_err(err)?;
        let y = eval_yy(&b.steklov, &b.steklov, &b.laplacian, r, s, t).map_err(err)?;
        let d = ulps(a.lhs, y.lhs).max(ulps(a.rhs, y.rhs));
        if d > 1 || a.pass != y.pass {
            return Err(format!("trial {trial} (r, s, q) = ({r}, {s}, {q}): {d} ulps"));
        }
        worst = worst.max(d);
    }
    Ok(format!("100 draws on disk and annulus, worst difference {worst} ulp"))
}

fn criterion_6() -> Outcome {
    let b = disk_bundle()?;
    let t = DISK.topology();
    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        let m = 2 * n;
        let tp = TheoremParams::new(1, 1, m, 1.0, m as f64)
            .map_err(err)?
            .with_k_mu(m, 1.0 / m as f64);
        let thm2 = eval_thm2(&b.steklov, &b.steklov, &b.laplacian, &tp, &t).map_err(err)?;
        let cor2 = eval_cor2(&b.steklov, L, n).map_err(err)?;
        worst = worst.max(rel(thm2.lhs, cor2.lhs)).max(rel(thm2.rhs, cor2.rhs));
        if thm2.pass != cor2.pass || thm2.sharp != cor2.sharp {
            return Err(format!("n = {n}: verdicts differ"));
        }
    }
    let detail = format!("worst relative difference {worst:.2e} over n = 1..4");
    if worst <= 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_7() -> Outcome {
    let b = disk_bundle()?;
    let mut failures = Vec::new();
    let mut judge = |label: String, r: InequalityReport| {
        if !(r.pass && r.relative_slack.abs() <= 1e-12) {
            failures.push(format!("{label} lhs {:.6} rhs {:.6}", r.lhs, r.rhs));
        }
    };
    for (p, q) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
        judge(format!("hps({p},{q})"), eval_hps(&b.steklov, L, p, q).map_err(err)?);
    }
    for n in 1..=10 {
        judge(format!("hps-trace n={n}"), eval_hps_trace(&b.steklov, L, n).map_err(err)?);
        judge(format!("inverse-trace-2 n={n}"), eval_inverse_trace_2(&b.steklov, L, n).map_err(err)?);
    }
    if failures.is_empty() {
        Ok("24 equalities within 1e-12".into())
    } else {
        Err(format!("not equalities: {}", failures.join("; ")))
    }
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut detail = Vec::new();
    let mut violations = 0;
    for kind in LemmaKind::ALL {
        let s = fuzz::run(kind, 8, 10_000).map_err(err)?;
        violations += s.violations;
        detail.push(format!("{} {}", kind.name(), s.violations));
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("10⁴ trials per lemma, violations [{}], {secs:.1} s", detail.join(", "));
    if violations == 0 && secs <= 120.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_9() -> Outcome {
    let mesh = generate(&DomainShape::Disk { radius: 1.0 }, DEFAULT_REFINEMENT).map_err(err)?;
    let p = FemProblem::new(&mesh).map_err(err)?;
    let sigma = p.steklov_spectrum(12).map_err(err)?;
    for (r, s, m) in [(1, 1, 1), (1, 1, 2), (2, 1, 2), (1, 2, 2)] {
        let w = p.witness_matrices(r, s, m).map_err(err)?;
        let check = w.check(&sigma, 3.0 * FEM_TOLERANCE).map_err(err)?;
        if !check.pass() {
            return Err(format!("({r},{s},{m}): {check:?}"));
        }
    }
    let w = p.witness_matrices(1, 1, 1).map_err(err)?;
    let (a, b) = (w.a.get(0, 0), w.b.get(0, 0));
    let detail = format!("4 index triples hold; (1,1,1) gives A = {a:.5}, B = {b:.5}");
    if rel(a, 1.0) <= 0.02 && rel(b, 1.0) <= 0.02 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sweep_domains() -> Vec<DomainShape> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut shapes: Vec<DomainShape> = (0..20)
        .map(|_| {
            let modes = rng.gen_range(2..=5);
            let mut coeff = |j: usize| rng.gen_range(-0.06..0.06) / j as f64;
            let cos_coeffs = (1..=modes).map(&mut coeff).collect();
            let sin_coeffs = (1..=modes).map(&mut coeff).collect();
            DomainShape::PerturbedDisk {
                base_radius: 1.0,
                cos_coeffs,
                sin_coeffs,
            }
        })
        .collect();
    for r_inner in [0.3, 0.5, 0.7] {
        shapes.push(DomainShape::Annulus { r_inner, r_outer: 1.0 });
    }
    shapes
}

fn criterion_10() -> Outcome {
    let mut evaluated = 0;
    let mut violations = Vec::new();
    let mut probes = (0, 0);
    for (d, shape) in sweep_domains().iter().enumerate() {
        let mesh = generate(shape, DEFAULT_REFINEMENT).map_err(err)?;
        let topo: DomainTopology = mesh.topology().map_err(err)?;
        let p = FemProblem::new(&mesh).map_err(err)?.with_refinement(DEFAULT_REFINEMENT);
        let b = SpectraBundle::fem(&p, p.boundary_vertices().len()).map_err(err)?;
        b.check(&topo).map_err(err)?;
        let mut grid: Vec<GridEntry> = default_grid(&topo)
            .map_err(err)?
            .into_iter()
            .filter(|e| {
                matches!(
                    e,
                    GridEntry::Yy { .. } | GridEntry::Thm1 { .. } | GridEntry::Thm2 { .. } | GridEntry::HpsTrace { .. }
                )
            })
            .collect();
        if topo.is_simply_connected() {
            grid.extend((4..=6).map(|n| GridEntry::HpsTrace { n }));
        }
        for entry in &grid {
            let r = entry.evaluate(&b, &topo).map_err(err)?;
            evaluated += 1;
            if !r.pass {
                violations.push(format!("domain {d} {} lhs {} rhs {}", r.name, r.lhs, r.rhs));
            }
        }
        if topo.is_simply_connected() {
            for n in 1..=3 {
                for reading in [ProbeReading::Literal, ProbeReading::Paired] {
                    let r = probe_open_question(&b.steklov, b.boundary_length, n, reading).map_err(err)?;
                    assert!(r.informational);
                    probes.1 += 1;
                    probes.0 += usize::from(r.pass);
                }
            }
        }
    }
    let detail = format!(
        "{evaluated} evaluations on 23 domains, {} violations; open-question probe consistent in {}/{}",
        violations.len(),
        probes.0,
        probes.1
    );
    if violations.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}: {}", violations.join("; ")))
    }
}

#[test]
fn acceptance() {
    let levels = disk_levels();
    let lift = |f: &dyn Fn(&Levels) -> Outcome| match &levels {
        Ok(l) => f(l),
        Err(e) => Err(e.clone()),
    };
    let outcomes: Vec<(&str, Outcome)> = vec![
        ("disk Steklov convergence", lift(&criterion_1)),
        ("circle Laplacian convergence", lift(&criterion_2)),
        ("cor1 sharp on the disk", criterion_3()),
        ("cor2 sharp only at n = 1", criterion_4()),
        ("thm1 reduces to yy", criterion_5()),
        ("thm2 reproduces cor2", criterion_6()),
        ("hps family equalities on the disk", criterion_7()),
        ("matrix lemma fuzz", criterion_8()),
        ("witness matrices", criterion_9()),
        ("FEM robustness sweep", criterion_10()),
    ];
    let mut failed = Vec::new();
    println!();
    for (i, (name, outcome)) in outcomes.iter().enumerate() {
        let n = i + 1;
        match outcome {
            Ok(detail) => println!("PASS {n:>2} {name}: {detail}"),
            Err(detail) => {
                println!("FAIL {n:>2} {name}: {detail}");
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
