use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // redundant when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::{check_kind, check_length, check_surface, IndexMap, InequalityReport, ReportParams, TheoremParams};
use crate::analytic::{compensated_sum, partial_zeta, ZetaTerms};
use crate::ineq::{subset_power_sum, weak_majorize, Direction, MajorizationVerdict};
use crate::linalg::binomial;
use crate::{DomainTopology, Error, Result, Spectrum, SpectrumKind};

/// Which eigenvalues enter the second sum of the power-`q` inequality.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerQReading {
    /// `σ_{b0+s+i-1}`, the specialization of the inverse-trace theorem.
    #[default]
    SBased,
    /// `σ_{b0+r+i}`, as the display is printed.
    RBased,
}

/// Reading of the Hersch-Payne-Schiffer question's left-hand side.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeReading {
    /// All consecutive products `σ_iσ_{i+1}` for `i = 2..=2n`.
    #[default]
    Literal,
    /// Products `σ_{2i}σ_{2i+1}` for `i = 1..=n`.
    Paired,
}

impl PowerQReading {
    fn name(self) -> &'static str {
        match self {
            PowerQReading::SBased => "s-based",
            PowerQReading::RBased => "r-based",
        }
    }
}

impl ProbeReading {
    fn name(self) -> &'static str {
        match self {
            ProbeReading::Literal => "literal",
            ProbeReading::Paired => "paired",
        }
    }
}

/// `(Σ v_i^e)^g` as `M^{eg} (Σ (v_i/M)^e)^g` with `M = max v_i`, for `g > 0`.
/// `eg` is passed separately so exponents like `q*/p · 1/q*` stay exact.
fn power_norm(v: &[f64], e: f64, g: f64, eg: f64) -> f64 {
    let big = v.iter().copied().fold(0.0, f64::max);
    if big == 0.0 {
        return 0.0;
    }
    big.powf(eg) * compensated_sum(v.iter().map(|x| (x / big).powf(e))).powf(g)
}

/// `(Σ u_i^{-e})^{-g}` as `U^{eg} (Σ (U/u_i)^e)^{-g}` with `U = min u_i`.
fn inverse_power_norm(u: &[f64], e: f64, g: f64, eg: f64) -> f64 {
    let small = u.iter().copied().fold(f64::INFINITY, f64::min);
    if small == 0.0 {
        return 0.0;
    }
    small.powf(eg) * compensated_sum(u.iter().map(|x| (small / x).powf(e))).powf(-g)
}

fn positive(value: f64, what: &str, index: usize) -> Result<f64> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Precondition(format!(
            "{what} at index {index} is {value}; the inequality needs it positive"
        )))
    }
}

/// `σ_first, ..., σ_{first+count-1}`, all required positive.
fn positive_run(sigma: &Spectrum, first: usize, count: usize) -> Result<Vec<f64>> {
    (first..first + count)
        .map(|i| positive(sigma.get(i)?, "σ", i))
        .collect()
}

fn check_theorem_inputs(sigma0: &Spectrum, sigma_n2: &Spectrum, lambdas: &Spectrum, topo: &DomainTopology) -> Result<()> {
    check_surface(topo)?;
    check_kind(sigma0, SpectrumKind::Steklov, "σ^(0)")?;
    check_kind(sigma_n2, SpectrumKind::Steklov, "σ^(n-2)")?;
    check_kind(lambdas, SpectrumKind::BoundaryLaplacian, "λ")
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Parameter("n must be positive".into()));
    }
    Ok(())
}

fn theorem_params(tp: &TheoremParams, topo: &DomainTopology) -> ReportParams {
    ReportParams {
        r: Some(tp.r),
        s: Some(tp.s),
        m: Some(tp.m),
        p: Some(tp.p),
        q: Some(tp.q),
        topology: Some(*topo),
        ..Default::default()
    }
}

/// Weighted trace versus inverse trace:
/// `(Σ (a_i σ^(n-2)_{b0+s+i-1})^{1/p}) (Σ (c_i/σ_{r+i})^{q/p})^{-1/q}
///  <= (Σ (a_i λ_{b1+r+s+i-1}/c_i)^{q*/p})^{1/q*}`.
pub fn eval_thm1(
    sigma0: &Spectrum,
    sigma_n2: &Spectrum,
    lambdas: &Spectrum,
    tp: &TheoremParams,
    topo: &DomainTopology,
) -> Result<InequalityReport> {
    check_theorem_inputs(sigma0, sigma_n2, lambdas, topo)?;
    tp.validate_thm1()?;
    let map = IndexMap::new(topo, tp.r, tp.s);
    let (a, c) = (tp.a.values(), tp.c.values());
    let (p, q, qs) = (tp.p, tp.q, tp.q_star());
    let mut traces = Vec::with_capacity(tp.m);
    let mut ratios = Vec::with_capacity(tp.m);
    let mut bounds = Vec::with_capacity(tp.m);
    for i in 1..=tp.m {
        traces.push(a[i - 1] * map.sigma_n2(sigma_n2, i)?);
        ratios.push(map.sigma0(sigma0, i)? / c[i - 1]);
        bounds.push(a[i - 1] * map.lambda(lambdas, i)? / c[i - 1]);
    }
    let lhs = power_norm(&traces, 1.0 / p, 1.0, 1.0 / p) * inverse_power_norm(&ratios, q / p, 1.0 / q, 1.0 / p);
    let rhs = power_norm(&bounds, qs / p, 1.0 / qs, 1.0 / p);
    let mut params = theorem_params(tp, topo);
    params.q_star = Some(qs);
    params.a = Some(a.to_vec());
    params.c = Some(c.to_vec());
    Ok(InequalityReport::new(
        "thm1",
        params,
        (lhs, rhs),
        Direction::LessEq,
        &[sigma0, sigma_n2, lambdas],
    ))
}

/// `(kp+q)/(pq) · p^{q/(kp+q)} q^{kp/(kp+q)} μ^{kp/(kp+q)}`.
pub fn thm2_constant(k: usize, p: f64, q: f64, mu: f64) -> f64 {
    let kp = k as f64 * p;
    let d = kp + q;
    d / (p * q) * p.powf(q / d) * q.powf(kp / d) * mu.powf(kp / d)
}

/// Mixed inverse traces:
/// `Σ_{|I|=k} Π_{i∈I} (σ^(n-2)_{b0+s+i-1})^{-p} + μ C(m-1,k-1) Σ σ_{r+i}^{-q}
///  >= const · Σ_{|I|=k} Π_{i∈I} λ_{b1+r+s+i-1}^{-pq/(kp+q)}`.
pub fn eval_thm2(
    sigma0: &Spectrum,
    sigma_n2: &Spectrum,
    lambdas: &Spectrum,
    tp: &TheoremParams,
    topo: &DomainTopology,
) -> Result<InequalityReport> {
    check_theorem_inputs(sigma0, sigma_n2, lambdas, topo)?;
    tp.validate_thm2()?;
    let map = IndexMap::new(topo, tp.r, tp.s);
    let (k, p, q, mu) = (tp.k, tp.p, tp.q, tp.mu);
    let mut traces = Vec::with_capacity(tp.m);
    let mut inverse = Vec::with_capacity(tp.m);
    let mut bounds = Vec::with_capacity(tp.m);
    for i in 1..=tp.m {
        traces.push(positive(map.sigma_n2(sigma_n2, i)?, "σ^(n-2)", i)?);
        inverse.push(positive(map.sigma0(sigma0, i)?, "σ^(0)", i)?.powf(-q));
        bounds.push(positive(map.lambda(lambdas, i)?, "λ", i)?);
    }
    let weight = mu * binomial(tp.m - 1, k - 1).ok_or_else(|| Error::Size("binomial overflow".into()))? as f64;
    let lhs = subset_power_sum(&traces, k, -p)? + weight * compensated_sum(inverse);
    let e = p * q / (k as f64 * p + q);
    let rhs = thm2_constant(k, p, q, mu) * subset_power_sum(&bounds, k, -e)?;
    let mut params = theorem_params(tp, topo);
    params.k = Some(k);
    params.mu = Some(mu);
    Ok(InequalityReport::new(
        "thm2",
        params,
        (lhs, rhs),
        Direction::GreaterEq,
        &[sigma0, sigma_n2, lambdas],
    ))
}

/// `σ_{1+p} σ^(n-2)_{b0+q} <= λ_{b1+p+q}`.
pub fn eval_yy(
    sigma0: &Spectrum,
    sigma_n2: &Spectrum,
    lambdas: &Spectrum,
    p: usize,
    q: usize,
    topo: &DomainTopology,
) -> Result<InequalityReport> {
    check_theorem_inputs(sigma0, sigma_n2, lambdas, topo)?;
    let lhs = sigma0.get(1 + p)? * sigma_n2.get(topo.b0 + q)?;
    let rhs = lambdas.get(topo.b1 + p + q)?;
    let params = ReportParams {
        p: Some(p as f64),
        q: Some(q as f64),
        topology: Some(*topo),
        ..Default::default()
    };
    Ok(InequalityReport::new(
        "yy",
        params,
        (lhs, rhs),
        Direction::LessEq,
        &[sigma0, sigma_n2, lambdas],
    ))
}

fn product_bound(
    name: &str,
    sigma0: &Spectrum,
    length: f64,
    topo: Option<(usize, usize)>,
    (p, q): (usize, usize),
    rhs_factor: f64,
) -> Result<InequalityReport> {
    check_kind(sigma0, SpectrumKind::Steklov, "σ^(0)")?;
    check_length(length)?;
    let lhs = sigma0.get(p + 1)? * sigma0.get(q + 1)? * length * length;
    let rhs = rhs_factor * rhs_factor * PI * PI;
    let mut params = ReportParams {
        p: Some(p as f64),
        q: Some(q as f64),
        length: Some(length),
        ..Default::default()
    };
    if let Some((genus, k)) = topo {
        params.topology = Some(DomainTopology::new(genus, k)?);
    }
    Ok(InequalityReport::new(name, params, (lhs, rhs), Direction::LessEq, &[sigma0]))
}

fn parity_sum(p: usize, q: usize) -> f64 {
    let sum = (p + q) as f64;
    if (p + q) % 2 == 0 {
        sum
    } else {
        sum - 1.0
    }
}

fn check_components(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Parameter("at least one boundary component is required".into()));
    }
    Ok(())
}

/// `σ_{p+1} σ_{q+1} L² <= (p+q)²π²` (even `p+q`) or `(p+q-1)²π²` (odd).
pub fn eval_hps(sigma0: &Spectrum, length: f64, p: usize, q: usize) -> Result<InequalityReport> {
    product_bound("hps", sigma0, length, None, (p, q), parity_sum(p, q))
}

/// The product bound with the factor `(γ+k)` for genus `γ` and `k` boundary
/// components.
pub fn eval_gp(sigma0: &Spectrum, length: f64, genus: usize, k: usize, p: usize, q: usize) -> Result<InequalityReport> {
    check_components(k)?;
    let g = (genus + k) as f64;
    product_bound("gp", sigma0, length, Some((genus, k)), (p, q), g * parity_sum(p, q))
}

/// `σ_{p+1} σ_{q+1} L² <= (p+q+2γ+2k-2)²π²` (even) or `(p+q+2γ+2k-1)²π²` (odd).
pub fn eval_k(sigma0: &Spectrum, length: f64, genus: usize, k: usize, p: usize, q: usize) -> Result<InequalityReport> {
    check_components(k)?;
    let base = (p + q + 2 * genus + 2 * k) as f64;
    let factor = if (p + q) % 2 == 0 { base - 2.0 } else { base - 1.0 };
    product_bound("k", sigma0, length, Some((genus, k)), (p, q), factor)
}

fn length_n_params(length: f64, n: usize) -> ReportParams {
    ReportParams {
        n: Some(n),
        length: Some(length),
        ..Default::default()
    }
}

fn harmonic(n: usize) -> f64 {
    compensated_sum((1..=n).map(|i| 1.0 / i as f64))
}

fn check_trace_inputs(sigma0: &Spectrum, length: f64, n: usize) -> Result<()> {
    check_kind(sigma0, SpectrumKind::Steklov, "σ^(0)")?;
    check_length(length)?;
    check_n(n)
}

/// `Σ_{i=1}^{2n} 1/σ_{1+i} >= (L/π) Σ_{i=1}^n 1/i`.
pub fn eval_hps_trace(sigma0: &Spectrum, length: f64, n: usize) -> Result<InequalityReport> {
    check_trace_inputs(sigma0, length, n)?;
    let values = positive_run(sigma0, 2, 2 * n)?;
    let lhs = compensated_sum(values.iter().map(|v| 1.0 / v));
    let rhs = length / PI * harmonic(n);
    Ok(InequalityReport::new(
        "hps-trace",
        length_n_params(length, n),
        (lhs, rhs),
        Direction::GreaterEq,
        &[sigma0],
    ))
}

/// `(L/π)(1, 1/2, ..., 1/n) ≺_w (1/σ_2 + 1/σ_3, ..., 1/σ_{2n} + 1/σ_{2n+1})`.
pub fn eval_majorized_form(sigma0: &Spectrum, length: f64, n: usize) -> Result<MajorizationVerdict> {
    check_trace_inputs(sigma0, length, n)?;
    let values = positive_run(sigma0, 2, 2 * n)?;
    let x: Vec<f64> = (1..=n).map(|i| length / PI / i as f64).collect();
    let y: Vec<f64> = values.chunks(2).map(|w| 1.0 / w[0] + 1.0 / w[1]).collect();
    weak_majorize(&x, &y)
}

/// The majorization verdict as a report: both sides are the partial sums at
/// the tightest prefix.
pub fn eval_majorized_report(sigma0: &Spectrum, length: f64, n: usize) -> Result<InequalityReport> {
    let verdict = eval_majorized_form(sigma0, length, n)?;
    let tightest = (0..n)
        .min_by(|&i, &j| {
            let si = verdict.partial_sums_y[i] - verdict.partial_sums_x[i];
            let sj = verdict.partial_sums_y[j] - verdict.partial_sums_x[j];
            si.total_cmp(&sj)
        })
        .unwrap_or(0);
    Ok(InequalityReport::new(
        "majorized",
        length_n_params(length, n),
        (verdict.partial_sums_x[tightest], verdict.partial_sums_y[tightest]),
        Direction::LessEq,
        &[sigma0],
    ))
}

/// `Σ_{i=2}^{2n+1} σ_i^{-2} >= L²/(2π²) Σ_{i=1}^n 1/i²`.
pub fn eval_inverse_trace_2(sigma0: &Spectrum, length: f64, n: usize) -> Result<InequalityReport> {
    check_trace_inputs(sigma0, length, n)?;
    let values = positive_run(sigma0, 2, 2 * n)?;
    let lhs = compensated_sum(values.iter().map(|v| (1.0 / v).powi(2)));
    let rhs = length * length / (2.0 * PI * PI) * partial_zeta(ZetaTerms::Finite(n), 2.0)?;
    Ok(InequalityReport::new(
        "inverse-trace-2",
        length_n_params(length, n),
        (lhs, rhs),
        Direction::GreaterEq,
        &[sigma0],
    ))
}

/// `Σ σ_{r+i}^{-q} + Σ (σ^(n-2)_j)^{-q} >= 2 Σ λ_{b1+r+s+i-1}^{-q/2}`, sums over
/// `i = 1..=m`, with `j` chosen by `reading`.
#[allow(clippy::too_many_arguments)]
pub fn eval_power_q(
    sigma0: &Spectrum,
    sigma_n2: &Spectrum,
    lambdas: &Spectrum,
    q: f64,
    (r, s, m): (usize, usize, usize),
    topo: &DomainTopology,
    reading: PowerQReading,
) -> Result<InequalityReport> {
    check_theorem_inputs(sigma0, sigma_n2, lambdas, topo)?;
    let tp = TheoremParams::new(r, s, m, q, q)?;
    tp.validate_thm2()?;
    let map = IndexMap::new(topo, r, s);
    let mut first = Vec::with_capacity(m);
    let mut second = Vec::with_capacity(m);
    let mut bounds = Vec::with_capacity(m);
    for i in 1..=m {
        first.push(positive(map.sigma0(sigma0, i)?, "σ^(0)", i)?.powf(-q));
        let j = match reading {
            PowerQReading::SBased => topo.b0 + s + i - 1,
            PowerQReading::RBased => topo.b0 + r + i,
        };
        second.push(positive(sigma_n2.get(j)?, "σ^(n-2)", j)?.powf(-q));
        bounds.push(positive(map.lambda(lambdas, i)?, "λ", i)?.powf(-q / 2.0));
    }
    let lhs = compensated_sum(first) + compensated_sum(second);
    let rhs = 2.0 * compensated_sum(bounds);
    let mut params = theorem_params(&tp, topo);
    params.reading = Some(reading.name().to_string());
    Ok(InequalityReport::new(
        "power-q",
        params,
        (lhs, rhs),
        Direction::GreaterEq,
        &[sigma0, sigma_n2, lambdas],
    ))
}

/// `Σ_{i=1}^n (σ_{2i} + σ_{2i+1})/i³ <= 4√2π²/L² · (Σ_{i=1}^{2n} σ_{1+i}^{-2})^{1/2} (Σ_{i=1}^n 1/i²)^{1/2}`.
///
/// With `limit` set, both spectral sums are continued past `n` pairs with the
/// asymptotic pairs `σ_{2i} ≈ σ_{2i+1} ≈ 2πi/L` and compared against the
/// `n → ∞` bound `4√3π³/(3L²) · (Σ σ_{1+i}^{-2})^{1/2}`. The relative
/// deviation of the last computed pair from the asymptotic value, weighted by
/// the share of the continued tail, is added to the tolerance.
pub fn eval_cor1(sigma0: &Spectrum, length: f64, n: usize, limit: bool) -> Result<InequalityReport> {
    check_trace_inputs(sigma0, length, n)?;
    let values = positive_run(sigma0, 2, 2 * n)?;
    let trace = compensated_sum(values.chunks(2).enumerate().map(|(i, w)| (w[0] + w[1]) / ((i + 1) as f64).powi(3)));
    let inverse = compensated_sum(values.iter().map(|v| (1.0 / v).powi(2)));
    let mut params = length_n_params(length, n);
    params.limit = Some(limit);
    if !limit {
        let zeta = partial_zeta(ZetaTerms::Finite(n), 2.0)?;
        let rhs = 4.0 * 2.0.sqrt() * PI * PI / (length * length) * inverse.sqrt() * zeta.sqrt();
        return Ok(InequalityReport::new("cor1", params, (trace, rhs), Direction::LessEq, &[sigma0]));
    }
    let tail = partial_zeta(ZetaTerms::Infinite, 2.0)? - partial_zeta(ZetaTerms::Finite(n), 2.0)?;
    let trace_tail = 4.0 * PI / length * tail;
    let inverse_tail = length * length / (2.0 * PI * PI) * tail;
    let lhs = trace + trace_tail;
    let total_inverse = inverse + inverse_tail;
    let rhs = 4.0 * 3.0.sqrt() * PI.powi(3) / (3.0 * length * length) * total_inverse.sqrt();
    let weyl = 2.0 * PI * n as f64 / length;
    let deviation = values[2 * n - 2..].iter().map(|v| (v / weyl - 1.0).abs()).fold(0.0, f64::max);
    let share = (trace_tail / lhs).max(inverse_tail / total_inverse);
    let mut report = InequalityReport::new("cor1", params, (lhs, rhs), Direction::LessEq, &[sigma0]);
    if deviation * share > 0.0 {
        let widened = report.tolerance + deviation * share;
        report = report.with_tolerance(widened);
    }
    Ok(report)
}

/// `1/(σ_2 ⋯ σ_{2n+1}) + (1/2n) Σ_{i=1}^{2n} σ_{1+i}^{-2n} >= L^{2n} / (2^{2n-1} π^{2n} (n!)²)`.
pub fn eval_cor2(sigma0: &Spectrum, length: f64, n: usize) -> Result<InequalityReport> {
    check_trace_inputs(sigma0, length, n)?;
    let values = positive_run(sigma0, 2, 2 * n)?;
    let q = 2.0 * n as f64;
    let product = values.iter().product::<f64>().powf(-1.0);
    let lhs = product + 1.0 / q * compensated_sum(values.iter().map(|v| v.powf(-q)));
    let rhs = 2.0 * (1..=n).map(|i| (length / (2.0 * PI * i as f64)).powi(2)).product::<f64>();
    Ok(InequalityReport::new(
        "cor2",
        length_n_params(length, n),
        (lhs, rhs),
        Direction::GreaterEq,
        &[sigma0],
    ))
}

/// The Hersch-Payne-Schiffer question
/// `1/(σ_2σ_3) + 1/(σ_3σ_4) + ⋯ + 1/(σ_{2n}σ_{2n+1}) >= L²/(4π²) Σ_{i=1}^n 1/i²`.
///
/// The report is flagged informational: `pass` only means the spectrum is
/// consistent with an affirmative answer.
pub fn probe_open_question(sigma0: &Spectrum, length: f64, n: usize, reading: ProbeReading) -> Result<InequalityReport> {
    check_trace_inputs(sigma0, length, n)?;
    let values = positive_run(sigma0, 2, 2 * n)?;
    let lhs = match reading {
        ProbeReading::Literal => compensated_sum(values.windows(2).map(|w| 1.0 / (w[0] * w[1]))),
        ProbeReading::Paired => compensated_sum(values.chunks(2).map(|w| 1.0 / (w[0] * w[1]))),
    };
    let rhs = length * length / (4.0 * PI * PI) * partial_zeta(ZetaTerms::Finite(n), 2.0)?;
    let mut params = length_n_params(length, n);
    params.reading = Some(reading.name().to_string());
    let mut report = InequalityReport::new("probe-open", params, (lhs, rhs), Direction::GreaterEq, &[sigma0]);
    report.informational = true;
    Ok(report)
}
