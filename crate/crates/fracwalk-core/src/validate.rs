//! The cross-route validation suite: one named check per acceptance
//! criterion, runnable from the CLI (`validate`) and from the
//! integration tests.
//!
//! Every check is deterministic given the seed and reports one line per
//! assertion with the measured numbers, so failures are diagnosable
//! from the report alone.

use crate::ctrw::{
    diffusion_limit_gap, montroll_weiss, montroll_weiss_series, respeed_transform, simulate_ctrw,
    CtrwConfig, ScaleState,
};
use crate::error::Result;
use crate::fracdiff::{subordinator_density, subordinator_density_via_stable, FracDiffProblem};
use crate::quad::integrate;
use crate::renewal::{
    counting_pmf, counting_pmf_table, simulate_renewal, thinned_laplace, DEFAULT_EVENT_CAP,
};
use crate::rng::RngStream;
use crate::special::mittag_leffler::{ml_density, ml_one_real, ml_survival};
use crate::special::mwright::mwright_support_cut;
use crate::stats::{empirical_mean_stderr, total_variation, variance_estimate, VarianceEstimate};
use crate::variates::{JumpLaw, WaitingLaw};
use num_complex::Complex64;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// Context shared by all checks.
#[derive(Clone, Copy, Debug)]
pub struct CheckContext {
    pub seed: u64,
}

/// One assertion line of a check.
#[derive(Clone, Debug)]
pub struct CheckLine {
    pub label: String,
    pub passed: bool,
}

/// Outcome of a whole named check.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub lines: Vec<CheckLine>,
}

struct Report {
    name: &'static str,
    lines: Vec<CheckLine>,
}

impl Report {
    fn new(name: &'static str) -> Self {
        Report {
            name,
            lines: Vec::new(),
        }
    }

    fn check(&mut self, label: impl Into<String>, passed: bool) {
        self.lines.push(CheckLine {
            label: label.into(),
            passed,
        });
    }

    fn within(&mut self, label: &str, value: f64, expect: f64, tol: f64) {
        let err = (value - expect).abs();
        self.check(
            format!("{label}: {value:.10e} vs {expect:.10e} (|err| {err:.2e} <= {tol:.1e})"),
            err <= tol,
        );
    }

    fn finish(self) -> CheckOutcome {
        let passed = self.lines.iter().all(|l| l.passed);
        CheckOutcome {
            name: self.name,
            passed,
            lines: self.lines,
        }
    }
}

/// Definition of a named check.
pub struct CheckDef {
    pub name: &'static str,
    /// Criterion number in the acceptance suite.
    pub criterion: usize,
    /// Member of the sub-minute subset.
    pub quick: bool,
    pub run: fn(&CheckContext) -> Result<CheckOutcome>,
}

/// All checks, in criterion order.
pub fn checks() -> Vec<CheckDef> {
    vec![
        CheckDef {
            name: "ml-oracle-grid",
            criterion: 1,
            quick: true,
            run: check_ml_oracle_grid,
        },
        CheckDef {
            name: "laplace-pairs",
            criterion: 2,
            quick: true,
            run: check_laplace_pairs,
        },
        CheckDef {
            name: "ml-asymptotics",
            criterion: 3,
            quick: true,
            run: check_ml_asymptotics,
        },
        CheckDef {
            name: "thinning-universality",
            criterion: 4,
            quick: true,
            run: check_thinning_universality,
        },
        CheckDef {
            name: "respeed-invariance",
            criterion: 5,
            quick: true,
            run: check_respeed_invariance,
        },
        CheckDef {
            name: "montroll-weiss",
            criterion: 6,
            quick: true,
            run: check_montroll_weiss,
        },
        CheckDef {
            name: "diffusion-limit-gap",
            criterion: 7,
            quick: true,
            run: check_diffusion_limit_gap,
        },
        CheckDef {
            name: "subdiffusive-variance",
            criterion: 8,
            quick: false,
            run: check_subdiffusive_variance,
        },
        CheckDef {
            name: "charfn-limit",
            criterion: 9,
            quick: false,
            run: check_charfn_limit,
        },
        CheckDef {
            name: "subordinator-identities",
            criterion: 10,
            quick: true,
            run: check_subordinator_identities,
        },
        CheckDef {
            name: "route-triangle",
            criterion: 11,
            quick: false,
            run: check_route_triangle,
        },
        CheckDef {
            name: "degeneracies",
            criterion: 12,
            quick: true,
            run: check_degeneracies,
        },
        CheckDef {
            name: "fractional-poisson-pmf",
            criterion: 13,
            quick: false,
            run: check_fractional_poisson_pmf,
        },
    ]
}

// criterion 1: evaluator vs the frozen 50-digit-oracle grid
fn check_ml_oracle_grid(_ctx: &CheckContext) -> Result<CheckOutcome> {
    let mut r = Report::new("ml-oracle-grid");
    let data = include_str!("../tests/data/ml_reference.csv");
    let mut n = 0usize;
    let mut worst: f64 = 0.0;
    for line in data.lines().filter(|l| !l.starts_with('#')) {
        let mut parts = line.split(',');
        let alpha: f64 = parts.next().unwrap().parse().unwrap();
        let z: f64 = parts.next().unwrap().parse().unwrap();
        let expect: f64 = parts.next().unwrap().parse().unwrap();
        let got = ml_one_real(alpha, z)?.value;
        // 1e-10 relative above 1 (values reach 3.5e7 where an absolute
        // 1e-10 would sit far below one ulp)
        worst = worst.max((got - expect).abs() / expect.abs().max(1.0));
        n += 1;
    }
    r.check(
        format!("grid of {n} points: worst error {worst:.2e} <= 1e-10"),
        n == 200 && worst <= 1e-10,
    );
    let mut worst_exp: f64 = 0.0;
    for k in 0..50 {
        let t = 0.2 * k as f64;
        let got = ml_one_real(1.0, -t)?.value;
        worst_exp = worst_exp.max((got - (-t).exp()).abs() / (-t).exp());
    }
    r.check(
        format!("E_1(-t) = exp(-t): worst relative {worst_exp:.2e} <= 4 eps"),
        worst_exp <= 4.0 * f64::EPSILON,
    );
    Ok(r.finish())
}

// criterion 2: quadrature of the waiting density and survival against
// their transforms
fn check_laplace_pairs(_ctx: &CheckContext) -> Result<CheckOutcome> {
    let mut r = Report::new("laplace-pairs");
    for &beta in &[0.25f64, 0.5, 0.75] {
        for &s in &[0.25f64, 1.0, 4.0] {
            // int e^{-st} phi dt via t = w^{1/beta}
            let w_up = (60.0f64 / s.min(1.0)).powf(beta);
            let q = integrate(
                |w: f64| {
                    if w <= 0.0 {
                        return 0.0;
                    }
                    let t = w.powf(1.0 / beta);
                    (-s * t).exp() * ml_density(beta, t).unwrap() * t / (beta * w)
                },
                0.0,
                w_up,
                1e-9,
                1e-9,
            )?;
            r.within(
                &format!("density pair beta={beta} s={s}"),
                q.value,
                1.0 / (1.0 + s.powf(beta)),
                1e-6,
            );
            let q = integrate(
                |w: f64| {
                    if w <= 0.0 {
                        return 0.0;
                    }
                    let t = w.powf(1.0 / beta);
                    (-s * t).exp() * ml_survival(beta, t).unwrap() * t / (beta * w)
                },
                0.0,
                w_up,
                1e-9,
                1e-9,
            )?;
            r.within(
                &format!("survival pair beta={beta} s={s}"),
                q.value,
                s.powf(beta - 1.0) / (1.0 + s.powf(beta)),
                1e-6,
            );
        }
    }
    Ok(r.finish())
}

// criterion 3: the two displayed power-law asymptotes at t = 1e3,
// within 1% relative error.
//
// Mathematical caveat, documented here because this check carries it:
// the deviation of the leading asymptote is governed by the next
// expansion term, relatively ~ |Gamma(1-b)/Gamma(1-2b)| t^{-b} for the
// survival and ~ |Gamma(-b)/Gamma(-2b)| t^{-b} for the density.  At
// beta = 0.3, t = 1e3 these are 7.7% and 16.2% -- facts about the
// functions, not about any implementation -- so those two lines cannot
// pass as stated.  They are asserted faithfully and fail honestly; see
// the project notes.  beta = 0.5 (vanishing second term) and 0.8 pass.
fn check_ml_asymptotics(_ctx: &CheckContext) -> Result<CheckOutcome> {
    let mut r = Report::new("ml-asymptotics");
    let t: f64 = 1e3;
    for &beta in &[0.3f64, 0.5, 0.8] {
        let surv = ml_survival(beta, t)?;
        let surv_asym = t.powf(-beta) / gamma(1.0 - beta);
        let rel = ((surv - surv_asym) / surv).abs();
        r.check(
            format!("survival asymptote beta={beta}: relerr {rel:.4} < 0.01"),
            rel < 0.01,
        );
        let dens = ml_density(beta, t)?;
        let dens_asym = gamma(beta + 1.0) * (beta * PI).sin() / PI * t.powf(-beta - 1.0);
        let rel = ((dens - dens_asym) / dens).abs();
        r.check(
            format!("density asymptote beta={beta}: relerr {rel:.4} < 0.01"),
            rel < 0.01,
        );
    }
    Ok(r.finish())
}

// criterion 4: infinite thinning of a power-law renewal process lands
// on the Mittag-Leffler transform
fn check_thinning_universality(_ctx: &CheckContext) -> Result<CheckOutcome> {
    let mut r = Report::new("thinning-universality");
    let s_grid = [0.25f64, 1.0, 4.0];
    for &beta in &[0.5f64, 0.75] {
        // the tail scale theta is ours to choose; the correction decays
        // like (tau s theta)^{1-beta}, so a small theta keeps the
        // tau = 1e-4 deviation inside the 0.02 band
        let law = WaitingLaw::Pareto { beta, theta: 0.01 };
        let lambda = law.lambda();
        let mut sups = Vec::new();
        for &tau in &[1e-2f64, 1e-4] {
            let q = lambda * tau.powf(beta);
            let mut sup: f64 = 0.0;
            for &s in &s_grid {
                let g = thinned_laplace(&law, q, tau, Complex64::new(s, 0.0))?;
                let target = 1.0 / (1.0 + s.powf(beta));
                sup = sup.max((g.re - target).abs());
            }
            sups.push(sup);
        }
        r.check(
            format!(
                "beta={beta}: sup deviation {:.3e} < 0.02 at tau=1e-4",
                sups[1]
            ),
            sups[1] < 0.02,
        );
        r.check(
            format!(
                "beta={beta}: deviation decreases (tau=1e-2: {:.3e} > tau=1e-4: {:.3e})",
                sups[0], sups[1]
            ),
            sups[1] < sups[0],
        );
    }
    Ok(r.finish())
}

// criterion 5: rescaling-respeeding universality and exact invariance
fn check_respeed_invariance(_ctx: &CheckContext) -> Result<CheckOutcome> {
    let mut r = Report::new("respeed-invariance");
    for &beta in &[0.5f64, 0.8] {
        let law = WaitingLaw::MittagLeffler { beta };
        let mut worst: f64 = 0.0;
        for &tau in &[0.1f64, 0.5, 0.9] {
            for &s in &[0.25f64, 1.0, 4.0] {
                let g = respeed_transform(&law, tau, tau.powf(beta), Complex64::new(s, 0.0))?;
                worst = worst.max((g.re - 1.0 / (1.0 + s.powf(beta))).abs());
            }
        }
        r.check(
            format!("ML invariance beta={beta}: worst {worst:.2e} <= 1e-12"),
            worst <= 1e-12,
        );
    }
    for &beta in &[0.5f64, 0.75] {
        let law = WaitingLaw::Pareto { beta, theta: 0.01 };
        let tau = 1e-4f64;
        let a = law.lambda() * tau.powf(beta);
        let mut sup: f64 = 0.0;
        for &s in &[0.25f64, 1.0, 4.0] {
            let g = respeed_transform(&law, tau, a, Complex64::new(s, 0.0))?;
            sup = sup.max((g.re - 1.0 / (1.0 + s.powf(beta))).abs());
        }
        r.check(
            format!("Pareto universality beta={beta}: sup {sup:.3e} < 0.02"),
            sup < 0.02,
        );
    }
    Ok(r.finish())
}

// criterion 6: closed Montroll-Weiss form vs geometric partial sums
fn check_montroll_weiss(_ctx: &CheckContext) -> Result<CheckOutcome> {
    let mut r = Report::new("montroll-weiss");
    let scale = ScaleState::identity();
    let pairs: Vec<(WaitingLaw, JumpLaw)> = vec![
        (WaitingLaw::Exponential { rate: 1.0 }, JumpLaw::TwoPoint),
        (
            WaitingLaw::MittagLeffler { beta: 0.6 },
            JumpLaw::Gaussian { sigma: 1.0 },
        ),
        (
            WaitingLaw::Pareto {
                beta: 0.5,
                theta: 1.0,
            },
            JumpLaw::SymStable { alpha: 1.5 },
        ),
    ];
    for (w, j) in &pairs {
        let mut worst: f64 = 0.0;
        let mut compared = 0;
        for &kappa in &[0.5f64, 1.0, 2.0] {
            for &s in &[0.25f64, 1.0, 4.0] {
                let s = Complex64::new(s, 0.0);
                let ratio = (w.laplace(s)? * j.fourier(kappa)?).norm();
                if ratio > 0.9 {
                    continue;
                }
                let n = ((1e-10f64.ln() / ratio.ln()).ceil() as usize).max(40) + 50;
                let closed = montroll_weiss(w, j, &scale, kappa, s)?;
                let series = montroll_weiss_series(w, j, &scale, kappa, s, n)?;
                worst = worst.max((closed - series).norm());
                compared += 1;
            }
        }
        r.check(
            format!("{w:?} + {j:?}: {compared} points, worst |diff| {worst:.2e} <= 1e-8"),
            compared > 0 && worst <= 1e-8,
        );
        let mut worst0: f64 = 0.0;
        for &s in &[0.25f64, 1.0, 4.0] {
            let p = montroll_weiss(w, j, &scale, 0.0, Complex64::new(s, 0.0))?;
            worst0 = worst0.max((p - 1.0 / s).norm());
        }
        r.check(
            format!("{w:?} + {j:?}: kappa=0 gives 1/s, worst {worst0:.2e} <= 1e-13"),
            worst0 <= 1e-13,
        );
    }
    Ok(r.finish())
}

// criterion 7: the transform gap to the scaling limit decreases along h
fn check_diffusion_limit_gap(_ctx: &CheckContext) -> Result<CheckOutcome> {
    let mut r = Report::new("diffusion-limit-gap");
    let h_seq = [1e-1, 1e-2, 1e-3];
    let cases: Vec<(&str, WaitingLaw, JumpLaw)> = vec![
        (
            "exponential + gaussian (alpha=2, beta=1)",
            WaitingLaw::Exponential { rate: 1.0 },
            JumpLaw::Gaussian {
                sigma: std::f64::consts::SQRT_2,
            },
        ),
        (
            "pareto(0.5) + sym-pareto(1.5)",
            WaitingLaw::Pareto {
                beta: 0.5,
                theta: 1.0,
            },
            JumpLaw::SymPareto {
                alpha: 1.5,
                theta: 1.0,
            },
        ),
    ];
    for (label, w, j) in &cases {
        let gaps = diffusion_limit_gap(w, j, 1.0, 1.0, &h_seq)?;
        let dec = gaps[0].gap > gaps[1].gap && gaps[1].gap > gaps[2].gap;
        r.check(
            format!(
                "{label}: gaps {:.3e} > {:.3e} > {:.3e}",
                gaps[0].gap, gaps[1].gap, gaps[2].gap
            ),
            dec,
        );
    }
    Ok(r.finish())
}

// criterion 8: simulated well-scaled walk variance at alpha = 2
fn check_subdiffusive_variance(ctx: &CheckContext) -> Result<CheckOutcome> {
    let mut r = Report::new("subdiffusive-variance");
    for (case, &beta) in [0.5f64, 0.8].iter().enumerate() {
        let times = [1.0, 2.0, 4.0, 8.0];
        let cfg = CtrwConfig {
            waiting: WaitingLaw::MittagLeffler { beta },
            jump: JumpLaw::Gaussian {
                sigma: std::f64::consts::SQRT_2,
            },
            scale: ScaleState::identity(), // r(1,1) = 1: well-scaled as is
            n_paths: 100_000,
            observation_times: times.to_vec(),
            event_cap: DEFAULT_EVENT_CAP,
        };
        let ens = simulate_ctrw(&cfg, RngStream::new(ctx.seed, (800 + case * 200) as u64))?;
        let mut lnv = Vec::new();
        for (i, &t) in times.iter().enumerate() {
            match variance_estimate(&ens[i]) {
                VarianceEstimate::Finite { value, std_err } => {
                    lnv.push(value.ln());
                    if t == 1.0 || t == 4.0 {
                        let expect = 2.0 * t.powf(beta) / gamma(1.0 + beta);
                        r.check(
                            format!(
                                "beta={beta} t={t}: var {value:.4} vs {expect:.4} (3se {:.4})",
                                3.0 * std_err
                            ),
                            (value - expect).abs() <= 3.0 * std_err,
                        );
                    }
                }
                VarianceEstimate::HeavyTailed { batch_spread } => {
                    r.check(
                        format!("beta={beta} t={t}: unexpected heavy-tail flag ({batch_spread})"),
                        false,
                    );
                    lnv.push(f64::NAN);
                }
            }
        }
        // least-squares slope of ln var against ln t
        let lnt: Vec<f64> = times.iter().map(|t| t.ln()).collect();
        let mt = lnt.iter().sum::<f64>() / 4.0;
        let mv = lnv.iter().sum::<f64>() / 4.0;
        let slope = lnt
            .iter()
            .zip(&lnv)
            .map(|(a, b)| (a - mt) * (b - mv))
            .sum::<f64>()
            / lnt.iter().map(|a| (a - mt) * (a - mt)).sum::<f64>();
        r.check(
            format!("beta={beta}: log-log slope {slope:.4} within 0.05 of {beta}"),
            (slope - beta).abs() <= 0.05,
        );
    }
    Ok(r.finish())
}

// criterion 9: empirical characteristic function of the well-scaled walk
fn check_charfn_limit(ctx: &CheckContext) -> Result<CheckOutcome> {
    let mut r = Report::new("charfn-limit");
    let cases: &[(f64, f64, JumpLaw, f64)] = &[
        (
            2.0,
            0.5,
            JumpLaw::Gaussian {
                sigma: std::f64::consts::SQRT_2,
            },
            0.05,
        ),
        (1.5, 0.75, JumpLaw::SymStable { alpha: 1.5 }, 0.025),
    ];
    for (case, &(alpha, beta, jump, h)) in cases.iter().enumerate() {
        let waiting = WaitingLaw::MittagLeffler { beta };
        let scale = ScaleState::well_scaled_from_h(&waiting, &jump, h)?;
        let cfg = CtrwConfig {
            waiting,
            jump,
            scale,
            n_paths: 100_000,
            observation_times: vec![1.0],
            event_cap: DEFAULT_EVENT_CAP,
        };
        let ens = simulate_ctrw(&cfg, RngStream::new(ctx.seed, (1200 + case * 300) as u64))?;
        for &kappa in &[0.5f64, 1.0, 2.0] {
            let cs: Vec<f64> = ens[0].iter().map(|&x| (kappa * x).cos()).collect();
            let (m, se) = empirical_mean_stderr(&cs);
            let expect = ml_one_real(beta, -kappa.powf(alpha))?.value;
            r.check(
                format!(
                    "(alpha={alpha}, beta={beta}) kappa={kappa}: {m:.5} vs {expect:.5} (3se {:.5})",
                    3.0 * se
                ),
                (m - expect).abs() <= 3.0 * se,
            );
        }
    }
    Ok(r.finish())
}

// criterion 10: subordinator density identities
fn check_subordinator_identities(_ctx: &CheckContext) -> Result<CheckOutcome> {
    let mut r = Report::new("subordinator-identities");
    for &beta in &[0.5f64, 0.75] {
        for &t in &[0.5f64, 1.0, 2.0] {
            let cut = mwright_support_cut(beta, -40.0) * t.powf(beta);
            let q = integrate(
                |rr| subordinator_density(beta, rr, t).unwrap_or(0.0),
                0.0,
                cut,
                1e-9,
                1e-9,
            )?;
            r.within(&format!("mass beta={beta} t={t}"), q.value, 1.0, 1e-6);
        }
    }
    let beta = 0.5;
    for &y in &[0.5f64, 1.0, 2.0] {
        for &t in &[0.5f64, 1.0, 2.0] {
            let cut = mwright_support_cut(beta, -40.0) * t.powf(beta);
            let q = integrate(
                |rr| (-y * rr).exp() * subordinator_density(beta, rr, t).unwrap_or(0.0),
                0.0,
                cut,
                1e-9,
                1e-9,
            )?;
            let expect = ml_one_real(beta, -y * t.powf(beta))?.value;
            r.within(
                &format!("Laplace-type integral y={y} t={t}"),
                q.value,
                expect,
                1e-6,
            );
        }
    }
    let mut worst: f64 = 0.0;
    for &beta in &[0.3f64, 0.5, 0.75] {
        for &(rr, t) in &[(0.5f64, 1.0f64), (1.0, 1.0), (2.0, 0.7), (0.2, 2.0)] {
            let a = subordinator_density(beta, rr, t)?;
            let b = subordinator_density_via_stable(beta, rr, t)?;
            worst = worst.max((a - b).abs());
        }
    }
    r.check(
        format!("two printed forms agree: worst |diff| {worst:.2e} <= 1e-8"),
        worst <= 1e-8,
    );
    Ok(r.finish())
}

// criterion 11: Fourier density, subordination integral, Monte Carlo
fn check_route_triangle(ctx: &CheckContext) -> Result<CheckOutcome> {
    let mut r = Report::new("route-triangle");
    for (case, &(alpha, beta)) in [(2.0f64, 0.5f64), (1.5, 0.75)].iter().enumerate() {
        let p = FracDiffProblem::new(alpha, beta, 1.0)?;
        // deterministic routes pointwise on |x| <= 5
        let xs: Vec<f64> = (-10..=10).map(|i| i as f64 * 0.5).collect();
        let mut worst: f64 = 0.0;
        for &x in &xs {
            let a = p.density_fourier_at(x)?;
            let b = p.density_subordination_at(x)?;
            worst = worst.max((a - b).abs());
        }
        r.check(
            format!("(alpha={alpha}, beta={beta}): deterministic routes worst {worst:.2e} <= 1e-4"),
            worst <= 1e-4,
        );
        // Monte Carlo histogram vs the Fourier density
        let n_paths = 100_000;
        let (_, mc) = crate::fracdiff::simulate_subordination_ensemble(
            &p,
            1.0,
            1e-3,
            n_paths,
            RngStream::new(ctx.seed, (2000 + case * 500) as u64),
        )?;
        let lo = -8.0f64;
        let hi = 8.0f64;
        let n_bins = 64usize;
        let width = (hi - lo) / n_bins as f64;
        let mut emp = vec![0.0f64; n_bins + 1];
        for &x in &mc {
            if !(lo..hi).contains(&x) {
                emp[n_bins] += 1.0 / n_paths as f64;
            } else {
                emp[(((x - lo) / width) as usize).min(n_bins - 1)] += 1.0 / n_paths as f64;
            }
        }
        let mut exact = vec![0.0f64; n_bins + 1];
        for i in 0..n_bins {
            let mid = lo + (i as f64 + 0.5) * width;
            exact[i] = p.density_fourier_at(mid)? * width;
        }
        exact[n_bins] = (1.0 - exact.iter().take(n_bins).sum::<f64>()).max(0.0);
        let tv = total_variation(&emp, &exact);
        r.check(
            format!("(alpha={alpha}, beta={beta}): Monte Carlo TV {tv:.4} < 0.02"),
            tv < 0.02,
        );
    }
    Ok(r.finish())
}

// criterion 12: beta = 1 (and alpha = 2 / alpha = 1) classical results
fn check_degeneracies(ctx: &CheckContext) -> Result<CheckOutcome> {
    let mut r = Report::new("degeneracies");
    // survival and counting collapse to exponential / Poisson
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let t = 0.3 * (k + 1) as f64;
        worst = worst.max((ml_survival(1.0, t)? - (-t).exp()).abs());
    }
    r.check(format!("E_1(-t) survival vs exp: {worst:.2e} <= 1e-15"), worst <= 1e-15);
    let mut worst: f64 = 0.0;
    for &t in &[1.0f64, 5.0] {
        for k in 0..25usize {
            let p = counting_pmf(1.0, t, k)?;
            let ln_expect =
                -t + k as f64 * t.ln() - statrs::function::gamma::ln_gamma(k as f64 + 1.0);
            worst = worst.max((p - ln_expect.exp()).abs());
        }
    }
    r.check(format!("Poisson pmf: worst {worst:.2e} <= 1e-14"), worst <= 1e-14);
    // thinned-rescaled exponential transform is exactly exponential
    let law = WaitingLaw::Exponential { rate: 1.0 };
    let mut worst: f64 = 0.0;
    for &q in &[0.5f64, 0.1] {
        for &s in &[0.25f64, 1.0, 4.0] {
            let g = thinned_laplace(&law, q, q, Complex64::new(s, 0.0))?;
            worst = worst.max((g.re - 1.0 / (1.0 + s)).abs());
        }
    }
    r.check(
        format!("thinned exponential invariance: {worst:.2e} <= 1e-13"),
        worst <= 1e-13,
    );
    // heat kernel and Cauchy densities from the Fourier route
    let p = FracDiffProblem::new(2.0, 1.0, 1.0)?;
    let mut worst: f64 = 0.0;
    for &x in &[0.0f64, 0.5, 1.5, 3.0] {
        let u = p.density_fourier_at(x)?;
        let expect = (4.0 * PI).sqrt().recip() * (-x * x / 4.0).exp();
        worst = worst.max((u - expect).abs());
    }
    r.check(format!("heat kernel: worst {worst:.2e} <= 1e-6"), worst <= 1e-6);
    let p = FracDiffProblem::new(1.0, 1.0, 1.0)?;
    let mut worst: f64 = 0.0;
    for &x in &[0.0f64, 0.5, 1.5, 3.0] {
        let u = p.density_fourier_at(x)?;
        worst = worst.max((u - 1.0 / (PI * (1.0 + x * x))).abs());
    }
    r.check(format!("Cauchy density: worst {worst:.2e} <= 1e-6"), worst <= 1e-6);
    // beta = 1 subordination: physical time equals operational time
    let p = FracDiffProblem::new(2.0, 1.0, 1.0)?;
    let path = crate::fracdiff::simulate_parametric_subordination(
        &p,
        0.01,
        200,
        RngStream::new(ctx.seed, 3000),
    )?;
    let ident = path
        .iter()
        .all(|pair| (pair.physical_time - pair.operational_time).abs() < 1e-12);
    r.check("beta=1 parametric subordination: t == t_*", ident);
    // memory function of the exponential law is identically 1
    let mut worst: f64 = 0.0;
    for &s in &[0.5f64, 1.0, 2.0] {
        let h = crate::ctrw::memory_transform(
            &WaitingLaw::Exponential { rate: 1.0 },
            Complex64::new(s, 0.0),
        )?;
        worst = worst.max((h - 1.0).norm());
    }
    r.check(format!("memory H == 1 for exponential: {worst:.2e} <= 1e-14"), worst <= 1e-14);
    Ok(r.finish())
}

// criterion 13: fractional Poisson pmf, inversion vs Monte Carlo
fn check_fractional_poisson_pmf(ctx: &CheckContext) -> Result<CheckOutcome> {
    let mut r = Report::new("fractional-poisson-pmf");
    for &beta in &[0.5f64, 0.9] {
        for &t in &[1.0f64, 5.0] {
            let n_paths = 100_000usize;
            let mut counts = vec![0usize; 128];
            let base = RngStream::new(
                ctx.seed,
                4000 + (beta * 10.0) as u64 * 100 + t as u64,
            );
            for i in 0..n_paths {
                let path = simulate_renewal(
                    WaitingLaw::MittagLeffler { beta },
                    t,
                    base.substream(i as u64),
                    DEFAULT_EVENT_CAP,
                )?;
                counts[path.event_times.len().min(127)] += 1;
            }
            let emp: Vec<f64> = counts.iter().map(|&c| c as f64 / n_paths as f64).collect();
            let exact = counting_pmf_table(beta, t, 1e-8, 400)?;
            let tv = total_variation(&emp, &exact);
            r.check(
                format!("beta={beta} t={t}: TV(MC, inversion) {tv:.4} < 0.01"),
                tv < 0.01,
            );
        }
    }
    // beta = 1 inversion agrees with the Poisson pmf
    let mut worst: f64 = 0.0;
    for &t in &[1.0f64, 5.0] {
        for k in 0..30usize {
            let via_talbot = crate::talbot::invert(
                |s| {
                    let sb = s;
                    1.0 / s * (s / (sb + 1.0)) * (1.0 / (sb + 1.0)).powf(k as f64)
                },
                t,
                1e-6,
            )?
            .0;
            let ln_expect =
                -t + k as f64 * t.ln() - statrs::function::gamma::ln_gamma(k as f64 + 1.0);
            worst = worst.max((via_talbot - ln_expect.exp()).abs());
        }
    }
    r.check(
        format!("beta=1 pmf via inversion vs Poisson: worst {worst:.2e} <= 1e-8"),
        worst <= 1e-8,
    );
    Ok(r.finish())
}
