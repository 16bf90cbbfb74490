//! Scaled reproduction checks with a line-per-criterion report.

use std::f64::consts::PI;
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::closed_form::{self, DimensionlessParams};
use crate::error::Result;
use crate::observables::{
    fixed_point_subspace, postselect, scatter, scatter_with, subspace_angle, symmetry_report,
    FIXED_POINT_TOL,
};
use crate::oracle::{oracle_scattering, ImpurityChain};
use crate::spin_algebra::{
    electron_state, operators, pair, recoupling_matrix_elements, s_e1_squared_in_doublet, Spin,
    SpinVector, Vec8, C64,
};
use crate::waveguide::{channel_amplitudes, scattering_matrices};

use super::config::{Axis, Scenario, SweepConfig};
use super::sweep::{run_sweep, SweepTable};
use super::units::{convert_units, PhysicalParams};

const SEED: u64 = 0x5eed_2007;
const FIGURE_COUPLINGS: [f64; 3] = [1.0, 2.0, 10.0];
const TRANSPARENCY_COUPLINGS: [f64; 5] = [0.5, 1.0, 2.0, 10.0, 100.0];

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] criterion {} ({}): {}", self.id, self.title, self.detail)
    }
}

fn report(id: u8, title: &'static str, outcome: Result<(bool, String)>) -> CriterionReport {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionReport {
        id,
        title,
        passed,
        detail,
    }
}

fn params(u: f64, theta: f64) -> Result<DimensionlessParams> {
    DimensionlessParams::new(u, theta)
}

fn max_norm<'a>(values: impl IntoIterator<Item = &'a C64>) -> f64 {
    values.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn random_state(rng: &mut StdRng) -> Result<SpinVector> {
    let v = Vec8::from_fn(|_, _| C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    SpinVector::normalize(v)
}

/// Distance from `x` to the nearest multiple of pi. Transmission is
/// pi-periodic in theta, so a peak just above 0 is the image of one just
/// above pi.
pub fn distance_to_pi_multiple(x: f64) -> f64 {
    (x - (x / PI).round() * PI).abs()
}

pub fn run() -> Vec<CriterionReport> {
    vec![
        report(1, "triple-pipeline agreement", triple_agreement()),
        report(2, "flux conservation", flux_conservation()),
        report(3, "singlet transparency", singlet_transparency()),
        report(4, "transparency uniqueness", transparency_uniqueness()),
        report(5, "conservation laws", conservation_laws()),
        report(6, "recoupling values", recoupling_values()),
        report(7, "entanglement generation", entanglement_generation()),
        report(8, "figure-text claims", figure_claims()),
        report(9, "units sanity", units_sanity()),
    ]
}

/// Runs every check, prints one line per criterion and returns the reports.
pub fn verify_figures() -> Vec<CriterionReport> {
    let reports = run();
    for r in &reports {
        println!("{r}");
    }
    reports
}

fn triple_agreement() -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(SEED);
    let (mut cf_wg, mut wg_oracle) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let u = 20.0 * (1.0 - rng.gen::<f64>());
        let theta = 2.0 * PI * rng.gen_range(f64::EPSILON..1.0);
        let p = params(u, theta)?;
        let solved = channel_amplitudes(&p)?;
        let t_doublet = closed_form::t_doublet(&p) - solved.t_doublet;
        cf_wg = cf_wg
            .max((closed_form::t_quartet(&p) - solved.t_quartet).norm())
            .max(max_norm(t_doublet.iter()));

        let pipeline = scattering_matrices(&p)?.to_product_basis();
        let oracle = oracle_scattering(&ImpurityChain::two_impurity(u, theta)?)?;
        wg_oracle = wg_oracle
            .max(max_norm((pipeline.transmission - oracle.transmission).iter()))
            .max(max_norm((pipeline.reflection - oracle.reflection).iter()));
    }
    Ok((
        cf_wg < 1e-10 && wg_oracle < 1e-10,
        format!("max |closed - solver| = {cf_wg:.2e}, max |solver - oracle| = {wg_oracle:.2e} (1000 points)"),
    ))
}

fn flux_conservation() -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(SEED + 1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let chi = random_state(&mut rng)?;
        let p = params(20.0 * (1.0 - rng.gen::<f64>()), 2.0 * PI * rng.gen_range(f64::EPSILON..1.0))?;
        let s = scatter(&chi, &p)?;
        worst = worst.max((s.transmittivity + s.reflectivity - 1.0).abs());
    }
    Ok((worst < 1e-10, format!("max |T + R - 1| = {worst:.2e} (1000 points)")))
}

fn singlet_transparency() -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(SEED + 2);
    let (mut t_err, mut f_err) = (0.0f64, 0.0f64);
    for n in 1..=3 {
        for u in TRANSPARENCY_COUPLINGS {
            let matrices = scattering_matrices(&params(u, n as f64 * PI)?)?;
            for _ in 0..20 {
                let a = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                let b = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
                let chi = SpinVector::from_parts([a / norm, b / norm], pair::psi_minus());
                let s = scatter_with(&matrices, &chi)?;
                let fidelity = chi.inner(&s.transmitted_state()).norm_sqr() / s.transmittivity;
                t_err = t_err.max((s.transmittivity - 1.0).abs());
                f_err = f_err.max(1.0 - fidelity);
            }
        }
    }
    Ok((
        t_err < 1e-10 && f_err < 1e-10,
        format!("max |T - 1| = {t_err:.2e}, max (1 - fidelity) = {f_err:.2e}"),
    ))
}

fn transparency_uniqueness() -> Result<(bool, String)> {
    let target: Vec<Vec8> = [Spin::Up, Spin::Down]
        .map(|e| *SpinVector::from_parts(electron_state(e), pair::psi_minus()).amplitudes())
        .to_vec();
    let mut ok = true;
    let mut worst_angle = 0.0f64;
    let mut worst_resonant_det = 0.0f64;
    for n in 1..=3 {
        for u in TRANSPARENCY_COUPLINGS {
            let p = params(u, n as f64 * PI)?;
            let fp = fixed_point_subspace(&p, FIXED_POINT_TOL)?;
            ok &= fp.dimension == 2;
            if fp.dimension == 2 {
                worst_angle = worst_angle.max(subspace_angle(&fp.basis, &target));
            }
            worst_resonant_det = worst_resonant_det.max(closed_form::det_t_minus_identity(&p).norm());
        }
    }
    ok &= worst_angle < 1e-6 && worst_resonant_det < 1e-10;

    let mut rng = StdRng::seed_from_u64(SEED + 3);
    let mut max_dim = 0;
    let mut form_err = 0.0f64;
    let mut min_det = f64::INFINITY;
    for _ in 0..100 {
        let p = params(rng.gen_range(0.1..20.0), 2.0 * PI * rng.gen_range(f64::EPSILON..1.0))?;
        max_dim = max_dim.max(fixed_point_subspace(&p, FIXED_POINT_TOL)?.dimension);
        let det = closed_form::det_t_minus_identity(&p);
        form_err = form_err.max((det - closed_form::det_t_minus_identity_factored(&p)).norm());
        min_det = min_det.min(det.norm());
    }
    ok &= max_dim == 0 && form_err < 1e-10 && min_det > 1e-10;
    Ok((
        ok,
        format!(
            "resonant subspace angle <= {worst_angle:.2e}, |det| at n pi <= {worst_resonant_det:.2e}; \
             off resonance: max dim = {max_dim}, det form error = {form_err:.2e}, min |det| = {min_det:.2e}"
        ),
    ))
}

fn conservation_laws() -> Result<(bool, String)> {
    let ops = operators();
    let mut rng = StdRng::seed_from_u64(SEED + 4);
    let mut total = 0.0f64;
    for _ in 0..100 {
        let (u, theta) = (rng.gen_range(0.01..20.0), 2.0 * PI * rng.gen_range(f64::EPSILON..1.0));
        let r = symmetry_report(&params(u, theta)?)?;
        let full = oracle_scattering(&ImpurityChain::two_impurity(u, theta)?)?;
        total = total
            .max(r.total_squared)
            .max(r.total_z)
            .max(full.commutator_norm(&ops.total_squared))
            .max(full.commutator_norm(&ops.total_z));
    }
    let mut resonant_pair = 0.0f64;
    for n in 1..=3 {
        for u in TRANSPARENCY_COUPLINGS {
            let theta = n as f64 * PI;
            let r = symmetry_report(&params(u, theta)?)?;
            let full = oracle_scattering(&ImpurityChain::two_impurity(u, theta)?)?;
            resonant_pair = resonant_pair
                .max(r.pair_squared)
                .max(full.commutator_norm(&ops.pair_squared));
        }
    }
    let off = symmetry_report(&params(10.0, 2.0)?)?.pair_squared;
    Ok((
        total < 1e-10 && resonant_pair < 1e-10 && off > 1e-3,
        format!(
            "max [S^2 | S_z, S] = {total:.2e}; [S12^2, S] at n pi = {resonant_pair:.2e}, at theta = 2, u = 10: {off:.3e}"
        ),
    ))
}

fn recoupling_values() -> Result<(bool, String)> {
    let s3 = 3f64.sqrt() / 2.0;
    let expected = nalgebra::Matrix2::new(1.5, s3, s3, 0.5);
    let m = recoupling_matrix_elements();
    let err = (m - expected).abs().max();
    let sandwich = [1, -1]
        .map(|twice_m| (s_e1_squared_in_doublet(twice_m) - m).abs().max())
        .into_iter()
        .fold(0.0, f64::max);
    Ok((
        err < 1e-12 && sandwich < 1e-12,
        format!(
            "[[{:.15}, {:.15}], [{:.15}, {:.15}]], |6j - expected| = {err:.1e}, |6j - basis sandwich| = {sandwich:.1e}",
            m[(0, 0)],
            m[(0, 1)],
            m[(1, 0)],
            m[(1, 1)]
        ),
    ))
}

fn entanglement_generation() -> Result<(bool, String)> {
    let table = run_sweep(&SweepConfig::for_scenario(Scenario::Fig7))?;
    let best = table
        .rows
        .iter()
        .max_by(|a, b| a.t_down.total_cmp(&b.t_down))
        .expect("fig7 grid is non-empty");
    let mut ok = best.t_down > 0.2 && (0.5..=2.0).contains(&best.u);

    let chi = SpinVector::basis_state(Spin::Up, Spin::Down, Spin::Down);
    let (mut c_err, mut f_err) = (0.0f64, 0.0f64);
    for u in [0.5, 1.0, 2.0, 10.0] {
        let post = postselect(&scatter(&chi, &params(u, PI)?)?, Spin::Down);
        let Some(state) = post.conditional else {
            ok = false;
            continue;
        };
        let overlap: C64 = pair::psi_plus()
            .iter()
            .zip(&state.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        c_err = c_err.max((state.concurrence - 1.0).abs());
        f_err = f_err.max((1.0 - overlap.norm_sqr()).abs());
    }
    ok &= c_err < 1e-10 && f_err < 1e-10;
    Ok((
        ok,
        format!(
            "max T_down = {:.4} at u = {:.2}; post-selected |1 - C| = {c_err:.1e}, |1 - F(psi+)| = {f_err:.1e}",
            best.t_down, best.u
        ),
    ))
}

fn theta_sweep(scenario: Scenario) -> Result<SweepTable> {
    run_sweep(&SweepConfig {
        u: Axis::Values(FIGURE_COUPLINGS.to_vec()),
        ..SweepConfig::for_scenario(scenario)
    })
}

/// `(theta, T)` curve of one coupling from a theta sweep.
fn curve(table: &SweepTable, u: f64) -> Vec<(f64, f64)> {
    table
        .rows
        .iter()
        .filter(|r| r.u == u)
        .map(|r| (r.theta, r.t))
        .collect()
}

fn argmax(curve: &[(f64, f64)]) -> (f64, f64) {
    *curve
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty curve")
}

/// Full width at `level` of the peak at the grid point nearest `center`,
/// with linear interpolation of the crossings. Returns `None` when the
/// curve never drops below `level` on one side.
pub fn peak_width(curve: &[(f64, f64)], center: f64, level: f64) -> Option<f64> {
    let c = curve
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 .0 - center).abs().total_cmp(&(b.1 .0 - center).abs()))?
        .0;
    let crossing = |i: usize, j: usize| {
        let ((x0, y0), (x1, y1)) = (curve[i], curve[j]);
        x0 + (level - y0) * (x1 - x0) / (y1 - y0)
    };
    let right = (c..curve.len() - 1).find(|&i| curve[i + 1].1 < level).map(|i| crossing(i, i + 1))?;
    let left = (1..=c).rev().find(|&i| curve[i - 1].1 < level).map(|i| crossing(i, i - 1))?;
    Some(right - left)
}

fn figure_claims() -> Result<(bool, String)> {
    let mut parts = Vec::new();
    let mut ok = true;

    // fig2b: principal maxima on n pi, within one grid step
    let fig2b = theta_sweep(Scenario::Fig2b)?;
    let step = fig2b.config.theta.step().unwrap_or(0.0);
    let offsets: Vec<f64> = FIGURE_COUPLINGS
        .iter()
        .map(|&u| distance_to_pi_multiple(argmax(&curve(&fig2b, u)).0))
        .collect();
    let pass = offsets.iter().all(|&d| d <= step * (1.0 + 1e-9));
    ok &= pass;
    parts.push(format!(
        "fig2b argmax offsets {:?} vs step {step:.5} {}",
        offsets.iter().map(|d| format!("{d:.5}")).collect::<Vec<_>>(),
        if pass { "ok" } else { "FAILED" }
    ));

    // fig2a: argmax drifts towards n pi as u grows
    let fig2a = theta_sweep(Scenario::Fig2a)?;
    let drift: Vec<f64> = FIGURE_COUPLINGS
        .iter()
        .map(|&u| distance_to_pi_multiple(argmax(&curve(&fig2a, u)).0))
        .collect();
    let pass = drift.windows(2).all(|w| w[1] < w[0]);
    ok &= pass;
    parts.push(format!(
        "fig2a argmax offsets {:?} {}",
        drift.iter().map(|d| format!("{d:.4}")).collect::<Vec<_>>(),
        if pass { "ok" } else { "FAILED" }
    ));

    // fig3b: half-maximum width of the n pi peak shrinks with u
    let fig3b = theta_sweep(Scenario::Fig3b)?;
    let widths: Vec<f64> = FIGURE_COUPLINGS
        .iter()
        .map(|&u| peak_width(&curve(&fig3b, u), PI, 0.5).unwrap_or(f64::INFINITY))
        .collect();
    let pass = widths.windows(2).all(|w| w[1] < w[0]);
    ok &= pass;
    parts.push(format!(
        "fig3b widths {:?} {}",
        widths.iter().map(|d| format!("{d:.4}")).collect::<Vec<_>>(),
        if pass { "ok" } else { "FAILED" }
    ));

    // fig4: extrema over the (vartheta, phi) grid
    let fig4 = run_sweep(&SweepConfig::for_scenario(Scenario::Fig4))?;
    let at = |table: &SweepTable, point: (f64, f64)| {
        table
            .rows
            .iter()
            .find(|r| r.family_point == Some(point))
            .cloned()
            .expect("grid contains the point")
    };
    let t_max = fig4.rows.iter().map(|r| r.t).fold(f64::NEG_INFINITY, f64::max);
    let t_min = fig4.rows.iter().map(|r| r.t).fold(f64::INFINITY, f64::min);
    let singlet = at(&fig4, (PI / 4.0, PI)).t;
    let triplet = at(&fig4, (PI / 4.0, 0.0)).t;
    let pass = (singlet - t_max).abs() < 1e-10 && (singlet - 1.0).abs() < 1e-10 && (triplet - t_min).abs() < 1e-10;
    ok &= pass;
    parts.push(format!(
        "fig4 T(pi/4, pi) = {singlet:.12} (max {t_max:.12}), T(pi/4, 0) = {triplet:.6} (min {t_min:.6}) {}",
        if pass { "ok" } else { "FAILED" }
    ));

    // fig5: spin filtering never raises transmission
    let fig5 = run_sweep(&SweepConfig::for_scenario(Scenario::Fig5))?;
    let excess = fig5.rows.iter().map(|r| r.t_up - r.t).fold(f64::NEG_INFINITY, f64::max);
    let singlet = at(&fig5, (PI / 4.0, PI));
    let pass = excess <= 1e-12 && (singlet.t_up - singlet.t).abs() < 1e-10;
    ok &= pass;
    parts.push(format!(
        "fig5 max(T_up - T) = {excess:.1e}, |T_up - T| at psi- = {:.1e} {}",
        (singlet.t_up - singlet.t).abs(),
        if pass { "ok" } else { "FAILED" }
    ));

    // fig6(c): phase independence and the mixture identity
    let mut phase_spread = 0.0f64;
    let mut mixture_err = 0.0f64;
    let aligned = |t: f64, ph: f64| SpinVector::from_parts(electron_state(Spin::Up), pair::aligned_family(t, ph));
    let up_up = SpinVector::basis_state(Spin::Up, Spin::Up, Spin::Up);
    let down_down = SpinVector::basis_state(Spin::Up, Spin::Down, Spin::Down);
    for u in FIGURE_COUPLINGS {
        for i in 1..=200 {
            let theta = 2.0 * PI * i as f64 / 200.0;
            let matrices = scattering_matrices(&params(u, theta)?)?;
            let t_uu = scatter_with(&matrices, &up_up)?.transmittivity;
            let t_dd = scatter_with(&matrices, &down_down)?.transmittivity;
            for vt in [PI / 4.0, 0.3, 1.1] {
                let reference = scatter_with(&matrices, &aligned(vt, 0.0))?.transmittivity;
                let mixture = vt.cos().powi(2) * t_uu + vt.sin().powi(2) * t_dd;
                mixture_err = mixture_err.max((reference - mixture).abs());
                for ph in [0.7, PI / 2.0, PI, 2.5] {
                    let t = scatter_with(&matrices, &aligned(vt, ph))?.transmittivity;
                    phase_spread = phase_spread.max((t - reference).abs());
                }
            }
        }
    }
    let pass = phase_spread < 1e-12 && mixture_err < 1e-12;
    ok &= pass;
    parts.push(format!(
        "fig6c phase spread {phase_spread:.1e}, mixture error {mixture_err:.1e} {}",
        if pass { "ok" } else { "FAILED" }
    ));

    Ok((ok, parts.join("; ")))
}

fn units_sanity() -> Result<(bool, String)> {
    let c = convert_units(&PhysicalParams {
        effective_mass: 0.067,
        energy_mev: 2.0,
        coupling_ev_angstrom: 1.0,
        spacing_nm: None,
    })?;
    Ok((
        (0.8..=1.2).contains(&c.u) && (40.0..=70.0).contains(&c.resonant_spacing_nm),
        format!(
            "u = {:.4}, k = {:.4e} 1/m, x0(theta = pi) = {:.2} nm",
            c.u, c.k, c.resonant_spacing_nm
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_distance() {
        assert_eq!(distance_to_pi_multiple(PI), 0.0);
        assert!((distance_to_pi_multiple(2.0 * PI + 0.1) - 0.1).abs() < 1e-12);
        assert!((distance_to_pi_multiple(0.2) - 0.2).abs() < 1e-12);
        assert!((distance_to_pi_multiple(3.0) - (PI - 3.0)).abs() < 1e-12);
    }

    #[test]
    fn width_of_triangle() {
        let curve: Vec<(f64, f64)> = (0..=20)
            .map(|i| {
                let x = i as f64 / 10.0;
                (x, 1.0 - (x - 1.0).abs())
            })
            .collect();
        let w = peak_width(&curve, 1.0, 0.5).unwrap();
        assert!((w - 1.0).abs() < 1e-12);
        assert!(peak_width(&curve, 1.0, -0.5).is_none());
    }

    #[test]
    fn cheap_criteria_pass() {
        for r in [
            report(6, "recoupling values", recoupling_values()),
            report(9, "units sanity", units_sanity()),
        ] {
            assert!(r.passed, "{r}");
        }
    }
}
