//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed; exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use zeno_core::algebra::{direction_eigenstates, BlochVector, DensityMatrix, MeasurementDirection};
use zeno_core::bath::{lindblad_operator, rotated_quadrature_operators, BathParams};
use zeno_core::cli::{parse_config, run_scenario};
use zeno_core::directions::{landscape_scan, optimal_directions};
use zeno_core::dynamics::{analytic_bloch, integrate, liouvillian_expanded, liouvillian_lindblad, SuperoperatorForm};
use zeno_core::fit::{exponential_rate, linear_fit};
use zeno_core::intelligent::{eigenstates_of_s, transformed_eigenstates};
use zeno_core::measurement::{
    decay_exponent_f, discrete_zeno_protocol, eigenstate, steady_state_under_measurement, Outcome,
};

type Verdict = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_bath(r: &mut ChaCha8Rng, n_min: f64) -> BathParams {
    let gamma = r.gen_range(0.2..3.0);
    let n = r.gen_range(n_min..5.0);
    let psi = r.gen_range(0.0..TAU);
    BathParams::new(gamma, n, psi).unwrap()
}

fn random_bloch(r: &mut ChaCha8Rng) -> BlochVector {
    let z: f64 = r.gen_range(-1.0..1.0);
    let phi: f64 = r.gen_range(0.0..TAU);
    let radius = r.gen_range(0.0f64..1.0).cbrt();
    let s = (1.0 - z * z).sqrt();
    BlochVector::new(radius * s * phi.cos(), radius * s * phi.sin(), radius * z).unwrap()
}

fn check(pass: bool, detail: String) -> Verdict {
    if pass {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_owned).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn run(config: &str) -> String {
    run_scenario(&parse_config(config).unwrap()).unwrap()
}

const FIG1: &str = r#"{"scenario":"landscape","bath":{"N":1,"psi":0}}"#;
const FIG2: &str =
    r#"{"scenario":"zeno","bath":{"N":1,"psi":0},"direction":"optimal-1","initial_state":"plus-mu"}"#;
const FIG3: &str = r#"{"scenario":"zeno","bath":{"N":1,"psi":0},"direction":"optimal-1","initial_state":"minus-mu","t_max":10}"#;

fn form_equivalence() -> Verdict {
    let start = Instant::now();
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let p = random_bath(&mut r, 0.0);
        for _ in 0..1000 {
            let rho = zeno_core::bloch_to_density(&random_bloch(&mut r)).unwrap();
            let a = liouvillian_expanded(&p, &rho);
            let b = liouvillian_lindblad(&p, &rho);
            worst = worst.max(a.max_abs_diff(&b));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst < 1e-12 && secs < 1.0, format!("max entry gap {worst:.2e}, {secs:.3} s"))
}

fn oracle_agreement() -> Verdict {
    let start = Instant::now();
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let p = random_bath(&mut r, 0.0);
        let b0 = random_bloch(&mut r);
        let rho0 = zeno_core::bloch_to_density(&b0).unwrap();
        let series = integrate(SuperoperatorForm::Expanded, &p, &rho0, 5.0 / p.gamma(), 1e-3 / p.gamma())
            .map_err(|e| e.to_string())?;
        for s in &series.samples {
            let exact = analytic_bloch(&p, &b0, s.t).unwrap();
            worst = worst.max(s.bloch.max_abs_diff(&exact));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst < 1e-6 && secs < 5.0, format!("sup-norm gap {worst:.2e}, {secs:.3} s"))
}

fn total_zeno_zeros() -> Verdict {
    let start = Instant::now();
    let mut r = rng(3);
    let mut worst_zero = 0.0f64;
    for _ in 0..50 {
        let p = random_bath(&mut r, 0.0);
        let (mu1, mu2) = optimal_directions(&p);
        worst_zero = worst_zero.max(decay_exponent_f(&p, &mu1).abs() / p.gamma());
        worst_zero = worst_zero.max(decay_exponent_f(&p, &mu2).abs() / p.gamma());
    }

    // Off-peak cells: great-circle distance of at least three θ-cells from
    // both closed-form peaks.
    let mut worst_off_peak = f64::NEG_INFINITY;
    let mut params = vec![BathParams::unit_gamma(1.0, 0.0).unwrap()];
    params.extend((0..3).map(|_| random_bath(&mut r, 0.0)));
    for p in &params {
        let grid = landscape_scan(p, 400, 200).map_err(|e| e.to_string())?;
        let (mu1, mu2) = optimal_directions(p);
        let exclusion = 3.0 * grid.theta_step();
        for j in 0..grid.theta_count {
            for i in 0..grid.phi_count {
                let dir = MeasurementDirection::new(grid.theta(j), grid.phi(i)).unwrap();
                if dir.angle_to(&mu1) >= exclusion && dir.angle_to(&mu2) >= exclusion {
                    worst_off_peak = worst_off_peak.max(grid.value(j, i));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst_zero < 1e-11 && worst_off_peak < -1e-6 && secs < 10.0,
        format!("max |F(mu)|/gamma {worst_zero:.2e}, max off-peak F/gamma {worst_off_peak:.3e}, {secs:.3} s"),
    )
}

fn figure_one() -> Verdict {
    let (header, rows) = parse_csv(&run(FIG1));
    if header != ["phi", "theta", "F_over_gamma"] || rows.len() != 400 * 200 {
        return Err(format!("unexpected layout {header:?} with {} rows", rows.len()));
    }
    // the two peaks tie by symmetry; the first in file order wins
    let best = rows.iter().fold(&rows[0], |best, r| if r[2] > best[2] { r } else { best });
    let (d_phi, d_theta) = (TAU / 400.0, PI / 199.0);
    let pass = (best[0] - FRAC_PI_2).abs() <= d_phi
        && (best[1] - 1.743218).abs() <= d_theta
        && best[2].abs() < 1e-4;
    check(pass, format!("argmax phi={:.6} theta={:.6} F/gamma={:.3e}", best[0], best[1], best[2]))
}

fn zeno_columns(text: &str) -> Result<Vec<Vec<f64>>, String> {
    let (header, rows) = parse_csv(text);
    if header != ["t", "sigma_mu_unmeasured", "sigma_mu_measured", "survival"] {
        return Err(format!("unexpected header {header:?}"));
    }
    Ok(rows)
}

fn value_at(rows: &[Vec<f64>], t: f64, col: usize) -> f64 {
    rows.iter().find(|r| (r[0] - t).abs() < 1e-9).expect("grid point")[col]
}

fn figure_two() -> Verdict {
    let rows = zeno_columns(&run(FIG2))?;
    let frozen = rows.iter().map(|r| (r[2] - 1.0).abs()).fold(0.0, f64::max);
    let free_at_2 = value_at(&rows, 2.0, 1);
    check(
        frozen < 1e-6 && free_at_2 < 0.5,
        format!("measured max |<sigma>-1| {frozen:.2e}; unmeasured <sigma>(2) = {free_at_2:.4} (threshold < 0.5)"),
    )
}

fn figure_three() -> Verdict {
    let rows = zeno_columns(&run(FIG3))?;
    let first = rows[0][2];
    let monotone = rows.windows(2).all(|w| w[1][2] >= w[0][2] - 1e-12);
    let last = value_at(&rows, 10.0, 2);
    check(
        (first + 1.0).abs() < 1e-9 && monotone && last > 0.99,
        format!("start {first:.6}, monotone {monotone}, <sigma>(10) = {last:.4} (threshold > 0.99)"),
    )
}

fn saturation() -> Verdict {
    let mut r = rng(7);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let p = random_bath(&mut r, 1e-3);
        let (a, b) = eigenstates_of_s(&p).map_err(|e| e.to_string())?;
        worst = worst.max(a.saturation_residual).max(b.saturation_residual);
    }
    let (a, b) = eigenstates_of_s(&BathParams::unit_gamma(1.0, 0.0).unwrap()).unwrap();
    let mut value_gap = 0.0f64;
    for rep in [a, b] {
        value_gap = value_gap
            .max((rep.var_j1 - 0.25).abs())
            .max((rep.var_j2 - 0.0073593).abs())
            .max((rep.var_j1 * rep.var_j2 - 0.00183983).abs());
    }
    check(
        worst < 1e-12 && value_gap < 1e-6,
        format!("max saturation residual {worst:.2e}; N=1 value gap {value_gap:.2e}"),
    )
}

fn eigen_structure() -> Verdict {
    let mut r = rng(8);
    let mut params = vec![BathParams::unit_gamma(1.0, 0.0).unwrap()];
    params.extend((0..50).map(|_| random_bath(&mut r, 1e-3)));
    let mut worst = 0.0f64;
    for p in &params {
        let s = lindblad_operator(p);
        let (phi1, phi2) = eigenstates_of_s(p).map_err(|e| e.to_string())?;
        let (mu1, mu2) = optimal_directions(p);
        let (u_plus, u_minus) = transformed_eigenstates(p).map_err(|e| e.to_string())?;
        // |φ₁⟩ = |+⟩_μ₁ carries λ₋ and is U|−⟩; |φ₂⟩ the opposite
        for (rep, lambda, dir, image) in [
            (phi1, p.lambda_minus(), mu1, u_minus),
            (phi2, p.lambda_plus(), mu2, u_plus),
        ] {
            let v = rep.state.amplitudes();
            let sv = s.apply(&v);
            let residual = (sv[0] - lambda * v[0]).norm().max((sv[1] - lambda * v[1]).norm());
            let scale = lambda.norm().max(1.0);
            worst = worst
                .max(residual / scale)
                .max((rep.eigenvalue - lambda).norm() / scale)
                .max(rep.state.phase_distance(&direction_eigenstates(&dir).0))
                .max(rep.state.phase_distance(&image));
        }
    }
    check(worst < 1e-10, format!("worst residual or phase distance {worst:.2e} over {} baths", params.len()))
}

fn decay_laws() -> Verdict {
    let b0 = BlochVector::new(0.6, -0.3, 0.4).unwrap();
    let mut worst = 0.0f64;
    for (n, psi) in [(1.0, 0.0), (0.5, 1.0), (2.0, 4.0), (0.1, 5.5)] {
        let p = BathParams::unit_gamma(n, psi).unwrap();
        let rho0 = zeno_core::bloch_to_density(&b0).unwrap();
        let series = integrate(SuperoperatorForm::Expanded, &p, &rho0, 3.0, 1e-3).map_err(|e| e.to_string())?;
        let (j1, j2) = rotated_quadrature_operators(&p);
        let t = series.times();
        let rz_shifted: Vec<f64> = series
            .samples
            .iter()
            .map(|s| s.bloch.rz + 1.0 / (2.0 * n + 1.0))
            .collect();
        let fitted = [
            exponential_rate(&t, &series.expectation_of(&j1).unwrap()).unwrap(),
            exponential_rate(&t, &series.expectation_of(&j2).unwrap()).unwrap(),
            exponential_rate(&t, &rz_shifted).unwrap(),
        ];
        let expected = [p.fast_rate(), p.slow_rate(), p.population_rate()];
        for (f, e) in fitted.iter().zip(expected) {
            worst = worst.max((f / e - 1.0).abs());
        }
    }
    check(worst < 1e-3, format!("worst relative rate error {worst:.2e}"))
}

fn discrete_limit() -> Verdict {
    let p = BathParams::unit_gamma(1.0, 0.0).unwrap();
    let (mu1, _) = optimal_directions(&p);
    let rho0 = DensityMatrix::pure(&eigenstate(&mu1, Outcome::Plus));
    let steps: [f64; 3] = [0.04, 0.02, 0.01];
    let mut deficits = Vec::new();
    for dt in steps {
        let n = (2.0 / dt).round() as usize;
        let series = discrete_zeno_protocol(&p, &mu1, &rho0, dt, n).map_err(|e| e.to_string())?;
        deficits.push(1.0 - series.last().measured.unwrap().survival);
    }
    let fit = linear_fit(&steps, &deficits).map_err(|e| e.to_string())?;
    let ratios = [deficits[1] / deficits[0], deficits[2] / deficits[1]];
    check(
        fit.r_squared > 0.99 && ratios.iter().all(|q| (q - 0.5).abs() < 0.05),
        format!(
            "deficits {:.3e} {:.3e} {:.3e}, halving ratios {:.3} {:.3}, R^2 {:.6}",
            deficits[0], deficits[1], deficits[2], ratios[0], ratios[1], fit.r_squared
        ),
    )
}

fn zero_temperature() -> Verdict {
    let p = BathParams::unit_gamma(1e-8, 0.0).unwrap();
    let (mu1, _) = optimal_directions(&p);
    let angle = mu1.angle_to(&MeasurementDirection::minus_z());
    let steady = steady_state_under_measurement(&p, &mu1).map_err(|e| e.to_string())?;
    let distance = steady.trace_distance(&DensityMatrix::ground());
    check(
        angle < 1e-3 && distance < 1e-3,
        format!("angle to -z {angle:.3e} rad, trace distance to ground {distance:.3e} (thresholds 1e-3)"),
    )
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn golden_files() -> Verdict {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, config) in [("fig1", FIG1), ("fig2", FIG2), ("fig3", FIG3)] {
        let first = run(config);
        let second = run(config);
        let digest = hex(&Sha256::digest(first.as_bytes()));
        let frozen = std::fs::read_to_string(dir.join(format!("{name}.sha256")))
            .map(|s| s.trim().to_owned())
            .unwrap_or_default();
        let ok = first == second && digest == frozen;
        pass &= ok;
        notes.push(format!("{name} {}", if ok { "identical" } else { "MISMATCH" }));
        if digest != frozen {
            notes.push(format!("({name} digest {digest})"));
        }
    }
    check(pass, notes.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("form equivalence", form_equivalence),
        ("oracle agreement", oracle_agreement),
        ("total Zeno zeros", total_zeno_zeros),
        ("figure 1 landscape", figure_one),
        ("figure 2 frozen state", figure_two),
        ("figure 3 transfer", figure_three),
        ("intelligent-state saturation", saturation),
        ("eigen-structure", eigen_structure),
        ("decay-rate laws", decay_laws),
        ("discrete-protocol limit", discrete_limit),
        ("zero-temperature limit", zero_temperature),
        ("golden files", golden_files),
    ];
    // keep panics from one criterion out of the report lines
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let id = k + 1;
        let result = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|e| Err(format!("panicked: {:?}", e.downcast_ref::<String>().map(String::as_str).or(e.downcast_ref::<&str>().copied()))));
        match result {
            Ok(detail) => println!("PASS criterion {id:>2} {name}: {detail}"),
            Err(detail) => {
                println!("FAIL criterion {id:>2} {name}: {detail}");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
    } else {
        println!("acceptance: {} of {} criteria fail: {failed:?}", failed.len(), criteria.len());
        std::process::exit(1);
    }
}
