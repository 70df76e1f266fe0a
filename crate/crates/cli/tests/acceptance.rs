//! Acceptance suite. One test per criterion; each prints a summary line and
//! enforces its runtime budget.
//!
//! Run with `cargo test -p twomode-cli --test acceptance` (add
//! `-- --nocapture` for the summary lines).

mod common;

use std::time::Instant;

use common::{random_diagonal, random_mixture, random_pure, random_triplet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twomode::dephasing::{
    evolve_closed_form, evolve_kraus_quadrature, evolve_ode, evolved_cd_offdiagonal,
    negativity_decay_check, DephasingParams,
};
use twomode::entanglement::{negativity_closed_form, negativity_trace_norm};
use twomode::fock::{FockDensityMatrix, ModeBipartition, PureState};
use twomode::metrology::{
    convexity_bound_sweep, direction_triplet_grid, evolved_spin_mean, evolved_spin_variance,
    gaussian_averaged_variance, heisenberg_check, min_squeezing_scan, spin_mean, spin_variance,
    squeezing_parameter, DirectionTriplet,
};

/// Exact binomial, independent of the library's implementation.
fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c as f64
}

fn max_entry_diff(a: &FockDensityMatrix, b: &FockDensityMatrix) -> f64 {
    a.entries().max_abs_diff(b.entries())
}

/// Criterion 1: the closed form equals the trace-norm route within 1e-9 on
/// random states, and zero negativity is equivalent to a diagonal matrix.
#[test]
fn c1_exhaustive_witness_theorem() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut checked = 0usize;
    for n in 1..=8usize {
        for case in 0..200 {
            let rho = match case % 10 {
                0 => random_diagonal(n, &mut rng),
                r if r < 5 => random_pure(n, &mut rng).projector(),
                _ => random_mixture(n, &mut rng),
            };
            let cf = negativity_closed_form(&rho).value;
            let tn = negativity_trace_norm(&rho).unwrap().value;
            assert!(
                (cf - tn).abs() <= 1e-9,
                "N = {n}, case {case}: closed form {cf} vs trace norm {tn}"
            );
            let separable = rho.max_offdiagonal() <= 1e-10;
            assert_eq!(
                cf <= 1e-9,
                separable,
                "N = {n}, case {case}: negativity {cf} vs max offdiagonal {}",
                rho.max_offdiagonal()
            );
            checked += 1;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "runtime {elapsed:.1}s exceeds 30s");
    println!("c1 exhaustive-witness: {checked} states, {elapsed:.2}s");
}

/// Criterion 2: the balanced coherent projector becomes the topmost energy
/// Fock projector, entangled spatially, separable energetically.
#[test]
fn c2_bipartition_identity() {
    let start = Instant::now();
    for n in 1..=20usize {
        let rho = PureState::coherent(0.5, 0.0, n).unwrap().projector();
        let energy = rho.change_bipartition(&ModeBipartition::energy()).unwrap();
        let target = PureState::fock(n, n).unwrap().projector();
        let dev = max_entry_diff(&energy, &target);
        assert!(dev <= 1e-10, "N = {n}: projector deviation {dev:.3e}");
        assert!(negativity_closed_form(&rho).value > 0.0, "N = {n}");
        assert!(negativity_closed_form(&energy).value <= 1e-10, "N = {n}");
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "runtime {elapsed:.1}s exceeds 5s");
    println!("c2 bipartition identity: N <= 20, {elapsed:.2}s");
}

/// Criterion 3: the coherent-state negativity matches the binomial sum and
/// the trace-norm route across xi and N.
#[test]
fn c3_coherent_state_negativity() {
    let start = Instant::now();
    for &xi in &[0.1, 0.3, 0.5, 0.9] {
        for n in 1..=8usize {
            let rho = PureState::coherent(xi, 0.0, n).unwrap().projector();
            let mut expected = 0.0;
            for k in 0..=n {
                for l in 0..=n {
                    if k != l {
                        expected += (binom(n, k) * binom(n, l)).sqrt()
                            * xi.powf((k + l) as f64 / 2.0)
                            * (1.0 - xi).powf(n as f64 - (k + l) as f64 / 2.0);
                    }
                }
            }
            let cf = negativity_closed_form(&rho).value;
            let tn = negativity_trace_norm(&rho).unwrap().value;
            assert!(
                (cf - expected).abs() <= 1e-9,
                "xi = {xi}, N = {n}: {cf} vs {expected}"
            );
            assert!(
                (tn - expected).abs() <= 1e-9,
                "xi = {xi}, N = {n}: {tn} vs {expected}"
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "runtime {elapsed:.1}s exceeds 10s");
    println!("c3 coherent negativity: 4 xi values x N <= 8, {elapsed:.2}s");
}

/// Criterion 4: the three backends agree entrywise, populations are
/// conserved, and the semigroup composes.
#[test]
fn c4_backend_triple_agreement() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let times = vec![0.1, 0.5, 1.0, 2.0, 5.0];
    let params = DephasingParams::new(1.0, times.clone()).unwrap();
    for n in 1..=8usize {
        let rho = random_mixture(n, &mut rng);
        let exact = evolve_closed_form(&rho, &params).unwrap();
        let ode = evolve_ode(&rho, &params).unwrap();
        let kraus = evolve_kraus_quadrature(&rho, &params, 64).unwrap();
        #[allow(clippy::needless_range_loop)]
        for i in 0..times.len() {
            let dev_ode = max_entry_diff(&ode.states()[i], &exact.states()[i]);
            assert!(
                dev_ode <= 1e-8,
                "N = {n}, t = {}: ode off by {dev_ode:.3e}",
                times[i]
            );
            let dev_kraus = max_entry_diff(&kraus.states()[i], &exact.states()[i]);
            assert!(
                dev_kraus <= 1e-6,
                "N = {n}, t = {}: kraus off by {dev_kraus:.3e}",
                times[i]
            );
            for backend in [&exact, &ode, &kraus] {
                let drift = backend.states()[i]
                    .diagonal()
                    .iter()
                    .zip(rho.diagonal())
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                assert!(drift <= 1e-9, "N = {n}: population drift {drift:.3e}");
            }
        }
        // semigroup composition, closed form and ODE
        let (t1, t2) = (0.4, 0.7);
        let leg1 = DephasingParams::new(1.0, vec![t1]).unwrap();
        let leg2 = DephasingParams::new(1.0, vec![t2]).unwrap();
        let both = DephasingParams::new(1.0, vec![t1 + t2]).unwrap();
        let direct = evolve_closed_form(&rho, &both).unwrap().states()[0].clone();
        let mid = evolve_closed_form(&rho, &leg1).unwrap().states()[0].clone();
        let composed = evolve_closed_form(&mid, &leg2).unwrap().states()[0].clone();
        assert!(
            max_entry_diff(&composed, &direct) <= 1e-9,
            "N = {n}: closed-form semigroup"
        );
        let mid_ode = evolve_ode(&rho, &leg1).unwrap().states()[0].clone();
        let composed_ode = evolve_ode(&mid_ode, &leg2).unwrap().states()[0].clone();
        assert!(
            max_entry_diff(&composed_ode, &direct) <= 1e-9,
            "N = {n}: ode semigroup"
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "runtime {elapsed:.1}s exceeds 60s");
    println!("c4 backend agreement: N <= 8, gamma t <= 5, {elapsed:.2}s");
}

/// Criterion 5: spatial negativity decays below `e^{-t gamma / 2} N(0)`,
/// with equality for N = 1.
#[test]
fn c5_negativity_decay_bound() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let gamma = 0.9;
    let params = DephasingParams::new(gamma, vec![0.1, 0.4, 1.0, 2.5, 5.0]).unwrap();
    for n in 1..=8usize {
        for rho in [
            random_pure(n, &mut rng).projector(),
            random_mixture(n, &mut rng),
            PureState::coherent(0.5, 0.0, n).unwrap().projector(),
        ] {
            // the check itself errors if a sample exceeds bound + 1e-10
            let samples = negativity_decay_check(&rho, &params).unwrap();
            for s in &samples {
                assert!(s.negativity <= s.bound + 1e-10);
                if n == 1 {
                    assert!(
                        (s.negativity - s.bound).abs() <= 1e-10,
                        "N = 1 equality violated at t = {}",
                        s.t
                    );
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "runtime {elapsed:.1}s exceeds 10s");
    println!("c5 decay bound: N <= 8, {elapsed:.2}s");
}

/// Criterion 6: dephasing generates energy-bipartition entanglement from the
/// energy Fock state |N,0>, and the quadrature matrix elements match the
/// basis-transform route.
#[test]
fn c6_noise_generated_entanglement() {
    let start = Instant::now();
    let gamma = 1.0;
    for n in 2..=6usize {
        let rho0 = PureState::coherent(0.5, 0.0, n).unwrap().projector();
        // the initial state is |N,0> of the energy modes: negativity 0 there
        let at_zero = rho0.change_bipartition(&ModeBipartition::energy()).unwrap();
        assert!(negativity_closed_form(&at_zero).value <= 1e-10);

        let times = vec![0.1, 0.5, 1.0, 1.5, 2.0];
        let params = DephasingParams::new(gamma, times.clone()).unwrap();
        let trajectory = evolve_closed_form(&rho0, &params).unwrap();
        for (t, state) in trajectory.iter() {
            let energy = state
                .change_bipartition(&ModeBipartition::energy())
                .unwrap();
            let neg = negativity_closed_form(&energy).value;
            assert!(neg > 1e-6, "N = {n}, t = {t}: energy negativity {neg:.3e}");
        }

        for &t in &[0.5, 2.0] {
            let params = DephasingParams::new(gamma, vec![t]).unwrap();
            let evolved = evolve_closed_form(&rho0, &params).unwrap();
            let reference = evolved.states()[0]
                .change_bipartition(&ModeBipartition::energy())
                .unwrap();
            for k in 0..=n {
                for l in 0..=n {
                    let direct = evolved_cd_offdiagonal(n, gamma, t, k, l).unwrap();
                    let dev = (direct - reference.entry(k, l)).norm();
                    assert!(
                        dev <= 1e-6,
                        "N = {n}, t = {t}, ({k},{l}): routes differ by {dev:.3e}"
                    );
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "runtime {elapsed:.1}s exceeds 30s");
    println!("c6 noise-generated entanglement: N in 2..=6, {elapsed:.2}s");
}

/// Criterion 7: evolved means follow the exponential law by both routes,
/// and the Heisenberg and convexity inequalities hold on every state.
#[test]
fn c7_metrology_identities() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let gamma = 0.8;
    let x = [1.0, 0.0, 0.0];
    let y = [0.0, 1.0, 0.0];
    let z = [0.0, 0.0, 1.0];
    for n in [2usize, 4, 6] {
        for _ in 0..20 {
            let rho = if rng.gen_bool(0.5) {
                random_pure(n, &mut rng).projector()
            } else {
                random_mixture(n, &mut rng)
            };
            let t: f64 = rng.gen_range(0.05..2.0);
            let decay = (-t * gamma / 2.0).exp();

            let params = DephasingParams::new(gamma, vec![t]).unwrap();
            let evolved = evolve_closed_form(&rho, &params).unwrap().states()[0].clone();

            for (axis, factor) in [(x, decay), (y, decay), (z, 1.0)] {
                let mt = evolved_spin_mean(&rho, axis, gamma, t, 64).unwrap();
                let expected = factor * spin_mean(&rho, axis).unwrap();
                assert!(
                    (mt - expected).abs() <= 1e-8,
                    "N = {n}: mean along {axis:?} {mt} vs {expected}"
                );
                let via_state = spin_mean(&evolved, axis).unwrap();
                assert!(
                    (mt - via_state).abs() <= 1e-8,
                    "dual path mean along {axis:?}"
                );
                let vt = evolved_spin_variance(&rho, axis, gamma, t, 64).unwrap();
                let via_state_var = spin_variance(&evolved, axis).unwrap();
                assert!(
                    (vt - via_state_var).abs() <= 1e-7,
                    "dual path variance along {axis:?}: {vt} vs {via_state_var}"
                );
            }

            let triplet = random_triplet(&mut rng);
            assert!(heisenberg_check(&rho, &triplet).unwrap().holds);
            assert!(heisenberg_check(&evolved, &triplet).unwrap().holds);

            let direction = triplet.n2();
            let total = evolved_spin_variance(&rho, direction, gamma, t, 64).unwrap();
            let averaged = gaussian_averaged_variance(&rho, direction, gamma, t, 64).unwrap();
            assert!(total >= averaged - 1e-9, "convexity: {total} < {averaged}");
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "runtime {elapsed:.1}s exceeds 30s");
    println!("c7 metrology identities: 60 states, {elapsed:.2}s");
}

/// Criterion 8: the no-squeezing bound holds over the full sweep for
/// premise-passing inputs, and the shot-noise reference is exact at t = 0.
#[test]
fn c8_no_squeezing_bound() {
    let start = Instant::now();
    let times: Vec<f64> = (0..40).map(|i| 3.0 * i as f64 / 39.0).collect();
    let params = DephasingParams::new(1.0, times).unwrap();
    let triplets = direction_triplet_grid(64, 8);
    assert!(triplets.len() >= 64);

    for n in [2usize, 4, 8] {
        let fock = PureState::fock(n, n).unwrap().projector();
        let coherent = PureState::coherent(0.5, 0.0, n).unwrap().projector();

        // shot-noise reference at t = 0
        let polar = DirectionTriplet::from_pair([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
        let report = squeezing_parameter(&fock, &polar).unwrap();
        assert!(
            (report.delta_theta_squared - 1.0 / n as f64).abs() <= 1e-12,
            "N = {n}: shot noise {} vs {}",
            report.delta_theta_squared,
            1.0 / n as f64
        );
        let equatorial = DirectionTriplet::from_pair([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        let report = squeezing_parameter(&coherent, &equatorial).unwrap();
        assert!((report.delta_theta_squared - 1.0 / n as f64).abs() <= 1e-12);

        for rho in [fock, coherent] {
            let scan = min_squeezing_scan(&rho, 16).unwrap();
            assert!(
                scan.min_xi >= 1.0 - 1e-3,
                "N = {n}: premise min_xi = {}",
                scan.min_xi
            );

            let samples = convexity_bound_sweep(&rho, &params, &triplets, 64).unwrap();
            assert!(!samples.is_empty());
            for s in &samples {
                assert!(
                    s.bound_lhs >= 1.0 - 1e-8,
                    "N = {n}, t = {}: bound_lhs = {}",
                    s.t,
                    s.bound_lhs
                );
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "runtime {elapsed:.1}s exceeds 120s");
    println!("c8 no-squeezing bound: N in {{2,4,8}}, 40 times, 512 triplets, {elapsed:.2}s");
}

/// Criterion 9: JSON save/load reproduces negativity and bipartition
/// outputs bitwise, and repeated CLI runs are byte-identical.
#[test]
fn c9_roundtrip_and_determinism() {
    use std::process::Command;
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();

    // save/load reproduces criteria 1-3 quantities exactly
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut states = vec![
        PureState::coherent(0.5, 0.0, 6).unwrap().projector(),
        PureState::coherent(0.3, 0.7, 4).unwrap().projector(),
    ];
    states.push(random_mixture(6, &mut rng));
    for (i, rho) in states.iter().enumerate() {
        let path = dir.path().join(format!("state{i}.json"));
        twomode_cli::state_io::save_state(&path, rho).unwrap();
        let back = twomode_cli::state_io::load_state(&path).unwrap();
        let cf = (
            negativity_closed_form(rho).value,
            negativity_closed_form(&back).value,
        );
        assert_eq!(cf.0.to_bits(), cf.1.to_bits(), "closed form changed");
        let tn = (
            negativity_trace_norm(rho).unwrap().value,
            negativity_trace_norm(&back).unwrap().value,
        );
        assert_eq!(tn.0.to_bits(), tn.1.to_bits(), "trace norm changed");
        let energy = (
            rho.change_bipartition(&ModeBipartition::energy()).unwrap(),
            back.change_bipartition(&ModeBipartition::energy()).unwrap(),
        );
        let e = (
            negativity_closed_form(&energy.0).value,
            negativity_closed_form(&energy.1).value,
        );
        assert_eq!(e.0.to_bits(), e.1.to_bits(), "energy negativity changed");
    }

    // repeated binary runs with identical configuration are byte-identical
    let bin = env!("CARGO_BIN_EXE_twomode");
    let cases: Vec<Vec<String>> = vec![
        vec![
            "negativity",
            "--coherent",
            "0.5",
            "0",
            "--n",
            "4",
            "--bipartition",
            "both",
            "--format",
            "json",
            "--seed",
            "7",
        ],
        vec![
            "evolve",
            "--coherent",
            "0.5",
            "0",
            "--n",
            "3",
            "--gamma",
            "1",
            "--t",
            "0:2:9",
            "--format",
            "csv",
            "--seed",
            "7",
        ],
        vec![
            "scan",
            "--fock",
            "2",
            "--n",
            "2",
            "--gamma",
            "1",
            "--t",
            "0:1:4",
            "--grid-res",
            "8",
            "--format",
            "csv",
            "--seed",
            "7",
        ],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();

    for (i, case) in cases.iter().enumerate() {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("case{i}_run{run}.out"));
            let status = Command::new(bin)
                .args(case)
                .arg("--out")
                .arg(&out)
                .status()
                .unwrap();
            assert!(status.success(), "case {i} run {run} failed");
            outputs.push(std::fs::read(&out).unwrap());
            if case[0] == "evolve" {
                let summary = twomode_cli::export::summary_path(&out);
                outputs.push(std::fs::read(&summary).unwrap());
            }
        }
        let half = outputs.len() / 2;
        for j in 0..half {
            assert_eq!(
                outputs[j],
                outputs[half + j],
                "case {i}: outputs differ between runs"
            );
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    println!("c9 roundtrip and determinism: {elapsed:.2}s");
}
