//! Acceptance gates. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any gate fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64 as C;
use polydress::closed_forms::{
    single_mode_rabi, two_mode_u0, weak_field_pe, SidebandPhase, WeakFieldConfig,
};
use polydress::oracle::{run_oracle, verify_sk, DEFAULT_HALFWIDTH};
use polydress::{
    analytic_pe, compare, dominant_frequency, linspace, run_cascade, undress, ModeConfig64,
    PeSeries64, StageParams64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn real(j: i64, m: Vec<i64>, omega: &[f64], d0: f64) -> ModeConfig64 {
    ModeConfig64::real(j, m, omega, d0).expect("valid config")
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let tau = linspace(0.0, 4.0 * PI, 1000);
    let cfg = real(3, vec![0], &[0.5], 1.0);
    let cascade = analytic_pe(&cfg, &tau, &[]).unwrap();
    let rabi = single_mode_rabi(1.0, C::new(0.5, 0.0), &tau);
    let oracle = run_oracle(&cfg, 40, &tau, &[]).unwrap();
    // textbook formula evaluated here, independent of the library
    let w = 1.25f64.sqrt();
    let direct: Vec<f64> = tau
        .iter()
        .map(|t| 0.2 * (0.5 * w * t).sin().powi(2))
        .collect();
    let d = [
        max_dev(&cascade.values, &rabi.values),
        max_dev(&cascade.values, &oracle.pe.values),
        max_dev(&rabi.values, &oracle.pe.values),
        max_dev(&direct, &oracle.pe.values),
    ];
    let worst = d.iter().copied().fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: worst <= 1e-9 && secs < 5.0,
        detail: format!("max pairwise deviation {worst:.3e} (gate 1e-9), {secs:.2}s (gate 5s)"),
    }
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let m2 = rng.gen_range(1..=3);
        let om = |rng: &mut ChaCha8Rng| {
            C::from_polar(rng.gen_range(0.0..0.6), rng.gen_range(0.0..2.0 * PI))
        };
        let omega = vec![om(&mut rng), om(&mut rng)];
        let d0 = m2 as f64 + rng.gen_range(-1.0..1.0);
        let cfg = ModeConfig64::new(rng.gen_range(0..6), vec![0, m2], omega, d0).unwrap();
        let a = undress(&run_cascade(&cfg).unwrap());
        let b = two_mode_u0(&cfg).unwrap();
        worst = worst.max(a.u.distance(&b.u));
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: worst <= 1e-12 && secs < 10.0,
        detail: format!(
            "max termwise distance over 100 configs {worst:.3e} (gate 1e-12), {secs:.2}s"
        ),
    }
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let j = 3;
    let cfg = real(j, vec![0, 2], &[0.5, 0.5], 1.0);
    let tau = linspace(0.0, 4.0 * PI, 1000);
    let off = j - 2;
    let analytic = analytic_pe(&cfg, &tau, &[j, j + 2, off]).unwrap();
    let oracle = run_oracle(&cfg, DEFAULT_HALFWIDTH, &tau, &[j, j + 2, off]).unwrap();
    let r = compare(&analytic, &oracle.pe).unwrap();
    let peak = |s: &PeSeries64| s.channels[&off].iter().copied().fold(0.0, f64::max);
    let (po, pa) = (peak(&oracle.pe), peak(&analytic));
    let ratio = pa / po;
    let secs = start.elapsed().as_secs_f64();
    let checks = [
        r.max_abs <= 2e-2,
        r.rms <= 1e-2,
        po <= 5e-4,
        (0.5..=2.0).contains(&ratio),
        oracle.is_valid(),
        secs < 30.0,
    ];
    Outcome {
        pass: checks.iter().all(|&c| c),
        detail: format!(
            "max {:.4} (gate 0.02) {}, rms {:.4} (gate 0.01) {}, channel j-2 peak oracle {po:.2e} (gate 5e-4) {}, analytic/oracle {ratio:.2} (gate 0.5..2) {}, {secs:.1}s",
            r.max_abs,
            ok(checks[0]),
            r.rms,
            ok(checks[1]),
            ok(checks[2]),
            ok(checks[3]),
        ),
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "over"
    }
}

fn criterion_4() -> Outcome {
    let tau = linspace(0.0, 4.0 * PI, 1000);
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, d0) in [("2", 2.0), ("13/7", 13.0 / 7.0), ("6/7", 6.0 / 7.0)] {
        let cfg = real(3, vec![0, 1, 2], &[1.0 / 7.0; 3], d0);
        let analytic = analytic_pe(&cfg, &tau, &[]).unwrap();
        let oracle = run_oracle(&cfg, DEFAULT_HALFWIDTH, &tau, &[]).unwrap();
        let r = compare(&analytic, &oracle.pe).unwrap();
        pass &= r.max_abs <= 5e-3 && oracle.is_valid();
        parts.push(format!(
            "Δ₀={label}: {:.2e} {}",
            r.max_abs,
            ok(r.max_abs <= 5e-3)
        ));
        if d0 == 2.0 {
            let w3 = run_cascade(&cfg).unwrap().final_stage().splitting;
            let peak = dominant_frequency(&analytic.values, tau[1] - tau[0]).unwrap();
            let within = (peak.frequency - w3).abs() <= peak.bin_width;
            pass &= within;
            parts.push(format!(
                "peak {:.3} vs χ̃₃ {w3:.5} (bin {:.3}) {}",
                peak.frequency,
                peak.bin_width,
                ok(within)
            ));
        }
    }
    Outcome {
        pass,
        detail: format!("max deviation gate 5e-3; {}", parts.join(", ")),
    }
}

fn criterion_5() -> Outcome {
    let j = 3;
    let mut devs = Vec::new();
    let mut printed = Vec::new();
    let mut mid_peak = 0.0;
    for n in [7.0, 11.0, 15.0] {
        let om = 1.0 / n;
        let cfg = real(j, (0..10).collect(), &[om; 10], 9.0);
        // one full Rabi cycle of the resonant mode
        let tau = linspace(0.0, 2.0 * PI / om, 1000);
        let oracle = run_oracle(&cfg, DEFAULT_HALFWIDTH, &tau, &[]).unwrap();
        assert!(oracle.is_valid());
        let w = WeakFieldConfig::from_modes(&cfg).unwrap();
        let a = weak_field_pe(&w, &tau, SidebandPhase::Rederived).unwrap();
        let p = weak_field_pe(&w, &tau, SidebandPhase::Printed).unwrap();
        devs.push(max_dev(&a.values, &oracle.pe.values));
        printed.push(max_dev(&p.values, &oracle.pe.values));
        if n == 7.0 {
            mid_peak = oracle.pe.values[333..667]
                .iter()
                .copied()
                .fold(0.0, f64::max);
        }
    }
    let monotone = devs[0] > devs[1] && devs[1] > devs[2];
    let ratio = devs[2] / devs[0];
    let gate = (7.0f64 / 15.0).powi(2) * 2.0;
    let pass = monotone && ratio <= gate && mid_peak >= 0.99;
    Outcome {
        pass,
        detail: format!(
            "deviations {:.4}/{:.4}/{:.4} monotone {}, ratio {ratio:.3} (gate {gate:.3}), mid-cycle peak {mid_peak:.4} (gate 0.99); printed phase pattern {:.4}/{:.4}/{:.4} ratio {:.3}",
            devs[0],
            devs[1],
            devs[2],
            ok(monotone),
            printed[0],
            printed[1],
            printed[2],
            printed[2] / printed[0]
        ),
    }
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut unit, mut resid) = (0.0f64, 0.0f64);
    for k in 0..200 {
        let d = rng.gen_range(-2.0..2.0);
        let chi = C::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..2.0 * PI));
        let shift = rng.gen_range(-5i64..=5);
        let p = StageParams64::new(k + 1, d, chi, shift, 1);
        let r = verify_sk(&p, 30);
        unit = unit.max(r.unitarity);
        resid = resid.max(r.residual);
    }
    Outcome {
        pass: unit <= 1e-10 && resid <= 1e-10,
        detail: format!("unitarity defect {unit:.2e}, diagonalisation residual {resid:.2e} (gate 1e-10, 200 draws)"),
    }
}

fn criterion_7() -> Outcome {
    // modes at -ω_f and +ω_f; spin at ω_f
    let cfg = real(-1, vec![0, 2], &[0.5, 0.5], 2.0);
    let tau = linspace(0.0, 4.0 * PI, 1000);
    let analytic = analytic_pe(&cfg, &tau, &[]).unwrap();
    let oracle = run_oracle(&cfg, DEFAULT_HALFWIDTH, &tau, &[]).unwrap();
    let r = compare(&analytic, &oracle.pe).unwrap();
    let closed = two_mode_u0(&cfg).unwrap();
    let same = closed.u.distance(&undress(&run_cascade(&cfg).unwrap()).u) < 1e-12;
    Outcome {
        pass: r.max_abs <= 2e-2 && same && oracle.is_valid(),
        detail: format!(
            "max deviation {:.4} (gate 0.02), closed form agrees {}",
            r.max_abs,
            ok(same)
        ),
    }
}

fn presets() -> Vec<(&'static str, ModeConfig64, f64)> {
    let mut v = vec![
        ("fig1", real(3, vec![0, 2], &[0.5, 0.5], 1.0), 4.0 * PI),
        ("rwa", real(-1, vec![0, 2], &[0.5, 0.5], 2.0), 4.0 * PI),
    ];
    for d0 in [2.0, 13.0 / 7.0, 6.0 / 7.0] {
        v.push((
            "fig3a",
            real(3, vec![0, 1, 2], &[1.0 / 7.0; 3], d0),
            4.0 * PI,
        ));
    }
    for n in [7.0, 11.0, 15.0] {
        v.push((
            "fig3bcd",
            real(3, (0..10).collect(), &[1.0 / n; 10], 9.0),
            2.0 * PI * n,
        ));
    }
    v
}

fn criterion_8() -> Outcome {
    let mut j_dev = 0.0f64;
    let mut w_dev = 0.0f64;
    let mut norm = 0.0f64;
    let mut pe0 = 0.0f64;
    let mut herm = 0.0f64;
    for (_, cfg, stop) in presets() {
        let tau = linspace(0.0, stop, 400);
        let base = run_oracle(&cfg, DEFAULT_HALFWIDTH, &tau, &[]).unwrap();
        let wide = run_oracle(&cfg, DEFAULT_HALFWIDTH + 50, &tau, &[]).unwrap();
        w_dev = w_dev.max(max_dev(&base.pe.values, &wide.pe.values));
        norm = norm.max(base.norm_defect).max(wide.norm_defect);
        let moved = run_oracle(&cfg.shifted_j(1), DEFAULT_HALFWIDTH, &tau, &[]).unwrap();
        j_dev = j_dev.max(max_dev(&base.pe.values, &moved.pe.values));

        let u0 = undress(&run_cascade(&cfg).unwrap());
        herm = herm.max(u0.hermiticity_defect());
        pe0 = pe0.max(polydress::excitation_probability(&u0, &[0.0], &[]).values[0]);
    }
    let pass = j_dev <= 1e-8 && w_dev <= 1e-8 && norm <= 1e-10 && pe0 <= 1e-30 && herm == 0.0;
    Outcome {
        pass,
        detail: format!(
            "j shift {j_dev:.1e} (1e-8), W+50 {w_dev:.1e} (1e-8), norm {norm:.1e} (1e-10), analytic P_e(0) {pe0:.1e} (roundoff, 1e-30), hermiticity mirror {herm:.1e} (exact)"
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("single-mode exactness", criterion_1),
        ("two-mode internal consistency", criterion_2),
        ("Fig. 1 reproduction", criterion_3),
        ("Fig. 3(a) reproduction", criterion_4),
        ("weak-field scaling", criterion_5),
        ("dressing-unitary verification", criterion_6),
        ("beyond-RWA configuration", criterion_7),
        ("invariance suite", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} {} {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
