//! One-off calibration run: measures the oracle deviations that the
//! acceptance suite pins as fixed bounds.

use qrabi::model::{Method, ModelParams};
use qrabi::vvp::LPolicy;
use qrabi::{bgrwa, dynamics, exact, vvp};

fn params(delta: f64, epsilon: f64, g: f64) -> ModelParams {
    ModelParams::new(delta, epsilon, 1.0, g).unwrap()
}

fn max_dev_vs_ed(delta: f64, epsilon: f64, g_max: f64, method: Method) -> f64 {
    let mut worst: f64 = 0.0;
    let steps = (g_max / 0.05).round() as usize;
    for i in 0..=steps {
        let g = 0.05 * i as f64;
        let p = params(delta, epsilon, g);
        let ed = exact::spectrum_at(&p, 8, 80).unwrap().sorted_levels(8).unwrap();
        let approx = match method {
            Method::Bgrwa => bgrwa::spectrum(&p, 8).unwrap().sorted_levels(8).unwrap(),
            Method::Vvp => {
                match vvp::vvp_spectrum(&p, 8, &LPolicy::BestOf(vec![0, 1, 2])) {
                    Ok(s) => s.table.sorted_levels(8).unwrap(),
                    Err(e) => {
                        println!("    vvp error at g={g}: {e}");
                        continue;
                    }
                }
            }
            Method::Ed => unreachable!(),
        };
        let dev = approx
            .iter()
            .zip(&ed)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        worst = worst.max(dev);
    }
    worst
}

fn main() {
    println!("== BGRWA vs ED, n=0..3 pairs at (0.5, 0.1, 0.3) [module test bound] ==");
    {
        let p = params(0.5, 0.1, 0.3);
        let bg = bgrwa::spectrum(&p, 8).unwrap().sorted_levels(8).unwrap();
        let ed = exact::spectrum_at(&p, 8, 80).unwrap().sorted_levels(8).unwrap();
        let dev = bg
            .iter()
            .zip(&ed)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        println!("  max dev over 8 levels: {dev:.6}");
    }

    println!("== criterion 4: resonance Δ=1, g ≤ 0.5 ==");
    let mut c4_bgrwa: f64 = 0.0;
    for eps in [0.1, 0.5, 1.0] {
        let d = max_dev_vs_ed(1.0, eps, 0.5, Method::Bgrwa);
        println!("  bgrwa eps={eps}: {d:.6}");
        c4_bgrwa = c4_bgrwa.max(d);
    }
    println!("  => bgrwa bound candidate: {c4_bgrwa:.6}");
    for eps in [0.1, 0.5] {
        let d = max_dev_vs_ed(1.5, eps, 0.3, Method::Vvp);
        println!("  vvp(best) delta=1.5 eps={eps} g<=0.3: {d:.6}");
        for l in [0usize, 1, 2] {
            let mut worst: f64 = 0.0;
            for i in 0..=6 {
                let g = 0.05 * i as f64;
                let p = params(1.5, eps, g);
                let ed = exact::spectrum_at(&p, 8, 80).unwrap().sorted_levels(8).unwrap();
                match vvp::vvp_spectrum(&p, 8, &LPolicy::Fixed(l)) {
                    Ok(s) => {
                        let lv = s.table.sorted_levels(8).unwrap();
                        let dev = lv
                            .iter()
                            .zip(&ed)
                            .map(|(a, b)| (a - b).abs())
                            .fold(0.0f64, f64::max);
                        worst = worst.max(dev);
                    }
                    Err(e) => println!("    l={l} g={g}: {e}"),
                }
            }
            println!("    vvp fixed l={l}: {worst:.6}");
        }
    }

    println!("== criterion 5: crossing structure at Δ=1.5, ε=0.1 ==");
    for l in [0usize, 1, 2] {
        let mut swaps = 0;
        let mut last: Option<Vec<(usize, qrabi::Branch)>> = None;
        for i in 0..=30 {
            let g = 0.01 * i as f64;
            let p = params(1.5, 0.1, g);
            if let Ok(s) = vvp::vvp_spectrum(&p, 8, &LPolicy::Fixed(l)) {
                let labels: Vec<_> = s.table.entries.iter().map(|e| (e.index, e.branch)).collect();
                if let Some(prev) = &last {
                    if *prev != labels {
                        swaps += 1;
                    }
                }
                last = Some(labels);
            }
        }
        println!("  vvp l={l}: {swaps} label swaps on g in [0,0.3] step 0.01");
    }
    {
        let mut swaps = 0;
        let mut last: Option<Vec<(usize, qrabi::Branch)>> = None;
        let mut min_gap = f64::INFINITY;
        for i in 0..=30 {
            let g = 0.01 * i as f64;
            let p = params(1.5, 0.1, g);
            let table = bgrwa::spectrum(&p, 8).unwrap();
            let mut entries = table.entries.clone();
            entries.sort_by(|a, b| a.energy.total_cmp(&b.energy));
            entries.truncate(8);
            let labels: Vec<_> = entries.iter().map(|e| (e.index, e.branch)).collect();
            if let Some(prev) = &last {
                if *prev != labels {
                    swaps += 1;
                }
            }
            last = Some(labels);
            let ed = exact::spectrum_at(&p, 8, 80).unwrap().sorted_levels(8).unwrap();
            for w in ed.windows(2) {
                min_gap = min_gap.min(w[1] - w[0]);
            }
        }
        println!("  bgrwa: {swaps} label swaps; ED min adjacent gap {min_gap:.6}");
    }

    println!("== criterion 6: dynamics RMS(BGRWA-ED) ==");
    for eps in [0.1, 0.5f64.sqrt()] {
        for g in [0.1, 0.2, 0.5] {
            let p = params(1.0, eps, g);
            let grid = dynamics::time_grid(50.0, 1000);
            let n = exact::converge(&p, 8, 1e-8).unwrap().n_used;
            let start = std::time::Instant::now();
            let ed = dynamics::evolve_ed(&p, &grid, n).unwrap();
            let bg = dynamics::evolve_bgrwa(&p, &grid, 16, n).unwrap();
            let rms = {
                let s: f64 = ed
                    .samples
                    .iter()
                    .zip(&bg.samples)
                    .map(|((_, a), (_, b))| (a - b) * (a - b))
                    .sum();
                (s / grid.len() as f64).sqrt()
            };
            println!(
                "  eps={eps:.4} g={g}: rms={rms:.6} completeness={:.9} N={n} elapsed={:?}",
                bg.completeness,
                start.elapsed()
            );
        }
    }

    println!("== criterion 7: flux scan BGRWA vs ED ==");
    {
        let fq = qrabi::experiment::FluxQubitParams::default();
        let a = qrabi::experiment::flux_scan(&fq, 3, Method::Bgrwa).unwrap();
        let b = qrabi::experiment::flux_scan(&fq, 3, Method::Ed).unwrap();
        let mut worst: f64 = 0.0;
        for (ra, rb) in a.rows.iter().zip(&b.rows) {
            for (ta, tb) in ra.transitions.iter().zip(&rb.transitions) {
                worst = worst.max((ta - tb).abs());
            }
        }
        println!(
            "  max transition deviation {worst:.6} GHz = {:.4} of omega",
            worst / fq.omega_over_2pi
        );
    }

    println!("== criterion 1 runtime probe ==");
    {
        let start = std::time::Instant::now();
        for k in 0..20 {
            let delta = 0.1 + 1.9 * (k as f64 / 19.0);
            let eps = 2.0 * (k as f64 / 19.0);
            let p = params(delta, eps, 0.0);
            let _ = bgrwa::spectrum(&p, 8).unwrap().sorted_levels(8).unwrap();
            let _ = exact::spectrum_at(&p, 8, 60).unwrap().sorted_levels(8).unwrap();
        }
        println!("  20 zero-coupling points with ED N=60: {:?}", start.elapsed());
    }
}
