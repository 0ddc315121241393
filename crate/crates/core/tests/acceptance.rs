//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_rational::Rational64;

use fbcap::certify::{
    certify_claim1, certify_two_tx_gap, certify_m_tx_gap, certify_det_identity, certify_rank_exhaustive,
};
use fbcap::gaussian::{
    asymptotic_sym_capacity, inner_region, naive_feedback_region, optimal_rho_asymptotic, rho_grid,
    sym_capacity_bounds, DEFAULT_RHO_STEP,
};
use fbcap::sim::{fig4_strategy, run_function_computation, run_session, verify_multicast_decoding, SourceBits};
use fbcap::sweeps::{sweep_gain, sweep_gap, Axis, SweepSpec};
use fbcap::{
    adt_computing_bound_nf, adt_feedback_region, adt_nonfeedback_region, db_to_linear, load_adt_channel,
    CorrelationParam, GaussianChannel64, RateVector, Subset,
};

const SEED: u64 = 20240;

type Verdict = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Verdict);

fn bits(v: u32, n: usize) -> Vec<bool> {
    (0..n).map(|i| v >> (n - 1 - i) & 1 == 1).collect()
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn adt_region_exactness() -> Verdict {
    let ch = load_adt_channel("3,1;1,3").map_err(|e| e.to_string())?;
    let region = adt_feedback_region(&ch);
    let expected = BTreeMap::from([
        (Subset::singleton(0), r(3, 1)),
        (Subset::singleton(1), r(3, 1)),
        (Subset::full(2), r(3, 1)),
    ]);
    ensure(*region.constraints() == expected, format!("region {}", region.summary()))?;
    ensure(region.sym_rate() == r(3, 2), format!("sym rate {}", region.sym_rate()))?;
    Ok(format!("{} sym rate {}", region.summary(), region.sym_rate()))
}

fn scheme_achievability() -> Verdict {
    let ch = load_adt_channel("3,1;1,3").map_err(|e| e.to_string())?;
    let fb = adt_feedback_region(&ch);
    let nf = adt_nonfeedback_region(&ch);
    let zero = r(0, 1);
    for w in 0..64u32 {
        let all = bits(w, 6);
        let trace = run_session(&ch, &fig4_strategy(), &[all[..3].to_vec(), all[3..].to_vec()])
            .map_err(|e| e.to_string())?;
        ensure(trace.audit_channel_law(), format!("channel law violated for messages {w:06b}"))?;
        let rates = verify_multicast_decoding(&trace).map_err(|e| format!("messages {w:06b}: {e}"))?;
        ensure(rates.as_slice() == [r(3, 2), r(3, 2)], format!("rates {rates}"))?;
        ensure(fb.contains(&rates, zero).unwrap(), "outside feedback region")?;
        ensure(!nf.contains(&rates, zero).unwrap(), "inside nonfeedback region")?;
    }
    Ok(format!("64/64 decoded, rate (3/2, 3/2); nonfeedback region {}", nf.summary()))
}

fn function_computation() -> Verdict {
    let ch = load_adt_channel("3,1;1,3").map_err(|e| e.to_string())?;
    let bound = adt_computing_bound_nf(&ch).map_err(|e| e.to_string())?;
    let mut rate = r(0, 1);
    for w in 0..64u32 {
        let all = bits(w, 6);
        let sources = SourceBits::new(all[..3].to_vec(), all[3..].to_vec()).unwrap();
        let outcome = run_function_computation(&ch, &fig4_strategy(), &sources).map_err(|e| e.to_string())?;
        ensure(outcome.success, format!("sources {w:06b}: sums {:?}", outcome.sums))?;
        rate = outcome.rate;
    }
    ensure(rate == r(3, 2), format!("rate {rate}"))?;
    ensure(rate > r(bound as i64, 1), format!("rate {rate} does not exceed bound {bound}"))?;
    Ok(format!("64/64 correct, computing rate {rate} > nonfeedback bound {bound}"))
}

fn two_tx_gap() -> Verdict {
    let s = certify_two_tx_gap(10_000, SEED, 0.01).map_err(|e| e.to_string())?;
    ensure(s.trials == 10_000, "trial count")?;
    ensure(s.passed(), format!("{} failures; first: {:?}", s.failures, s.first_failure))?;
    Ok(format!("{} checks, worst margin {:.3e}", s.checks, s.worst_margin))
}

fn m_tx_gap() -> Verdict {
    let mut parts = Vec::new();
    for m in 2..=5 {
        let s = certify_m_tx_gap(m, 1000, SEED + m as u64).map_err(|e| e.to_string())?;
        ensure(s.passed(), format!("M={m}: {} failures; first: {:?}", s.failures, s.first_failure))?;
        let bound = (2.0 * (m as f64 - 1.0)).log2();
        parts.push(format!("M={m} max {:.3}≤{bound:.3}", s.max_per_transmitter));
    }
    Ok(parts.join(", "))
}

fn eigen_and_det() -> Verdict {
    let c = certify_claim1(5, 1000, SEED).map_err(|e| e.to_string())?;
    ensure(c.passed(), format!("eigenvalue bound: {:?}", c.first_failure))?;
    let d = certify_det_identity(5, 1000, SEED).map_err(|e| e.to_string())?;
    ensure(d.passed(), format!("determinant identity: {:?}", d.first_failure))?;
    Ok(format!("{} eigenvalue checks, {} determinant checks", c.checks, d.checks))
}

fn high_snr_limit() -> Verdict {
    let snr = db_to_linear(60.0);
    let ch = GaussianChannel64::symmetric(snr, snr).map_err(|e| e.to_string())?;
    let cap = sym_capacity_bounds(&ch, DEFAULT_RHO_STEP).map_err(|e| e.to_string())?;
    let limit = asymptotic_sym_capacity(snr, snr).unwrap();
    let (rho_star, _) = optimal_rho_asymptotic(snr, snr).unwrap();
    ensure((cap.inner - limit).abs() <= 0.05, format!("inner {} vs {limit}", cap.inner))?;
    ensure((cap.outer - limit).abs() <= 0.05, format!("outer {} vs {limit}", cap.outer))?;
    ensure((cap.rho_inner - rho_star).abs() <= 0.01, format!("rho {} vs {rho_star}", cap.rho_inner))?;
    Ok(format!(
        "inner {:.4}, outer {:.4}, limit {limit:.4}, rho {:.4} vs {rho_star:.4}",
        cap.inner, cap.outer, cap.rho_inner
    ))
}

fn gap_sweep() -> Verdict {
    let sweep = sweep_gap(&SweepSpec::default()).map_err(|e| e.to_string())?;
    ensure(sweep.rows.len() == 121, format!("{} rows", sweep.rows.len()))?;
    ensure(sweep.violations().is_empty(), format!("{} rows outside [0, 1]", sweep.violations().len()))?;
    let csv = sweep.to_csv();
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("gap_sweep.csv");
    std::fs::write(&path, &csv).map_err(|e| e.to_string())?;
    ensure(csv == sweep_gap(&SweepSpec::default()).unwrap().to_csv(), "CSV not reproducible")?;
    let worst = sweep.max_gap();
    let soft = if worst.gap <= 0.1 { "within 0.1" } else { "ABOVE 0.1 (soft)" };
    Ok(format!(
        "max gap {:.4} at ({}, {}) dB, {soft}; CSV at {}",
        worst.gap,
        worst.snr1_db,
        worst.snr2_db,
        path.display()
    ))
}

fn gain_sweep() -> Verdict {
    let spec = SweepSpec { base_db: 80.0, alpha: "0.1:1.0:0.1".parse::<Axis>().unwrap(), ..SweepSpec::default() };
    let sweep = sweep_gain(&spec).map_err(|e| e.to_string())?;
    ensure(sweep.rows.len() == 10, format!("{} rows", sweep.rows.len()))?;
    for row in &sweep.rows {
        ensure(row.c_sym_fb_norm >= 0.95, format!("feedback {} at alpha {}", row.c_sym_fb_norm, row.alpha))?;
    }
    let quarter = sweep_gain(&SweepSpec { alpha: Axis::point(0.25), ..spec }).map_err(|e| e.to_string())?;
    let q = quarter.rows[0];
    ensure((0.45..=0.55).contains(&q.c_sym_no_norm), format!("nonfeedback {} at 0.25", q.c_sym_no_norm))?;
    ensure(q.c_sym_fb_norm >= 0.95, format!("feedback {} at 0.25", q.c_sym_fb_norm))?;
    Ok(format!("alpha=0.25: feedback {:.3}, nonfeedback {:.3}", q.c_sym_fb_norm, q.c_sym_no_norm))
}

fn naive_enlargement() -> Verdict {
    let ch = GaussianChannel64::from_snr(&[vec![1000.0, 1.0], vec![1.0, 1000.0]]).map_err(|e| e.to_string())?;
    let rho = CorrelationParam::new(0.0).unwrap();
    let inner = inner_region(&ch, rho);
    let rate = inner.sym_rate() * (1.0 - 1e-6);
    let point = RateVector::symmetric(2, rate).unwrap();
    ensure(inner.contains(&point, 0.0).unwrap(), "point not in inner region")?;
    let grid = rho_grid::<f64>(DEFAULT_RHO_STEP).unwrap();
    for &rho in &grid {
        let naive = naive_feedback_region(&ch, rho).unwrap();
        ensure(!naive.contains(&point, 0.0).unwrap(), format!("naive region contains point at rho {}", rho.value()))?;
    }
    Ok(format!("({rate:.4}, {rate:.4}) excluded from the naive region at all {} rho values", grid.len()))
}

fn rank_oracle() -> Verdict {
    let s = certify_rank_exhaustive(4);
    let expected: usize = (1..=4).flat_map(|a| (1..=4).map(move |b| 1usize << (a * b))).sum();
    ensure(s.checks == expected, format!("{} instances, expected {expected}", s.checks))?;
    ensure(s.passed(), format!("{:?}", s.first_failure))?;
    Ok(format!("{} matrices agree, 65536 of them 4x4", s.checks))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("adt region exactness", Duration::from_millis(1), adt_region_exactness),
        ("scheme achievability", Duration::from_millis(10), scheme_achievability),
        ("function computation", Duration::from_millis(10), function_computation),
        ("two-transmitter one-bit gap", Duration::from_secs(30), two_tx_gap),
        ("M-transmitter constant gap", Duration::from_secs(60), m_tx_gap),
        ("eigenvalue bound and determinant identity", Duration::from_secs(10), eigen_and_det),
        ("high-SNR symmetric capacity", Duration::from_secs(5), high_snr_limit),
        ("symmetric gap sweep", Duration::from_secs(60), gap_sweep),
        ("feedback gain sweep", Duration::from_secs(30), gain_sweep),
        ("strict enlargement over naive region", Duration::from_secs(5), naive_enlargement),
        ("GF(2) rank oracle", Duration::from_secs(10), rank_oracle),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let verdict = match verdict {
            Ok(msg) if elapsed > *budget => Err(format!("{msg}; took {elapsed:.2?}, budget {budget:?}")),
            v => v,
        };
        match verdict {
            Ok(msg) => println!("PASS {:>2} {name} [{elapsed:.2?}]: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{elapsed:.2?}]: {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
