//! Library results against independently computed reference values.

use num_rational::Rational64;

use fbcap::adt::adt_feedback_region;
use fbcap::gaussian::{inner_region, outer_region_cov, sym_capacity_bounds, DEFAULT_RHO_STEP};
use fbcap::sweeps::{sweep_gain, Axis, SweepSpec};
use fbcap::{AdtChannel, CorrelationParam, CovarianceParam, GaussianChannel64, Subset};

/// At 0 dB on every link both symmetric capacities sit where an individual
/// bound meets half the sum bound `½ log2(3+2ρ)`; the crossings are found by
/// bisection on the closed forms.
#[test]
fn zero_db_symmetric_capacities() {
    fn crossing(individual: impl Fn(f64) -> f64) -> f64 {
        let f = |r: f64| individual(r) - (3.0 + 2.0 * r).log2() / 2.0;
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..200 {
            let mid = (lo + hi) / 2.0;
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
    let rho_in = crossing(|r| (1.0 + 2.0 * (1.0 - r)).log2());
    let rho_out = crossing(|r| (1.0 + 2.0 * (1.0 - r * r)).log2());
    let best_in = (3.0 + 2.0 * rho_in).log2() / 2.0;
    let best_out = (3.0 + 2.0 * rho_out).log2() / 2.0;
    assert!((rho_in - 0.5).abs() < 1e-12 && (best_in - 1.0).abs() < 1e-12);

    let ch = GaussianChannel64::symmetric(1.0, 1.0).unwrap();
    let cap = sym_capacity_bounds(&ch, DEFAULT_RHO_STEP).unwrap();
    // refinement stops at a 1e-6 bracket in ρ; the kink costs ~1e-8 bits
    assert!((cap.inner - best_in).abs() < 5e-8);
    assert!((cap.rho_inner - rho_in).abs() < 1e-5);
    assert!((cap.outer - best_out).abs() < 5e-8, "{} vs {best_out}", cap.outer);
    assert!((cap.rho_outer - rho_out).abs() < 1e-5);
    assert!((cap.gap - 0.0608292).abs() < 1e-6);
}

#[test]
fn gain_sweep_quarter_alpha() {
    let spec = SweepSpec { base_db: 80.0, alpha: Axis::point(0.25), ..SweepSpec::default() };
    let row = sweep_gain(&spec).unwrap().rows[0];
    let mac = (1.0 + 1e8 + 1e2f64).log2() / 2.0;
    assert!((row.c_sym_no_norm - 101f64.log2() / mac).abs() < 1e-12);
    let fb_asymptotic = (1e8 + 1e2 + 2e5f64).log2() / 2.0;
    assert!((row.c_sym_fb_norm - fb_asymptotic / mac).abs() < 2e-3);
}

fn det2(a: [[f64; 2]; 2]) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Three transmitters, two receivers, real gains: every inner bound from an
/// explicit 2×2 determinant of `I + (1-ρ) G_S G_Sᵀ`.
#[test]
fn three_transmitter_inner_region_by_hand() {
    let g = [[1.5, -0.7, 2.0], [0.3, 1.1, -0.4]];
    let snr: Vec<Vec<f64>> = g.iter().map(|r| r.iter().map(|x: &f64| x * x).collect()).collect();
    let ch = GaussianChannel64::from_snr(&snr).unwrap();
    let rho = 0.35;
    let region = inner_region(&ch, CorrelationParam::new(rho).unwrap());
    for s in Subset::proper(3) {
        let cols: Vec<usize> = s.members().collect();
        let mut h = [[1.0, 0.0], [0.0, 1.0]];
        for i in 0..2 {
            for j in 0..2 {
                // from_snr keeps magnitudes only
                h[i][j] += (1.0 - rho) * cols.iter().map(|&m| g[i][m].abs() * g[j][m].abs()).sum::<f64>();
            }
        }
        let expected = det2(h).log2();
        assert!((region.bound(s).unwrap() - expected).abs() < 1e-12, "{s}");
    }
}

/// Two transmitters with a general correlation: the conditional variance of
/// one input given the other is `1 - |k|²`.
#[test]
fn outer_cov_two_transmitters_by_hand() {
    let ch = GaussianChannel64::from_snr(&[vec![4.0, 9.0], vec![2.0, 0.5]]).unwrap();
    let k = num_complex::Complex::new(0.3, -0.4);
    let kx = CovarianceParam::new(nalgebra::DMatrix::from_row_slice(
        2,
        2,
        &[num_complex::Complex::new(1.0, 0.0), k, k.conj(), num_complex::Complex::new(1.0, 0.0)],
    ))
    .unwrap();
    let region = outer_region_cov(&ch, &kx).unwrap();
    let v = 1.0 - k.norm_sqr();
    assert!((region.bound(Subset::singleton(0)).unwrap() - (1.0 + v * 6.0f64).log2()).abs() < 1e-12);
    assert!((region.bound(Subset::singleton(1)).unwrap() - (1.0 + v * 9.5f64).log2()).abs() < 1e-12);
    let sum = |a: f64, b: f64| (1.0 + a + b + 2.0 * 0.5 * (a * b).sqrt()).log2();
    assert!((region.full_bound() - sum(4.0, 9.0).min(sum(2.0, 0.5))).abs() < 1e-12);
}

/// Three-user deterministic channel with ranks worked out on paper:
/// levels (rows = receivers) `[[2,1,0],[0,2,1]]`, q = 2. Transmitter 3's
/// only visible bit lands on the level that carries transmitter 2's second
/// bit, so `{2,3}` has rank 2.
#[test]
fn three_user_adt_region_by_hand() {
    let ch: AdtChannel = "2,1,0;0,2,1".parse().unwrap();
    let region = adt_feedback_region(&ch);
    let int = Rational64::from_integer;
    let expect = [
        (vec![0], 2),
        (vec![1], 2),
        (vec![2], 1),
        (vec![0, 1], 4),
        (vec![0, 2], 3),
        (vec![1, 2], 2),
    ];
    for (members, rank) in expect {
        assert_eq!(region.bound(Subset::from_indices(members.clone())), Some(int(rank)), "{members:?}");
    }
    // each receiver's output has two levels
    assert_eq!(region.full_bound(), int(2));
}
