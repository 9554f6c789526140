use casimir_core::green_tensor::{
    pair_trace, triple_trace, PairTrace, ProjectorPair, TripleTerm, WaveVector,
};
use casimir_core::green_tensor::trace::{pair_trace_direct, triple_trace_direct};
use casimir_core::quadrature::integrate_semi_infinite;
use casimir_core::worldline::{
    bridge_density, bridge_variance, conditional_moments, BridgePinning,
};
use casimir_core::green_tensor::position::default_spec;
use proptest::prelude::*;

fn wave_vector() -> impl Strategy<Value = WaveVector> {
    // keep k_rho away from zero, where the TE direction is undefined
    (0.05f64..3.0, 0.0f64..std::f64::consts::TAU, -3.0f64..3.0)
        .prop_map(|(rho, phi, kz)| WaveVector::new(rho * phi.cos(), rho * phi.sin(), kz))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn projectors_complete_the_identity(k in wave_vector()) {
        let p = ProjectorPair::real(k).unwrap();
        let kv = k.as_array();
        let kk = k.k() * k.k();
        for i in 0..3 {
            for j in 0..3 {
                let sum = p.a_e[i][j] + p.a_h[i][j];
                let want = if i == j { 1.0 } else { 0.0 } - kv[i] * kv[j] / kk;
                prop_assert!((sum.re - want).abs() < 1e-12 && sum.im.abs() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn closed_form_traces_match_matrix_products(k in wave_vector(), kp in wave_vector(), kpp in wave_vector()) {
        for t in PairTrace::ALL {
            let (a, b) = (pair_trace(&k, &kp, t).unwrap(), pair_trace_direct(&k, &kp, t).unwrap());
            prop_assert!((a - b).abs() < 1e-12, "{t:?}: {a} vs {b}");
        }
        for t in TripleTerm::ALL {
            let (a, b) = (triple_trace(&k, &kp, &kpp, t).unwrap(), triple_trace_direct(&k, &kp, &kpp, t).unwrap());
            prop_assert!((a - b).abs() < 1e-12, "{t:?}: {a} vs {b}");
        }
    }
}

fn point() -> impl Strategy<Value = [f64; 3]> {
    [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0]
}

/// Total time and `k - 1` strictly increasing pin times in `(0, T)`.
fn pin_times(k: usize) -> impl Strategy<Value = (f64, Vec<f64>)> {
    (0.5f64..4.0, prop::collection::vec(0.05f64..1.0, k)).prop_map(|(total, gaps)| {
        let sum: f64 = gaps.iter().sum();
        let mut t = 0.0;
        let times = gaps[..gaps.len() - 1]
            .iter()
            .map(|g| {
                t += g / sum * total;
                t
            })
            .collect();
        (total, times)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn conditioning_order_does_not_matter(
        (total, inner) in pin_times(4),
        pts in prop::collection::vec(point(), 4),
    ) {
        let mut times = vec![0.0];
        times.extend(inner);
        let p = BridgePinning::new(total, times, pts).unwrap();
        let (f, b) = (p.forward_density().unwrap(), p.backward_density().unwrap());
        prop_assert!((f - b).abs() <= 1e-12 * f.abs(), "{f} vs {b}");
    }

    #[test]
    fn conditional_variances_compose(
        (total, inner) in pin_times(3),
        base in point(),
        prev in point(),
    ) {
        let (t1, t2) = (inner[0], inner[1]);
        // forward: Var(t2) = Var(t2 | t1) + (1 - a)^2 Var(t1)
        let (_, v) = conditional_moments(t2, t1, &prev, total, &base).unwrap();
        let a = (t2 - t1) / (total - t1);
        let lhs = bridge_variance(t2, total);
        let rhs = v + (1.0 - a).powi(2) * bridge_variance(t1, total);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs, "{lhs} vs {rhs}");
        // backward: Var(t1) = Var(t1 | t2) + (t1 / t2)^2 Var(t2)
        let (_, v) = conditional_moments(t1, t2, &prev, total, &base).unwrap();
        let a = t1 / t2;
        let lhs = bridge_variance(t1, total);
        let rhs = v + a * a * bridge_variance(t2, total);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs, "{lhs} vs {rhs}");
    }

    #[test]
    fn conditional_means_are_linear_interpolations(
        (total, inner) in pin_times(3),
        base in point(),
        prev in point(),
    ) {
        let (t1, t2) = (inner[0], inner[1]);
        // the mean of a bridge from (t1, prev) to (T, base), evaluated at t2
        let (m, _) = conditional_moments(t2, t1, &prev, total, &base).unwrap();
        let w = (t2 - t1) / (total - t1);
        for c in 0..3 {
            let want = prev[c] + (base[c] - prev[c]) * w;
            prop_assert!((m[c] - want).abs() < 1e-12);
        }
    }
}

#[test]
fn bridge_density_is_normalized() {
    let spec = default_spec();
    for (tau, total) in [(0.2, 1.0), (1.5, 2.0), (0.01, 0.3), (3.0, 7.0)] {
        let mass = integrate_semi_infinite(
            |x| {
                let r = x[0];
                4.0 * std::f64::consts::PI * r * r * bridge_density(tau, total, &[0.0; 3], &[r, 0.0, 0.0]).unwrap()
            },
            1,
            &spec,
        )
        .unwrap();
        assert!((mass.value - 1.0).abs() < 1e-12, "tau={tau} T={total}: {}", mass.value);
    }
}
