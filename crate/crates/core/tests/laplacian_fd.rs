//! Analytic chain Laplacians against central differences.
//!
//! Nested differences of products lose too many digits, so a product
//! `nabla_i^2 nabla_S^2` is checked as the finite-difference Laplacian over
//! atom `i` of the analytic `nabla_S^2`. Two Richardson steps remove the
//! `h^2` and `h^4` truncation terms.

use casimir_core::worldline::{gaussian_laplacian, BridgePinning, GaussianChainDensity};
use proptest::prelude::*;

fn fd_over(chain: &GaussianChainDensity, i: usize, rest: &[usize], h: f64) -> f64 {
    let f = |c: &GaussianChainDensity| {
        if rest.is_empty() {
            c.value()
        } else {
            gaussian_laplacian(c, rest)
        }
    };
    let centre = f(chain);
    let central = |h: f64| -> f64 {
        (0..3)
            .map(|a| {
                let shifted = |d: f64| {
                    let mut pts = chain.points().to_vec();
                    pts[i][a] += d;
                    f(&chain.with_points(pts))
                };
                (shifted(h) - 2.0 * centre + shifted(-h)) / (h * h)
            })
            .sum()
    };
    let (a, b, c) = (central(h), central(h / 2.0), central(h / 4.0));
    let (r1, r2) = ((4.0 * b - a) / 3.0, (4.0 * c - b) / 3.0);
    (16.0 * r2 - r1) / 15.0
}

/// Base step: a fixed fraction of the diffusion length of the shortest
/// segment, balancing truncation against rounding in the nested differences.
fn step(total: f64, times: &[f64]) -> f64 {
    let shortest = times
        .windows(2)
        .map(|w| w[1] - w[0])
        .chain(std::iter::once(total - times[times.len() - 1]))
        .fold(f64::INFINITY, f64::min);
    0.05 * shortest.sqrt()
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (1..1usize << n).map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect()).collect()
}

fn check(chain: &GaussianChainDensity, h: f64) -> std::result::Result<(), String> {
    for s in subsets(chain.points().len()) {
        let exact = gaussian_laplacian(chain, &s);
        let fd = fd_over(chain, s[0], &s[1..], h);
        if (exact - fd).abs() > 1e-6 * exact.abs() {
            return Err(format!("{s:?}: analytic {exact} vs fd {fd}"));
        }
    }
    Ok(())
}

#[test]
fn triangle_chain() {
    let p = BridgePinning::new(
        1.3,
        vec![0.0, 0.4, 0.9],
        vec![[0.0, 0.0, 0.0], [0.9, 0.1, 0.0], [0.45, 0.8, 0.2]],
    )
    .unwrap();
    check(&GaussianChainDensity::from_pinning(&p), step(1.3, &[0.0, 0.4, 0.9])).unwrap();
}

#[test]
fn laplacian_of_single_bridge_matches_closed_form() {
    // g = (2 pi v)^{-3/2} exp(-r^2 / 2v): nabla^2 g = g (r^2 / v^2 - 3 / v)
    let (tau, total) = (0.3, 1.0);
    let v = tau * (1.0 - tau / total);
    let x = [0.2, -0.4, 0.1];
    let p = BridgePinning::new(total, vec![0.0, tau], vec![[0.0; 3], x]).unwrap();
    let chain = GaussianChainDensity::from_pinning(&p);
    let r2: f64 = x.iter().map(|c| c * c).sum();
    let want = chain.value() * (r2 / (v * v) - 3.0 / v);
    let got = gaussian_laplacian(&chain, &[1]);
    assert!((got - want).abs() < 1e-12 * want.abs());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_chains(
        total in 0.8f64..3.0,
        f in (0.15f64..0.45, 0.55f64..0.85),
        pts in prop::collection::vec([-0.8f64..0.8, -0.8f64..0.8, -0.8f64..0.8], 3),
    ) {
        let p = BridgePinning::new(total, vec![0.0, f.0 * total, f.1 * total], pts).unwrap();
        let chain = GaussianChainDensity::from_pinning(&p);
        // relative checks are meaningless at a zero crossing of the Laplacian
        let clear = subsets(3).iter().all(|s| {
            let e = gaussian_laplacian(&chain, s);
            e.abs() > 1e-3 * chain.value()
        });
        prop_assume!(clear);
        let h = step(total, &[0.0, f.0 * total, f.1 * total]);
        prop_assert!(check(&chain, h).is_ok(), "{:?}", check(&chain, h));
    }
}
