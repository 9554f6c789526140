use casimir_core::green_tensor::{self, collinear_system, three_body_total_general};
use casimir_core::sweep::{build_geometry, evaluate_point, flag_jumps, run_sweep, SweepConfig, SweepMethod, SweepRow};
use casimir_core::AtomSystem;

/// (method, cos_theta, coefficient) rows of a frozen sweep file.
fn frozen(name: &str) -> Vec<(String, f64, f64)> {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .skip(1)
        .map(|line| {
            let c: Vec<&str> = line.split(',').collect();
            (c[1].to_string(), c[5].parse().unwrap(), c[6].parse().unwrap())
        })
        .collect()
}

fn method_of(label: &str) -> SweepMethod {
    match label {
        "worldline" => SweepMethod::WorldlineSum,
        _ => SweepMethod::GreenTensor,
    }
}

#[test]
fn anchors_match_dedicated_operations() {
    let config = SweepConfig::new(0.5, 41);
    let gt = evaluate_point(&config, SweepMethod::GreenTensor, 1.0).unwrap().value;
    let direct = three_body_total_general(&collinear_system(), &green_tensor::position::default_spec()).unwrap();
    assert!((gt - direct.value).abs() <= 1e-8 * direct.value.abs());
    let config = SweepConfig::new(1.0, 41);
    let gt = evaluate_point(&config, SweepMethod::GreenTensor, 0.5).unwrap().value;
    let eq = AtomSystem::unit(vec![[0.0; 3], [1.0, 0.0, 0.0], [0.5, 3f64.sqrt() / 2.0, 0.0]]).unwrap();
    let direct = three_body_total_general(&eq, &green_tensor::position::default_spec()).unwrap();
    assert!((gt - direct.value).abs() <= 1e-8 * direct.value.abs());
}

#[test]
fn reflected_and_relabeled_geometry_agrees() {
    // x -> b - x swaps A and B; relabel them back and recompute explicitly
    let spec = green_tensor::position::default_spec();
    for cos_theta in [-0.9, -0.3, 0.2, 0.7] {
        let sys = build_geometry(1.0, cos_theta).unwrap();
        let reflected: Vec<[f64; 3]> = sys.positions().iter().map(|p| [1.0 - p[0], p[1], p[2]]).collect();
        let relabeled = AtomSystem::unit(vec![reflected[1], reflected[0], reflected[2]]).unwrap();
        let a = three_body_total_general(&sys, &spec).unwrap().value;
        let b = three_body_total_general(&relabeled, &spec).unwrap().value;
        assert!((a - b).abs() <= 1e-10 * a.abs(), "cos {cos_theta}: {a} vs {b}");
    }
}

#[test]
fn rows_follow_grid_order() {
    let mut config = SweepConfig::new(1.0, 9);
    config.methods = vec![SweepMethod::GreenTensor];
    let rows = run_sweep(&config).unwrap();
    let cos: Vec<f64> = rows.iter().map(|r| r.cos_theta).collect();
    assert_eq!(cos, config.cos_theta);
    assert!(rows[..8].iter().all(SweepRow::is_ok));
    assert!(rows[8].excluded);
}

#[test]
fn frozen_curves_reproduce() {
    for (name, b) in [("sweep_b0.5.csv", 0.5), ("sweep_b1.csv", 1.0)] {
        let rows = frozen(name);
        assert_eq!(rows.len(), 82, "{name}");
        let config = SweepConfig::new(b, 41);
        // every fifth grid point of each curve
        for (method, cos_theta, want) in rows.iter().step_by(10).chain(rows.iter().skip(1).step_by(10)) {
            let got = evaluate_point(&config, method_of(method), *cos_theta);
            if want.is_nan() {
                assert!(config.is_excluded(*cos_theta));
                continue;
            }
            let got = got.unwrap().value;
            assert!((got - want).abs() <= 1e-6 * want.abs() + 1e-9, "{name} {method} {cos_theta}: {got} vs {want}");
        }
    }
}

#[test]
fn frozen_curves_are_free_of_flagged_jumps() {
    for name in ["sweep_b0.5.csv", "sweep_b1.csv"] {
        let rows: Vec<SweepRow> = frozen(name)
            .into_iter()
            .map(|(m, c, v)| SweepRow {
                cos_theta: c,
                b_over_c: 0.0,
                method: method_of(&m),
                value: v,
                error_estimate: 0.0,
                failure: v.is_nan().then(|| "excluded".to_string()),
                excluded: v.is_nan(),
            })
            .collect();
        for m in SweepMethod::ALL {
            assert!(flag_jumps(&rows, m, 4.0).is_empty(), "{name} {m:?}");
        }
    }
}
