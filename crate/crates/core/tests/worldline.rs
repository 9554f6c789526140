use std::f64::consts::PI;

use casimir_core::green_tensor::collinear_system;
use casimir_core::linalg;
use casimir_core::worldline::{
    self, assignment_energies, scalar_sum_fixed_base, te_three_body_coefficient, te_two_body_coefficient,
    three_body_coefficient, tm_two_body_coefficient, AssignmentConvention,
};
use casimir_core::{AtomSystem, Mode};

fn spec() -> casimir_core::quadrature::QuadratureSpec {
    worldline::coefficient::default_spec()
}

fn close(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs()
}

fn equilateral() -> AtomSystem {
    AtomSystem::unit(vec![[0.0; 3], [1.0, 0.0, 0.0], [0.5, 3f64.sqrt() / 2.0, 0.0]]).unwrap()
}

#[test]
fn two_body_channels() {
    let sys = AtomSystem::on_axis(&[0.0, 1.0]).unwrap();
    let te = te_two_body_coefficient(&sys, &spec()).unwrap().value;
    let tm = tm_two_body_coefficient(&sys, &spec()).unwrap().value;
    assert!(close(te, -3.0 / (8.0 * PI), 1e-9), "{te}");
    assert!(close(tm, -43.0 / (8.0 * PI), 1e-9), "{tm}");
    let total = worldline::two_body_coefficient(&sys, Mode::Total, &spec()).unwrap().value;
    assert!(close(total, -23.0 / (4.0 * PI), 1e-9));
    assert_eq!(worldline::two_body_coefficient(&sys, Mode::CrossTeTm, &spec()).unwrap().value, 0.0);
}

#[test]
fn two_body_is_rigid_motion_invariant() {
    let sys = AtomSystem::unit(vec![[0.2, 0.1, -0.3], [1.4, -0.8, 0.9]]).unwrap();
    let base = tm_two_body_coefficient(&sys, &spec()).unwrap().value;
    let moved = sys.rotated(&linalg::rotation([1.0, 2.0, -0.5], 2.3)).translated([-3.0, 0.0, 7.0]).scaled(0.2);
    let r = tm_two_body_coefficient(&moved, &spec()).unwrap().value;
    assert!(close(r, base, 1e-8), "{r} vs {base}");
    let swapped = tm_two_body_coefficient(&sys.relabeled(&[1, 0]), &spec()).unwrap().value;
    assert!(close(swapped, base, 1e-8));
}

#[test]
fn collinear_te_in_both_conventions() {
    let sys = collinear_system();
    let all = te_three_body_coefficient(&sys, &spec()).unwrap().value;
    assert!(close(all, 22.5, 1e-8), "{all}");
    let fixed = three_body_coefficient(&sys, Mode::Te, AssignmentConvention::FixedBase, &spec()).unwrap().value;
    assert!(close(fixed, 7.5, 1e-8));
}

#[test]
fn triangle_te_and_assignment_symmetry() {
    let sys = equilateral();
    let te = te_three_body_coefficient(&sys, &spec()).unwrap().value;
    assert!(close(te, 80.0 / 243.0, 1e-8), "{te}");
    // every (base, ordering) assignment of a closed loop contributes equally
    let parts = assignment_energies(&sys, 3, Mode::Te, &spec()).unwrap();
    assert_eq!(parts.len(), 6);
    let first = parts[0].1.value;
    for (a, e) in &parts {
        assert!(close(e.value, first, 1e-8), "{a:?}");
    }
}

#[test]
fn three_body_te_is_rigid_motion_invariant() {
    let sys = AtomSystem::unit(vec![[0.0; 3], [0.6, 0.2, 0.0], [0.1, 0.8, 0.4]]).unwrap();
    let base = te_three_body_coefficient(&sys, &spec()).unwrap().value;
    let moved = sys.rotated(&linalg::rotation([0.0, 1.0, 1.0], -0.7)).translated([1.0, 2.0, 3.0]).scaled(5.0);
    for s in [moved, sys.relabeled(&[2, 0, 1])] {
        let r = te_three_body_coefficient(&s, &spec()).unwrap().value;
        assert!(close(r, base, 1e-7), "{r} vs {base}");
    }
}

#[test]
fn scalar_sum_at_the_anchors() {
    let col = scalar_sum_fixed_base(&collinear_system(), &spec()).unwrap();
    assert!(close(col.value, 358.0, 1e-7), "{}", col.value);
    // self-anchor: the triangle scalar sum evaluates to -1395.5/729
    let tri = scalar_sum_fixed_base(&equilateral(), &spec()).unwrap();
    assert!(close(tri.value, -1395.5 / 729.0, 1e-7), "{}", tri.value);
}

#[test]
fn wrong_sizes_are_rejected() {
    let two = AtomSystem::on_axis(&[0.0, 1.0]).unwrap();
    assert!(te_three_body_coefficient(&two, &spec()).is_err());
    assert!(te_two_body_coefficient(&collinear_system(), &spec()).is_err());
}
