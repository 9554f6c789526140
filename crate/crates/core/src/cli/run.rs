//! Orchestration: turn a [`RunConfig`] into result rows.

use crate::bridge_mc::mc_te_two_body_in_medium;
use crate::error::{CasimirError, Result};
use crate::green_tensor::{self, ThreeBodyTerm, TripleTerm};
use crate::quadrature::QuadratureSpec;
use crate::sweep::{self, SweepConfig, SweepMethod};
use crate::system::{AtomSystem, CoefficientResult, Mode};
use crate::worldline::{self, AssignmentConvention};

use super::config::{command_name, Command, ConventionChoice, Geometry, MethodChoice, ModeChoice, RunConfig};
use super::emit::ResultRow;

/// Failure messages of sweep points skipped near a degenerate geometry start
/// with this; they do not count as numerical failures.
pub const EXCLUDED_PREFIX: &str = "excluded: ";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Which {
    Worldline,
    GreenTensor,
}

impl Which {
    fn label(self) -> &'static str {
        match self {
            Which::Worldline => "worldline",
            Which::GreenTensor => "green-tensor",
        }
    }
}

fn methods(m: MethodChoice) -> Vec<Which> {
    match m {
        MethodChoice::Worldline => vec![Which::Worldline],
        MethodChoice::GreenTensor => vec![Which::GreenTensor],
        MethodChoice::Both => vec![Which::Worldline, Which::GreenTensor],
    }
}

fn modes(m: ModeChoice) -> Vec<Mode> {
    match m {
        ModeChoice::Te => vec![Mode::Te],
        ModeChoice::Tm => vec![Mode::Tm],
        ModeChoice::Cross => vec![Mode::CrossTeTm],
        ModeChoice::Total => vec![Mode::Total],
        ModeChoice::All => Mode::ALL.to_vec(),
    }
}

fn mode_label(m: Mode) -> &'static str {
    match m {
        Mode::Te => "te",
        Mode::Tm => "tm",
        Mode::CrossTeTm => "cross",
        Mode::Total => "total",
    }
}

/// Quadrature rules for each family, with the global tolerance override.
struct Specs {
    worldline: QuadratureSpec,
    plane_wave: QuadratureSpec,
    position: QuadratureSpec,
}

impl Specs {
    fn new(tolerance: Option<f64>) -> Self {
        let apply = |s: QuadratureSpec| match tolerance {
            Some(t) => s.with_tolerance(t),
            None => s,
        };
        Self {
            worldline: apply(worldline::coefficient::default_spec()),
            plane_wave: apply(green_tensor::plane_wave::default_spec()),
            position: apply(green_tensor::position::default_spec()),
        }
    }
}

fn row(
    config: &RunConfig,
    method: &str,
    mode: &str,
    order: u32,
    triangle: Option<(f64, f64)>,
    outcome: Result<(f64, f64)>,
) -> ResultRow {
    let (coefficient, error_estimate, failure) = match outcome {
        Ok((v, e)) => (v, e, None),
        Err(err) => {
            let (v, e) = err
                .best_estimate()
                .map(|b| (b.value, b.error_estimate))
                .unwrap_or((f64::NAN, f64::NAN));
            (v, e, Some(err.to_string()))
        }
    };
    ResultRow {
        command: command_name(config.command).to_string(),
        method: method.to_string(),
        mode: mode.to_string(),
        order,
        b_over_c: triangle.map(|t| t.0),
        cos_theta: triangle.map(|t| t.1),
        coefficient,
        error_estimate,
        failure,
    }
}

fn pair(r: Result<CoefficientResult>) -> Result<(f64, f64)> {
    r.map(|c| (c.value, c.error_estimate))
}

fn two_body_system(geometry: &Geometry) -> Result<AtomSystem> {
    match geometry {
        Geometry::Positions(p) => AtomSystem::unit(p.clone()),
        _ => AtomSystem::on_axis(&[0.0, 1.0]),
    }
}

fn two_body(config: &RunConfig, specs: &Specs) -> Vec<ResultRow> {
    let system = two_body_system(&config.geometry);
    let mut rows = Vec::new();
    for which in methods(config.method) {
        for mode in modes(config.mode) {
            let outcome = system.clone().and_then(|s| match which {
                Which::Worldline => pair(worldline::two_body_coefficient(&s, mode, &specs.worldline)),
                Which::GreenTensor => pair(green_tensor::two_body_coefficient(&s, mode, &specs.plane_wave)),
            });
            rows.push(row(config, which.label(), mode_label(mode), 2, None, outcome));
        }
    }
    rows
}

/// Green-tensor three-body coefficient per mode. The total works for any
/// geometry; the TE/TM split needs collinear atoms.
fn green_three_body(system: &AtomSystem, mode: Mode, specs: &Specs) -> Result<(f64, f64)> {
    if mode == Mode::Total {
        return pair(green_tensor::three_body_total_general(system, &specs.position));
    }
    let aligned = system.aligned_to_z(0, 1);
    if !aligned.is_on_z_axis(1e-12 * system.reference_separation()) {
        return Err(CasimirError::InvalidGeometry(
            "the TE/TM split of the Green-tensor three-body coefficient needs collinear atoms".into(),
        ));
    }
    let term = |t: ThreeBodyTerm| green_tensor::three_body_axial_coefficient(&aligned, t, &specs.plane_wave);
    // both cyclic traces contribute equally
    let doubled = |t: TripleTerm| term(ThreeBodyTerm::Single(t)).map(|r| (2.0 * r.value, 2.0 * r.error_estimate));
    match mode {
        Mode::Te => doubled(TripleTerm::Eee),
        Mode::Tm => doubled(TripleTerm::Hhh),
        _ => {
            let total = term(ThreeBodyTerm::Total)?;
            let (te, te_err) = doubled(TripleTerm::Eee)?;
            let (tm, tm_err) = doubled(TripleTerm::Hhh)?;
            Ok((total.value - te - tm, total.error_estimate + te_err + tm_err))
        }
    }
}

fn three_body(config: &RunConfig, specs: &Specs) -> Vec<ResultRow> {
    let (system, triangle) = match &config.geometry {
        Geometry::Triangle { b_over_c, cos_theta } => {
            (sweep::build_geometry(*b_over_c, *cos_theta), Some((*b_over_c, *cos_theta)))
        }
        Geometry::Positions(p) => (AtomSystem::unit(p.clone()), None),
        Geometry::Default => unreachable!("three-body geometry is validated at parse time"),
    };
    // triangle input is reported in units of the A-C distance, like the sweep
    let rescale = |s: &AtomSystem| {
        if triangle.is_some() {
            s.reference_separation().powi(-10)
        } else {
            1.0
        }
    };
    let convention = match config.convention {
        ConventionChoice::FixedBase => AssignmentConvention::FixedBase,
        ConventionChoice::AllAssignments => AssignmentConvention::AllAssignments,
    };
    let mut rows = Vec::new();
    for which in methods(config.method) {
        for mode in modes(config.mode) {
            let outcome = system.clone().and_then(|s| {
                let (v, e) = match which {
                    Which::Worldline => pair(worldline::three_body_coefficient(&s, mode, convention, &specs.worldline))?,
                    Which::GreenTensor => green_three_body(&s, mode, specs)?,
                };
                let k = rescale(&s);
                Ok((v * k, e * k))
            });
            rows.push(row(config, which.label(), mode_label(mode), 3, triangle, outcome));
        }
    }
    rows
}

fn sweep_rows(config: &RunConfig, specs: &Specs) -> Vec<ResultRow> {
    let Geometry::Triangle { b_over_c, .. } = config.geometry else {
        unreachable!("sweep geometry is validated at parse time")
    };
    let mut sc = SweepConfig::new(b_over_c, config.grid);
    sc.methods = methods(config.method)
        .into_iter()
        .map(|w| match w {
            Which::Worldline => SweepMethod::WorldlineSum,
            Which::GreenTensor => SweepMethod::GreenTensor,
        })
        .collect();
    sc.worldline_spec = specs.worldline.clone();
    sc.green_spec = specs.position.clone();
    let mut rows: Vec<ResultRow> = match sweep::run_sweep(&sc) {
        Ok(rows) => rows
            .into_iter()
            .map(|r| {
                let method = match r.method {
                    SweepMethod::WorldlineSum => Which::Worldline,
                    SweepMethod::GreenTensor => Which::GreenTensor,
                };
                let failure = r.failure.map(|f| if r.excluded { format!("{EXCLUDED_PREFIX}{f}") } else { f });
                ResultRow {
                    command: command_name(Command::Sweep).to_string(),
                    method: method.label().to_string(),
                    mode: "total".to_string(),
                    order: 3,
                    b_over_c: Some(r.b_over_c),
                    cos_theta: Some(r.cos_theta),
                    coefficient: r.value,
                    error_estimate: r.error_estimate,
                    failure,
                }
            })
            .collect(),
        Err(e) => vec![row(config, "sweep", "total", 3, Some((b_over_c, f64::NAN)), Err(e))],
    };
    rows.sort_by(|a, b| a.cos_theta.partial_cmp(&b.cos_theta).unwrap_or(std::cmp::Ordering::Equal));
    rows
}

fn mc_rows(config: &RunConfig) -> Vec<ResultRow> {
    let outcome = mc_te_two_body_in_medium(config.separation, config.eps_r, config.n_paths, config.seed)
        .map(|e| (e.mean, e.standard_error));
    vec![row(config, "monte-carlo", "te", 2, None, outcome)]
}

/// Every result cell of the run, in emission order.
pub fn execute(config: &RunConfig) -> Vec<ResultRow> {
    let specs = Specs::new(config.tolerance);
    match config.command {
        Command::TwoBody => two_body(config, &specs),
        Command::ThreeBody => three_body(config, &specs),
        Command::Sweep => sweep_rows(config, &specs),
        Command::McValidate => mc_rows(config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::parse_config_with;

    fn run(line: &str) -> Vec<ResultRow> {
        let argv: Vec<String> = line.split_whitespace().map(String::from).collect();
        execute(&parse_config_with(&argv, None, None).unwrap())
    }

    #[test]
    fn two_body_grid_of_cells() {
        let rows = run("two-body --method both --mode all");
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| r.failure.is_none()));
        let te = &rows[0];
        assert_eq!((te.method.as_str(), te.mode.as_str()), ("worldline", "te"));
        assert!((te.coefficient + 3.0 / (8.0 * std::f64::consts::PI)).abs() < 1e-9);
    }

    #[test]
    fn off_axis_split_fails_in_its_cell() {
        let rows = run("three-body --method green-tensor --mode all --b-over-c 1 --cos-theta 0.5");
        assert_eq!(rows.len(), 4);
        assert!(rows[0].failure.is_some());
        assert!((rows[3].coefficient - 5.2016460905349).abs() < 1e-9);
    }

    #[test]
    fn sweep_rows_are_sorted() {
        let rows = run("sweep --b-over-c 1 --grid 5 --method green-tensor");
        let cos: Vec<f64> = rows.iter().map(|r| r.cos_theta.unwrap()).collect();
        assert_eq!(cos, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(rows[4].failure.as_deref().unwrap().starts_with(EXCLUDED_PREFIX));
    }
}
