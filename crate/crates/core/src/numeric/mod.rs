//! Floating-point trajectories of the flow `dv/dt = s(t, v)`, used to cross-check
//! symbolic results.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::algebra::{Polynomial, RationalFunction, Var};
use crate::dvariety::DVariety;
use crate::error::{Error, Result};

/// Distance from zero below which a denominator counts as vanishing.
const POLE_GUARD: f64 = 1e-12;
/// Largest generator residual accepted at the initial point.
const INIT_TOLERANCE: f64 = 1e-10;

/// Polynomial with coefficients converted once to `f64`.
#[derive(Clone, Debug)]
struct FloatPoly {
    terms: Vec<(Vec<(usize, i32)>, f64)>,
}

impl FloatPoly {
    fn new(p: &Polynomial) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let powers = m.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e as i32)).collect();
                (powers, c.to_f64().unwrap_or(f64::NAN))
            })
            .collect();
        FloatPoly { terms }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(m, c)| m.iter().fold(*c, |acc, &(i, e)| acc * x[i].powi(e))).sum()
    }
}

#[derive(Clone, Debug)]
struct FloatRatfunc {
    num: FloatPoly,
    den: FloatPoly,
}

impl FloatRatfunc {
    fn new(f: &RationalFunction) -> Self {
        FloatRatfunc { num: FloatPoly::new(f.numerator()), den: FloatPoly::new(f.denominator()) }
    }

    /// `None` when the denominator is below the pole guard.
    fn eval(&self, x: &[f64]) -> Option<f64> {
        let d = self.den.eval(x);
        (d.abs() >= POLE_GUARD).then(|| self.num.eval(x) / d)
    }
}

/// Samples of a numerical solution; every point holds all registry variables.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub names: Vec<String>,
    pub time: Var,
    pub samples: Vec<Vec<f64>>,
    pub step: f64,
    pub method: &'static str,
}

impl Trajectory {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|x| x[self.time])
    }

    pub fn last(&self) -> &[f64] {
        self.samples.last().expect("a trajectory has its initial sample")
    }

    /// Time column first, then the other variables in registry order.
    pub fn to_csv(&self) -> String {
        let order: Vec<usize> =
            std::iter::once(self.time).chain((0..self.names.len()).filter(|&i| i != self.time)).collect();
        let mut out = order.iter().map(|&i| self.names[i].as_str()).collect::<Vec<_>>().join(",");
        out.push('\n');
        for x in &self.samples {
            let row: Vec<String> = order.iter().map(|&i| format!("{:.16e}", x[i])).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Largest absolute value of the ideal generators at `point`.
pub fn ideal_residual(sys: &DVariety, point: &[f64]) -> f64 {
    sys.equations().iter().map(|p| p.eval_f64(point).abs()).fold(0.0, f64::max)
}

/// Largest generator residual over all samples.
pub fn max_ideal_residual(sys: &DVariety, traj: &Trajectory) -> f64 {
    traj.samples.iter().map(|x| ideal_residual(sys, x)).fold(0.0, f64::max)
}

/// Classical fourth-order Runge-Kutta with a fixed step; the last step is
/// shortened to land on `t_end`. `init` gives every registry variable,
/// time included.
pub fn integrate_flow(sys: &DVariety, init: &[f64], t_end: f64, step: f64) -> Result<Trajectory> {
    let reg = sys.registry();
    let time = reg.time().ok_or(Error::NoTimeVariable)?;
    if init.len() != reg.len() {
        return Err(Error::InvalidArgument(format!("expected {} initial values, got {}", reg.len(), init.len())));
    }
    if step.is_nan() || step <= 0.0 || step.is_infinite() {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    let t0 = init[time];
    if t_end.is_nan() || t_end < t0 {
        return Err(Error::InvalidArgument(format!("t_end {t_end} is before the initial time {t0}")));
    }
    let residual = ideal_residual(sys, init);
    if residual.is_nan() || residual > INIT_TOLERANCE {
        return Err(Error::InitialConditionOffVariety { residual });
    }
    let field: Vec<(Var, FloatRatfunc)> = sys.section_entries().map(|(v, f)| (v, FloatRatfunc::new(f))).collect();
    let rhs = |x: &[f64]| -> Option<Vec<f64>> {
        let mut dx = vec![0.0; x.len()];
        dx[time] = 1.0;
        for (v, f) in &field {
            dx[*v] = f.eval(x)?;
        }
        Some(dx)
    };
    let axpy = |x: &[f64], h: f64, k: &[f64]| -> Vec<f64> { x.iter().zip(k).map(|(a, b)| a + h * b).collect() };

    let span = t_end - t0;
    let n = {
        let ratio = span / step;
        if (ratio - ratio.round()).abs() < 1e-9 {
            ratio.round()
        } else {
            ratio.ceil()
        }
    } as usize;
    let mut samples = Vec::with_capacity(n + 1);
    samples.push(init.to_vec());
    let mut x = init.to_vec();
    for i in 1..=n {
        let t_next = if i == n { t_end } else { t0 + i as f64 * step };
        let h = t_next - x[time];
        let pole = || Error::PoleEncountered { last_t: x[time] };
        let k1 = rhs(&x).ok_or_else(pole)?;
        let k2 = rhs(&axpy(&x, h / 2.0, &k1)).ok_or_else(pole)?;
        let k3 = rhs(&axpy(&x, h / 2.0, &k2)).ok_or_else(pole)?;
        let k4 = rhs(&axpy(&x, h, &k3)).ok_or_else(pole)?;
        let mut next: Vec<f64> =
            (0..x.len()).map(|j| x[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])).collect();
        next[time] = t_next;
        if next.iter().any(|v| !v.is_finite()) {
            return Err(pole());
        }
        x = next;
        samples.push(x.clone());
    }
    Ok(Trajectory {
        names: reg.iter().map(|(_, info)| info.name.clone()).collect(),
        time,
        samples,
        step,
        method: "rk4",
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constancy {
    /// `h` at the first sample.
    pub value: f64,
    /// Largest `|h - value| / max(1, |value|)` along the trajectory.
    pub max_drift: f64,
    pub pass: bool,
}

pub fn check_constancy(h: &RationalFunction, traj: &Trajectory, tol: f64) -> Result<Constancy> {
    let f = FloatRatfunc::new(h);
    let mut values = Vec::with_capacity(traj.samples.len());
    for x in &traj.samples {
        values.push(f.eval(x).ok_or(Error::DenominatorNearZeroOnTrajectory { t: x[traj.time] })?);
    }
    let value = values[0];
    let scale = value.abs().max(1.0);
    let max_drift = values.iter().map(|v| (v - value).abs() / scale).fold(0.0, f64::max);
    Ok(Constancy { value, max_drift, pass: max_drift <= tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvariety::compile;
    use crate::parser::{parse_expression, parse_problem_file};

    fn system(text: &str) -> DVariety {
        compile(&parse_problem_file(text).unwrap()).unwrap().variety().clone()
    }

    const CUBIC: &str = "ode: y' = -1/2*y^3\n";

    fn cubic_endpoint_error(step: f64) -> f64 {
        let traj = integrate_flow(&system(CUBIC), &[5.0, 0.5], 10.0, step).unwrap();
        (traj.last()[1] - 1.0 / 9f64.sqrt()).abs()
    }

    #[test]
    fn cubic_closed_form() {
        let sys = system(CUBIC);
        let traj = integrate_flow(&sys, &[5.0, 0.5], 10.0, 1e-3).unwrap();
        assert_eq!(traj.samples.len(), 5001);
        assert_eq!(traj.last()[0], 10.0);
        assert!(cubic_endpoint_error(1e-3) < 1e-8);
        for (t, x) in traj.times().zip(&traj.samples).step_by(250) {
            assert!((x[1] - 1.0 / (t - 1.0).sqrt()).abs() < 1e-8, "t = {t}");
        }

        let h = parse_expression("t - 1/y^2", sys.registry()).unwrap();
        let c = check_constancy(&h, &traj, 1e-8).unwrap();
        assert!((c.value - 1.0).abs() < 1e-12);
        assert!(c.pass, "{c:?}");

        let y = parse_expression("y", sys.registry()).unwrap();
        let c = check_constancy(&y, &traj, 1e-6).unwrap();
        assert!(!c.pass);
        assert!((c.max_drift - 1.0 / 6.0).abs() < 1e-6);

        let k = parse_expression("7/2", sys.registry()).unwrap();
        assert_eq!(check_constancy(&k, &traj, 0.0).unwrap().max_drift, 0.0);
    }

    #[test]
    fn step_halving_ratio() {
        let ratio = cubic_endpoint_error(0.2) / cubic_endpoint_error(0.1);
        assert!((12.0..=20.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn exponential() {
        let sys = system("vars: a\nsection: a' = 2*a\n");
        let traj = integrate_flow(&sys, &[0.0, 1.0], 1.0, 1e-3).unwrap();
        assert!((traj.last()[1] - 2f64.exp()).abs() < 1e-7);
    }

    #[test]
    fn zero_section_is_constant() {
        let sys = system("vars: x, u\nsection: x' = 0\nsection: u' = 0\n");
        let traj = integrate_flow(&sys, &[0.0, 1.5, -2.0], 2.0, 0.3).unwrap();
        assert!(traj.samples.iter().all(|x| x[1] == 1.5 && x[2] == -2.0));
        assert_eq!(traj.last()[0], 2.0);
    }

    #[test]
    fn elliptic_stays_on_variety() {
        let sys = system("vars: y0, y1\node: y1^2 = 4*y0^3 + 4*y0 + 1\n");
        let reg = sys.registry();
        let (t, y0, y1) = (reg.time().unwrap(), reg.lookup("y0").unwrap(), reg.lookup("y1").unwrap());
        let mut init = vec![0.0; 3];
        init[t] = 0.0;
        init[y0] = 0.0;
        init[y1] = 1.0;
        let traj = integrate_flow(&sys, &init, 1.0, 1e-3).unwrap();
        assert!(max_ideal_residual(&sys, &traj) < 1e-6);
        let weierstrass = parse_expression("y1^2 - 4*y0^3 - 4*y0", reg).unwrap();
        assert!(check_constancy(&weierstrass, &traj, 1e-6).unwrap().pass);
    }

    #[test]
    fn errors() {
        let sys = system("vars: y0, y1\node: y1^2 = 4*y0^3 + 4*y0 + 1\n");
        let reg = sys.registry();
        let mut init = vec![0.0; 3];
        init[reg.lookup("y1").unwrap()] = 2.0;
        assert!(matches!(integrate_flow(&sys, &init, 1.0, 1e-3), Err(Error::InitialConditionOffVariety { .. })));

        // the section has a pole at t = 1
        let sys = system("vars: y\nsection: y' = 1/(1 - t)\n");
        match integrate_flow(&sys, &[0.0, 0.0], 2.0, 0.25) {
            Err(Error::PoleEncountered { last_t }) => assert!((last_t - 0.75).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let sys = system(CUBIC);
        assert!(integrate_flow(&sys, &[0.0, 1.0], -1.0, 0.1).is_err());
        let traj = integrate_flow(&sys, &[0.0, 1.0], 0.5, 0.1).unwrap();
        let h = parse_expression("1/(y - 1)", sys.registry()).unwrap();
        assert!(matches!(check_constancy(&h, &traj, 1.0), Err(Error::DenominatorNearZeroOnTrajectory { .. })));
    }

    #[test]
    fn csv_export() {
        let sys = system(CUBIC);
        let traj = integrate_flow(&sys, &[5.0, 0.5], 5.2, 0.1).unwrap();
        let csv = traj.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,y");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "5.0000000000000000e0,5.0000000000000000e-1");
    }
}
