//! Grid evaluation of the scattering pipeline and CSV output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::closed_form::DimensionlessParams;
use crate::error::{Error, Result};
use crate::observables::scatter_with;
use crate::spin_algebra::{Spin, SpinVector, Vec8};
use crate::waveguide::scattering_matrices;

use super::config::SweepConfig;

/// Slack allowed above 1 for any emitted probability.
const PROBABILITY_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    /// `(vartheta, phi)` for family grids.
    pub family_point: Option<(f64, f64)>,
    pub theta: f64,
    pub u: f64,
    pub t: f64,
    pub t_up: f64,
    pub t_down: f64,
    /// Transmitted product-basis amplitudes.
    pub transmitted: Vec8,
    pub r: f64,
}

#[derive(Clone, Debug)]
pub struct SweepTable {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
}

/// `uud` style labels in product-basis order (electron, impurity 1, impurity 2).
pub fn product_labels() -> [String; 8] {
    std::array::from_fn(|i| {
        (0..3)
            .map(|bit| if i >> (2 - bit) & 1 == 0 { 'u' } else { 'd' })
            .collect()
    })
}

fn check_probability(name: &str, value: f64, row: &SweepRow) -> Result<()> {
    if !(value.is_finite() && (0.0..=1.0 + PROBABILITY_SLACK).contains(&value)) {
        return Err(Error::Numeric(format!(
            "{name} = {value} out of range at u = {}, theta = {}",
            row.u, row.theta
        )));
    }
    Ok(())
}

fn evaluate(cfg: &SweepConfig, u: f64, theta: f64) -> Result<Vec<SweepRow>> {
    let p = DimensionlessParams::new(u, theta)?;
    let matrices = scattering_matrices(&p)?;
    let electron = cfg.electron.amplitudes();
    let family_points: Vec<Option<(f64, f64)>> = match &cfg.family_grid {
        None => vec![None],
        Some(grid) => {
            let phis = grid.phi.points();
            grid.vartheta
                .points()
                .into_iter()
                .flat_map(|t| phis.iter().map(move |&ph| Some((t, ph))))
                .collect()
        }
    };

    family_points
        .into_iter()
        .map(|point| {
            let chi = SpinVector::from_parts(electron, cfg.impurity.amplitudes(point)?);
            let state = scatter_with(&matrices, &chi)?;
            let row = SweepRow {
                family_point: point,
                theta,
                u,
                t: state.transmittivity,
                t_up: state.polarized(Spin::Up),
                t_down: state.polarized(Spin::Down),
                transmitted: state.transmitted,
                r: state.reflectivity,
            };
            check_probability("T", row.t, &row)?;
            check_probability("T_up", row.t_up, &row)?;
            check_probability("T_down", row.t_down, &row)?;
            check_probability("R", row.r, &row)?;
            Ok(row)
        })
        .collect()
}

/// Evaluates every grid point, in parallel, returning rows in row-major
/// order over `(u, theta, vartheta, phi)`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let thetas = cfg.theta.points();
    let pairs: Vec<(f64, f64)> = cfg
        .u
        .points()
        .into_iter()
        .flat_map(|u| thetas.iter().map(move |&t| (u, t)))
        .collect();
    let blocks: Vec<Vec<SweepRow>> = pairs
        .par_iter()
        .map(|&(u, theta)| evaluate(cfg, u, theta))
        .collect::<Result<_>>()?;
    Ok(SweepTable {
        config: cfg.clone(),
        rows: blocks.into_iter().flatten().collect(),
    })
}

impl SweepTable {
    pub fn columns(&self) -> Vec<String> {
        let mut cols = Vec::with_capacity(24);
        if self.config.family_grid.is_some() {
            cols.extend(["vartheta".to_string(), "phi".to_string()]);
        }
        cols.extend(["theta", "u", "T", "T_up", "T_down"].map(String::from));
        for label in product_labels() {
            cols.push(format!("re_{label}"));
            cols.push(format!("im_{label}"));
        }
        cols.push("R".into());
        cols
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# spinfp sweep")?;
        for line in self.config.echo() {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "{}", self.columns().join(","))?;
        let mut fields = Vec::with_capacity(24);
        for row in &self.rows {
            fields.clear();
            if let Some((t, p)) = row.family_point {
                fields.extend([t, p]);
            }
            fields.extend([row.theta, row.u, row.t, row.t_up, row.t_down]);
            for z in row.transmitted.iter() {
                fields.extend([z.re, z.im]);
            }
            fields.push(row.r);
            let line: Vec<String> = fields.iter().map(|x| format!("{x:.16e}")).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        self.write_csv(BufWriter::new(File::create(path)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::config::Scenario;
    use std::f64::consts::PI;

    fn small(text: &str) -> SweepConfig {
        text.parse().unwrap()
    }

    #[test]
    fn labels() {
        let l = product_labels();
        assert_eq!(l[0], "uuu");
        assert_eq!(l[1], "uud");
        assert_eq!(l[4], "duu");
        assert_eq!(l[7], "ddd");
    }

    #[test]
    fn row_order_and_columns() {
        let cfg = small("scenario = fig3b\ntheta_steps = 4\nu_list = 1,2");
        let table = run_sweep(&cfg).unwrap();
        let keys: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.u, r.theta)).collect();
        assert_eq!(keys.len(), 8);
        assert_eq!(keys[0], (1.0, PI / 2.0));
        assert_eq!(keys[3], (1.0, 2.0 * PI));
        assert_eq!(keys[4], (2.0, PI / 2.0));
        assert_eq!(table.columns().len(), 22);
        for row in &table.rows {
            assert!((row.t + row.r - 1.0).abs() < 1e-10);
            assert!((row.t_up + row.t_down - row.t).abs() < 1e-12);
        }
        // singlet transparency on the grid
        assert!((table.rows[1].t - 1.0).abs() < 1e-10);
    }

    #[test]
    fn family_grid_rows() {
        let cfg = small("scenario = fig4\nvartheta_steps = 8\nphi_steps = 2");
        let table = run_sweep(&cfg).unwrap();
        assert_eq!(table.rows.len(), 27);
        assert_eq!(table.rows[0].family_point, Some((0.0, 0.0)));
        assert_eq!(table.rows[1].family_point, Some((0.0, PI / 2.0)));
        assert_eq!(table.columns()[0], "vartheta");
        // (pi/4, pi) is the singlet up to phase
        let singlet = &table.rows[5];
        assert_eq!(singlet.family_point, Some((PI / 4.0, PI)));
        assert!((singlet.t - 1.0).abs() < 1e-10);
    }

    #[test]
    fn csv_is_deterministic() {
        let cfg = SweepConfig {
            theta: super::super::config::Axis::Open {
                min: 0.0,
                max: 2.0 * PI,
                steps: 50,
            },
            ..SweepConfig::for_scenario(Scenario::Fig2a)
        };
        let render = || {
            let mut buf = Vec::new();
            run_sweep(&cfg).unwrap().write_csv(&mut buf).unwrap();
            String::from_utf8(buf).unwrap()
        };
        let a = render();
        assert_eq!(a, render());
        let data: Vec<&str> = a.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data.len(), 151);
        assert!(data[1].split(',').all(|f| f.contains('e')));
        assert_eq!(data[1].split(',').count(), 22);
    }
}
