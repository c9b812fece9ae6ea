//! Charts, diagonal radial metrics and their curvature, with a
//! finite-difference oracle for verification.

pub mod chart;
pub mod curvature;
pub mod metric;
pub mod oracle;

pub use chart::{to_p, to_r, Blend, Chart, ChartPoint, Jet3, SChart};
pub use curvature::{curvature_from_jet, CurvatureSet};
pub use metric::{DiagonalRadialMetric, FlatProduct, MetricJet, Schwarzschild, SphereProduct, T_PERIOD};
pub use oracle::{FiniteDifferenceOracle, OracleCurvature};

use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt::Write as _;

/// Christoffel symbols (in r-chart coordinates) at a point given in any chart.
/// Only the `christoffel` field of the returned set is meaningful to callers
/// that want the connection alone; the rest is filled for convenience.
pub fn christoffel<M: DiagonalRadialMetric + ?Sized>(metric: &M, x: ChartPoint) -> Result<[[[f64; 4]; 4]; 4]> {
    let r = x.radius()?;
    Ok(curvature::christoffel_from_jet(&metric.jet(r)))
}

/// Connection, R_ijij, Ricci and |Rm|² at a point.
pub fn riemann<M: DiagonalRadialMetric + ?Sized>(metric: &M, x: ChartPoint) -> Result<CurvatureSet> {
    let r = x.radius()?;
    Ok(curvature_from_jet(&metric.jet(r)))
}

/// Outcome of checking |K_ij| ≤ r⁻³.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SectionalReport {
    /// max over samples and planes of |K_ij| r³.
    pub max_ratio: f64,
    /// Radius and plane where the maximum occurs.
    pub argmax_r: f64,
    pub argmax_plane: [usize; 2],
    /// Whether the bound holds with slack 1e−12.
    pub holds: bool,
}

/// Report max |K_ij| r³ over samples; never fails on a violated bound.
pub fn sectional_bound_check<M: DiagonalRadialMetric + ?Sized>(
    metric: &M,
    r_samples: &[f64],
) -> Result<SectionalReport> {
    let mut report = SectionalReport { max_ratio: 0.0, argmax_r: f64::NAN, argmax_plane: [0, 0], holds: true };
    for &r in r_samples {
        to_p(r)?;
        let k = curvature::sectional_from_jet(&metric.jet(r));
        for i in 0..4 {
            for j in (i + 1)..4 {
                let ratio = k[i][j].abs() * r * r * r;
                if ratio > report.max_ratio || report.argmax_r.is_nan() {
                    report.max_ratio = ratio;
                    report.argmax_r = r;
                    report.argmax_plane = [i, j];
                }
            }
        }
    }
    report.holds = report.max_ratio <= 1.0 + 1e-12;
    Ok(report)
}

/// One closed-form versus oracle comparison.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ParityRow {
    pub r: f64,
    pub component: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

/// Closed-form components to corrupt, for exercising the failure path.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FaultInjection {
    /// Component names (as in the parity rows) whose closed-form sign is flipped.
    pub flip_sign: Vec<String>,
}

/// Compare every structurally nonzero closed-form Christoffel symbol and
/// R_ijij against the finite-difference oracle at each radius. Relative error
/// is |closed − oracle| / |closed|.
pub fn oracle_parity<M: DiagonalRadialMetric + ?Sized>(
    metric: &M,
    radii: &[f64],
    fault: &FaultInjection,
) -> Result<Vec<ParityRow>> {
    let oracle = FiniteDifferenceOracle::new(
        |r: f64, th: f64| {
            let [a, b, c] = metric.components(r);
            [a, b, c, c * th.sin() * th.sin()]
        },
        1.0,
    );
    let mut rows = Vec::new();
    for &r in radii {
        to_p(r)?;
        let closed = curvature_from_jet(&metric.jet(r));
        let fd = oracle.evaluate(r);
        let mut push = |name: String, mut c: f64, o: f64| {
            if fault.flip_sign.iter().any(|f| *f == name) {
                c = -c;
            }
            let abs_err = (c - o).abs();
            let rel_err = if c != 0.0 { abs_err / c.abs() } else { abs_err };
            rows.push(ParityRow { r, component: name, closed_form: c, oracle: o, abs_err, rel_err });
        };
        for (name, [k, i, j]) in curvature::christoffel_names() {
            push(name, closed.christoffel[k][i][j], fd.christoffel[k][i][j]);
        }
        for (name, [i, j]) in curvature::riemann_names() {
            push(name, closed.riemann_diag[i][j], fd.riemann_diag[i][j]);
        }
    }
    Ok(rows)
}

/// Largest |Ric_ij| over samples, from the closed forms.
pub fn max_ricci<M: DiagonalRadialMetric + ?Sized>(metric: &M, radii: &[f64]) -> Result<f64> {
    let mut max: f64 = 0.0;
    for &r in radii {
        let c = riemann(metric, ChartPoint::r(r)?)?;
        for row in c.ricci.iter() {
            for v in row {
                max = max.max(v.abs());
            }
        }
    }
    Ok(max)
}

/// CSV dump with columns `r,p,s,component_name,closed_form,oracle,abs_err`.
pub fn parity_csv(rows: &[ParityRow]) -> String {
    let chart = SChart::default();
    let mut out = String::from("r,p,s,component_name,closed_form,oracle,abs_err\n");
    for row in rows {
        let p = to_p(row.r).unwrap_or(f64::NAN);
        let s = chart.to_s(row.r).unwrap_or(f64::NAN);
        let _ = writeln!(
            out,
            "{:.17e},{:.17e},{:.17e},{},{:.17e},{:.17e},{:.6e}",
            row.r, p, s, row.component, row.closed_form, row.oracle, row.abs_err
        );
    }
    out
}

/// Checks that a point's chart value is usable before any metric evaluation.
pub fn require_outside_horizon(r: f64) -> Result<()> {
    if r > 1.0 {
        Ok(())
    } else {
        Err(Error::Domain { chart: "r", value: r, domain: "(1, inf)" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schwarzschild_sectional_ratio_is_one() {
        let rep = sectional_bound_check(&Schwarzschild, &[1.1, 2.0, 10.0]).unwrap();
        assert!((rep.max_ratio - 1.0).abs() < 1e-12);
        assert!(rep.holds);
    }

    #[test]
    fn fixed_sphere_factor_violates_bound_without_error() {
        let rep = sectional_bound_check(&SphereProduct { radius: 1.0 }, &[2.0, 10.0]).unwrap();
        assert!(rep.max_ratio > 1.0);
        assert!(!rep.holds);
        assert_eq!(rep.argmax_plane, [2, 3]);
    }

    #[test]
    fn k01_is_quotient_of_riemann_by_metric() {
        let c = riemann(&Schwarzschild, ChartPoint::r(2.0).unwrap()).unwrap();
        let g = Schwarzschild.components(2.0);
        assert!((c.riemann_diag[0][1] / (g[0] * g[1]) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn parity_at_two_radii_and_fault_detection() {
        let rows = oracle_parity(&Schwarzschild, &[2.0, 17.0], &FaultInjection::default()).unwrap();
        let worst = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
        assert!(worst < 1e-6, "worst {worst}");
        let fault = FaultInjection { flip_sign: vec!["Gamma^1_00".into()] };
        let rows = oracle_parity(&Schwarzschild, &[2.0], &fault).unwrap();
        let bad: Vec<_> = rows.iter().filter(|r| r.rel_err > 1e-6).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].component, "Gamma^1_00");
    }

    #[test]
    fn csv_has_documented_header() {
        let rows = oracle_parity(&Schwarzschild, &[3.0], &FaultInjection::default()).unwrap();
        let csv = parity_csv(&rows);
        assert!(csv.starts_with("r,p,s,component_name,closed_form,oracle,abs_err\n"));
        assert_eq!(csv.lines().count(), rows.len() + 1);
    }
}
