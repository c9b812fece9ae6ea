//! Radial charts on S¹×ℝ¹×S²: the areal radius r ∈ (1,∞), the compactified
//! coordinate p = (1 − 1/r)^{1/2} ∈ (0,1) that is regular at the horizon
//! bolt, and the flow coordinate s which equals p near the bolt and r far out.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which radial chart a coordinate value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    R,
    P,
    S,
}

/// A radial position expressed in one of the three charts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartPoint {
    pub chart: Chart,
    pub value: f64,
}

impl ChartPoint {
    pub fn r(value: f64) -> Result<Self> {
        to_p(value)?;
        Ok(Self { chart: Chart::R, value })
    }

    pub fn p(value: f64) -> Result<Self> {
        to_r(value)?;
        Ok(Self { chart: Chart::P, value })
    }

    pub fn s(value: f64) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::Domain { chart: "s", value, domain: "(0, inf)" });
        }
        Ok(Self { chart: Chart::S, value })
    }

    /// Areal radius of the point; s-values are resolved with the default
    /// (cubic) s-chart.
    pub fn radius(&self) -> Result<f64> {
        self.radius_with(&SChart::default())
    }

    pub fn radius_with(&self, s_chart: &SChart) -> Result<f64> {
        match self.chart {
            Chart::R => {
                to_p(self.value)?;
                Ok(self.value)
            }
            Chart::P => to_r(self.value),
            Chart::S => s_chart.s_inverse(self.value),
        }
    }
}

/// p = (1 − 1/r)^{1/2}, computed as ((r − 1)/r)^{1/2} to keep full relative
/// precision next to the bolt.
pub fn to_p(r: f64) -> Result<f64> {
    if !(r > 1.0) || r.is_nan() {
        return Err(Error::Domain { chart: "r", value: r, domain: "(1, inf)" });
    }
    if r.is_infinite() {
        return Ok(1.0);
    }
    Ok(((r - 1.0) / r).sqrt())
}

/// r = 1/(1 − p²), with the denominator factored to avoid cancellation.
pub fn to_r(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain { chart: "p", value: p, domain: "(0, 1)" });
    }
    Ok(1.0 / ((1.0 - p) * (1.0 + p)))
}

/// Shape of the interpolant joining the two s-chart branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Blend {
    /// Matches value and slope of both branches (C¹).
    CubicHermite,
    /// Also matches the second derivatives (C²), which keeps the metric
    /// components in the s-chart C¹ and the flow stencils second order.
    QuinticHermite,
}

/// Value and first three derivatives of a scalar function of one variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet3 {
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

/// The flow chart s(r): equal to p on (1, r_a], equal to r on [r_b, ∞) and a
/// Hermite blend in between (default r_a = 2, r_b = 3).
#[derive(Debug, Clone, PartialEq)]
pub struct SChart {
    blend: Blend,
    r_a: f64,
    r_b: f64,
    /// Polynomial coefficients in τ = (r − r_a)/(r_b − r_a), lowest order first.
    coeffs: Vec<f64>,
}

impl Default for SChart {
    fn default() -> Self {
        Self::new(Blend::CubicHermite).expect("default blend is monotone")
    }
}

impl SChart {
    pub fn new(blend: Blend) -> Result<Self> {
        Self::with_junctions(blend, 2.0, 3.0)
    }

    /// Blend the p-branch at r_a into the identity branch at r_b.
    pub fn with_junctions(blend: Blend, r_a: f64, r_b: f64) -> Result<Self> {
        if !(r_a > 1.0 && r_b > r_a && r_b.is_finite()) {
            return Err(Error::Chart(format!("junctions must satisfy 1 < r_a < r_b < inf, got ({r_a}, {r_b})")));
        }
        let inner = p_branch(r_a);
        let len = r_b - r_a;
        // Endpoint data in τ: derivatives scale with powers of the interval length.
        let left = [inner.f, inner.d1 * len, inner.d2 * len * len];
        let right = [r_b, len, 0.0];
        let coeffs = hermite_coefficients(blend, left, right);
        check_monotone(&coeffs)?;
        Ok(Self { blend, r_a, r_b, coeffs })
    }

    pub fn blend(&self) -> Blend {
        self.blend
    }

    pub fn junctions(&self) -> (f64, f64) {
        (self.r_a, self.r_b)
    }

    /// s(r).
    pub fn to_s(&self, r: f64) -> Result<f64> {
        to_p(r)?;
        Ok(self.s_jet(r).f)
    }

    /// s and its first three r-derivatives.
    pub fn s_jet(&self, r: f64) -> Jet3 {
        if r <= self.r_a {
            p_branch(r)
        } else if r >= self.r_b {
            Jet3 { f: r, d1: 1.0, d2: 0.0, d3: 0.0 }
        } else {
            let len = self.r_b - self.r_a;
            let tau = (r - self.r_a) / len;
            let (f, d1, d2, d3) = poly_eval(&self.coeffs, tau);
            Jet3 { f, d1: d1 / len, d2: d2 / (len * len), d3: d3 / (len * len * len) }
        }
    }

    /// s at the inner junction, s(r_a) = (1 − 1/r_a)^{1/2}.
    pub fn s_inner(&self) -> f64 {
        p_branch(self.r_a).f
    }

    /// r(s): closed forms on both outer branches, safeguarded Newton on the blend.
    pub fn s_inverse(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Domain { chart: "s", value: s, domain: "(0, inf)" });
        }
        let s_a = self.s_inner();
        if s <= s_a {
            return to_r(s);
        }
        if s >= self.r_b {
            return Ok(s);
        }
        let (mut lo, mut hi) = (self.r_a, self.r_b);
        let mut r = self.r_a + (s - s_a) / (self.r_b - s_a) * (self.r_b - self.r_a);
        for _ in 0..100 {
            let jet = self.s_jet(r);
            let f = jet.f - s;
            if f > 0.0 {
                hi = r;
            } else {
                lo = r;
            }
            let mut next = r - f / jet.d1;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - r).abs() <= 1e-15 * r {
                return Ok(next);
            }
            r = next;
        }
        Ok(r)
    }

    /// r(s) and its first three s-derivatives, by inverse-function rules.
    /// On the p-branch r = 1/(1 − s²) is differentiated directly, which stays
    /// accurate as s → 0.
    pub fn r_jet(&self, s: f64) -> Result<Jet3> {
        let r = self.s_inverse(s)?;
        if r <= self.r_a {
            let d1 = 2.0 * s * r * r;
            let d2 = 2.0 * r * r + 8.0 * s * s * r * r * r;
            let d3 = 4.0 * r * d1 + 16.0 * s * r * r * r + 24.0 * s * s * r * r * d1;
            return Ok(Jet3 { f: r, d1, d2, d3 });
        }
        let sj = self.s_jet(r);
        let r1 = 1.0 / sj.d1;
        let r2 = -sj.d2 * r1.powi(3);
        let r3 = -sj.d3 * r1.powi(4) + 3.0 * sj.d2 * sj.d2 * r1.powi(5);
        Ok(Jet3 { f: r, d1: r1, d2: r2, d3: r3 })
    }
}

/// s = (1 − 1/r)^{1/2} with exact r-derivatives.
fn p_branch(r: f64) -> Jet3 {
    let a = (r - 1.0) / r;
    let s = a.sqrt();
    let ar = 1.0 / (r * r);
    let arr = -2.0 / (r * r * r);
    let arrr = 6.0 / (r * r * r * r);
    let d1 = 0.5 * ar / s;
    let d2 = 0.5 * arr / s - 0.25 * ar * ar / (s * a);
    let d3 = 0.5 * arrr / s - 0.75 * ar * arr / (s * a) + 0.375 * ar.powi(3) / (s * a * a);
    Jet3 { f: s, d1, d2, d3 }
}

/// Coefficients of the Hermite polynomial on τ ∈ [0,1] matching
/// `left`/`right` = (value, first, second derivative).
fn hermite_coefficients(blend: Blend, left: [f64; 3], right: [f64; 3]) -> Vec<f64> {
    let [v0, d0, a0] = left;
    let [v1, d1, a1] = right;
    match blend {
        Blend::CubicHermite => {
            let c2 = 3.0 * (v1 - v0) - 2.0 * d0 - d1;
            let c3 = -2.0 * (v1 - v0) + d0 + d1;
            vec![v0, d0, c2, c3]
        }
        Blend::QuinticHermite => {
            let c2 = 0.5 * a0;
            // Remaining three coefficients from the conditions at τ = 1.
            let e0 = v1 - (v0 + d0 + c2);
            let e1 = d1 - (d0 + 2.0 * c2);
            let e2 = a1 - 2.0 * c2;
            let c3 = 10.0 * e0 - 4.0 * e1 + 0.5 * e2;
            let c4 = -15.0 * e0 + 7.0 * e1 - e2;
            let c5 = 6.0 * e0 - 3.0 * e1 + 0.5 * e2;
            vec![v0, d0, c2, c3, c4, c5]
        }
    }
}

/// Value and first three derivatives of a polynomial (Horner).
fn poly_eval(c: &[f64], x: f64) -> (f64, f64, f64, f64) {
    let (mut f, mut d1, mut d2, mut d3) = (0.0, 0.0, 0.0, 0.0);
    for &ck in c.iter().rev() {
        d3 = d3 * x + 3.0 * d2;
        d2 = d2 * x + 2.0 * d1;
        d1 = d1 * x + f;
        f = f * x + ck;
    }
    (f, d1, d2, d3)
}

/// Reject blends whose derivative is not strictly positive on [0,1]. The
/// derivative is a polynomial of degree ≤ 4; dense sampling plus the
/// endpoint values is a conservative check for such low degree.
fn check_monotone(coeffs: &[f64]) -> Result<()> {
    const SAMPLES: usize = 4096;
    let mut min = f64::INFINITY;
    let mut at = 0.0;
    for k in 0..=SAMPLES {
        let tau = k as f64 / SAMPLES as f64;
        let d = poly_eval(coeffs, tau).1;
        if d < min {
            min = d;
            at = tau;
        }
    }
    if min > 0.0 {
        Ok(())
    } else {
        Err(Error::Chart(format!("blend derivative {min:.3e} <= 0 at tau = {at:.4}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_of_four_thirds_is_one_half() {
        assert!((to_p(4.0 / 3.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((to_p(2.0).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-16);
    }

    #[test]
    fn r_grows_without_bound_as_p_approaches_one() {
        let mut prev = 0.0;
        for k in 1..12 {
            let p = 1.0 - 10f64.powi(-k);
            let r = to_r(p).unwrap();
            assert!(r > prev * 5.0);
            prev = r;
        }
    }

    #[test]
    fn domain_violations_are_errors() {
        assert!(to_p(1.0).is_err());
        assert!(to_p(0.5).is_err());
        assert!(to_p(f64::NAN).is_err());
        assert!(to_r(0.0).is_err());
        assert!(to_r(1.0).is_err());
        assert!(ChartPoint::s(-1.0).is_err());
    }

    #[test]
    fn s_chart_branches_are_exact() {
        for blend in [Blend::CubicHermite, Blend::QuinticHermite] {
            let chart = SChart::new(blend).unwrap();
            assert_eq!(chart.to_s(2.0).unwrap(), 0.5f64.sqrt());
            assert_eq!(chart.to_s(5.0).unwrap(), 5.0);
            assert_eq!(chart.to_s(3.0).unwrap(), 3.0);
            let back = chart.s_inverse(chart.to_s(2.5).unwrap()).unwrap();
            assert!((back - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn blends_match_branch_derivatives_at_junctions() {
        let quintic = SChart::new(Blend::QuinticHermite).unwrap();
        let cubic = SChart::new(Blend::CubicHermite).unwrap();
        let eps = 1e-9;
        for chart in [&quintic, &cubic] {
            let below = chart.s_jet(2.0);
            let above = chart.s_jet(2.0 + eps);
            assert!((below.d1 - above.d1).abs() < 1e-6);
            let at3 = chart.s_jet(3.0 - eps);
            assert!((at3.d1 - 1.0).abs() < 1e-6);
        }
        let below = quintic.s_jet(2.0);
        let above = quintic.s_jet(2.0 + eps);
        assert!((below.d2 - above.d2).abs() < 1e-6);
        assert!(quintic.s_jet(3.0 - eps).d2.abs() < 1e-6);
    }

    #[test]
    fn r_jet_matches_finite_differences() {
        let chart = SChart::new(Blend::QuinticHermite).unwrap();
        for &s in &[0.1, 0.5, 0.9, 1.7, 2.6, 4.0] {
            let j = chart.r_jet(s).unwrap();
            let h = 1e-4;
            let jp = chart.r_jet(s + h).unwrap();
            let jm = chart.r_jet(s - h).unwrap();
            let fd1 = (jp.f - jm.f) / (2.0 * h);
            let fd2 = (jp.d1 - jm.d1) / (2.0 * h);
            let fd3 = (jp.d2 - jm.d2) / (2.0 * h);
            assert!((fd1 - j.d1).abs() < 1e-6 * (1.0 + j.d1.abs()), "s={s}");
            assert!((fd2 - j.d2).abs() < 1e-5 * (1.0 + j.d2.abs()), "s={s}");
            assert!((fd3 - j.d3).abs() < 1e-4 * (1.0 + j.d3.abs()), "s={s}");
        }
    }

    #[test]
    fn invalid_junctions_and_blends_are_rejected() {
        assert!(SChart::with_junctions(Blend::CubicHermite, 3.0, 2.0).is_err());
        assert!(SChart::with_junctions(Blend::CubicHermite, 0.5, 2.0).is_err());
        let decreasing = hermite_coefficients(Blend::CubicHermite, [0.0, -1.0, 0.0], [1.0, 1.0, 0.0]);
        assert!(check_monotone(&decreasing).is_err());
    }

    #[test]
    fn chart_points_resolve_to_radius() {
        let r = ChartPoint::p(0.5).unwrap().radius().unwrap();
        assert!((r - 4.0 / 3.0).abs() < 1e-15);
        let r = ChartPoint::s(7.0).unwrap().radius().unwrap();
        assert_eq!(r, 7.0);
    }
}
