//! Rational points close to the curves `F(u) = √(k+u)` for `k ∈ {1, 2, 3}`,
//! and the derivative/determinant hypotheses under which the close-point
//! bound applies.
//!
//! A point `(m/n, r/q)` is `δ`-close when `|F(m/n) − r/q| ≤ δ`. The counter
//! enumerates coprime pairs exhaustively and, per denominator `q`, tests
//! only the handful of numerators `r` that can possibly qualify. Membership
//! is decided by [`is_close_to_curve`], which detects exact curve points in
//! integer arithmetic (`(kn+m)q² = r²n`) so that `δ = 0` counts precisely
//! the rational points on the curve.

use crate::{domain, gcd, CountReport, Result};
use rayon::prelude::*;
use serde::Serialize;

/// One of the three square-root curves, with the smoothness constants and
/// analysis depth of the close-point hypotheses.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CurveSpec {
    /// Offset: the curve is `F(u) = √(k + u)` on `[0, 1]`.
    pub k: u32,
    /// Analysis depth; the count is validated at `d = 1`, the bound formula
    /// is evaluated for any `d`.
    pub d: u32,
    pub lambda: f64,
    pub c: f64,
}

impl CurveSpec {
    /// Curve `√(k+u)` with the standard constants `d = 1`, `λ = 1`,
    /// `C = 100`.
    pub fn new(k: u32) -> Result<CurveSpec> {
        if !(1..=3).contains(&k) {
            return Err(domain("curve offset k must be 1, 2, or 3"));
        }
        Ok(CurveSpec {
            k,
            d: 1,
            lambda: 1.0,
            c: 100.0,
        })
    }

    pub fn with_constants(mut self, lambda: f64, c: f64) -> CurveSpec {
        self.lambda = lambda;
        self.c = c;
        self
    }

    pub fn f(&self, u: f64) -> f64 {
        (self.k as f64 + u).sqrt()
    }
}

/// Closed-form `r`-th derivative of `√(k+u)`:
/// `(½)(½−1)···(½−r+1)·(k+u)^{½−r}`; `r = 0` returns `F(u)` itself.
pub fn derivative(curve: &CurveSpec, r: u32, u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(domain("derivative: u must lie in [0, 1]"));
    }
    if r > 2 * curve.d + 2 {
        return Err(domain(format!(
            "derivative: order {r} exceeds 2d+2 = {}",
            2 * curve.d + 2
        )));
    }
    let mut coeff = 1.0f64;
    for i in 0..r {
        coeff *= 0.5 - i as f64;
    }
    Ok(coeff * (curve.k as f64 + u).powf(0.5 - r as f64))
}

fn factorial(n: u32) -> f64 {
    (1..=n as u64).product::<u64>() as f64
}

/// `D_{r,s}(F(u))`: the s×s determinant with entry `(i, j)` equal to
/// `F^{(r+i−j)}(u)/(r+i−j)!`, where negative orders contribute 0.
fn derivative_determinant(curve: &CurveSpec, r: u32, s: u32, u: f64) -> Result<f64> {
    let s = s as usize;
    let mut mat = vec![0.0f64; s * s];
    for i in 1..=s {
        for j in 1..=s {
            let order = r as i64 + i as i64 - j as i64;
            mat[(i - 1) * s + (j - 1)] = if order < 0 {
                0.0
            } else {
                derivative(curve, order as u32, u)? / factorial(order as u32)
            };
        }
    }
    Ok(det(&mut mat, s))
}

/// Determinant by Gaussian elimination with partial pivoting; `s` stays tiny
/// (at most `d+1`).
fn det(mat: &mut [f64], s: usize) -> f64 {
    let mut sign = 1.0f64;
    for col in 0..s {
        let pivot = (col..s)
            .max_by(|&a, &b| {
                mat[a * s + col]
                    .abs()
                    .partial_cmp(&mat[b * s + col].abs())
                    .unwrap()
            })
            .unwrap();
        if mat[pivot * s + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..s {
                mat.swap(col * s + j, pivot * s + j);
            }
            sign = -sign;
        }
        for row in col + 1..s {
            let factor = mat[row * s + col] / mat[col * s + col];
            for j in col..s {
                mat[row * s + j] -= factor * mat[col * s + j];
            }
        }
    }
    sign * (0..s).map(|i| mat[i * s + i]).product::<f64>()
}

/// Outcome of the hypothesis check, with the first violated condition when
/// it fails.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub ok: bool,
    pub grid_points: usize,
    pub first_violation: Option<String>,
}

/// Checks `|F^{(r)}| ≤ λC^{r+1}` for `r = 0..2d+2` and
/// `|D_{r,s}| ≥ (λ/C^{r+1})^s` for `(r, s) = (d, d)` and
/// `(r, s) = (d+1, 1..d+1)`, on a 1001-point uniform grid of `[0, 1]`
/// including both endpoints.
pub fn hypothesis_report(curve: &CurveSpec) -> HypothesisReport {
    const GRID: usize = 1000;
    let mut pairs = vec![(curve.d, curve.d)];
    for s in 1..=curve.d + 1 {
        pairs.push((curve.d + 1, s));
    }
    for i in 0..=GRID {
        let u = i as f64 / GRID as f64;
        for r in 0..=2 * curve.d + 2 {
            let cap = curve.lambda * curve.c.powi(r as i32 + 1);
            let val = derivative(curve, r, u).expect("grid point in domain");
            if val.abs() > cap {
                return HypothesisReport {
                    ok: false,
                    grid_points: GRID + 1,
                    first_violation: Some(format!(
                        "|F^({r})({u})| = {} exceeds lambda*C^{} = {cap}",
                        val.abs(),
                        r + 1
                    )),
                };
            }
        }
        for &(r, s) in &pairs {
            if s == 0 {
                continue;
            }
            let floor = (curve.lambda / curve.c.powi(r as i32 + 1)).powi(s as i32);
            let val = derivative_determinant(curve, r, s, u).expect("grid point in domain");
            if val.abs() < floor {
                return HypothesisReport {
                    ok: false,
                    grid_points: GRID + 1,
                    first_violation: Some(format!(
                        "|D_({r},{s})({u})| = {} below (lambda/C^{})^{s} = {floor}",
                        val.abs(),
                        r + 1
                    )),
                };
            }
        }
    }
    HypothesisReport {
        ok: true,
        grid_points: GRID + 1,
        first_violation: None,
    }
}

/// True iff every derivative and determinant hypothesis holds on the grid.
pub fn check_hypotheses(curve: &CurveSpec) -> bool {
    hypothesis_report(curve).ok
}

/// One close-point counting experiment.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ClosePointQuery {
    pub curve: CurveSpec,
    pub m_max: u64,
    pub q_max: u64,
    pub delta: f64,
}

impl ClosePointQuery {
    /// `T = λQ²`.
    pub fn t(&self) -> f64 {
        self.curve.lambda * (self.q_max * self.q_max) as f64
    }

    /// `Δ = δQ²`.
    pub fn delta_q2(&self) -> f64 {
        self.delta * (self.q_max * self.q_max) as f64
    }

    /// The bound's regime wants `Δ < ½` and `T ≥ 4`; out-of-regime queries
    /// are still counted, just flagged.
    pub fn in_regime(&self) -> bool {
        self.delta_q2() < 0.5 && self.t() >= 4.0
    }
}

/// Close-point bound at depth 1: `((MQ)^{2/3} + δ^{1/3}(MQ)^{4/3})·log MQ`.
pub fn close_points_bound(m_max: u64, q_max: u64, delta: f64) -> f64 {
    let mq = (m_max as f64) * (q_max as f64);
    (mq.powf(2.0 / 3.0) + delta.cbrt() * mq.powf(4.0 / 3.0)) * mq.ln()
}

/// The general-depth close-point bound
/// `(((1+Δ^{1/d}M²)M^{2d}T)^{1/(2d+1)} + Δ^{1/(2d+1)}M²)(MT)^ε +
/// (Δ^{d²+2d−1}T^{d(d−1)})^{1/(d(d+1)(2d−1))}M²`, evaluated with a fixed
/// `ε`; the count itself is only validated at `d = 1`.
pub fn general_close_points_bound(
    d: u32,
    lambda: f64,
    m_max: u64,
    q_max: u64,
    delta: f64,
    epsilon: f64,
) -> Result<f64> {
    if d == 0 {
        return Err(domain("general_close_points_bound: d must be >= 1"));
    }
    let df = d as f64;
    let m = m_max as f64;
    let t = lambda * (q_max * q_max) as f64;
    let big_delta = delta * (q_max * q_max) as f64;
    let first = ((1.0 + big_delta.powf(1.0 / df) * m * m) * m.powf(2.0 * df) * t)
        .powf(1.0 / (2.0 * df + 1.0));
    let second = big_delta.powf(1.0 / (2.0 * df + 1.0)) * m * m;
    let third = (big_delta.powf(df * df + 2.0 * df - 1.0) * t.powf(df * (df - 1.0)))
        .powf(1.0 / (df * (df + 1.0) * (2.0 * df - 1.0)))
        * m
        * m;
    Ok((first + second) * (m * t).powf(epsilon) + third)
}

/// Decides `|F(m/n) − r/q| ≤ δ`.
///
/// Exact curve points satisfy `(kn+m)·q² = r²·n`; that integer test fires
/// first, so `δ = 0` admits exactly the rational points on the curve. All
/// other candidates go through the floating-point distance.
pub fn is_close_to_curve(curve: &CurveSpec, m: u64, n: u64, r: u64, q: u64, delta: f64) -> bool {
    let lhs = ((curve.k as u64 * n + m) as u128) * (q as u128) * (q as u128);
    let rhs = (r as u128) * (r as u128) * (n as u128);
    if lhs == rhs {
        return true;
    }
    if delta == 0.0 {
        return false;
    }
    let f = curve.f(m as f64 / n as f64);
    (f - r as f64 / q as f64).abs() <= delta
}

/// Counts tuples `(m, n, r, q)` with `0 ≤ m ≤ n ≤ M`, `1 ≤ q ≤ Q`,
/// `gcd(m,n) = gcd(r,q) = 1`, `r ≥ 1`, and `|F(m/n) − r/q| ≤ δ`, paired
/// with [`close_points_bound`].
///
/// Only `r` in the window `[q(F−δ), q(F+δ)]` (padded by one on each side,
/// and always including `⌊qF⌋` and `⌈qF⌉`) can qualify; each candidate is
/// confirmed by [`is_close_to_curve`].
pub fn count_close_points(query: &ClosePointQuery) -> Result<CountReport> {
    if query.m_max == 0 || query.q_max == 0 {
        return Err(domain("count_close_points: M and Q must be >= 1"));
    }
    if !(query.delta >= 0.0) {
        return Err(domain("count_close_points: delta must be >= 0"));
    }
    if query.delta >= 1.0 {
        return Err(domain(
            "count_close_points: delta must be < 1 for the bound regime",
        ));
    }
    let curve = query.curve;
    let delta = query.delta;
    let exact: u64 = (1..=query.m_max)
        .into_par_iter()
        .map(|n| {
            let mut local = 0u64;
            for m in 0..=n {
                if gcd(m, n) != 1 {
                    continue;
                }
                let f = curve.f(m as f64 / n as f64);
                for q in 1..=query.q_max {
                    let qf = q as f64 * f;
                    let lo = ((q as f64 * (f - delta)).ceil() as i64 - 1)
                        .min(qf.floor() as i64)
                        .max(1) as u64;
                    let hi = ((q as f64 * (f + delta)).floor() as i64 + 1)
                        .max(qf.ceil() as i64)
                        .max(1) as u64;
                    for r in lo..=hi {
                        if gcd(r, q) == 1 && is_close_to_curve(&curve, m, n, r, q, delta) {
                            local += 1;
                        }
                    }
                }
            }
            local
        })
        .sum();
    Ok(CountReport::new(
        exact,
        close_points_bound(query.m_max, query.q_max, query.delta),
    ))
}

/// The `δ` yielded by the dyadic parameters, `δ = H/(K·L·P²·T'·v)`, and
/// whether the resulting `Δ = δ(2P)²` sits below ½.
///
/// The flag is computed in integer arithmetic as `T'·K·L·v > 8H`, which is
/// the same condition without rounding; the boundary case is excluded.
pub fn delta_threshold(h: u64, k: u64, l: u64, v: u64, t_prime: u64, p: u64) -> (f64, bool) {
    let delta =
        h as f64 / ((k as f64) * (l as f64) * (p as f64) * (p as f64) * (t_prime as f64) * (v as f64));
    let lhs = (t_prime as u128) * (k as u128) * (l as u128) * (v as u128);
    let rhs = 8u128 * h as u128;
    (delta, lhs > rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_closed_forms() {
        let c1 = CurveSpec::new(1).unwrap();
        assert_eq!(derivative(&c1, 0, 0.0).unwrap(), 1.0);
        assert_eq!(derivative(&c1, 1, 0.0).unwrap(), 0.5);
        let c3 = CurveSpec::new(3).unwrap();
        let d2 = derivative(&c3, 2, 1.0).unwrap();
        assert!((d2 - (-1.0 / 32.0)).abs() < 1e-15);
        assert!(derivative(&c1, 5, 0.0).is_err());
        assert!(derivative(&c1, 1, 1.5).is_err());
    }

    #[test]
    fn hypotheses_hold_for_all_three_curves() {
        for k in 1..=3 {
            let curve = CurveSpec::new(k).unwrap();
            assert!(check_hypotheses(&curve), "k = {k}");
        }
    }

    #[test]
    fn hypotheses_fail_with_tight_constant() {
        let curve = CurveSpec::new(3).unwrap().with_constants(1.0, 1.5);
        let report = hypothesis_report(&curve);
        assert!(!report.ok);
        assert!(report.first_violation.is_some());
    }

    #[test]
    fn close_points_degenerate_query() {
        let q = ClosePointQuery {
            curve: CurveSpec::new(1).unwrap(),
            m_max: 1,
            q_max: 1,
            delta: 0.0,
        };
        // Only (0/1, 1/1) lies on the curve; √2 is irrational.
        assert_eq!(count_close_points(&q).unwrap().exact, 1);
    }

    #[test]
    fn close_points_small_frozen() {
        let q = ClosePointQuery {
            curve: CurveSpec::new(1).unwrap(),
            m_max: 2,
            q_max: 2,
            delta: 0.1,
        };
        // (0/1, 1/1) exactly, and (1/1, 3/2) since |√2 − 3/2| ≈ 0.0858.
        assert_eq!(count_close_points(&q).unwrap().exact, 2);
    }

    #[test]
    fn close_points_refuses_wide_delta() {
        let q = ClosePointQuery {
            curve: CurveSpec::new(1).unwrap(),
            m_max: 4,
            q_max: 4,
            delta: 1.0,
        };
        assert!(count_close_points(&q).is_err());
    }

    #[test]
    fn close_points_monotone_in_delta() {
        let curve = CurveSpec::new(2).unwrap();
        let mut prev = 0u64;
        for delta in [0.0, 0.01, 0.05, 0.1, 0.3] {
            let q = ClosePointQuery {
                curve,
                m_max: 12,
                q_max: 9,
                delta,
            };
            let n = count_close_points(&q).unwrap().exact;
            assert!(n >= prev, "delta = {delta}");
            prev = n;
        }
    }

    #[test]
    fn delta_threshold_boundary_is_exact() {
        // T' = 8H/(KLv) exactly: Delta = 1/2, strict inequality fails.
        let (delta, ok) = delta_threshold(64, 2, 2, 1, 128, 4);
        assert!((delta - 64.0 / (4.0 * 16.0 * 128.0)).abs() < 1e-18);
        assert!(!ok);
        // T' twice the boundary: Delta = 1/4.
        let (delta, ok) = delta_threshold(64, 2, 2, 1, 256, 4);
        assert!(ok);
        assert!((delta * (2.0 * 4.0f64).powi(2) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn delta_threshold_spec_numbers() {
        let (delta, ok) = delta_threshold(64, 1, 1, 1, 1024, 16);
        assert!((delta - 64.0 / (256.0 * 1024.0)).abs() < 1e-18);
        let big_delta = delta * 1024.0;
        assert!((big_delta - 0.25).abs() < 1e-15);
        assert!(ok);
    }

    #[test]
    fn general_bound_reduces_sanely_at_depth_one() {
        let b = general_close_points_bound(1, 1.0, 16, 16, 1e-4, 0.05).unwrap();
        assert!(b.is_finite() && b > 0.0);
        assert!(general_close_points_bound(0, 1.0, 4, 4, 0.1, 0.05).is_err());
    }
}
