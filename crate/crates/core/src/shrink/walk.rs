//! Radial law of an `M`-step random walk with step scale `epsilon` in the
//! `d`-dimensional vector space, in the Gaussian limit.

use statrs::function::gamma::{gamma, gamma_lr};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkModel {
    pub d: usize,
    pub m: usize,
    pub eps: f64,
}

impl WalkModel {
    pub fn new(d: usize, m: usize, eps: f64) -> Result<WalkModel> {
        if d == 0 || m == 0 || !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Domain(format!(
                "invalid walk model: d = {d}, M = {m}, eps = {eps}"
            )));
        }
        Ok(WalkModel { d, m, eps })
    }

    /// `d / (2 M eps^2)`, the inverse variance scale of the Gaussian.
    fn rate(&self) -> f64 {
        self.d as f64 / (2.0 * self.m as f64 * self.eps * self.eps)
    }

    fn half_d(&self) -> f64 {
        self.d as f64 / 2.0
    }

    /// Mode `eps sqrt(M (d - 1) / d)` of the radial density.
    pub fn mode(&self) -> f64 {
        self.eps * (self.m as f64 * (self.d as f64 - 1.0) / self.d as f64).sqrt()
    }
}

/// `2 a^{d/2} r^{d-1} e^{-a r^2} / Gamma(d/2)` with `a = d / (2 M eps^2)`.
pub fn walk_pdf(r: f64, model: &WalkModel) -> Result<f64> {
    check_r(r)?;
    let a = model.rate();
    let h = model.half_d();
    if r.is_infinite() {
        return Ok(0.0);
    }
    Ok(2.0 * a.powf(h) * r.powi(model.d as i32 - 1) * (-a * r * r).exp() / gamma(h))
}

/// `P(|r| <= r)`: the regularized lower incomplete gamma `P(d/2, a r^2)`.
pub fn walk_cdf(r: f64, model: &WalkModel) -> Result<f64> {
    check_r(r)?;
    if r.is_infinite() {
        return Ok(1.0);
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    Ok(gamma_lr(model.half_d(), model.rate() * r * r))
}

/// Small-radius estimates of `P(|r| < eps^2)` for step scale `eps`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkApprox {
    /// `2 (d / 2M)^{d/2} eps^d / Gamma(d/2)`, the commonly quoted form.
    pub printed: f64,
    /// `(2 / d) (d / 2M)^{d/2} eps^d / Gamma(d/2)`, the integral of the
    /// density with the exponential set to one.
    pub exact_small_r: f64,
}

/// Evaluates both small-radius forms at `eps`; only `d` and `M` are taken
/// from the model.
pub fn walk_cdf_approx(eps: f64, model: &WalkModel) -> Result<WalkApprox> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    let d = model.d as f64;
    let h = model.half_d();
    let printed = 2.0 * (d / (2.0 * model.m as f64)).powf(h) * eps.powi(model.d as i32) / gamma(h);
    Ok(WalkApprox {
        printed,
        exact_small_r: printed / d,
    })
}

/// `K^M * P(|r| < eps^2)`, the expected number of tuple products landing in
/// the next, smaller ball.
pub fn expected_survivors(k: u64, model: &WalkModel) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("base count must be at least 1".into()));
    }
    Ok((k as f64).powi(model.m as i32) * walk_cdf(model.eps * model.eps, model)?)
}

fn check_r(r: f64) -> Result<()> {
    if !(r >= 0.0) {
        return Err(Error::Domain(format!(
            "radius must be nonnegative, got {r}"
        )));
    }
    Ok(())
}
