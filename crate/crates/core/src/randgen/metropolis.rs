use rand::Rng;

use crate::error::{Error, Result};

/// Metropolis-Hastings acceptance probability
/// `min{ f(y) q(x|y) / (f(x) q(y|x)), 1 }`.
///
/// `q_xy` is q(x|y), the density of proposing x from y; `q_yx` is q(y|x).
pub fn mh_acceptance(f_y: f64, f_x: f64, q_xy: f64, q_yx: f64) -> Result<f64> {
    for (name, v) in [
        ("f(y)", f_y),
        ("f(x)", f_x),
        ("q(x|y)", q_xy),
        ("q(y|x)", q_yx),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::invalid(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    let ratio = (f_y * q_xy) / (f_x * q_yx);
    Ok(if ratio >= 1.0 { 1.0 } else { ratio })
}

/// Proposal distribution q(y|x).
pub trait Proposal<S> {
    fn propose<R: Rng + ?Sized>(&mut self, x: &S, rng: &mut R) -> S;

    /// Density q(to | from).
    fn density(&self, to: &S, from: &S) -> f64;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition<S> {
    pub state: S,
    pub accepted: bool,
    pub acceptance: f64,
}

/// One transition of the classical kernel: propose y ~ q(·|x), draw
/// U ~ Uniform(0, 1], move to y iff U <= ρ(x, y).
///
/// A proposal with zero target density is never accepted.
pub fn mh_step<S, F, P, R>(x: &S, target: F, proposal: &mut P, rng: &mut R) -> Result<Transition<S>>
where
    S: Clone,
    F: Fn(&S) -> f64,
    P: Proposal<S>,
    R: Rng + ?Sized,
{
    let f_x = target(x);
    if !(f_x > 0.0 && f_x.is_finite()) {
        return Err(Error::invalid(format!(
            "target density at current state is {f_x}"
        )));
    }
    let y = proposal.propose(x, rng);
    let f_y = target(&y);
    if !(f_y >= 0.0 && f_y.is_finite()) {
        return Err(Error::invalid(format!(
            "target density at proposal is {f_y}"
        )));
    }
    let rho = if f_y == 0.0 {
        0.0
    } else {
        mh_acceptance(f_y, f_x, proposal.density(x, &y), proposal.density(&y, x))?
    };
    // (0, 1] so that rho = 1 always moves and rho = 0 never does
    let u = 1.0 - rng.random::<f64>();
    let accepted = u <= rho;
    Ok(Transition {
        state: if accepted { y } else { x.clone() },
        accepted,
        acceptance: rho,
    })
}
