use std::fmt;

use num_rational::Ratio;

use super::MonodromyError;
use crate::fpgrp::{hyperbolicity_class, Geometry};
use crate::perm::{is_transitive_action, Permutation};

/// Genus and cone-point orders of a finite-index subgroup's quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub genus: u64,
    pub periods: Vec<u64>,
}

impl Signature {
    /// `2 − 2g − Σ (1 − 1/p)`.
    pub fn euler_characteristic(&self) -> Ratio<i128> {
        let mut chi = Ratio::from_integer(2 - 2 * self.genus as i128);
        for &p in &self.periods {
            chi -= Ratio::new(p as i128 - 1, p as i128);
        }
        chi
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let periods: Vec<String> = self.periods.iter().map(u64::to_string).collect();
        write!(f, "genus={} periods=[{}]", self.genus, periods.join(","))
    }
}

/// `−1 + 1/m + 1/n + 1/k`.
pub fn orbifold_euler_characteristic(m: u64, n: u64, k: u64) -> Ratio<i128> {
    Ratio::from_integer(-1)
        + Ratio::new(1, m as i128)
        + Ratio::new(1, n as i128)
        + Ratio::new(1, k as i128)
}

fn check_action(
    orders: (u64, u64, u64),
    action: &[Permutation],
    index: usize,
) -> Result<(), MonodromyError> {
    let consistency = |msg: String| Err(MonodromyError::Consistency(msg));
    if action.len() != 3 {
        return consistency(format!(
            "expected 3 generator actions, got {}",
            action.len()
        ));
    }
    if action.iter().any(|p| p.degree() != index) {
        return consistency(format!("action degree differs from index {index}"));
    }
    if !is_transitive_action(action) {
        return consistency("coset action is not transitive".into());
    }
    for (p, order) in action.iter().zip([orders.0, orders.1, orders.2]) {
        if let Some(l) = p
            .cycle_lengths()
            .into_iter()
            .find(|&l| order % l as u64 != 0)
        {
            return consistency(format!(
                "cycle length {l} does not divide generator order {order}"
            ));
        }
    }
    Ok(())
}

/// Signature of the subgroup of `Δ(m, n, k)` whose coset space carries
/// `action` (images of `γ0, γ1, γ∞` on `index` points). A cycle of length
/// `ℓ` shorter than the generator order `o` is a cone point of order
/// `o/ℓ`; the genus solves `2 − 2g = index·χ(Δ) + Σ (1 − 1/p)` exactly.
pub fn subgroup_signature(
    orders: (u64, u64, u64),
    action: &[Permutation],
    index: usize,
) -> Result<Signature, MonodromyError> {
    let (m, n, k) = orders;
    if hyperbolicity_class(m, n, k) != Geometry::Hyperbolic {
        return Err(MonodromyError::NotHyperbolic(m, n, k));
    }
    check_action(orders, action, index)?;
    let mut periods = Vec::new();
    for (p, order) in action.iter().zip([m, n, k]) {
        for l in p.cycle_lengths() {
            let l = l as u64;
            if l < order {
                periods.push(order / l);
            }
        }
    }
    let mut two_minus_2g =
        Ratio::from_integer(index as i128) * orbifold_euler_characteristic(m, n, k);
    for &p in &periods {
        two_minus_2g += Ratio::new(p as i128 - 1, p as i128);
    }
    if !two_minus_2g.is_integer() {
        return Err(MonodromyError::Consistency(format!(
            "non-integral 2 − 2g = {two_minus_2g}"
        )));
    }
    let twice = 2 - two_minus_2g.to_integer();
    if twice < 0 || twice % 2 != 0 {
        return Err(MonodromyError::Consistency(format!(
            "invalid genus from 2g = {twice}"
        )));
    }
    Ok(Signature {
        genus: (twice / 2) as u64,
        periods,
    })
}

/// Genus of the branched cover of the sphere with monodromy `action`, from
/// cycle counts alone: `2g − 2 = −2d + Σ_i (d − #cycles(σ_i))`.
pub fn riemann_hurwitz_genus(action: &[Permutation]) -> Option<u64> {
    let d = action.first()?.degree() as i128;
    let ramification: i128 = action.iter().map(|p| d - p.cycles().len() as i128).sum();
    let two_g = 2 - 2 * d + ramification;
    (two_g >= 0 && two_g % 2 == 0).then_some((two_g / 2) as u64)
}

/// Every cycle of each generator's action has exactly that generator's order.
pub fn torsion_free_check(action: &[Permutation], orders: (u64, u64, u64)) -> bool {
    action.len() == 3
        && action
            .iter()
            .zip([orders.0, orders.1, orders.2])
            .all(|(p, o)| p.cycle_lengths().into_iter().all(|l| l as u64 == o))
}
