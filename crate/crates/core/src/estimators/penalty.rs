//! Single-coordinate penalty rules.
//!
//! Each update minimizes the one-dimensional problem
//!
//! ```text
//! (v/2) b^2 - z b + penalty(|b|)
//! ```
//!
//! where `v = (1/m)||x_j||^2` and `z = (1/m)<x_j, r> + v b_old` is the
//! partial-residual correlation. On exactly standardized columns `v = 1` and
//! the rules reduce to the textbook closed forms.

/// Soft-thresholding operator `S(z, t) = sign(z) max(|z| - t, 0)`.
#[inline]
pub fn soft_threshold(z: f64, t: f64) -> f64 {
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

/// Penalty families accepted by the linear coordinate-descent solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Penalty {
    L1,
    Mcp { gamma: f64 },
    Scad { gamma: f64 },
}

impl Penalty {
    /// Penalty value at `|b|` for regularization level `lambda`.
    pub fn value(self, b: f64, lambda: f64) -> f64 {
        let a = b.abs();
        match self {
            Penalty::L1 => lambda * a,
            Penalty::Mcp { gamma } => {
                if a <= gamma * lambda {
                    lambda * a - a * a / (2.0 * gamma)
                } else {
                    gamma * lambda * lambda / 2.0
                }
            }
            Penalty::Scad { gamma } => {
                if a <= lambda {
                    lambda * a
                } else if a <= gamma * lambda {
                    (2.0 * gamma * lambda * a - a * a - lambda * lambda) / (2.0 * (gamma - 1.0))
                } else {
                    lambda * lambda * (gamma + 1.0) / 2.0
                }
            }
        }
    }

    /// Coordinate minimizer of `(v/2) b^2 - z b + penalty(|b|)`.
    pub fn update(self, z: f64, v: f64, lambda: f64) -> f64 {
        match self {
            Penalty::L1 => soft_threshold(z, lambda) / v,
            Penalty::Mcp { gamma } => mcp_update(z, v, lambda, gamma),
            Penalty::Scad { gamma } => scad_update(z, v, lambda, gamma),
        }
    }
}

fn coordinate_objective(b: f64, z: f64, v: f64, lambda: f64, penalty: Penalty) -> f64 {
    0.5 * v * b * b - z * b + penalty.value(b, lambda)
}

/// Keep the candidate with the lowest objective, preferring the sparser one
/// on ties so zeros stay exact.
fn best_of(candidates: &[f64], z: f64, v: f64, lambda: f64, penalty: Penalty) -> f64 {
    let mut best = 0.0;
    let mut best_obj: f64 = 0.0;
    for &b in candidates {
        let obj = coordinate_objective(b, z, v, lambda, penalty);
        if obj < best_obj - 1e-15 * (1.0 + best_obj.abs()) {
            best = b;
            best_obj = obj;
        }
    }
    best
}

/// MCP coordinate rule. For `v = 1` this is `S(z, λ)/(1 - 1/γ)` when
/// `|z| <= γλ` and `z` otherwise.
pub fn mcp_update(z: f64, v: f64, lambda: f64, gamma: f64) -> f64 {
    if z.abs() <= lambda {
        return 0.0;
    }
    let s = z.signum();
    let knot = gamma * lambda;
    let mut cands = [0.0; 2];
    let mut k = 0;
    let inner_curv = v - 1.0 / gamma;
    if inner_curv > 0.0 {
        let b = soft_threshold(z, lambda) / inner_curv;
        if b.abs() <= knot {
            cands[k] = b;
            k += 1;
        }
    } else {
        cands[k] = s * knot;
        k += 1;
    }
    let b = z / v;
    if b.abs() > knot {
        cands[k] = b;
        k += 1;
    }
    best_of(&cands[..k], z, v, lambda, Penalty::Mcp { gamma })
}

/// SCAD coordinate rule. For `v = 1`: soft-threshold for `|z| <= 2λ`,
/// `(γ-1) S(z, γλ/(γ-1)) / (γ-2)` for `2λ < |z| <= γλ`, and `z` beyond.
pub fn scad_update(z: f64, v: f64, lambda: f64, gamma: f64) -> f64 {
    if z.abs() <= lambda {
        return 0.0;
    }
    let s = z.signum();
    let knot = gamma * lambda;
    let mut cands = [0.0; 3];
    let mut k = 0;

    let b = soft_threshold(z, lambda) / v;
    if b.abs() <= lambda {
        cands[k] = b;
        k += 1;
    }
    let mid_curv = v - 1.0 / (gamma - 1.0);
    if mid_curv > 0.0 {
        let b = soft_threshold(z, knot / (gamma - 1.0)) / mid_curv;
        if b.abs() > lambda && b.abs() <= knot {
            cands[k] = b;
            k += 1;
        }
    } else {
        cands[k] = s * knot;
        k += 1;
    }
    let b = z / v;
    if b.abs() > knot {
        cands[k] = b;
        k += 1;
    }
    best_of(&cands[..k], z, v, lambda, Penalty::Scad { gamma })
}
