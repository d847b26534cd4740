//! Nodes and Christoffel numbers from a positive-definite truncation:
//! implicit-shift QL on the symmetrized tridiagonal, tracking only the
//! first components of the eigenvectors.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::JacobiTruncation;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 60;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub size: usize,
    /// Strictly increasing.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `<v, 1>`, the sum of the weights.
    pub mass: f64,
    pub exactness_degree: usize,
}

impl QuadratureRule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(*x))
            .sum()
    }

    /// Aligned two-column table for terminal output.
    pub fn to_table(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for QuadratureRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>4}  {:>24}  {:>24}", "j", "node", "weight")?;
        for (j, (x, w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            writeln!(f, "{:>4}  {:>24.16e}  {:>24.16e}", j + 1, x, w)?;
        }
        write!(
            f,
            "size {}, mass {:.16e}, exact through degree {}",
            self.size, self.mass, self.exactness_degree
        )
    }
}

/// Golub-Welsch: the nodes are the eigenvalues of `J` and the weights are
/// `v0` times the squared first components of its normalized eigenvectors.
pub fn eigen_nodes_weights<S: Scalar>(j: &JacobiTruncation<S>, v0: &S) -> Result<QuadratureRule> {
    if let Some(i) = j.sub().iter().position(|g| !g.is_positive()) {
        return Err(Error::NotPositiveDefinite { index: i + 1 });
    }
    if !v0.is_positive() {
        return Err(Error::NotPositiveDefinite { index: 0 });
    }
    let m = j.size();
    let mut d: Vec<f64> = j.diag().iter().map(Scalar::as_f64).collect();
    // D J D^{-1} with D_jj = (gamma_1 ... gamma_j)^{-1/2}
    let mut e: Vec<f64> = j.sub().iter().map(|g| g.as_f64().sqrt()).collect();
    e.push(0.0);
    let mut z = vec![0.0; m];
    z[0] = 1.0;
    imtql(&mut d, &mut e, &mut z)?;
    let mass = v0.as_f64();
    let mut pairs: Vec<(f64, f64)> = d
        .into_iter()
        .zip(z.into_iter().map(|c| mass * c * c))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (nodes, weights): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
    Ok(QuadratureRule {
        size: m,
        nodes,
        weights,
        mass,
        exactness_degree: 2 * m - 1,
    })
}

/// Diagonalizes the symmetric tridiagonal `(d, e)` in place (`e[i]` couples
/// rows `i` and `i+1`), applying the same rotations to `z`.
fn imtql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                if e[m].abs() <= f64::EPSILON * (d[m].abs() + d[m + 1].abs()) {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if sweeps == MAX_SWEEPS {
                return Err(Error::NoConvergence);
            }
            sweeps += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
