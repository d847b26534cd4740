//! Linear functionals given by their moments, classical families, and the
//! brute-force orthogonalization used to cross-check everything else.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::poly::Poly;
use crate::recurrence::RecurrenceCoefficients;
use crate::scalar::{serde_scalar, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct MomentFunctional<S: Scalar> {
    #[serde(with = "serde_scalar::vec")]
    moments: Vec<S>,
    /// `u_0` before any normalization was applied.
    #[serde(with = "serde_scalar")]
    original_u0: S,
    normalized: bool,
}

impl<S: Scalar> MomentFunctional<S> {
    pub fn new(moments: Vec<S>) -> Result<Self> {
        let Some(u0) = moments.first().cloned() else {
            return Err(Error::InvalidParameter("empty moment sequence".into()));
        };
        let normalized = u0 == S::one();
        Ok(MomentFunctional {
            moments,
            original_u0: u0,
            normalized,
        })
    }

    /// Rescales so that `u_0 = 1`, keeping the original `u_0` on record.
    pub fn normalize(&self) -> Result<Self> {
        let u0 = self.moments[0].clone();
        if u0.is_zero() {
            return Err(Error::NotRegular { index: 0 });
        }
        Ok(MomentFunctional {
            moments: self
                .moments
                .iter()
                .map(|m| m.clone() / u0.clone())
                .collect(),
            original_u0: self.original_u0.clone(),
            normalized: true,
        })
    }

    pub fn moments(&self) -> &[S] {
        &self.moments
    }

    pub fn moment(&self, n: usize) -> Result<&S> {
        self.moments.get(n).ok_or(Error::IndexOutOfRange {
            index: n,
            available: self.moments.len().saturating_sub(1),
        })
    }

    /// Number of stored moments.
    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn original_u0(&self) -> &S {
        &self.original_u0
    }

    /// `<u, p>`.
    pub fn apply(&self, p: &Poly<S>) -> Result<S> {
        let Some(deg) = p.degree() else {
            return Ok(S::zero());
        };
        if deg >= self.moments.len() {
            return Err(Error::IndexOutOfRange {
                index: deg,
                available: self.moments.len() - 1,
            });
        }
        Ok(p.coeffs()
            .iter()
            .zip(&self.moments)
            .fold(S::zero(), |acc, (c, m)| acc + c.clone() * m.clone()))
    }

    /// `det(u_{i+j})_{0 <= i,j < n}`.
    pub fn hankel_determinant(&self, n: usize) -> Result<S> {
        if n == 0 {
            return Ok(S::one());
        }
        self.moment(2 * n - 2)?;
        Ok(DenseMatrix::from_fn(n, n, |i, j| self.moments[i + j].clone()).determinant())
    }

    /// Checks the leading Hankel determinants of order `1..=n`; returns the
    /// first order whose determinant vanishes.
    pub fn first_singular_hankel(&self, n: usize) -> Result<Option<usize>> {
        for m in 1..=n {
            if self.hankel_determinant(m)?.is_zeroish() {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    pub fn is_positive_definite_through(&self, n: usize) -> Result<bool> {
        for m in 1..=n {
            let d = self.hankel_determinant(m)?;
            if d.is_zeroish() || d.is_negative() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec<S: Scalar> {
    ChebyshevU,
    /// `beta_0 = 1/2`, otherwise as [`FamilySpec::ChebyshevU`].
    ChebyshevV,
    /// `beta_0 = -1/2`, otherwise as [`FamilySpec::ChebyshevU`].
    ChebyshevW,
    Laguerre {
        alpha: S,
    },
    /// `beta_n = 0`, `gamma_{2n} = a`, `gamma_{2n+1} = b`.
    TwoPeriodic {
        a: S,
        b: S,
    },
    Custom {
        beta: Vec<S>,
        gamma: Vec<S>,
    },
}

impl<S: Scalar> FamilySpec<S> {
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::Laguerre { alpha } if *alpha <= -S::one() => Err(Error::InvalidParameter(
                format!("Laguerre needs alpha > -1, got {alpha}"),
            )),
            FamilySpec::TwoPeriodic { a, b } if !a.is_positive() || !b.is_positive() => {
                Err(Error::InvalidParameter(format!(
                    "two-periodic family needs a, b > 0, got a = {a}, b = {b}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::ChebyshevU => "chebyshev-u",
            FamilySpec::ChebyshevV => "chebyshev-v",
            FamilySpec::ChebyshevW => "chebyshev-w",
            FamilySpec::Laguerre { .. } => "laguerre",
            FamilySpec::TwoPeriodic { .. } => "two-periodic",
            FamilySpec::Custom { .. } => "custom",
        }
    }
}

/// `beta_0..beta_N`, `gamma_1..gamma_N` of the family.
pub fn family_recurrence<S: Scalar>(
    spec: &FamilySpec<S>,
    n_max: usize,
) -> Result<RecurrenceCoefficients<S>> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    spec.validate()?;
    let quarter = S::from_ratio(1, 4);
    let half = S::from_ratio(1, 2);
    let (beta, gamma): (Vec<S>, Vec<S>) = match spec {
        FamilySpec::ChebyshevU | FamilySpec::ChebyshevV | FamilySpec::ChebyshevW => {
            let mut beta = vec![S::zero(); n_max + 1];
            match spec {
                FamilySpec::ChebyshevV => beta[0] = half,
                FamilySpec::ChebyshevW => beta[0] = -half,
                _ => {}
            }
            (beta, vec![quarter; n_max])
        }
        FamilySpec::Laguerre { alpha } => {
            let beta = (0..=n_max)
                .map(|n| S::from_int(2 * n as i64 + 1) + alpha.clone())
                .collect();
            let gamma = (1..=n_max)
                .map(|n| S::from_int(n as i64) * (S::from_int(n as i64) + alpha.clone()))
                .collect();
            (beta, gamma)
        }
        FamilySpec::TwoPeriodic { a, b } => {
            let gamma = (1..=n_max)
                .map(|n| if n % 2 == 0 { a.clone() } else { b.clone() })
                .collect();
            (vec![S::zero(); n_max + 1], gamma)
        }
        FamilySpec::Custom { beta, gamma } => {
            if beta.len() < n_max + 1 || gamma.len() < n_max {
                return Err(Error::InvalidParameter(format!(
                    "custom table too short for n_max = {n_max}"
                )));
            }
            (beta[..=n_max].to_vec(), gamma[..n_max].to_vec())
        }
    };
    RecurrenceCoefficients::new(beta, gamma)
}

/// `u_0..u_{n_max}` with `u_0 = 1` and `u_n = (J^n)_{0,0}`.
pub fn moments_from_recurrence<S: Scalar>(
    rc: &RecurrenceCoefficients<S>,
    n_max: usize,
) -> Result<MomentFunctional<S>> {
    // paths of length n from 0 back to 0 never climb above index n/2
    let size = n_max / 2 + 1;
    if size - 1 > rc.len() {
        return Err(Error::IndexOutOfRange {
            index: size - 1,
            available: rc.len(),
        });
    }
    let mut w = vec![S::zero(); size];
    w[0] = S::one();
    let mut moments = Vec::with_capacity(n_max + 1);
    moments.push(S::one());
    for _ in 0..n_max {
        w = row_times_jacobi(rc, &w);
        moments.push(w[0].clone());
    }
    MomentFunctional::new(moments)
}

/// `w^T J` on the leading `w.len()` block of the Jacobi matrix (unit
/// super-diagonal, `gamma` below the diagonal).
pub(crate) fn row_times_jacobi<S: Scalar>(rc: &RecurrenceCoefficients<S>, w: &[S]) -> Vec<S> {
    let m = w.len();
    (0..m)
        .map(|c| {
            let mut s = w[c].clone() * rc.beta(c).clone();
            if c > 0 {
                s = s + w[c - 1].clone();
            }
            if c + 1 < m {
                s = s + w[c + 1].clone() * rc.gamma(c + 1).clone();
            }
            s
        })
        .collect()
}

/// Result of [`orthogonalize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Orthogonalized<S: Scalar> {
    /// Monic `P_0..P_{n_max}` in the monomial basis.
    pub polys: Vec<Poly<S>>,
    /// `beta_0..beta_{n_max-1}`, `gamma_1..gamma_{n_max-1}`.
    pub rc: RecurrenceCoefficients<S>,
    /// `<u, P_j^2>` for `j = 0..n_max-1`.
    pub norms: Vec<S>,
}

/// Chebyshev algorithm on the moments. Needs `u_0..u_{2 n_max - 1}`.
///
/// `sigma_{j,l} = <u, P_j x^l>` is built row by row; a norm `sigma_{j,j}` is
/// zero when it is negligible against the magnitudes summed into it.
pub fn orthogonalize<S: Scalar>(
    mf: &MomentFunctional<S>,
    n_max: usize,
) -> Result<Orthogonalized<S>> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    mf.moment(2 * n_max - 1)?;
    let width = 2 * n_max;
    let mut prev: Vec<S> = vec![S::zero(); width];
    let mut prev_mag: Vec<S> = vec![S::zero(); width];
    let mut cur: Vec<S> = mf.moments()[..width].to_vec();
    let mut cur_mag: Vec<S> = cur.iter().map(|m| m.abs()).collect();
    let mut norms: Vec<S> = Vec::with_capacity(n_max);
    let mut beta: Vec<S> = Vec::with_capacity(n_max);
    let mut gamma: Vec<S> = Vec::with_capacity(n_max);
    for j in 0..n_max {
        let norm = cur[j].clone();
        if norm.is_negligible(&cur_mag[j]) {
            return Err(Error::NotRegular { index: j });
        }
        let b = if j == 0 {
            cur[1].clone() / norm.clone()
        } else {
            cur[j + 1].clone() / norm.clone() - prev[j].clone() / norms[j - 1].clone()
        };
        let g = if j == 0 {
            S::zero()
        } else {
            norm.clone() / norms[j - 1].clone()
        };
        if j > 0 {
            gamma.push(g.clone());
        }
        beta.push(b.clone());
        norms.push(norm);
        if j + 1 == n_max {
            break;
        }
        let mut next = vec![S::zero(); width];
        let mut next_mag = vec![S::zero(); width];
        for l in j + 1..width - j - 1 {
            next[l] = cur[l + 1].clone() - b.clone() * cur[l].clone() - g.clone() * prev[l].clone();
            next_mag[l] = cur_mag[l + 1].clone()
                + b.abs() * cur_mag[l].clone()
                + g.abs() * prev_mag[l].clone();
        }
        prev = std::mem::replace(&mut cur, next);
        prev_mag = std::mem::replace(&mut cur_mag, next_mag);
    }
    let rc = RecurrenceCoefficients::new(beta, gamma)?;
    Ok(Orthogonalized {
        polys: rc.polys(n_max)?,
        rc,
        norms,
    })
}
