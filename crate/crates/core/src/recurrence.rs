//! Monic three-term recurrences `x P_n = P_{n+1} + beta_n P_n + gamma_n P_{n-1}`,
//! evaluation of the polynomials they generate and change of basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{serde_scalar, Scalar};

/// Coefficients `beta_0..beta_N` and `gamma_1..gamma_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", try_from = "RawRecurrence<S>", into = "RawRecurrence<S>")]
pub struct RecurrenceCoefficients<S: Scalar> {
    beta: Vec<S>,
    gamma: Vec<S>,
    positive_definite: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "")]
struct RawRecurrence<S: Scalar> {
    #[serde(with = "serde_scalar::vec")]
    beta: Vec<S>,
    #[serde(with = "serde_scalar::vec")]
    gamma: Vec<S>,
    #[serde(default)]
    positive_definite: bool,
}

impl<S: Scalar> TryFrom<RawRecurrence<S>> for RecurrenceCoefficients<S> {
    type Error = Error;
    fn try_from(raw: RawRecurrence<S>) -> Result<Self> {
        RecurrenceCoefficients::new(raw.beta, raw.gamma)
    }
}

impl<S: Scalar> From<RecurrenceCoefficients<S>> for RawRecurrence<S> {
    fn from(rc: RecurrenceCoefficients<S>) -> Self {
        RawRecurrence {
            beta: rc.beta,
            gamma: rc.gamma,
            positive_definite: rc.positive_definite,
        }
    }
}

impl<S: Scalar> RecurrenceCoefficients<S> {
    /// `gamma[j]` is `gamma_{j+1}`; `gamma` must be one shorter than `beta`.
    pub fn new(beta: Vec<S>, gamma: Vec<S>) -> Result<Self> {
        if beta.is_empty() || gamma.len() + 1 != beta.len() {
            return Err(Error::InvalidParameter(format!(
                "need beta_0..beta_N and gamma_1..gamma_N, got {} and {}",
                beta.len(),
                gamma.len()
            )));
        }
        if let Some(j) = gamma.iter().position(|g| g.is_zero()) {
            return Err(Error::NotRegular { index: j + 1 });
        }
        let positive_definite = gamma.iter().all(|g| g.is_positive());
        Ok(RecurrenceCoefficients {
            beta,
            gamma,
            positive_definite,
        })
    }

    /// Largest index `N` for which both `beta_N` and `gamma_N` are defined.
    pub fn len(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn beta(&self, n: usize) -> &S {
        &self.beta[n]
    }

    /// `gamma_n` for `n >= 1`.
    pub fn gamma(&self, n: usize) -> &S {
        &self.gamma[n - 1]
    }

    pub fn betas(&self) -> &[S] {
        &self.beta
    }

    /// `gamma_1..gamma_N`.
    pub fn gammas(&self) -> &[S] {
        &self.gamma
    }

    pub fn is_positive_definite(&self) -> bool {
        self.positive_definite
    }

    pub fn is_symmetric(&self) -> bool {
        self.beta.iter().all(|b| b.is_zero())
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.len() {
            Err(Error::IndexOutOfRange {
                index: n,
                available: self.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn to_f64(&self) -> Result<RecurrenceCoefficients<f64>> {
        RecurrenceCoefficients::new(
            self.beta.iter().map(Scalar::as_f64).collect(),
            self.gamma.iter().map(Scalar::as_f64).collect(),
        )
    }

    /// Keeps indices `0..=n`.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        self.check(n)?;
        Ok(RecurrenceCoefficients {
            beta: self.beta[..=n].to_vec(),
            gamma: self.gamma[..n].to_vec(),
            positive_definite: self.gamma[..n].iter().all(|g| g.is_positive()),
        })
    }

    /// Coefficients of the associated polynomials of order `s`:
    /// `beta_{n+s}` and `gamma_{n+s}`.
    pub fn associated(&self, s: usize) -> Result<Self> {
        self.check(s)?;
        let beta = self.beta[s..].to_vec();
        let gamma = self.gamma[s..].to_vec();
        RecurrenceCoefficients::new(beta, gamma)
    }

    /// `P_n(x)`.
    pub fn eval_p(&self, n: usize, x: &S) -> Result<S> {
        Ok(self.eval_all(n, x)?.pop().unwrap())
    }

    /// `P_0(x)..P_n(x)`. `P_n` needs `beta_{n-1}` and `gamma_{n-1}`.
    pub fn eval_all(&self, n: usize, x: &S) -> Result<Vec<S>> {
        if n > 0 {
            self.check(n - 1)?;
        }
        let mut out = Vec::with_capacity(n + 1);
        out.push(S::one());
        for j in 0..n {
            let mut next = (x.clone() - self.beta[j].clone()) * out[j].clone();
            if j > 0 {
                next = next - self.gamma(j).clone() * out[j - 1].clone();
            }
            out.push(next);
        }
        Ok(out)
    }

    /// Values and first derivatives of `P_0..P_n` at `x`.
    pub fn eval_all_with_derivative(&self, n: usize, x: &S) -> Result<(Vec<S>, Vec<S>)> {
        let vals = self.eval_all(n, x)?;
        let mut ders = Vec::with_capacity(n + 1);
        ders.push(S::zero());
        for j in 0..n {
            let mut next = vals[j].clone() + (x.clone() - self.beta[j].clone()) * ders[j].clone();
            if j > 0 {
                next = next - self.gamma(j).clone() * ders[j - 1].clone();
            }
            ders.push(next);
        }
        Ok((vals, ders))
    }

    /// Monomial-basis coefficients of `P_0..P_n`.
    pub fn polys(&self, n: usize) -> Result<Vec<Poly<S>>> {
        if n > 0 {
            self.check(n - 1)?;
        }
        let mut out: Vec<Poly<S>> = Vec::with_capacity(n + 1);
        out.push(Poly::one());
        for j in 0..n {
            let shift = &Poly::linear_root(self.beta[j].clone()) * &out[j];
            let next = if j > 0 {
                &shift - &out[j - 1].scale(self.gamma(j))
            } else {
                shift
            };
            out.push(next);
        }
        Ok(out)
    }

    /// Writes a monomial-basis polynomial as `sum c_i P_i`.
    pub fn expand_in_p(&self, p: &Poly<S>) -> Result<PolyInPBasis<S>> {
        let Some(deg) = p.degree() else {
            return Ok(PolyInPBasis { coeffs: Vec::new() });
        };
        let basis = self.polys(deg)?;
        let mut rem = p.clone();
        let mut coeffs = vec![S::zero(); deg + 1];
        for i in (0..=deg).rev() {
            let c = rem.coeff(i);
            if !c.is_zero() {
                rem = &rem - &basis[i].scale(&c);
            }
            coeffs[i] = c;
        }
        Ok(PolyInPBasis::new(coeffs))
    }

    /// `||P_j||^2 = u_0 gamma_1 ... gamma_j` for `j = 0..=n`.
    pub fn norms(&self, n: usize, u0: &S) -> Result<Vec<S>> {
        self.check(n)?;
        let mut out = Vec::with_capacity(n + 1);
        out.push(u0.clone());
        for j in 1..=n {
            let prev = out[j - 1].clone();
            out.push(prev * self.gamma(j).clone());
        }
        Ok(out)
    }
}

/// `sum_i c_i P_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PolyInPBasis<S: Scalar> {
    #[serde(with = "serde_scalar::vec")]
    coeffs: Vec<S>,
}

impl<S: Scalar> PolyInPBasis<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyInPBasis { coeffs }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn to_monomial(&self, rc: &RecurrenceCoefficients<S>) -> Result<Poly<S>> {
        let Some(deg) = self.degree() else {
            return Ok(Poly::zero());
        };
        let basis = rc.polys(deg)?;
        Ok(basis
            .iter()
            .zip(&self.coeffs)
            .fold(Poly::zero(), |acc, (p, c)| &acc + &p.scale(c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn cheb_u(n: usize) -> RecurrenceCoefficients<Rational> {
        RecurrenceCoefficients::new(vec![q(0, 1); n + 1], vec![q(1, 4); n]).unwrap()
    }

    #[test]
    fn evaluates_known_values() {
        let rc = cheb_u(5);
        assert_eq!(rc.eval_p(0, &q(3, 7)).unwrap(), q(1, 1));
        assert_eq!(rc.eval_p(2, &q(0, 1)).unwrap(), q(-1, 4));
        let lag = RecurrenceCoefficients::new(vec![q(1, 1), q(3, 1)], vec![q(1, 1)]).unwrap();
        assert_eq!(lag.eval_p(1, &q(0, 1)).unwrap(), q(-1, 1));
    }

    #[test]
    fn rejects_vanishing_gamma() {
        let err = RecurrenceCoefficients::new(vec![q(0, 1); 3], vec![q(1, 1), q(0, 1)]);
        assert_eq!(err, Err(Error::NotRegular { index: 2 }));
    }

    #[test]
    fn expansion_examples() {
        let rc = cheb_u(4);
        let e = rc
            .expand_in_p(&Poly::new(vec![q(0, 1), q(0, 1), q(1, 1)]))
            .unwrap();
        assert_eq!(e.coeffs(), &[q(1, 4), q(0, 1), q(1, 1)]);
        let x = rc.expand_in_p(&Poly::x()).unwrap();
        assert_eq!(x.coeffs(), &[q(0, 1), q(1, 1)]);
    }

    #[test]
    fn derivative_matches_polynomial_derivative() {
        let rc = RecurrenceCoefficients::new(
            vec![q(1, 2), q(-1, 3), q(2, 1), q(0, 1), q(1, 1)],
            vec![q(1, 1), q(2, 3), q(-5, 2), q(3, 1)],
        )
        .unwrap();
        let x = q(7, 5);
        let (vals, ders) = rc.eval_all_with_derivative(5, &x).unwrap();
        let polys = rc.polys(5).unwrap();
        for j in 0..=5 {
            assert_eq!(vals[j], polys[j].eval(&x));
            assert_eq!(ders[j], polys[j].derivative().eval(&x));
        }
    }

    #[test]
    fn associated_shift() {
        let rc = RecurrenceCoefficients::new(
            vec![q(1, 1), q(3, 1), q(5, 1), q(7, 1)],
            vec![q(1, 1), q(4, 1), q(9, 1)],
        )
        .unwrap();
        let a = rc.associated(2).unwrap();
        assert_eq!(a.betas(), &[q(5, 1), q(7, 1)]);
        assert_eq!(a.gammas(), &[q(9, 1)]);
        assert_eq!(rc.associated(0).unwrap(), rc);
    }
}
