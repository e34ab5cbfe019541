//! Conic parameterization through a known point, and completing the square on a quartic.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rat;

/// `a4*t^4 + a3*t^3 + a2*t^2 + a1*t + a0` with `a4 != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quartic {
    pub a4: Rat,
    pub a3: Rat,
    pub a2: Rat,
    pub a1: Rat,
    pub a0: Rat,
}

/// `q2*t^2 + q1*t + q0` with `q2 != 0`, stored expanded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quadratic {
    pub q2: Rat,
    pub q1: Rat,
    pub q0: Rat,
}

/// The matched square `(alpha*g^2 + beta*g + gamma)^2` and the root `g` of the linear remainder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Descent {
    pub alpha: Rat,
    pub beta: Rat,
    pub gamma: Rat,
    /// Coefficients `(c1, c0)` of `Q(g) - (alpha*g^2 + beta*g + gamma)^2 = c1*g + c0`.
    pub residual: (Rat, Rat),
    pub g: Rat,
}

impl Quartic {
    pub fn new(a4: Rat, a3: Rat, a2: Rat, a1: Rat, a0: Rat) -> Result<Quartic> {
        if a4.is_zero() {
            return Err(Error::Parameter("quartic leading coefficient is zero".into()));
        }
        Ok(Quartic { a4, a3, a2, a1, a0 })
    }

    pub fn from_ints(c: [i64; 5]) -> Result<Quartic> {
        let [a4, a3, a2, a1, a0] = c.map(Rat::int);
        Quartic::new(a4, a3, a2, a1, a0)
    }

    /// Coefficients in degree-descending order.
    pub fn coeffs(&self) -> [&Rat; 5] {
        [&self.a4, &self.a3, &self.a2, &self.a1, &self.a0]
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.coeffs()
            .into_iter()
            .skip(1)
            .fold(self.a4.clone(), |acc, c| acc * t + c)
    }

    /// Completes the square against the leading term and solves the linear remainder.
    pub fn complete_square_descend(&self) -> Result<Descent> {
        let alpha = self
            .a4
            .sqrt_exact()
            .map_err(|_| Error::NonSquareLead(self.a4.clone()))?;
        let two_alpha = Rat::int(2) * &alpha;
        let beta = &self.a3 / &two_alpha;
        let gamma = (&self.a2 - beta.square()) / &two_alpha;
        let c1 = &self.a1 - Rat::int(2) * &beta * &gamma;
        let c0 = &self.a0 - gamma.square();
        if c1.is_zero() {
            return Err(Error::DegenerateDescent);
        }
        let g = -&c0 / &c1;
        Ok(Descent {
            alpha,
            beta,
            gamma,
            residual: (c1, c0),
            g,
        })
    }
}

impl Descent {
    /// `alpha*g^2 + beta*g + gamma` at the descended `g`, whose square is `Q(g)`.
    pub fn root(&self) -> Rat {
        (&self.alpha * &self.g + &self.beta) * &self.g + &self.gamma
    }
}

impl Quadratic {
    pub fn new(q2: Rat, q1: Rat, q0: Rat) -> Result<Quadratic> {
        if q2.is_zero() {
            return Err(Error::Parameter("quadratic leading coefficient is zero".into()));
        }
        Ok(Quadratic { q2, q1, q0 })
    }

    pub fn from_ints(c: [i64; 3]) -> Result<Quadratic> {
        let [q2, q1, q0] = c.map(Rat::int);
        Quadratic::new(q2, q1, q0)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        (&self.q2 * t + &self.q1) * t + &self.q0
    }

    /// Second intersection of the line `e = e0 + g*(f - f0)` with the conic `e^2 = Q(f)`.
    pub fn conic_param(&self, f0: &Rat, e0: &Rat, g: &Rat) -> Result<Rat> {
        if &e0.square() != &self.eval(f0) {
            return Err(Error::BadAnchor {
                f0: f0.clone(),
                e0: e0.clone(),
            });
        }
        let g2 = g.square();
        if g2 == self.q2 {
            return Err(Error::ParallelSlope(g2));
        }
        let num = &g2 * f0 + &self.q2 * f0 + &self.q1 - Rat::int(2) * e0 * g;
        Ok(num / (g2 - &self.q2))
    }

    /// The conic parameterization as a pair of polynomials in `g`:
    /// `f(g) = N(g) / D(g)` with `N = f0*g^2 - 2*e0*g + (q2*f0 + q1)` and `D = g^2 - q2`.
    pub fn conic_param_polys(&self, f0: &Rat, e0: &Rat) -> ([Rat; 3], [Rat; 3]) {
        let n = [
            f0.clone(),
            -(Rat::int(2) * e0),
            &self.q2 * f0 + &self.q1,
        ];
        let d = [Rat::one(), Rat::zero(), -&self.q2];
        (n, d)
    }

    /// `D(g)^2 * Q(N(g)/D(g))` as a quartic in `g`.
    pub fn compose_rational(&self, n: &[Rat; 3], d: &[Rat; 3]) -> Result<Quartic> {
        let nn = poly_mul(n, n);
        let nd = poly_mul(n, d);
        let dd = poly_mul(d, d);
        let c: Vec<Rat> = (0..5)
            .map(|i| &self.q2 * &nn[i] + &self.q1 * &nd[i] + &self.q0 * &dd[i])
            .collect();
        Quartic::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone(), c[4].clone())
    }
}

/// Product of two quadratics given degree-descending.
fn poly_mul(a: &[Rat; 3], b: &[Rat; 3]) -> [Rat; 5] {
    let mut out: [Rat; 5] = Default::default();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    out
}
