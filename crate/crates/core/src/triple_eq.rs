//! Solving the "triple equation" `(s_i + 1)x + s_i = square`, `i = 1, 2, 3`, for
//! a square Eulerian triple `{s1, s2, s3}`.
//!
//! The pipeline:
//!
//! 1. Write `(s1+1)x + s1 = (a1 + f x)^2` with `a1 = sqrt(s1)`, so
//!    `x = ((s1+1) - 2 a1 f) / f^2`.
//! 2. Substituting into the other two conditions and multiplying by `f^2` times a
//!    square leaves two quadratics in `f` that must both be squares.
//! 3. The first quadratic has the rational point `f0 = (s1+1)/(2 a1)` (where
//!    `x = 0`); lines of slope `g` through it parameterize all its points.
//! 4. Pushing that parameterization into the second quadratic gives a quartic in
//!    `g` with square leading coefficient; completing the square yields one `g`.
//!
//! The ordering of `s1, s2, s3` matters: `s1` is parameterized, `s2` is the
//! conic, `s3` becomes the quartic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::quartic::{Descent, Quadratic, Quartic};
use crate::rational::{is_square_int, isqrt_floor, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleSystem {
    squares: [Rat; 3],
    a1: Rat,
    f0: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub squares: [Rat; 3],
    /// Conic in `f` from the second element (the anchor conic).
    pub conic: Quadratic,
    /// Quadratic in `f` from the third element.
    pub second: Quadratic,
    pub f0: Rat,
    pub e0: Rat,
    /// Integer-coefficient quartic in `g`, scaled by a square.
    pub quartic: Quartic,
    pub descent: Descent,
    pub f: Rat,
    pub x: Rat,
    /// Non-negative roots of `(s_i + 1)x + s_i`.
    pub roots: [Rat; 3],
}

impl TripleSystem {
    pub fn new(s1: Rat, s2: Rat, s3: Rat) -> Result<TripleSystem> {
        let squares = [s1, s2, s3];
        for s in &squares {
            if s.is_zero() || !s.is_square() {
                return Err(Error::Parameter(format!("{s} is not a nonzero rational square")));
            }
        }
        if squares[0] == squares[1] || squares[0] == squares[2] || squares[1] == squares[2] {
            return Err(Error::Parameter("the three squares must be distinct".into()));
        }
        let a1 = squares[0].sqrt_exact()?;
        let f0 = (&squares[0] + Rat::one()) / (Rat::int(2) * &a1);
        Ok(TripleSystem { squares, a1, f0 })
    }

    pub fn from_slice(squares: &[Rat]) -> Result<TripleSystem> {
        match squares {
            [a, b, c] => TripleSystem::new(a.clone(), b.clone(), c.clone()),
            _ => Err(Error::Arity {
                expected: 3,
                got: squares.len(),
            }),
        }
    }

    pub fn squares(&self) -> &[Rat; 3] {
        &self.squares
    }

    /// The `f` where `x = 0`.
    pub fn f0(&self) -> &Rat {
        &self.f0
    }

    /// `x = ((s1+1) - 2 a1 f) / f^2`.
    pub fn x_from_f(&self, f: &Rat) -> Result<Rat> {
        if f.is_zero() {
            return Err(Error::Pole("f = 0".into()));
        }
        Ok((&self.squares[0] + Rat::one() - Rat::int(2) * &self.a1 * f) / f.square())
    }

    /// `(s + 1)x + s` for each element.
    pub fn expressions(&self, x: &Rat) -> [Rat; 3] {
        self.squares.clone().map(|s| (&s + Rat::one()) * x + s)
    }

    /// `f^2 ((s+1)x(f) + s)` scaled by a square to integer coefficients with no square content.
    fn residual(&self, s: &Rat) -> Quadratic {
        let c = &self.squares[0] + Rat::one();
        let d = Rat::int(2) * &self.a1;
        let s1 = s + Rat::one();
        let coeffs = square_normalize(&[s.clone(), -(&s1 * &d), s1 * c]);
        Quadratic::new(coeffs[0].clone(), coeffs[1].clone(), coeffs[2].clone())
            .expect("s != 0 so the leading coefficient is nonzero")
    }

    /// The quadratics from the second and third elements that must be squares.
    pub fn residual_quadratics(&self) -> (Quadratic, Quadratic) {
        (self.residual(&self.squares[1]), self.residual(&self.squares[2]))
    }

    pub fn solve(&self) -> Result<Solution> {
        let (conic, second) = self.residual_quadratics();
        let f0 = self.f0.clone();
        let e0 = conic
            .eval(&f0)
            .sqrt_exact()
            .map_err(|_| Error::Internal(format!("anchor f0 = {f0} is not on the conic")))?;
        let (n, d) = conic.conic_param_polys(&f0, &e0);
        let raw = second.compose_rational(&n, &d)?;
        let c = square_normalize(&raw.coeffs().map(Clone::clone));
        let quartic = Quartic::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone(), c[4].clone())?;
        if !quartic.a4.is_square() {
            return Err(Error::Internal(format!(
                "quartic leading coefficient {} is not a square",
                quartic.a4
            )));
        }
        let descent = quartic.complete_square_descend()?;
        let f = conic.conic_param(&f0, &e0, &descent.g)?;
        let x = self.x_from_f(&f)?;
        if x.is_zero() {
            return Err(Error::TrivialSolution);
        }
        let roots = self
            .expressions(&x)
            .into_iter()
            .map(|v| v.sqrt_exact())
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Internal(format!("solution x = {x} fails verification: {e}")))?;
        Ok(Solution {
            squares: self.squares.clone(),
            conic,
            second,
            f0,
            e0,
            quartic,
            descent,
            f,
            x,
            roots: roots.try_into().expect("three roots"),
        })
    }
}

/// Multiplies the coefficients by a rational square so they become integers, then
/// divides out square factors of their content found by trial division.
///
/// Only the scaling changes; whether the polynomial takes square values does not.
pub fn square_normalize(coeffs: &[Rat]) -> Vec<Rat> {
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scale = &lcm * &lcm;
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| c.numer() * (&scale / c.denom()))
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let t = square_divisor(&content);
    let t2 = &t * &t;
    ints.into_iter().map(|c| Rat::int(c / &t2)).collect()
}

/// A `t` with `t^2 | n`, maximal over primes below 2^16 and a square cofactor.
fn square_divisor(n: &BigInt) -> BigInt {
    let mut rest = n.abs();
    if rest.is_zero() {
        return BigInt::one();
    }
    let mut t = BigInt::one();
    let mut p = 2u32;
    while p < (1 << 16) {
        let pb = BigInt::from(p);
        let p2 = &pb * &pb;
        if p2 > rest {
            break;
        }
        while (&rest % &p2).is_zero() {
            rest /= &p2;
            t *= &pb;
        }
        while (&rest % &pb).is_zero() {
            rest /= &pb;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if is_square_int(&rest) {
        t *= isqrt_floor(&rest).expect("non-negative");
    }
    t
}

/// One checked fact about the curves attached to the descent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

/// The Mordell curve of the Diophantus descent quartic.
pub fn diophantus_descent_curve() -> Curve {
    Curve::from_ints(20478, 99801585).expect("nonsingular")
}

/// The curve attached to Fermat's triple `{4, 3504384/203401, 2019241/203401}`.
pub fn fermat_descent_curve() -> Curve {
    let a: BigInt = "10450883424805".parse().expect("literal");
    let b: BigInt = "26734915668323655104674200".parse().expect("literal");
    Curve::new(Rat::int(a), Rat::int(b)).expect("nonsingular")
}

/// `u` on [`fermat_descent_curve`] coming from the completed square.
pub fn fermat_curve_u() -> Rat {
    let n: BigInt = "-9390695817653070336".parse().expect("literal");
    Rat::new(n, 2019241).expect("nonzero")
}

pub fn diophantus_system() -> TripleSystem {
    let q = |n, d| Rat::new(n, d).expect("nonzero");
    TripleSystem::new(q(25, 9), q(64, 9), q(196, 9)).expect("squares")
}

pub fn fermat_system() -> TripleSystem {
    let q = |n, d| Rat::new(n, d).expect("nonzero");
    TripleSystem::new(Rat::int(4), q(3504384, 203401), q(2019241, 203401)).expect("squares")
}

/// Verifies the printed points on both descent curves and the chain from `g = -543/8` to `x`.
pub fn verify_known_curve_points() -> Vec<Check> {
    let mut checks = Vec::new();
    let mut push = |name: &str, ok: bool, detail: String| {
        checks.push(Check {
            name: name.to_string(),
            ok,
            detail,
        })
    };

    let curve = diophantus_descent_curve();
    for (k, j) in [(-9984, -222768), (-8379, -114912)] {
        let p = Point::ints(k, j);
        push(&format!("generator ({k}, {j}) on {curve}"), curve.on_curve(&p), format!("rhs = {}", curve.rhs(&Rat::int(k))));
    }

    let ks: Vec<Rat> = curve
        .two_torsion()
        .into_iter()
        .filter_map(|p| p.coords().map(|(k, _)| k.clone()))
        .collect();
    let expected = [0i64, -12483, -7995].map(Rat::int).to_vec();
    push("two-torsion K values", ks == expected, format!("{ks:?}"));

    let sys = diophantus_system();
    let (conic, _) = sys.residual_quadratics();
    let g = Rat::new(-543, 8).expect("nonzero");
    let e0 = conic.eval(sys.f0()).sqrt_exact();
    let chain = e0
        .and_then(|e0| conic.conic_param(sys.f0(), &e0, &g))
        .and_then(|f| Ok((sys.x_from_f(&f)?, f)));
    match chain {
        Ok((x, f)) => {
            push("g = -543/8 gives f = 269/147", f == Rat::new(269, 147).expect("nonzero"), format!("f = {f}"));
            push(
                "f = 269/147 gives x = -50176/72361",
                x == Rat::new(-50176, 72361).expect("nonzero"),
                format!("x = {x}"),
            );
            let all_square = sys.expressions(&x).iter().all(Rat::is_square);
            push("x = -50176/72361 solves the system", all_square, format!("{:?}", sys.expressions(&x)));
        }
        Err(e) => push("g = -543/8 chain", false, e.to_string()),
    }

    let fermat = fermat_descent_curve();
    let u = fermat_curve_u();
    let v2 = fermat.rhs(&u);
    match v2.sqrt_exact() {
        Ok(v) => push("Fermat-case u gives a rational point", true, format!("v = {v}")),
        Err(_) => push("Fermat-case u gives a rational point", false, format!("rhs = {v2}")),
    }
    checks
}
