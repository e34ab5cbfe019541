//! Rational elliptic curves `J^2 = K^3 + A*K^2 + B*K` and their chord-and-tangent group law.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{is_square_u128, isqrt_u128, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Curve {
    a: Rat,
    b: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine { k: Rat, j: Rat },
}

impl Point {
    /// An affine point without checking curve membership; see [`Curve::point`].
    pub fn affine(k: Rat, j: Rat) -> Point {
        Point::Affine { k, j }
    }

    pub fn ints(k: i64, j: i64) -> Point {
        Point::affine(Rat::int(k), Rat::int(j))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn coords(&self) -> Option<(&Rat, &Rat)> {
        match self {
            Point::Infinity => None,
            Point::Affine { k, j } => Some((k, j)),
        }
    }

    pub fn negate(&self) -> Point {
        match self {
            Point::Infinity => Point::Infinity,
            Point::Affine { k, j } => Point::affine(k.clone(), -j),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "inf"),
            Point::Affine { k, j } => write!(f, "{k},{j}"),
        }
    }
}

impl std::str::FromStr for Point {
    type Err = Error;

    /// Parses `K,J` or `inf`.
    fn from_str(s: &str) -> Result<Point> {
        if s == "inf" {
            return Ok(Point::Infinity);
        }
        let (k, j) = s.split_once(',').ok_or_else(|| Error::Parse {
            input: s.to_string(),
            reason: "expected K,J",
        })?;
        Ok(Point::affine(k.parse()?, j.parse()?))
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Point, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J^2 = K^3 + ({})K^2 + ({})K", self.a, self.b)
    }
}

impl Curve {
    /// Rejects singular cubics: `B = 0` or `A^2 - 4B = 0` give a repeated root.
    pub fn new(a: Rat, b: Rat) -> Result<Curve> {
        if b.is_zero() || (a.square() - Rat::int(4) * &b).is_zero() {
            return Err(Error::SingularCurve { a, b });
        }
        Ok(Curve { a, b })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Curve> {
        Curve::new(Rat::int(a), Rat::int(b))
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    /// `K^3 + A*K^2 + B*K`.
    pub fn rhs(&self, k: &Rat) -> Rat {
        ((k + &self.a) * k + &self.b) * k
    }

    pub fn on_curve(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { k, j } => j.square() == self.rhs(k),
        }
    }

    /// A checked affine point.
    pub fn point(&self, k: Rat, j: Rat) -> Result<Point> {
        let p = Point::affine(k, j);
        if self.on_curve(&p) {
            Ok(p)
        } else {
            let (k, j) = p.coords().expect("affine");
            Err(Error::NotOnCurve {
                k: k.clone(),
                j: j.clone(),
            })
        }
    }

    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let (k1, j1, k2, j2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine { k: k1, j: j1 }, Point::Affine { k: k2, j: j2 }) => (k1, j1, k2, j2),
        };
        let slope = if k1 == k2 {
            if (j1 + j2).is_zero() {
                // Inverse points, including a two-torsion point added to itself.
                return Point::Infinity;
            }
            let three = Rat::int(3);
            let two = Rat::int(2);
            (three * k1.square() + &two * &self.a * k1 + &self.b) / (two * j1)
        } else {
            (j2 - j1) / (k2 - k1)
        };
        let k3 = slope.square() - &self.a - k1 - k2;
        let j3 = slope * (k1 - &k3) - j1;
        Point::affine(k3, j3)
    }

    pub fn double(&self, p: &Point) -> Point {
        self.add(p, p)
    }

    /// `n*p` by binary double-and-add.
    pub fn scalar_mul(&self, n: i64, p: &Point) -> Point {
        let mut acc = Point::Infinity;
        let mut base = if n < 0 { p.negate() } else { p.clone() };
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.double(&base);
            }
        }
        acc
    }

    /// The affine points with `J = 0`: `K = 0` and any rational roots of `K^2 + A*K + B`.
    pub fn two_torsion(&self) -> Vec<Point> {
        let mut out = vec![Point::affine(Rat::zero(), Rat::zero())];
        let disc = self.a.square() - Rat::int(4) * &self.b;
        if let Ok(root) = disc.sqrt_exact() {
            let two = Rat::int(2);
            let mut ks = vec![(-&self.a - &root) / &two, (-&self.a + root) / two];
            ks.sort();
            out.extend(ks.into_iter().map(|k| Point::affine(k, Rat::zero())));
        }
        out
    }

    /// All `(K, J)` with integer `K` in `[k_lo, k_hi]` and `K^3 + A*K^2 + B*K` a
    /// rational square, with `J >= 0`, ascending in `K`.
    pub fn integer_point_scan(&self, k_lo: i64, k_hi: i64) -> Vec<Point> {
        let mut out = Vec::new();
        self.scan_with(k_lo, k_hi, |k, j| out.push(Point::affine(Rat::int(k), j)));
        out
    }

    /// Streaming form of [`Curve::integer_point_scan`].
    pub fn scan_with(&self, k_lo: i64, k_hi: i64, mut hit: impl FnMut(i64, Rat)) {
        if k_lo > k_hi {
            return;
        }
        let fast = match (self.a.to_i128(), self.b.to_i128()) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        };
        for k in k_lo..=k_hi {
            if let Some((a, b)) = fast {
                if let Some(v) = rhs_i128(a, b, k as i128) {
                    if v >= 0 && is_square_u128(v as u128) {
                        hit(k, Rat::int(BigInt::from(isqrt_u128(v as u128))));
                    }
                    continue;
                }
            }
            let v = self.rhs(&Rat::int(k));
            if let Ok(j) = v.sqrt_exact() {
                hit(k, j);
            }
        }
    }
}

/// `K^3 + A*K^2 + B*K` in `i128`, or `None` on overflow.
fn rhs_i128(a: i128, b: i128, k: i128) -> Option<i128> {
    k.checked_add(a)?
        .checked_mul(k)?
        .checked_add(b)?
        .checked_mul(k)
}
