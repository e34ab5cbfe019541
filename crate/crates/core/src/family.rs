//! Square Eulerian triples `{4, y^2, z^2}` from rational points on a curve indexed by `m = p/q`.
//!
//! With `x = 2` fixed, `y = 4m/(5 - m^2)` and `z = 4n/(5 - n^2)`, where `n` comes
//! from a point `(K, J)` on [`curve_for_m`] via `n = J / (2pqK)`. Every point
//! other than the two-torsion gives a triple.

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::curve::{Curve, Point};
use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::tuple::{param_t, SquareTuple};

/// `m = p/q` in lowest terms, `q >= 1`, `p != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub p: i64,
    pub q: i64,
}

impl FamilyParams {
    pub fn new(p: i64, q: i64) -> Result<FamilyParams> {
        if q < 1 || p == 0 || p.gcd(&q) != 1 {
            return Err(Error::Parameter(format!(
                "m = {p}/{q} must have p != 0, q >= 1 and gcd(p, q) = 1"
            )));
        }
        Ok(FamilyParams { p, q })
    }

    pub fn m(&self) -> Rat {
        Rat::new(self.p, self.q).expect("q >= 1")
    }
}

/// `J^2 = K^3 - 2(p^4 - 4p^2q^2 + 25q^4)K^2 + (p^8 - 8p^6q^2 - 34p^4q^4 - 200p^2q^6 + 625q^8)K`.
pub fn curve_for_m(p: i64, q: i64) -> Result<Curve> {
    FamilyParams::new(p, q)?;
    let p2 = BigInt::from(p) * p;
    let q2 = BigInt::from(q) * q;
    let p4 = &p2 * &p2;
    let q4 = &q2 * &q2;
    let a = -2 * (&p4 - 4 * &p2 * &q2 + 25 * &q4);
    let b = &p4 * &p4 - 8 * &p4 * &p2 * &q2 - 34 * &p4 * &q4 - 200 * &p2 * &q4 * &q2
        + 625 * &q4 * &q4;
    Curve::new(Rat::int(a), Rat::int(b))
}

/// `n = J / (2pqK)`.
pub fn n_from_point(p: i64, q: i64, pt: &Point) -> Result<Rat> {
    let (k, j) = pt.coords().ok_or(Error::TwoTorsion)?;
    if k.is_zero() {
        return Err(Error::TwoTorsion);
    }
    Ok(j / (Rat::int(2 * p) * Rat::int(q) * k))
}

/// The roots `(2, y, z)` for the point; degenerate points (zero `z`, poles) are rejected.
pub fn triple_from(p: i64, q: i64, pt: &Point) -> Result<SquareTuple> {
    let params = FamilyParams::new(p, q)?;
    let n = n_from_point(p, q, pt).map_err(|_| Error::Degenerate("two-torsion point".into()))?;
    let two = Rat::int(2);
    let y = param_t(&two, &params.m())?;
    let z = param_t(&two, &n).map_err(|e| Error::Degenerate(e.to_string()))?;
    let t = SquareTuple::new(vec![two, y, z])?;
    match t.degeneracy() {
        Some(why) => Err(Error::Degenerate(why)),
        None => Ok(t),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyMember {
    /// The multiple of the generator that produced this triple.
    pub k: i64,
    pub point: Point,
    pub n: Rat,
    pub roots: Vec<Rat>,
    pub squares: Vec<Rat>,
}

/// Triples from `k*gen` for `k = 1..=kmax`, skipping degenerate multiples.
pub fn family(p: i64, q: i64, gen: &Point, kmax: i64) -> Result<Vec<FamilyMember>> {
    let curve = curve_for_m(p, q)?;
    if gen.is_infinity() || !curve.on_curve(gen) {
        return Err(Error::Parameter(format!("generator {gen} is not an affine point on {curve}")));
    }
    let mut out = Vec::new();
    let mut pt = Point::Infinity;
    for k in 1..=kmax {
        pt = curve.add(&pt, gen);
        let triple = match triple_from(p, q, &pt) {
            Ok(t) => t,
            Err(Error::Degenerate(_)) | Err(Error::Pole(_)) => continue,
            Err(e) => return Err(e),
        };
        if !triple.is_eulerian() {
            return Err(Error::Internal(format!("multiple {k} of {gen} gave a non-Eulerian triple")));
        }
        out.push(FamilyMember {
            k,
            n: n_from_point(p, q, &pt)?,
            point: pt.clone(),
            squares: triple.squares(),
            roots: triple.roots().to_vec(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn gen() -> Point {
        Point::ints(245, 2100)
    }

    #[test]
    fn curve_examples() {
        assert_eq!(curve_for_m(1, 2).unwrap(), Curve::from_ints(-770, 146625).unwrap());
        // A = -2(1 - 4 + 25), B = 1 - 8 - 34 - 200 + 625
        assert_eq!(curve_for_m(1, 1).unwrap(), Curve::from_ints(-44, 384).unwrap());
        assert_eq!(curve_for_m(-1, 2).unwrap(), curve_for_m(1, 2).unwrap());
        assert!(curve_for_m(2, 4).is_err());
        assert!(curve_for_m(0, 1).is_err());
        assert!(curve_for_m(1, 0).is_err());
    }

    #[test]
    fn n_examples() {
        assert_eq!(n_from_point(1, 2, &gen()).unwrap(), q(15, 7));
        let two_p = Point::affine(q(187489, 441), q(651232, 9261));
        assert_eq!(n_from_point(1, 2, &two_p).unwrap(), q(376, 9093));
        assert_eq!(n_from_point(1, 2, &Point::ints(345, 0)).unwrap(), Rat::zero());
        assert!(matches!(n_from_point(1, 2, &Point::ints(0, 0)), Err(Error::TwoTorsion)));
    }

    #[test]
    fn triple_examples() {
        let t = triple_from(1, 2, &gen()).unwrap();
        assert_eq!(t.roots(), &[Rat::int(2), q(8, 19), Rat::int(21)]);
        assert!(t.is_eulerian());
        let c = curve_for_m(1, 2).unwrap();
        let t2 = triple_from(1, 2, &c.double(&gen())).unwrap();
        assert_eq!(t2.roots()[2], q(13675872, 413271869));
        assert!(t2.is_eulerian());
        for torsion in c.two_torsion() {
            assert!(matches!(triple_from(1, 2, &torsion), Err(Error::Degenerate(_))));
        }
    }

    #[test]
    fn family_examples() {
        let one = family(1, 2, &gen(), 1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].squares, vec![Rat::int(4), q(64, 361), Rat::int(441)]);
        let two = family(1, 2, &gen(), 2).unwrap();
        assert_eq!(two[1].k, 2);
        assert_eq!(two[1].roots[2], q(13675872, 413271869));
        let many = family(1, 2, &gen(), 6).unwrap();
        assert_eq!(many.len(), 6);
        for m in &many {
            assert!(SquareTuple::new(m.roots.clone()).unwrap().is_eulerian());
        }
        assert!(family(1, 2, &Point::ints(245, 2101), 2).is_err());
    }

    #[test]
    fn generator_multiples_are_distinct_and_affine() {
        let c = curve_for_m(1, 2).unwrap();
        let pts: Vec<_> = (1..=8).map(|k| c.scalar_mul(k, &gen())).collect();
        for (i, p) in pts.iter().enumerate() {
            assert!(!p.is_infinity());
            assert!(pts[..i].iter().all(|r| r != p));
        }
    }

    #[test]
    fn scanned_points_give_eulerian_triples() {
        let mut checked = 0;
        for p in 1..=6i64 {
            for qq in 1..=6i64 {
                let Ok(c) = curve_for_m(p, qq) else { continue };
                for pt in c.integer_point_scan(-3000, 3000) {
                    for s in [pt.clone(), pt.negate(), c.double(&pt)] {
                        if let Ok(t) = triple_from(p, qq, &s) {
                            assert!(t.is_eulerian(), "m = {p}/{qq}, point {s}");
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 20, "only {checked} triples checked");
    }
}
